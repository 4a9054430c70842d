//! Built-in systems.
//!
//! | name             | H                                   | A              |
//! |------------------|-------------------------------------|----------------|
//! | `two-level-rabi` | `(ω/2) σ_x` (ω = 1 unless given)    | `σ_z`          |
//! | `commuting`      | `σ_z`                               | `σ_z`          |
//! | `three-level`    | [`THREE_LEVEL_H`]                   | `diag(0,1,2)`  |

use crate::error::Result;
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{pauli, Hamiltonian, Observable};

pub const TWO_LEVEL_RABI: &str = "two-level-rabi";
pub const COMMUTING: &str = "commuting";
pub const THREE_LEVEL: &str = "three-level";

/// Real symmetric, nondegenerate spectrum, does not commute with
/// `diag(0, 1, 2)`.
pub const THREE_LEVEL_H: [[f64; 3]; 3] = [[0.0, 0.5, 0.2], [0.5, 1.0, 0.5], [0.2, 0.5, 3.0]];

/// A Hamiltonian and the observable measured on it.
#[derive(Debug, Clone)]
pub struct System {
    pub name: String,
    pub hamiltonian: Hamiltonian,
    pub observable: Observable,
}

impl System {
    pub fn new(name: impl Into<String>, h: ComplexMatrix, a: ComplexMatrix) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            hamiltonian: Hamiltonian::new(h)?,
            observable: Observable::new(a)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.observable.dim()
    }
}

pub fn two_level_rabi(omega: f64) -> Result<System> {
    System::new(
        TWO_LEVEL_RABI,
        pauli::x().scale(C64::new(omega / 2.0, 0.0)),
        pauli::z(),
    )
}

pub fn commuting() -> Result<System> {
    System::new(COMMUTING, pauli::z(), pauli::z())
}

pub fn three_level() -> Result<System> {
    let h = ComplexMatrix::from_real_rows(&THREE_LEVEL_H.map(|r| r.to_vec()))?;
    let a = ComplexMatrix::from_real_rows(&[
        vec![0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 2.0],
    ])?;
    System::new(THREE_LEVEL, h, a)
}

/// Name and one-line description of every preset.
pub fn catalogue() -> [(&'static str, &'static str); 3] {
    [
        (
            TWO_LEVEL_RABI,
            "H = (omega/2) sigma_x (omega defaults to 1), A = sigma_z",
        ),
        (COMMUTING, "H = sigma_z, A = sigma_z ([H, A] = 0)"),
        (
            THREE_LEVEL,
            "H = [[0, .5, .2], [.5, 1, .5], [.2, .5, 3]], A = diag(0, 1, 2)",
        ),
    ]
}

/// Looks a preset up by name; `None` for unknown names.
pub fn by_name(name: &str, omega: Option<f64>) -> Option<Result<System>> {
    match name {
        TWO_LEVEL_RABI => Some(two_level_rabi(omega.unwrap_or(1.0))),
        COMMUTING => Some(commuting()),
        THREE_LEVEL => Some(three_level()),
        _ => None,
    }
}

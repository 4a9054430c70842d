//! Eigendecomposition, propagator and transition matrix of the three-level
//! preset.

use zeno_entropy::prelude::*;
use zeno_entropy::presets;

fn main() -> Result<()> {
    let system = presets::three_level()?;
    let h = &system.hamiltonian;
    let a = &system.observable;

    println!("energies: {:?}", h.spectral().eigenvalues());
    println!(
        "reconstruction defect: {:e}",
        h.spectral().reconstruct().max_abs_diff(h.matrix())
    );

    let u = propagator(h.spectral(), 0.7)?;
    let unitarity = (&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(h.dim()));
    println!("|U^dag U - I| at t = 0.7: {unitarity:e}");

    let p = transition_matrix(a, h)?;
    println!("P_nm = |<psi_n|phi_m>|^2:");
    for n in 0..p.dim() {
        let row: Vec<String> = (0..p.dim())
            .map(|m| format!("{:.6}", p.get(n, m)))
            .collect();
        println!("  {}", row.join("  "));
    }
    println!("row sums {:?}", p.row_sums());
    println!("column sums {:?}", p.column_sums());
    Ok(())
}

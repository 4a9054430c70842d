//! Closed-form survival when the commutator condition holds, compared with
//! the direct non-Hermitian exponential.

use zeno_entropy::continuous::{bch_residual, commuting_case_survival, printed_form_mismatch};
use zeno_entropy::prelude::*;
use zeno_entropy::presets;

fn main() -> Result<()> {
    let commuting = presets::commuting()?;
    let (h, a) = (&commuting.hamiltonian, &commuting.observable);
    let (f, t) = (2.0, 0.8);
    let cfg = MeasurementConfig::quadratic(f, 0.4, 1.0)?;
    println!("commutator residual: {:e}", bch_residual(h, a, &cfg)?);

    let closed = commuting_case_survival(h, a, &cfg, t)?;
    let direct = zeno_entropy::continuous::continuous_survivals(h, a, &cfg, t)?;
    println!("closed-form survivals {:?}", closed.weights());
    println!("direct survivals      {direct:?}");
    println!("closed-form entropy   {:.12}", closed.entropy());

    // H = sigma_x / 2 with the readout between the two eigenvalues: u(A) is
    // proportional to the identity, so the condition holds although [H, A] != 0.
    let rabi = presets::two_level_rabi(1.0)?;
    let (h, a) = (&rabi.hamiltonian, &rabi.observable);
    let cfg = MeasurementConfig::quadratic(0.7, 0.0, 1.0)?;
    let d = commuting_case_distribution(h, a, 1, &cfg, 1.3)?;
    let direct = continuous_distribution(h, a, 1, &cfg, 1.3, DistributionMode::PaperLiteral)?;
    println!("\nrabi, readout 0: closed {:?}", d.weights());
    println!("                 direct {:?}", direct.weights());
    println!(
        "exponent linear in t instead: |V_nn|^2 moves by {:e}",
        printed_form_mismatch(h, a, &cfg, 1.3)?
    );

    let off_centre = MeasurementConfig::quadratic(0.7, 0.5, 1.0)?;
    match commuting_case_distribution(h, a, 1, &off_centre, 1.3) {
        Err(e) => println!("\nreadout 0.5: {e}"),
        Ok(_) => println!("\nreadout 0.5: unexpectedly accepted"),
    }
    Ok(())
}

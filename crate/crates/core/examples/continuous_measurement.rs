//! Continuous monitoring of the Rabi system: entropy against the rate f and
//! the accuracy delta_a.

use zeno_entropy::prelude::*;
use zeno_entropy::presets;

fn entropy(
    system: &zeno_entropy::presets::System,
    f: f64,
    delta_a: f64,
    mode: DistributionMode,
) -> Result<(f64, f64)> {
    let (h, a) = (&system.hamiltonian, &system.observable);
    let up = 1;
    let cfg = MeasurementConfig::quadratic(f, a.spectral().eigenvalue(up), delta_a)?;
    let raw = continuous_distribution(h, a, up, &cfg, 1.0, DistributionMode::PaperLiteral)?;
    let s = continuous_entropy(
        h,
        a,
        EntropyScope::Prepared(up),
        &cfg,
        1.0,
        mode,
        LogBase::Nats,
    )?;
    Ok((s.value(), raw.total()))
}

fn main() -> Result<()> {
    let system = presets::two_level_rabi(1.0)?;

    println!("delta_a = 1, t = 1");
    println!(
        "{:>8} {:>14} {:>14} {:>14}",
        "f", "S normalized", "S raw", "total weight"
    );
    for f in [0.0, 1.0, 10.0, 100.0, 1000.0] {
        let (s, total) = entropy(&system, f, 1.0, DistributionMode::Normalized)?;
        let (raw, _) = entropy(&system, f, 1.0, DistributionMode::PaperLiteral)?;
        println!("{f:>8} {s:>14.6e} {raw:>14.6e} {total:>14.8}");
    }

    println!("\nf = 1, t = 1");
    println!("{:>8} {:>14}", "delta_a", "S normalized");
    for delta_a in [1.0, 0.1, 0.01] {
        let (s, _) = entropy(&system, 1.0, delta_a, DistributionMode::Normalized)?;
        println!("{delta_a:>8} {s:>14.6e}");
    }
    Ok(())
}

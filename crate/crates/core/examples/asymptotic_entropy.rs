//! Large-N entropy formula against the exact outcome chain.

use zeno_entropy::prelude::*;
use zeno_entropy::presets;

fn main() -> Result<()> {
    let system = presets::two_level_rabi(1.0)?;
    let (h, a) = (&system.hamiltonian, &system.observable);
    println!(
        "{:>7} {:>16} {:>16} {:>16}",
        "N", "formula", "chain from up", "chain from down"
    );
    for n in [10, 100, 1000, 10000, 100000] {
        let schedule = ZenoSchedule::new(1.0, n)?;
        let formula = zeno_entropy_asymptotic(h, a, &schedule)?;
        let up = zeno_chain_entropy(h, a, 1, &schedule, LogBase::Nats)?.value();
        let down = zeno_chain_entropy(h, a, 0, &schedule, LogBase::Nats)?.value();
        println!("{n:>7} {formula:>16.8e} {up:>16.8e} {down:>16.8e}");
    }
    Ok(())
}

//! Sampled measurement trajectories against the exact outcome chain.

use zeno_entropy::prelude::*;
use zeno_entropy::presets;

fn main() -> Result<()> {
    let system = presets::three_level()?;
    let (h, a) = (&system.hamiltonian, &system.observable);
    let schedule = ZenoSchedule::new(2.0, 10)?;
    let exact = zeno_chain_distribution(h, a, 0, &schedule)?;
    println!("exact    {:?}", exact.weights());
    for trials in [1_000, 10_000, 100_000, 1_000_000] {
        let sampled = monte_carlo_zeno(h, a, 0, &schedule, trials, 42)?;
        println!(
            "{trials:>8} trials: TV = {:.2e}  {:?}",
            sampled.total_variation(&exact)?,
            sampled.weights()
        );
    }
    Ok(())
}

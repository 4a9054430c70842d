//! Outcome entropy under free evolution from an eigenstate of the observable.

use zeno_entropy::prelude::*;
use zeno_entropy::presets;
use zeno_entropy::zeno::survival_exact;

fn main() -> Result<()> {
    for system in [
        presets::two_level_rabi(1.0)?,
        presets::three_level()?,
        presets::commuting()?,
    ] {
        println!("{}", system.name);
        println!("{:>6} {:>12} {:>12}", "t", "survival", "S (nats)");
        for step in 0..=8 {
            let t = 0.5 * step as f64;
            let survival = survival_exact(&system.hamiltonian, &system.observable, 0, t)?;
            let s = free_evolution_entropy(
                &system.hamiltonian,
                &system.observable,
                0,
                t,
                LogBase::Nats,
            )?;
            println!("{t:>6.2} {survival:>12.6} {:>12.6}", s.value());
        }
        println!();
    }
    Ok(())
}

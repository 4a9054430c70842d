//! Entropy and survival of the Rabi system as the number of measurements in
//! [0, T] grows.

use zeno_entropy::prelude::*;
use zeno_entropy::presets;
use zeno_entropy::zeno::FrequencyTable;

fn main() -> Result<()> {
    let system = presets::two_level_rabi(1.0)?;
    let (h, a) = (&system.hamiltonian, &system.observable);
    let up = 1;
    let total_time = 1.0;
    let freqs = FrequencyTable::new(h);

    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>8}",
        "N", "S chain", "survival", "closed form", "valid"
    );
    for n in [1, 2, 5, 10, 100, 1000, 10000] {
        let schedule = ZenoSchedule::new(total_time, n)?;
        let chain = zeno_chain_distribution(h, a, up, &schedule)?;
        let s = shannon_entropy(&chain, LogBase::Nats)?.value();
        let closed = zeno_survival(h, a, up, &schedule, ZenoFormula::Corrected)?;
        println!(
            "{n:>6} {s:>14.6e} {:>14.8} {closed:>14.8} {:>8}",
            chain.weight(up),
            schedule.is_short_time_reliable(&freqs)
        );
    }
    Ok(())
}

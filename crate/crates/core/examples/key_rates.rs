//! Optimised finite-size key rates for BPSK at eta = 0.9, eps = eps' = 1e-8,
//! as a function of the block size: the sandwiched Renyi estimator S, the
//! second-order estimator B and the AEP estimator.
//!
//! ```text
//! cargo run --release --example key_rates
//! ```

use psk_keyrate::rates::{optimize_rate, Estimator, RateBounds, SecurityParams};
use psk_keyrate::states::Modulation;

fn main() -> psk_keyrate::Result<()> {
    let bounds = RateBounds::default();
    println!("       n      r^S      r^B    r^AEP   (bits per channel use)");
    for exp in [2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 12.0] {
        let n = 10f64.powf(exp).round();
        let sp = SecurityParams::with_block_size(n)?;
        let rate = |est| optimize_rate(est, Modulation::Bpsk, 0.9, &sp, &bounds).map(|r| r.rate);
        println!(
            "{n:>8.0e} {:>8.4} {:>8.4} {:>8.4}",
            rate(Estimator::S)?,
            rate(Estimator::B)?,
            rate(Estimator::Aep)?
        );
    }
    Ok(())
}

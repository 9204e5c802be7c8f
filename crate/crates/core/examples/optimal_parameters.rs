//! Optimal amplitude and Renyi order of the S estimator versus block size,
//! for both protocols at eta = 0.9. The optimal order approaches 1 for large
//! blocks and climbs quickly once n drops below about 10^3.
//!
//! ```text
//! cargo run --release --example optimal_parameters
//! ```

use psk_keyrate::rates::{optimize_rate, Estimator, RateBounds, SecurityParams};
use psk_keyrate::states::Modulation;

fn main() -> psk_keyrate::Result<()> {
    let bounds = RateBounds::default();
    for m in [Modulation::Bpsk, Modulation::Qpsk] {
        println!("{}:        n     rate   alpha*       a*", m.name());
        for n in [300.0, 500.0, 1e3, 1e4, 1e5, 1e6, 1e8] {
            let sp = SecurityParams::with_block_size(n)?;
            let r = optimize_rate(Estimator::S, m, 0.9, &sp, &bounds)?;
            println!(
                "      {n:>9.0e} {:>8.4} {:>8.4} {:>8.5}",
                r.rate,
                r.alpha_opt,
                r.a_opt.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}

//! Bob's discretised outcome statistics p(y|x) for BPSK (homodyne sign) and
//! QPSK (heterodyne quadrant), checked against a Monte-Carlo simulation of the
//! measurement.
//!
//! ```text
//! cargo run --release --example conditional_probabilities
//! ```

use psk_keyrate::rates::leak;
use psk_keyrate::states::{cond_prob, ProtocolParams};
use psk_keyrate::verify::{sample, McConfig};

fn main() -> psk_keyrate::Result<()> {
    for p in [
        ProtocolParams::bpsk(1.0, 0.9)?,
        ProtocolParams::qpsk(1.0, 0.9)?,
    ] {
        let table = cond_prob(&p)?;
        println!("{} alpha={} eta={}", p.modulation.name(), p.alpha, p.eta);
        for y in 0..table.size() {
            let row: Vec<String> = (0..table.size())
                .map(|x| format!("{:.6}", table.get(y, x)))
                .collect();
            println!("  y={y}: {}", row.join("  "));
        }
        println!("  leak H(Y|X) = {:.6} bits", leak(&p)?);

        let mc = sample(&McConfig::new(200_000, 7, p)?)?;
        println!(
            "  Monte-Carlo (2e5 shots/symbol): worst entry {:.2} standard errors from the table",
            mc.max_deviation_sigma
        );
    }
    Ok(())
}

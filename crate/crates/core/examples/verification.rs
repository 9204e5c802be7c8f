//! Runs every verification suite (Monte-Carlo, duality, analytic) and prints
//! the report, as `psk-keyrate verify` does.
//!
//! ```text
//! cargo run --release --example verification
//! ```

use psk_keyrate::verify::{run_suite, Suite, VerifyOptions};

fn main() -> psk_keyrate::Result<()> {
    let report = run_suite(Suite::All, &VerifyOptions::default())?;
    println!("{report}");
    if !report.passed() {
        std::process::exit(2);
    }
    Ok(())
}

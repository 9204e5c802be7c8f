//! Eve's classical-quantum ensembles in the orthonormal psi bases, together
//! with the phase symmetry that makes the entropy formulas collapse to a
//! single conditional state.
//!
//! ```text
//! cargo run --example eve_ensembles
//! ```

use psk_keyrate::states::{build_ensemble, ProtocolParams};

fn main() -> psk_keyrate::Result<()> {
    for p in [
        ProtocolParams::bpsk(1.0, 0.6)?,
        ProtocolParams::qpsk(1.0, 0.6)?,
    ] {
        let e = build_ensemble(&p)?;
        println!(
            "{}: gamma = {:.6}, basis {:?}, dim {}",
            p.modulation.name(),
            e.gamma(),
            e.basis(),
            e.dim()
        );
        println!("  rho_E diagonal: {:?}", e.avg_state().diagonal());
        println!(
            "  rho_E max off-diagonal: {:.1e}",
            e.avg_state().max_off_diagonal()
        );
        let rho0 = e.cond_state(0);
        for i in 0..e.dim() {
            let row: Vec<String> = (0..e.dim())
                .map(|j| {
                    let z = rho0.get(i, j);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            println!("  rho_E|0 [{i}]: {}", row.join(" "));
        }
        let residual = e.symmetry().residual(e.cond_states(), e.avg_state());
        println!("  symmetry residual max|U_t rho_y U_t^+ - rho_(y+t)| = {residual:.1e}");
    }
    Ok(())
}

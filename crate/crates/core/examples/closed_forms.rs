//! Analytic BPSK entropies compared with the matrix evaluation.
//!
//! ```text
//! cargo run --release --example closed_forms
//! ```

use psk_keyrate::entropy::{
    bpsk_closed_forms, petz_down_cq, petz_up_cq, sandwiched_down_cq, BpskClosedFormInputs,
    RenyiOrder,
};
use psk_keyrate::states::{build_ensemble, ProtocolParams};

fn main() -> psk_keyrate::Result<()> {
    let a = RenyiOrder::new(1.5)?;
    let p = ProtocolParams::bpsk(1.0, 0.6)?;
    let inp = BpskClosedFormInputs::new(&p, a)?;
    println!(
        "kappa={:.6} r={:.6} g={:.6} theta={:.6} phi={:.6} Delta={:.6}",
        inp.kappa, inp.r, inp.g, inp.theta, inp.phi, inp.delta
    );

    let mut worst: f64 = 0.0;
    for i in 1..=30 {
        for j in 0..30 {
            let p = ProtocolParams::bpsk(0.1 * i as f64, 0.01 + 0.98 * j as f64 / 29.0)?;
            let e = build_ensemble(&p)?;
            let c = bpsk_closed_forms(&p, a)?;
            worst = worst
                .max((c.petz_down - petz_down_cq(&e, a)?).abs())
                .max((c.petz_up - petz_up_cq(&e, a)?).abs())
                .max((c.sand_down - sandwiched_down_cq(&e, a)?).abs());
        }
    }
    println!("largest analytic/numeric gap on a 30x30 grid at a = 1.5: {worst:.2e} bits");

    // close to eta = 1 the printed expressions are indeterminate; the
    // logarithmic evaluation stays accurate
    let p = ProtocolParams::bpsk(1.0, 1.0 - 1e-7)?;
    let c = bpsk_closed_forms(&p, a)?;
    let e = build_ensemble(&p)?;
    println!(
        "eta = 1 - 1e-7: analytic {:.12}  numeric {:.12}",
        c.petz_down,
        petz_down_cq(&e, a)?
    );
    Ok(())
}

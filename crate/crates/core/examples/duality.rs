//! Duality relations between conditional Renyi entropies of complementary
//! marginals of random pure tripartite states.
//!
//! ```text
//! cargo run --release --example duality
//! ```

use psk_keyrate::entropy::{
    petz_down_general, petz_up_general, sandwiched_down_general, sandwiched_up_general_detailed,
    RenyiOrder,
};
use psk_keyrate::linalg::random_pure_tripartite;
use psk_keyrate::verify::duality::marginals;
use psk_keyrate::verify::duality_suite;

fn main() -> psk_keyrate::Result<()> {
    let dims = (2, 3, 4);
    let psi = random_pure_tripartite(dims, 5);
    let (ab, ac) = marginals(&psi, dims)?;
    let o = RenyiOrder::new;

    let x = petz_down_general(&ab, (2, 3), o(1.3)?)?;
    let y = petz_down_general(&ac, (2, 4), o(0.7)?)?;
    println!(
        "H_1.3(A|B) = {x:+.12}   H_0.7(A|C) = {y:+.12}   sum {:+.1e}",
        x + y
    );

    let x = petz_up_general(&ab, (2, 3), o(2.0)?)?;
    let y = sandwiched_down_general(&ac, (2, 4), o(0.5)?)?;
    println!(
        "H^up_2(A|B) = {x:+.12}  H~_0.5(A|C) = {y:+.12}  sum {:+.1e}",
        x + y
    );

    let x = sandwiched_up_general_detailed(&ab, (2, 3), o(2.0)?)?;
    let y = sandwiched_up_general_detailed(&ac, (2, 4), o(2.0 / 3.0)?)?;
    println!(
        "H~^up_2(A|B) = {:+.12} ({} steps)  H~^up_2/3(A|C) = {:+.12} ({} steps)  sum {:+.1e}",
        x.value,
        x.iterations,
        y.value,
        y.iterations,
        x.value + y.value
    );

    let seeds: Vec<u64> = (0..50).collect();
    let r = duality_suite(&seeds, &[(2, 2, 2), (2, 3, 4)])?;
    println!(
        "{} states: max residuals {:.1e} / {:.1e} / {:.1e}",
        r.states, r.dual1, r.dual3, r.dual2
    );
    Ok(())
}

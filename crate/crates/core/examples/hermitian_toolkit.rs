//! Small-matrix toolkit: spectra, support-restricted powers and logarithms,
//! partial traces and random pure states.
//!
//! ```text
//! cargo run --example hermitian_toolkit
//! ```

use num_complex::Complex64;
use psk_keyrate::linalg::{
    random_pure_tripartite, DensityMatrix, HermitianMatrix, Subsystem, DEFAULT_SUPPORT_CUTOFF,
};

fn main() -> psk_keyrate::Result<()> {
    let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])?;
    let s = x.eig();
    println!("spectrum of sigma_x: {:?}", s.eigenvalues);

    let rho = HermitianMatrix::from_diagonal(&[0.25, 0.75]);
    println!(
        "rho^(1/2) diagonal: {:?}",
        rho.power(0.5, DEFAULT_SUPPORT_CUTOFF).diagonal()
    );
    println!(
        "log2 rho diagonal:  {:?}",
        rho.log2(DEFAULT_SUPPORT_CUTOFF).diagonal()
    );

    // pseudo-inverse square root acts only on the support
    let proj = HermitianMatrix::from_diagonal(&[1.0, 0.0]);
    println!(
        "diag(1,0)^(-1/2):   {:?}",
        proj.power(-0.5, DEFAULT_SUPPORT_CUTOFF).diagonal()
    );

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let bell = DensityMatrix::pure(&[Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]);
    let rho_a = bell.partial_trace((2, 2), Subsystem::A)?;
    println!(
        "tr_B |Phi+><Phi+| = {:?}, S = {:.6} bits",
        rho_a.diagonal(),
        rho_a.entropy()
    );

    let psi = random_pure_tripartite((2, 3, 4), 11);
    let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    let rho_ab = DensityMatrix::pure(&psi).partial_trace((6, 4), Subsystem::A)?;
    let rho_c = DensityMatrix::pure(&psi).partial_trace((6, 4), Subsystem::B)?;
    println!(
        "random 2x3x4 state: norm {norm:.15}, S(AB) = {:.12}, S(C) = {:.12}",
        rho_ab.entropy(),
        rho_c.entropy()
    );
    Ok(())
}

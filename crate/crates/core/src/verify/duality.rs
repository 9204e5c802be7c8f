//! Duality identities for conditional Renyi entropies on random pure states.
//!
//! For a pure `psi_ABC`:
//!
//! - `H_a^down(A|B) + H_{2-a}^down(A|C) = 0`;
//! - `H_a^up(A|B) + H~_{1/a}^down(A|C) = 0`;
//! - `H~_a^up(A|B) + H~_b^up(A|C) = 0` with `1/a + 1/b = 2`.

use num_complex::Complex64;

use crate::entropy::{
    petz_down_general, petz_up_general, sandwiched_down_general, sandwiched_up_general, RenyiOrder,
};
use crate::error::Result;
use crate::linalg::{random_pure_tripartite, DensityMatrix, Subsystem};

pub const DUAL1_ORDERS: [f64; 4] = [0.5, 0.8, 1.3, 1.7];
pub const DUAL3_ORDERS: [f64; 3] = [0.5, 1.5, 2.0];
pub const DUAL2_ORDERS: [f64; 2] = [1.25, 2.0];
pub const DUAL1_TOLERANCE: f64 = 1e-8;
pub const DUAL3_TOLERANCE: f64 = 1e-8;
pub const DUAL2_TOLERANCE: f64 = 1e-6;

/// Signature shared by the general conditional entropies.
pub type Functional = fn(&DensityMatrix, (usize, usize), RenyiOrder) -> Result<f64>;

/// The functionals under test; swap one out to run a negative control.
#[derive(Clone, Copy)]
pub struct DualityFunctionals {
    pub petz_down: Functional,
    pub petz_up: Functional,
    pub sand_down: Functional,
    pub sand_up: Functional,
}

impl Default for DualityFunctionals {
    fn default() -> Self {
        DualityFunctionals {
            petz_down: petz_down_general,
            petz_up: petz_up_general,
            sand_down: sandwiched_down_general,
            sand_up: sandwiched_up_general,
        }
    }
}

/// Largest residual of each identity over all seeds and dimension triples.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    pub states: usize,
    pub dual1: f64,
    pub dual3: f64,
    pub dual2: f64,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.dual1 <= DUAL1_TOLERANCE
            && self.dual3 <= DUAL3_TOLERANCE
            && self.dual2 <= DUAL2_TOLERANCE
    }
}

/// `(rho_AB, rho_AC)` of a pure state with amplitudes indexed `a*dB*dC + b*dC + c`.
pub fn marginals(
    psi: &[Complex64],
    dims: (usize, usize, usize),
) -> Result<(DensityMatrix, DensityMatrix)> {
    let (da, db, dc) = dims;
    let mut swapped = vec![Complex64::new(0.0, 0.0); psi.len()];
    for a in 0..da {
        for b in 0..db {
            for c in 0..dc {
                swapped[a * dc * db + c * db + b] = psi[a * db * dc + b * dc + c];
            }
        }
    }
    let rho_ab = DensityMatrix::pure(psi).partial_trace((da * db, dc), Subsystem::A)?;
    let rho_ac = DensityMatrix::pure(&swapped).partial_trace((da * dc, db), Subsystem::A)?;
    Ok((rho_ab, rho_ac))
}

/// The three residuals for one state, each maximised over its order list.
pub fn residuals(
    psi: &[Complex64],
    dims: (usize, usize, usize),
    f: &DualityFunctionals,
) -> Result<[f64; 3]> {
    let (rho_ab, rho_ac) = marginals(psi, dims)?;
    let ab = (dims.0, dims.1);
    let ac = (dims.0, dims.2);
    let order = RenyiOrder::new;
    let mut out = [0.0f64; 3];
    for a in DUAL1_ORDERS {
        let r =
            (f.petz_down)(&rho_ab, ab, order(a)?)? + (f.petz_down)(&rho_ac, ac, order(2.0 - a)?)?;
        out[0] = out[0].max(r.abs());
    }
    for a in DUAL3_ORDERS {
        let r = (f.petz_up)(&rho_ab, ab, order(a)?)? + (f.sand_down)(&rho_ac, ac, order(1.0 / a)?)?;
        out[1] = out[1].max(r.abs());
    }
    for a in DUAL2_ORDERS {
        let b = 1.0 / (2.0 - 1.0 / a);
        let r = (f.sand_up)(&rho_ab, ab, order(a)?)? + (f.sand_up)(&rho_ac, ac, order(b)?)?;
        out[2] = out[2].max(r.abs());
    }
    Ok(out)
}

/// Runs all three identities on `random_pure_tripartite(dims, seed)` for every seed and dims.
pub fn duality_suite(seeds: &[u64], dims: &[(usize, usize, usize)]) -> Result<DualityReport> {
    duality_suite_with(seeds, dims, &DualityFunctionals::default())
}

pub fn duality_suite_with(
    seeds: &[u64],
    dims: &[(usize, usize, usize)],
    f: &DualityFunctionals,
) -> Result<DualityReport> {
    let mut report = DualityReport {
        states: 0,
        dual1: 0.0,
        dual3: 0.0,
        dual2: 0.0,
    };
    for &d in dims {
        for &seed in seeds {
            let r = residuals(&random_pure_tripartite(d, seed), d, f)?;
            report.states += 1;
            report.dual1 = report.dual1.max(r[0]);
            report.dual3 = report.dual3.max(r[1]);
            report.dual2 = report.dual2.max(r[2]);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_state_has_zero_residual() {
        let mut psi = vec![Complex64::new(0.0, 0.0); 8];
        psi[0] = Complex64::new(1.0, 0.0);
        let r = residuals(&psi, (2, 2, 2), &DualityFunctionals::default()).unwrap();
        assert!(r.iter().all(|&x| x < 1e-12), "{r:?}");
    }

    #[test]
    fn bell_on_ab_with_trivial_c() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let psi = [Complex64::new(s, 0.0), z, z, Complex64::new(s, 0.0)];
        let (rho_ab, rho_ac) = marginals(&psi, (2, 2, 1)).unwrap();
        let a = RenyiOrder::new(1.3).unwrap();
        let b = RenyiOrder::new(0.7).unwrap();
        assert!((petz_down_general(&rho_ab, (2, 2), a).unwrap() + 1.0).abs() < 1e-12);
        assert!((petz_down_general(&rho_ac, (2, 1), b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_suite_passes() {
        let r = duality_suite(&[0, 1, 2], &[(2, 2, 2), (2, 3, 4)]).unwrap();
        assert_eq!(r.states, 6);
        assert!(r.passed(), "{r:?}");
    }
}

//! Conditional Renyi entropies of arbitrary bipartite states `rho_AB`.

use super::RenyiOrder;
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, HermitianMatrix, Matrix, Subsystem, DEFAULT_SUPPORT_CUTOFF};
use crate::optim::NelderMead;
use num_complex::Complex64;

const CUTOFF: f64 = DEFAULT_SUPPORT_CUTOFF;
const SUPPORT_TOLERANCE: f64 = 1e-10;

fn marginal_b(rho: &DensityMatrix, dims: (usize, usize)) -> Result<HermitianMatrix> {
    rho.as_hermitian().partial_trace(dims, Subsystem::B)
}

/// Fails unless `rho_AB` lives inside the support of `I (x) sigma_B`.
fn check_support(rho: &DensityMatrix, dims: (usize, usize), sigma: &HermitianMatrix) -> Result<()> {
    let proj = HermitianMatrix::identity(dims.0).kron(&sigma.power(0.0, CUTOFF));
    let inside = rho.trace_product(&proj);
    if inside < rho.trace() - SUPPORT_TOLERANCE {
        return Err(Error::SupportViolation(format!(
            "weight {:.3e} outside the support of I (x) sigma_B",
            rho.trace() - inside
        )));
    }
    Ok(())
}

/// `H_a^down(A|B) = log2 tr(rho_AB^a (I (x) rho_B)^{1-a}) / (1-a)`.
pub fn petz_down_general(rho: &DensityMatrix, dims: (usize, usize), a: RenyiOrder) -> Result<f64> {
    let a = a.get();
    let rho_b = marginal_b(rho, dims)?;
    check_support(rho, dims, &rho_b)?;
    let sigma = HermitianMatrix::identity(dims.0).kron(&rho_b.power(1.0 - a, CUTOFF));
    let q = rho.power(a, CUTOFF).trace_product(&sigma);
    Ok(q.log2() / (1.0 - a))
}

/// `H_a^up(A|B) = a/(1-a) log2 tr[(tr_A rho_AB^a)^{1/a}]`.
pub fn petz_up_general(rho: &DensityMatrix, dims: (usize, usize), a: RenyiOrder) -> Result<f64> {
    let a = a.get();
    let reduced = rho.power(a, CUTOFF).partial_trace(dims, Subsystem::B)?;
    let q = reduced.trace_power(1.0 / a, CUTOFF);
    Ok(a / (1.0 - a) * q.log2())
}

/// `H~_a^down(A|B) = log2 tr[(X rho_AB X)^a] / (1-a)`, `X = I (x) rho_B^{(1-a)/2a}`.
pub fn sandwiched_down_general(
    rho: &DensityMatrix,
    dims: (usize, usize),
    a: RenyiOrder,
) -> Result<f64> {
    let rho_b = marginal_b(rho, dims)?;
    check_support(rho, dims, &rho_b)?;
    Ok(sandwiched_value(rho, dims, &rho_b, a.get()).0)
}

/// Sandwiched value against `I (x) sigma` together with `tr_A[(X rho X)^a]`.
fn sandwiched_value(
    rho: &DensityMatrix,
    dims: (usize, usize),
    sigma: &HermitianMatrix,
    a: f64,
) -> (f64, HermitianMatrix) {
    let x = HermitianMatrix::identity(dims.0).kron(&sigma.power((1.0 - a) / (2.0 * a), CUTOFF));
    let inner = x.conjugate(rho).power(a, CUTOFF);
    let t = inner
        .partial_trace(dims, Subsystem::B)
        .expect("dimensions checked by caller");
    (t.trace().log2() / (1.0 - a), t)
}

/// Outcome of the optimisation over `sigma_B`.
#[derive(Debug, Clone)]
pub struct SandwichedUpGeneral {
    pub value: f64,
    pub sigma: DensityMatrix,
    pub iterations: usize,
    pub converged: bool,
}

/// `H~_a^up(A|B) = sup_sigma -D~_a(rho_AB || I (x) sigma_B)` for `a >= 1/2`.
pub fn sandwiched_up_general(
    rho: &DensityMatrix,
    dims: (usize, usize),
    a: RenyiOrder,
) -> Result<f64> {
    sandwiched_up_general_detailed(rho, dims, a).map(|r| r.value)
}

/// Fixed-point search for the optimal `sigma_B`.
///
/// Stationary points satisfy `sigma ~ T(sigma) = tr_A[(X rho X)^a]`. Each step
/// proposes `[sigma^{(a-1)/2} T sigma^{(a-1)/2}]^{1/a}` (exact in one step for
/// commuting inputs), then plain `T`, then damped mixtures, and keeps the first
/// proposal that increases the value. A Nelder-Mead search over
/// `sigma = H^2 / tr H^2` takes over if the iteration cap is reached.
pub fn sandwiched_up_general_detailed(
    rho: &DensityMatrix,
    dims: (usize, usize),
    a: RenyiOrder,
) -> Result<SandwichedUpGeneral> {
    let a = a.require(0.5 - f64::EPSILON, f64::INFINITY, "[1/2, 1) U (1, inf)")?;
    const MAX_ITER: usize = 500;
    const VALUE_TOLERANCE: f64 = 1e-13;

    let mut sigma = marginal_b(rho, dims)?;
    check_support(rho, dims, &sigma)?;
    let (mut value, mut t) = sandwiched_value(rho, dims, &sigma, a);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MAX_ITER {
        iterations += 1;
        let half = sigma.power((a - 1.0) / 2.0, CUTOFF);
        let accelerated = normalise(&half.conjugate(&t).power(1.0 / a, CUTOFF));
        let plain = normalise(&t);
        let mut accepted = None;
        for cand in [accelerated.clone(), plain] {
            let (v, tc) = sandwiched_value(rho, dims, &cand, a);
            if v > value {
                accepted = Some((cand, v, tc));
                break;
            }
        }
        if accepted.is_none() {
            let mut step = 0.5;
            for _ in 0..30 {
                let cand = sigma.scale(1.0 - step).add(&accelerated.scale(step));
                let (v, tc) = sandwiched_value(rho, dims, &cand, a);
                if v > value {
                    accepted = Some((cand, v, tc));
                    break;
                }
                step *= 0.5;
            }
        }
        match accepted {
            Some((s, v, tc)) => {
                let gain = v - value;
                sigma = s;
                value = v;
                t = tc;
                if gain < VALUE_TOLERANCE {
                    converged = true;
                    break;
                }
            }
            None => {
                converged = true;
                break;
            }
        }
    }

    if !converged {
        let (s, v, ok) = direct_search(rho, dims, &sigma, a);
        if v > value {
            sigma = s;
            value = v;
        }
        converged = ok;
    }

    Ok(SandwichedUpGeneral {
        value,
        sigma: DensityMatrix::new_unchecked(sigma),
        iterations,
        converged,
    })
}

fn normalise(h: &HermitianMatrix) -> HermitianMatrix {
    h.scale(1.0 / h.trace())
}

/// Nelder-Mead over Hermitian `H` with `sigma = H^2 / tr H^2`.
fn direct_search(
    rho: &DensityMatrix,
    dims: (usize, usize),
    start: &HermitianMatrix,
    a: f64,
) -> (HermitianMatrix, f64, bool) {
    let d = dims.1;
    let root = start.power(0.5, CUTOFF);
    let mut x0 = Vec::with_capacity(d * d);
    for i in 0..d {
        x0.push(root.get(i, i).re);
        for j in i + 1..d {
            x0.push(root.get(i, j).re);
            x0.push(root.get(i, j).im);
        }
    }
    let build = |x: &[f64]| -> HermitianMatrix {
        let mut m = Matrix::zeros(d, d);
        let mut k = 0;
        for i in 0..d {
            m[(i, i)] = Complex64::new(x[k], 0.0);
            k += 1;
            for j in i + 1..d {
                let z = Complex64::new(x[k], x[k + 1]);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
                k += 2;
            }
        }
        let h = HermitianMatrix::symmetrize(m);
        normalise(&HermitianMatrix::symmetrize(h.matmul(&h)))
    };
    let nm = NelderMead::new(vec![0.05; d * d])
        .with_tolerances(1e-15, 0.0)
        .with_max_iterations(20_000);
    let m = nm.minimize(
        |x| {
            let s = build(x);
            if check_support(rho, dims, &s).is_err() {
                return f64::INFINITY;
            }
            -sandwiched_value(rho, dims, &s, a).0
        },
        &x0,
    );
    (build(&m.x), -m.value, m.converged)
}

//! Symmetry-reduced entropies of a classical-quantum ensemble.
//!
//! Because `U_t rho_{E|y} U_t^dagger = rho_{E|y+t}` and `rho_E` is invariant,
//! every sum over `y` collapses onto the `y = 0` block.

use std::f64::consts::{E, LN_2};

use super::{RenyiOrder, B_ORDER_MAX};
use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, Matrix, DEFAULT_SUPPORT_CUTOFF};
use crate::optim::NelderMead;
use crate::states::CqEnsemble;

const CUTOFF: f64 = DEFAULT_SUPPORT_CUTOFF;

/// `H_a^down(Y|E) = log N + log2 tr(rho_{E|0}^a rho_E^{1-a}) / (1-a)`.
pub fn petz_down_cq(e: &CqEnsemble, a: RenyiOrder) -> Result<f64> {
    let a = a.get();
    let rho0 = e.cond_state(0).power(a, CUTOFF);
    let sigma = e.avg_state().power(1.0 - a, CUTOFF);
    let q = rho0.trace_product(&sigma);
    Ok(e.log_size() + q.log2() / (1.0 - a))
}

/// `H_a^up(Y|E) = a/(1-a) * (log2 tr[(sum_y rho_{E|y}^a)^{1/a}] - log N)`.
pub fn petz_up_cq(e: &CqEnsemble, a: RenyiOrder) -> Result<f64> {
    let a = a.get();
    let sum = e
        .cond_states()
        .iter()
        .map(|s| s.power(a, CUTOFF))
        .reduce(|acc, m| acc.add(&m))
        .expect("ensemble is non-empty");
    // Under a diagonal group with orthogonal characters the sum is diagonal in
    // the ensemble basis. Reading the spectrum off the diagonal keeps the tiny
    // eigenvalues that a support cutoff would drop; under the power 1/a < 1
    // they are not negligible.
    let q = if twirl_is_diagonal(e) {
        sum.diagonal()
            .iter()
            .map(|&d| d.max(0.0).powf(1.0 / a))
            .sum()
    } else {
        sum.trace_power(1.0 / a, CUTOFF)
    };
    Ok(a / (1.0 - a) * (q.log2() - e.log_size()))
}

/// True when `sum_t U_t X U_t^dagger` is diagonal for every `X`.
fn twirl_is_diagonal(e: &CqEnsemble) -> bool {
    let Some(phases) = e.symmetry().diagonal_phases() else {
        return false;
    };
    if phases.len() != e.size() {
        return false;
    }
    let d = e.dim();
    (0..d).all(|i| {
        (i + 1..d).all(|j| {
            let overlap: num_complex::Complex64 =
                phases.iter().map(|ph| ph[i] * ph[j].conj()).sum();
            overlap.norm() <= 1e-12 * phases.len() as f64
        })
    })
}

/// `log N + log2 tr[(rho_E^g rho_{E|0} rho_E^g)^a] / (1-a)`, `g = (1-a)/(2a)`.
pub fn sandwiched_down_cq(e: &CqEnsemble, a: RenyiOrder) -> Result<f64> {
    let a = a.get();
    let x = e.avg_state().power((1.0 - a) / (2.0 * a), CUTOFF);
    let q = x.conjugate(e.cond_state(0)).trace_power(a, CUTOFF);
    Ok(e.log_size() + q.log2() / (1.0 - a))
}

/// Result of the search over invariant states.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantOptimum {
    pub value: f64,
    /// Diagonal of the optimal `sigma_E` in the ensemble basis.
    pub sigma_diagonal: Vec<f64>,
    pub converged: bool,
}

/// `H~_a^up` restricted to states commuting with the symmetry group.
///
/// For the diagonal phase groups of BPSK and QPSK the invariant states are
/// exactly the states diagonal in the ensemble basis. Accepts `a >= 1/2`;
/// the key-rate bounds use `a > 1`.
pub fn sandwiched_up_invariant(e: &CqEnsemble, a: RenyiOrder) -> Result<f64> {
    sandwiched_up_invariant_detailed(e, a).map(|o| o.value)
}

pub fn sandwiched_up_invariant_detailed(e: &CqEnsemble, a: RenyiOrder) -> Result<InvariantOptimum> {
    let a = a.require(0.5 - f64::EPSILON, f64::INFINITY, "[1/2, 1) U (1, inf)")?;
    check_diagonal_commutant(e)?;
    // the value is increasing in ln Q for a < 1 and decreasing for a > 1
    let sign = if a > 1.0 { 1.0 } else { -1.0 };
    let d = e.dim();
    let rho0 = e.cond_state(0).as_matrix();
    let gamma = (1.0 - a) / (2.0 * a);
    let row_weight: Vec<f64> = (0..d)
        .map(|i| (0..d).map(|j| rho0[(i, j)].norm()).fold(0.0, f64::max))
        .collect();
    let scale = rho0.max_abs();

    // sign * ln tr[(sigma^g rho0 sigma^g)^a] for diagonal sigma = diag(p)
    let log_q = |p: &[f64]| -> f64 {
        if a > 1.0 {
            for i in 0..d {
                if p[i] <= 0.0 && row_weight[i] > CUTOFF * scale {
                    return f64::INFINITY;
                }
            }
        }
        let w: Vec<f64> = p
            .iter()
            .map(|&x| if x > 0.0 { x.powf(gamma) } else { 0.0 })
            .collect();
        let m = Matrix::from_fn(d, d, |i, j| rho0[(i, j)] * (w[i] * w[j]));
        sign * HermitianMatrix::symmetrize(m).trace_power(a, CUTOFF).ln()
    };

    let seeds = invariant_seeds(&e.avg_state().diagonal());
    let nm = NelderMead::new(vec![0.5; d - 1])
        .with_tolerances(1e-15, 1e-15)
        .with_x_tolerance(1e-10)
        .with_max_iterations(2000);

    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    for seed in seeds {
        let z0 = log_odds(&seed);
        let start = log_q(&seed);
        let m = nm.minimize(|z| log_q(&softmax(z)), &z0);
        let (p, v, conv) = if m.value <= start {
            (softmax(&m.x), m.value, m.converged)
        } else {
            (seed, start, m.converged)
        };
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((p, v, conv));
        }
    }
    let (p, lq, converged) = best.expect("at least one seed");
    Ok(InvariantOptimum {
        value: e.log_size() + sign * lq / LN_2 / (1.0 - a),
        sigma_diagonal: p,
        converged,
    })
}

fn check_diagonal_commutant(e: &CqEnsemble) -> Result<()> {
    let phases = e.symmetry().diagonal_phases().ok_or_else(|| {
        Error::InvalidParameter("invariant restriction needs a diagonal symmetry group".into())
    })?;
    let d = e.dim();
    for i in 0..d {
        for j in i + 1..d {
            let separated = phases.iter().any(|ph| (ph[i] - ph[j]).norm() > 1e-9);
            if !separated {
                return Err(Error::InvalidParameter(format!(
                    "symmetry group does not separate basis states {i} and {j}"
                )));
            }
        }
    }
    Ok(())
}

/// `rho_E`'s diagonal, the uniform state and mixtures leaning on single basis states.
fn invariant_seeds(avg_diag: &[f64]) -> Vec<Vec<f64>> {
    let d = avg_diag.len();
    let floor = 1e-6;
    let clean = |v: Vec<f64>| -> Vec<f64> {
        let v: Vec<f64> = v.into_iter().map(|x| x.max(floor)).collect();
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    };
    let mut seeds = vec![clean(avg_diag.to_vec()), vec![1.0 / d as f64; d]];
    for k in 0..3 {
        let lead = k % d;
        let rest = 0.4 / (d - 1).max(1) as f64;
        seeds.push(clean(
            (0..d).map(|i| if i == lead { 0.6 } else { rest }).collect(),
        ));
    }
    seeds
}

fn log_odds(p: &[f64]) -> Vec<f64> {
    let base = p[0].max(f64::MIN_POSITIVE).ln();
    p[1..]
        .iter()
        .map(|&x| x.max(f64::MIN_POSITIVE).ln() - base)
        .collect()
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(0.0, f64::max);
    let mut p: Vec<f64> = std::iter::once(-m)
        .chain(z.iter().map(|x| x - m))
        .map(f64::exp)
        .collect();
    let s: f64 = p.iter().sum();
    for x in &mut p {
        *x /= s;
    }
    p
}

/// `H(Y|E) = log N + (1/N) sum_y S(rho_{E|y}) - S(rho_E)`.
pub fn von_neumann_cq(e: &CqEnsemble) -> f64 {
    let mean_cond: f64 = e
        .cond_states()
        .iter()
        .zip(e.probs())
        .map(|(s, p)| p * s.entropy())
        .sum();
    e.log_size() + mean_cond - e.avg_state().entropy()
}

/// Conditional entropy variance `V(Y|E)` in bits squared, evaluated block by block.
pub fn variance_v_cq(e: &CqEnsemble) -> f64 {
    let log_avg = e.avg_state().log2(CUTOFF);
    let (mut second, mut first) = (0.0, 0.0);
    for (s, &p) in e.cond_states().iter().zip(e.probs()) {
        let block = s.scale(p);
        let l = block.log2(CUTOFF).sub(&log_avg);
        let bl = block.matmul(&l);
        first += bl.trace().re;
        second += bl.matmul(&l).trace().re;
    }
    (second - first * first).max(0.0)
}

/// `K(a)` of the second-order bound, for `a` in `(1, 2 - 1e-6]`.
pub fn coeff_k(e: &CqEnsemble, a: RenyiOrder) -> Result<f64> {
    let av = a.require(1.0, B_ORDER_MAX, "(1, 2 - 1e-6]")?;
    let h = von_neumann_cq(e);
    let ha = petz_down_cq(e, a)?;
    let h2 = petz_down_cq(e, RenyiOrder::new(2.0)?)?;
    Ok(k_from_parts(av, h, ha, h2))
}

fn k_from_parts(a: f64, h: f64, ha: f64, h2: f64) -> f64 {
    let num = ((a - 1.0) * (h - ha)).exp2();
    let tail = ((h - h2).exp2() + E * E).ln();
    num / (6.0 * (2.0 - a).powi(3) * LN_2) * tail.powi(3)
}

/// `B_a = H - (a-1) ln2 / 2 * V - (a-1)^2 K(a)`.
pub fn bound_b(e: &CqEnsemble, a: RenyiOrder) -> Result<f64> {
    let av = a.require(1.0, B_ORDER_MAX, "(1, 2 - 1e-6]")?;
    let h = von_neumann_cq(e);
    let v = variance_v_cq(e);
    let k = coeff_k(e, a)?;
    Ok(b_from_parts(av, h, v, k))
}

fn b_from_parts(a: f64, h: f64, v: f64, k: f64) -> f64 {
    h - (a - 1.0) * LN_2 / 2.0 * v - (a - 1.0).powi(2) * k
}

/// Every entropic quantity at one order. Fields that are undefined for the
/// requested order are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub a: f64,
    pub petz_down: f64,
    pub petz_up: f64,
    pub sand_down: f64,
    /// Only for `a >= 1/2`.
    pub sand_up_invariant: Option<f64>,
    pub sand_up_converged: bool,
    pub von_neumann: f64,
    pub variance_v: f64,
    /// Only for `a` in `(1, 2 - 1e-6]`.
    pub coeff_k: Option<f64>,
    pub bound_b: Option<f64>,
}

pub fn entropy_report(e: &CqEnsemble, a: RenyiOrder) -> Result<EntropyReport> {
    let av = a.get();
    let h = von_neumann_cq(e);
    let v = variance_v_cq(e);
    let petz_down = petz_down_cq(e, a)?;
    let (sand_up, converged) = if av >= 0.5 {
        let o = sandwiched_up_invariant_detailed(e, a)?;
        (Some(o.value), o.converged)
    } else {
        (None, true)
    };
    let k = if av > 1.0 && av <= B_ORDER_MAX {
        let h2 = petz_down_cq(e, RenyiOrder::new(2.0)?)?;
        Some(k_from_parts(av, h, petz_down, h2))
    } else {
        None
    };
    Ok(EntropyReport {
        a: av,
        petz_down,
        petz_up: petz_up_cq(e, a)?,
        sand_down: sandwiched_down_cq(e, a)?,
        sand_up_invariant: sand_up,
        sand_up_converged: converged,
        von_neumann: h,
        variance_v: v,
        coeff_k: k,
        bound_b: k.map(|k| b_from_parts(av, h, v, k)),
    })
}

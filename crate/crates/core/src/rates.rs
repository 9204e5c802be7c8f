//! Finite-size key-rate estimators and their optimisation over `(alpha, a)`.
//!
//! Each estimator has the form `(l - leak) / n` in bits per channel use:
//!
//! - `S`: sandwiched Renyi bound, `H~_a^up + (1 + 2 log2 eps') / n - g(eps) / (n (a - 1)) - leak`;
//! - `AEP`: `H + (1 + 2 log2 eps') / n - delta(eps) / sqrt(n) - leak`;
//! - `B`: as `S` with `H~_a^up` replaced by the second-order bound `B_a`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entropy::{
    bound_b, sandwiched_up_invariant_detailed, von_neumann_cq, RenyiOrder, B_ORDER_MAX,
};
use crate::error::{Error, Result};
use crate::optim::NelderMead;
use crate::states::{
    bpsk_sign_probabilities, build_ensemble, cond_prob, qpsk_quadrature_probabilities, CqEnsemble,
    Modulation, ProtocolParams,
};

/// `g(eps) = -log2(1 - sqrt(1 - eps^2))`, evaluated as `-log2(eps^2 / (1 + sqrt(1 - eps^2)))`.
pub fn g_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    Ok(-(eps * eps / (1.0 + (1.0 - eps * eps).sqrt())).log2())
}

/// AEP correction `delta(eps) = 4 log2(2 + sqrt(N)) sqrt(log2(2 / eps^2))`.
pub fn delta_eps(eps: f64, n_symbols: usize) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    if n_symbols < 2 {
        return Err(Error::Domain(format!("alphabet size {n_symbols} < 2")));
    }
    let n = n_symbols as f64;
    Ok(4.0 * (2.0 + n.sqrt()).log2() * (2.0 / (eps * eps)).log2().sqrt())
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Binary entropy of the BPSK sign error, `h(p_+)`.
pub fn leak_bpsk(p: &ProtocolParams) -> Result<f64> {
    if p.modulation != Modulation::Bpsk {
        return Err(Error::InvalidParameter(
            "leak_bpsk needs BPSK parameters".into(),
        ));
    }
    let (plus, minus) = bpsk_sign_probabilities(p.alpha, p.eta);
    Ok(-(plogp(plus) + plogp(minus)))
}

/// `H_4(Y|X) = -2 (P_+ log2 P_+ + P_- log2 P_-)`.
pub fn leak_qpsk(p: &ProtocolParams) -> Result<f64> {
    if p.modulation != Modulation::Qpsk {
        return Err(Error::InvalidParameter(
            "leak_qpsk needs QPSK parameters".into(),
        ));
    }
    let (plus, minus) = qpsk_quadrature_probabilities(p.alpha, p.eta);
    Ok(-2.0 * (plogp(plus) + plogp(minus)))
}

/// Error-correction leakage `H_N(Y|X)` per channel use.
pub fn leak(p: &ProtocolParams) -> Result<f64> {
    match p.modulation {
        Modulation::Bpsk => leak_bpsk(p),
        Modulation::Qpsk => leak_qpsk(p),
    }
}

/// Generic `H(Y|X)` from the full table; equals [`leak`] for both protocols.
pub fn leak_from_table(p: &ProtocolParams) -> Result<f64> {
    Ok(cond_prob(p)?.conditional_entropy())
}

/// Block size, smoothing and hashing parameters, plus the Renyi order used by `S` and `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityParams {
    pub n: f64,
    pub eps: f64,
    pub eps_prime: f64,
    pub a: Option<RenyiOrder>,
}

impl SecurityParams {
    pub const DEFAULT_EPS: f64 = 1e-8;

    pub fn new(n: f64, eps: f64, eps_prime: f64) -> Result<Self> {
        if !(n >= 1.0 && n.is_finite() && n.fract() == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "block size must be a positive integer, got {n}"
            )));
        }
        for (name, v) in [("eps", eps), ("eps'", eps_prime)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        if eps + eps_prime >= 1.0 {
            return Err(Error::InvalidParameter("eps + eps' must be below 1".into()));
        }
        Ok(SecurityParams {
            n,
            eps,
            eps_prime,
            a: None,
        })
    }

    /// Block size `n` with `eps = eps' = 1e-8`.
    pub fn with_block_size(n: f64) -> Result<Self> {
        Self::new(n, Self::DEFAULT_EPS, Self::DEFAULT_EPS)
    }

    pub fn with_order(mut self, a: RenyiOrder) -> Self {
        self.a = Some(a);
        self
    }

    /// `(1 + 2 log2 eps') / n`, negative for any `eps' < 1/sqrt(2)`.
    pub fn hashing_term(&self) -> f64 {
        (1.0 + 2.0 * self.eps_prime.log2()) / self.n
    }

    fn order(&self) -> Result<f64> {
        self.a
            .map(RenyiOrder::get)
            .ok_or_else(|| Error::InvalidParameter("estimator needs a Renyi order".into()))
    }
}

/// Key-rate estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    S,
    Aep,
    B,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [Estimator::S, Estimator::B, Estimator::Aep];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::S => "S",
            Estimator::Aep => "AEP",
            Estimator::B => "B",
        }
    }

    pub fn uses_order(self) -> bool {
        self != Estimator::Aep
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(Estimator::S),
            "aep" => Ok(Estimator::Aep),
            "b" => Ok(Estimator::B),
            _ => Err(Error::InvalidParameter(format!("unknown estimator '{s}'"))),
        }
    }
}

/// A rate together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RateResult {
    pub estimator: Estimator,
    pub modulation: Modulation,
    pub n: f64,
    pub eta: f64,
    /// Bits per channel use; may be negative.
    pub rate: f64,
    pub alpha_opt: f64,
    /// Absent for `AEP`.
    pub a_opt: Option<f64>,
    pub leak: f64,
    pub key_possible: bool,
    /// False when an inner or outer optimisation hit its iteration cap.
    pub converged: bool,
}

fn s_rate_parts(e: &CqEnsemble, sp: &SecurityParams, leak: f64) -> Result<(f64, bool)> {
    let a = sp.order()?;
    let o = sandwiched_up_invariant_detailed(e, RenyiOrder::new(a)?)?;
    let g = g_eps(sp.eps)?;
    Ok((
        o.value + sp.hashing_term() - g / (sp.n * (a - 1.0)) - leak,
        o.converged,
    ))
}

/// `r^S`; requires `a > 1`.
pub fn rate_s(e: &CqEnsemble, sp: &SecurityParams, leak: f64) -> Result<f64> {
    s_rate_parts(e, sp, leak).map(|r| r.0)
}

/// `r^AEP`; the Renyi order is ignored.
pub fn rate_aep(e: &CqEnsemble, sp: &SecurityParams, leak: f64) -> Result<f64> {
    let delta = delta_eps(sp.eps, e.size())?;
    Ok(von_neumann_cq(e) + sp.hashing_term() - delta / sp.n.sqrt() - leak)
}

/// `r^B`; requires `a` in `(1, 2 - 1e-6]`.
pub fn rate_b(e: &CqEnsemble, sp: &SecurityParams, leak: f64) -> Result<f64> {
    let a = sp.order()?;
    let b = bound_b(e, RenyiOrder::new(a)?)?;
    Ok(b + sp.hashing_term() - g_eps(sp.eps)? / (sp.n * (a - 1.0)) - leak)
}

/// Evaluates one estimator at fixed `(alpha, eta)` and, for `S`/`B`, the order in `sp`.
pub fn evaluate_rate(
    estimator: Estimator,
    params: &ProtocolParams,
    sp: &SecurityParams,
) -> Result<RateResult> {
    let e = build_ensemble(params)?;
    let leak = leak(params)?;
    let (rate, converged) = match estimator {
        Estimator::S => s_rate_parts(&e, sp, leak)?,
        Estimator::Aep => (rate_aep(&e, sp, leak)?, true),
        Estimator::B => (rate_b(&e, sp, leak)?, true),
    };
    Ok(RateResult {
        estimator,
        modulation: params.modulation,
        n: sp.n,
        eta: params.eta,
        rate,
        alpha_opt: params.alpha,
        a_opt: if estimator.uses_order() {
            sp.a.map(RenyiOrder::get)
        } else {
            None
        },
        leak,
        key_possible: rate > 0.0,
        converged,
    })
}

/// Search box for [`optimize_rate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBounds {
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Smallest `a - 1` explored.
    pub a_minus_one_min: f64,
    /// Largest order; `None` selects 4 for `S` and `2 - 1e-6` for `B`.
    pub a_max: Option<f64>,
    /// Points per axis of the coarse grid.
    pub grid: usize,
    /// Grid points refined by Nelder-Mead.
    pub refine: usize,
}

impl Default for RateBounds {
    fn default() -> Self {
        RateBounds {
            alpha_min: 0.05,
            alpha_max: 3.0,
            a_minus_one_min: 1e-8,
            a_max: None,
            grid: 25,
            refine: 3,
        }
    }
}

impl RateBounds {
    pub const S_ORDER_MAX: f64 = 4.0;
    pub const S_ORDER_CEILING: f64 = 64.0;

    fn order_max(&self, estimator: Estimator) -> Result<f64> {
        let (default, ceiling) = match estimator {
            Estimator::S => (Self::S_ORDER_MAX, Self::S_ORDER_CEILING),
            Estimator::B => (B_ORDER_MAX, B_ORDER_MAX),
            Estimator::Aep => return Ok(f64::NAN),
        };
        let a_max = self.a_max.unwrap_or(default);
        if !(a_max > 1.0 + self.a_minus_one_min && a_max <= ceiling) {
            return Err(Error::InvalidParameter(format!(
                "upper order {a_max} outside (1, {ceiling}] for estimator {estimator}"
            )));
        }
        Ok(a_max)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha_min > 0.0 && self.alpha_min < self.alpha_max && self.alpha_max.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "alpha bounds [{}, {}] invalid",
                self.alpha_min, self.alpha_max
            )));
        }
        if !(self.a_minus_one_min > 0.0) || self.grid < 2 || self.refine == 0 {
            return Err(Error::InvalidParameter("invalid optimiser settings".into()));
        }
        Ok(())
    }
}

/// Maximises an estimator over `alpha` (and `a` for `S`, `B`).
///
/// A coarse grid (uniform in `alpha`, logarithmic in `a - 1`) is evaluated in
/// parallel; the best grid points seed Nelder-Mead refinements. The reduction
/// is sequential over the grid order, so ties resolve to the smallest
/// `(alpha, a)` and the result does not depend on the thread count.
pub fn optimize_rate(
    estimator: Estimator,
    modulation: Modulation,
    eta: f64,
    sp: &SecurityParams,
    bounds: &RateBounds,
) -> Result<RateResult> {
    bounds.validate()?;
    // probe parameters early so that range errors are not swallowed by the search
    ProtocolParams::new(modulation, bounds.alpha_min, eta)?;
    let a_max = bounds.order_max(estimator)?;
    let with_order = estimator.uses_order();

    let lo = bounds.a_minus_one_min.log10();
    let hi = (a_max - 1.0).log10();
    let objective = |alpha: f64, log_am1: f64| -> f64 {
        if !(alpha >= bounds.alpha_min && alpha <= bounds.alpha_max) {
            return f64::NEG_INFINITY;
        }
        if with_order && !(log_am1 >= lo && log_am1 <= hi) {
            return f64::NEG_INFINITY;
        }
        let mut sp = *sp;
        if with_order {
            let a = (1.0 + 10f64.powf(log_am1)).min(a_max);
            match RenyiOrder::new(a) {
                Ok(o) => sp = sp.with_order(o),
                Err(_) => return f64::NEG_INFINITY,
            }
        }
        ProtocolParams::new(modulation, alpha, eta)
            .and_then(|p| evaluate_rate(estimator, &p, &sp))
            .map_or(f64::NEG_INFINITY, |r| r.rate)
    };

    let k = bounds.grid;
    let alphas: Vec<f64> = (0..k)
        .map(|i| {
            bounds.alpha_min + (bounds.alpha_max - bounds.alpha_min) * i as f64 / (k - 1) as f64
        })
        .collect();
    let orders: Vec<f64> = if with_order {
        (0..k)
            .map(|j| lo + (hi - lo) * j as f64 / (k - 1) as f64)
            .collect()
    } else {
        vec![f64::NAN]
    };
    let points: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&al| orders.iter().map(move |&o| (al, o)))
        .collect();
    let values: Vec<f64> = points.par_iter().map(|&(al, o)| objective(al, o)).collect();

    // stable sort keeps grid order among equal values
    let mut ranked: Vec<usize> = (0..points.len()).collect();
    ranked.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let starts: Vec<usize> = ranked.into_iter().take(bounds.refine).collect();

    let alpha_step = alphas[1] - alphas[0];
    let order_step = if with_order {
        orders[1] - orders[0]
    } else {
        0.0
    };
    let refined: Vec<(f64, f64, f64, bool)> = starts
        .par_iter()
        .map(|&idx| {
            let (al, o) = points[idx];
            if with_order {
                let nm = NelderMead::new(vec![0.5 * alpha_step, 0.5 * order_step]);
                let m = nm.minimize(|x| -objective(x[0], x[1]), &[al, o]);
                (m.x[0], m.x[1], -m.value, m.converged)
            } else {
                let nm = NelderMead::new(vec![0.5 * alpha_step]);
                let m = nm.minimize(|x| -objective(x[0], f64::NAN), &[al]);
                (m.x[0], f64::NAN, -m.value, m.converged)
            }
        })
        .collect();

    let mut best = (
        points[starts[0]].0,
        points[starts[0]].1,
        values[starts[0]],
        true,
    );
    for cand in refined {
        if cand.2 > best.2 || (cand.2 == best.2 && (cand.0, cand.1) < (best.0, best.1)) {
            best = cand;
        }
    }
    let (alpha, log_am1, value, converged) = best;
    if !value.is_finite() {
        return Err(Error::Domain(format!(
            "estimator {estimator} could not be evaluated anywhere in the search box"
        )));
    }

    let params = ProtocolParams::new(modulation, alpha, eta)?;
    let mut sp = *sp;
    if with_order {
        sp = sp.with_order(RenyiOrder::new((1.0 + 10f64.powf(log_am1)).min(a_max))?);
    }
    let mut result = evaluate_rate(estimator, &params, &sp)?;
    result.converged &= converged;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_eps_values() {
        assert!((g_eps(1e-8).unwrap() - 54.150849518197798).abs() < 1e-12);
        assert_eq!(g_eps(1.0).unwrap(), 0.0);
        for eps in [1e-2, 1e-8] {
            assert!(g_eps(eps).unwrap() <= (2.0 / (eps * eps)).log2());
        }
        assert!(g_eps(0.0).is_err());
    }

    #[test]
    fn delta_eps_values() {
        let d = delta_eps(1e-8, 2).unwrap();
        assert!((d - 52.1455019753058).abs() < 1e-9);
        assert!((d / 100.0 - 0.521455019753058).abs() < 1e-11);
        assert!(delta_eps(1e-8, 4).unwrap() > d);
        assert!(delta_eps(1e-4, 2).unwrap() < d);
    }

    #[test]
    fn leak_values() {
        let p = ProtocolParams::bpsk(1.0, 0.9).unwrap();
        assert!((leak_bpsk(&p).unwrap() - 0.1887932615857538).abs() < 1e-13);
        assert!((leak_bpsk(&ProtocolParams::bpsk(0.0, 0.9).unwrap()).unwrap() - 1.0).abs() < 1e-15);
        assert!((leak_qpsk(&ProtocolParams::qpsk(0.0, 0.9).unwrap()).unwrap() - 2.0).abs() < 1e-15);
        for p in [ProtocolParams::qpsk(1.3, 0.7).unwrap(), p] {
            assert!((leak(&p).unwrap() - leak_from_table(&p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn security_params_validation() {
        assert!(SecurityParams::new(0.0, 1e-8, 1e-8).is_err());
        assert!(SecurityParams::new(10.5, 1e-8, 1e-8).is_err());
        assert!(SecurityParams::new(10.0, 0.6, 0.5).is_err());
        let sp = SecurityParams::with_block_size(100.0).unwrap();
        assert!(sp.hashing_term() < 0.0);
        let e = build_ensemble(&ProtocolParams::bpsk(1.0, 0.9).unwrap()).unwrap();
        assert!(rate_s(&e, &sp, 0.1).is_err());
    }

    #[test]
    fn b_below_s_at_fixed_point() {
        let p = ProtocolParams::bpsk(0.95, 0.9).unwrap();
        let sp = SecurityParams::with_block_size(1e5)
            .unwrap()
            .with_order(RenyiOrder::new(1.05).unwrap());
        let s = evaluate_rate(Estimator::S, &p, &sp).unwrap();
        let b = evaluate_rate(Estimator::B, &p, &sp).unwrap();
        assert!(b.rate <= s.rate + 1e-12);
        assert!(s.a_opt == Some(1.05));
    }
}

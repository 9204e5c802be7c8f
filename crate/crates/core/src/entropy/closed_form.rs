//! Analytic BPSK entropies.
//!
//! The printed expressions combine `sech`, `cosh` and `sinh` of arguments that
//! grow without bound as `eta -> 1`; they are evaluated here in logarithmic
//! form, with `1 - kappa^2` and `1 - r^2` obtained from `expm1` and `erfc`.

use std::f64::consts::LN_2;

use super::RenyiOrder;
use crate::error::{Error, Result};
use crate::special::{erf, erfc};
use crate::states::{Modulation, ProtocolParams};

/// Largest transmittance accepted by the analytic path.
pub const ETA_MAX: f64 = 1.0 - 1e-9;

/// Auxiliary quantities shared by the three closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpskClosedFormInputs {
    /// `exp(2 alpha^2 (eta - 1))`
    pub kappa: f64,
    /// `erf(sqrt(2 eta) alpha)`
    pub r: f64,
    /// `sqrt(1 + (kappa^-2 - 1) r^2)`
    pub g: f64,
    /// `artanh(kappa g)`
    pub theta: f64,
    /// `artanh(kappa)`
    pub phi: f64,
    /// `sqrt(r^2 + sinh^2(phi / a))`
    pub delta: f64,
    /// `1 - kappa^2`
    one_minus_kappa_sq: f64,
    /// `1 - r^2`
    one_minus_r_sq: f64,
}

impl BpskClosedFormInputs {
    pub fn new(p: &ProtocolParams, a: RenyiOrder) -> Result<Self> {
        if p.modulation != Modulation::Bpsk {
            return Err(Error::InvalidParameter(
                "closed forms exist for BPSK only".into(),
            ));
        }
        let (alpha, eta) = (p.alpha, p.eta);
        if eta > ETA_MAX {
            return Err(Error::Domain(format!(
                "closed forms need eta <= 1 - 1e-9, got {eta}"
            )));
        }
        if alpha <= 0.0 {
            return Err(Error::Domain("closed forms need alpha > 0".into()));
        }
        let x = 2.0 * alpha * alpha * (eta - 1.0);
        let kappa = x.exp();
        let one_minus_kappa_sq = -(2.0 * x).exp_m1();
        let z = (2.0 * eta).sqrt() * alpha;
        let r = erf(z);
        let ec = erfc(z);
        let one_minus_r_sq = ec * (2.0 - ec);

        let g = (1.0 + one_minus_kappa_sq / (kappa * kappa) * r * r).sqrt();
        // artanh(y) = ln((1 + y)^2 / (1 - y^2)) / 2, with 1 - (kappa g)^2 = (1 - kappa^2)(1 - r^2)
        let theta = 0.5 * (2.0 * (kappa * g).ln_1p() - (one_minus_kappa_sq * one_minus_r_sq).ln());
        let phi = 0.5 * (2.0 * kappa.ln_1p() - one_minus_kappa_sq.ln());
        let delta = r.hypot((phi / a.get()).sinh());
        Ok(BpskClosedFormInputs {
            kappa,
            r,
            g,
            theta,
            phi,
            delta,
            one_minus_kappa_sq,
            one_minus_r_sq,
        })
    }
}

/// The three analytic BPSK entropies, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpskClosedForm {
    pub petz_down: f64,
    pub petz_up: f64,
    pub sand_down: f64,
}

/// Closed-form `H_a^down`, `H_a^up` and `H~_a^down` for BPSK with `0 < eta < 1`.
///
/// For `eta = 1` use the numeric path, which returns `log N = 1`.
pub fn bpsk_closed_forms(p: &ProtocolParams, a: RenyiOrder) -> Result<BpskClosedForm> {
    let inp = BpskClosedFormInputs::new(p, a)?;
    let a = a.get();
    let BpskClosedFormInputs {
        g,
        theta,
        phi,
        delta,
        ..
    } = inp;
    let ginv = 1.0 / g;
    let ln_sech_theta = -ln_cosh(theta);
    let ln_sech_phi = -ln_cosh(phi);

    // cosh(u)cosh(v) + g^-1 sinh(u)sinh(v)
    //   = [(1 + g^-1)(e^{u+v} + e^{-u-v}) + (1 - g^-1)(e^{u-v} + e^{v-u})] / 4
    let (u, v) = (a * theta, (1.0 - a) * phi);
    let bracket = log_sum_exp(&[
        ((1.0 + ginv).ln() + u + v),
        ((1.0 + ginv).ln() - u - v),
        ((1.0 - ginv).ln() + u - v),
        ((1.0 - ginv).ln() + v - u),
    ]) - 4f64.ln();
    let petz_down =
        1.0 + (a * ln_sech_theta + (1.0 - a) * ln_sech_phi + bracket) / LN_2 / (1.0 - a);

    // ln(cosh(u) +- g^-1 sinh(u)) = u + ln((1 +- g^-1) + (1 -+ g^-1) e^{-2u}) - ln 2
    let e2u = (-2.0 * u).exp();
    let ln_plus = u + ((1.0 + ginv) + (1.0 - ginv) * e2u).ln() - LN_2;
    let ln_minus = u + ((1.0 - ginv) + (1.0 + ginv) * e2u).ln() - LN_2;
    let inner = (1.0 / a - 2.0) * LN_2 + ln_sech_theta + log_sum_exp(&[ln_plus / a, ln_minus / a]);
    let petz_up = a / (1.0 - a) * inner / LN_2;

    // cosh(w) - Delta = (1 - r^2) / (cosh(w) + Delta)
    let w = phi / a;
    let ln_big = (w.cosh() + delta).ln();
    let ln_small = inp.one_minus_r_sq.ln() - ln_big;
    let inner = a * LN_2 + ln_sech_phi + log_sum_exp(&[a * ln_small, a * ln_big]);
    let sand_down = (-2.0 * a + inner / LN_2) / (1.0 - a);

    Ok(BpskClosedForm {
        petz_down,
        petz_up,
        sand_down,
    })
}

impl BpskClosedFormInputs {
    /// `1 - kappa^2`, computed without cancellation.
    pub fn one_minus_kappa_sq(&self) -> f64 {
        self.one_minus_kappa_sq
    }

    /// `1 - r^2`, computed without cancellation.
    pub fn one_minus_r_sq(&self) -> f64 {
        self.one_minus_r_sq
    }
}

fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - LN_2
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

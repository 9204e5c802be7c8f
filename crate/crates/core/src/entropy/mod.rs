//! Renyi and von Neumann conditional entropies.
//!
//! [`cq`] evaluates the symmetry-reduced formulas on Eve's ensembles,
//! [`closed_form`] the analytic BPSK expressions and [`general`] the textbook
//! definitions on arbitrary bipartite density matrices. All values are in bits.

pub mod closed_form;
pub mod cq;
pub mod general;

pub use closed_form::{bpsk_closed_forms, BpskClosedForm, BpskClosedFormInputs};
pub use cq::{
    bound_b, coeff_k, entropy_report, petz_down_cq, petz_up_cq, sandwiched_down_cq,
    sandwiched_up_invariant, sandwiched_up_invariant_detailed, variance_v_cq, von_neumann_cq,
    EntropyReport, InvariantOptimum,
};
pub use general::{
    petz_down_general, petz_up_general, sandwiched_down_general, sandwiched_up_general,
    sandwiched_up_general_detailed, SandwichedUpGeneral,
};

use crate::error::{Error, Result};

/// Largest order accepted by the second-order bound `B_a`; `K(a)` has a pole at 2.
pub const B_ORDER_MAX: f64 = 2.0 - 1e-6;

/// Renyi order `a > 0`, `a != 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 || a == 1.0 {
            return Err(Error::InvalidOrder {
                order: a,
                range: "(0, 1) U (1, inf)",
            });
        }
        Ok(RenyiOrder(a))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Rejects orders outside the open/closed interval `(lo, hi]`.
    pub(crate) fn require(self, lo: f64, hi: f64, range: &'static str) -> Result<f64> {
        if self.0 > lo && self.0 <= hi {
            Ok(self.0)
        } else {
            Err(Error::InvalidOrder {
                order: self.0,
                range,
            })
        }
    }
}

impl TryFrom<f64> for RenyiOrder {
    type Error = Error;

    fn try_from(a: f64) -> Result<Self> {
        RenyiOrder::new(a)
    }
}

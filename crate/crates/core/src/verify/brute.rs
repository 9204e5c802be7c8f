//! Unreduced entropy evaluation on the full block-diagonal `rho_YE`.
//!
//! Nothing here uses the symmetry of the ensemble: the joint state is built
//! explicitly and handed to the general bipartite definitions, which makes it an
//! oracle for the reduced formulas.

use crate::entropy::{
    petz_down_general, petz_up_general, sandwiched_down_general, sandwiched_up_general, RenyiOrder,
};
use crate::error::Result;
use crate::linalg::{DensityMatrix, HermitianMatrix, DEFAULT_SUPPORT_CUTOFF};
use crate::states::CqEnsemble;

/// Which functional to evaluate on `rho_YE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BruteKind {
    PetzDown(RenyiOrder),
    PetzUp(RenyiOrder),
    SandDown(RenyiOrder),
    /// Supremum over all `sigma_E`, not only the invariant ones.
    SandUp(RenyiOrder),
    VonNeumann,
    Variance,
}

pub fn joint_density(e: &CqEnsemble) -> Result<DensityMatrix> {
    DensityMatrix::new(e.joint_state())
}

/// Evaluates `kind` on the `(N * dim)`-dimensional joint state.
pub fn brute_entropy_cq(e: &CqEnsemble, kind: BruteKind) -> Result<f64> {
    let rho = joint_density(e)?;
    let dims = (e.size(), e.dim());
    match kind {
        BruteKind::PetzDown(a) => petz_down_general(&rho, dims, a),
        BruteKind::PetzUp(a) => petz_up_general(&rho, dims, a),
        BruteKind::SandDown(a) => sandwiched_down_general(&rho, dims, a),
        BruteKind::SandUp(a) => sandwiched_up_general(&rho, dims, a),
        BruteKind::VonNeumann => {
            let rho_e = rho.partial_trace(dims, crate::linalg::Subsystem::B)?;
            Ok(rho.entropy() - rho_e.entropy())
        }
        BruteKind::Variance => {
            let rho_e = rho.partial_trace(dims, crate::linalg::Subsystem::B)?;
            let l = rho
                .log2(DEFAULT_SUPPORT_CUTOFF)
                .sub(&HermitianMatrix::identity(dims.0).kron(&rho_e.log2(DEFAULT_SUPPORT_CUTOFF)));
            let rl = rho.matmul(&l);
            let first = rl.trace().re;
            let second = rl.matmul(&l).trace().re;
            Ok(second - first * first)
        }
    }
}

//! Detection statistics and Eve's classical-quantum ensembles for BPSK and QPSK
//! on a pure-loss channel.
//!
//! Alice sends `|alpha_x>` with uniform probability. Bob receives
//! `|sqrt(eta) alpha_x>`, Eve keeps `|gamma_x>` with `gamma = sqrt(1-eta) alpha`.
//! Bob's discretised outcome `y` is the raw key (reverse reconciliation), so
//! Eve's conditional state is `rho_{E|y} = sum_x p(y|x) |gamma_x><gamma_x|`.
//!
//! Eve's states are written in orthonormal bases spanned by the coherent states:
//!
//! - BPSK: `psi_(+/-) = (|gamma> +/- |-gamma>) / sqrt(2 c_(+/-))`, `c_(+/-) = 1 +/- e^{-2 gamma^2}`,
//!   stored in the order `(+, -)`.
//! - QPSK: `psi_s = (N_s / 2) sum_k e^{-i pi s k / 2} |gamma_k>`, `s = 0, 1, 2, 3`.
//!
//! In both bases the average state is diagonal and the phase-rotation
//! symmetry acts by diagonal unitaries.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, HermitianMatrix, Matrix};
use crate::special::{erf, erfc};

/// Basis normalisations below this value are treated as exactly zero; the
/// corresponding basis vector stays in the matrix as a zero row and column.
pub const RANK_CUTOFF: f64 = 1e-14;

const STOCHASTIC_TOLERANCE: f64 = 1e-12;
const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Phase-shift-keying constellation size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    /// Two states, homodyne decoding of `q`.
    Bpsk,
    /// Four states, heterodyne decoding by quadrant.
    Qpsk,
}

impl Modulation {
    pub fn size(self) -> usize {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qpsk => 4,
        }
    }

    pub fn from_size(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Modulation::Bpsk),
            4 => Ok(Modulation::Qpsk),
            _ => Err(Error::InvalidParameter(format!(
                "modulation size must be 2 or 4, got {n}"
            ))),
        }
    }

    /// `log2 N`, the entropy of the uniform key symbol.
    pub fn log_size(self) -> f64 {
        (self.size() as f64).log2()
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
        }
    }
}

impl std::str::FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" | "2" => Ok(Modulation::Bpsk),
            "qpsk" | "4" => Ok(Modulation::Qpsk),
            other => Err(Error::InvalidParameter(format!(
                "unknown protocol '{other}'"
            ))),
        }
    }
}

/// Constellation, coherent amplitude `|alpha|` and channel transmittance `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub modulation: Modulation,
    pub alpha: f64,
    pub eta: f64,
}

impl ProtocolParams {
    /// Validates `alpha >= 0` and `0 <= eta <= 1`; boundary values are allowed.
    pub fn new(modulation: Modulation, alpha: f64, eta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in [0, 1], got {eta}"
            )));
        }
        Ok(ProtocolParams {
            modulation,
            alpha,
            eta,
        })
    }

    pub fn bpsk(alpha: f64, eta: f64) -> Result<Self> {
        Self::new(Modulation::Bpsk, alpha, eta)
    }

    pub fn qpsk(alpha: f64, eta: f64) -> Result<Self> {
        Self::new(Modulation::Qpsk, alpha, eta)
    }

    /// Eve's amplitude `sqrt(1 - eta) |alpha|`.
    pub fn gamma(&self) -> f64 {
        (1.0 - self.eta).sqrt() * self.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.modulation, alpha, self.eta)
    }
}

/// Column-stochastic table `p(y|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondProbTable {
    n: usize,
    entries: Vec<f64>,
}

impl CondProbTable {
    /// Builds a table from `entries[y][x]`, checking stochasticity.
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter(
                "probability table must be square".into(),
            ));
        }
        let table = CondProbTable {
            n,
            entries: entries.into_iter().flatten().collect(),
        };
        if table.entries.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter("probability outside [0, 1]".into()));
        }
        for x in 0..n {
            let s = table.column_sum(x);
            if (s - 1.0).abs() > STOCHASTIC_TOLERANCE {
                return Err(Error::InvalidParameter(format!("column {x} sums to {s}")));
            }
        }
        Ok(table)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `p(y|x)`.
    #[inline]
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.entries[y * self.n + x]
    }

    pub fn column_sum(&self, x: usize) -> f64 {
        (0..self.n).map(|y| self.get(y, x)).sum()
    }

    /// Conditional Shannon entropy `H(Y|X)` in bits for uniform `X`.
    pub fn conditional_entropy(&self) -> f64 {
        let n = self.n as f64;
        let mut h = 0.0;
        for x in 0..self.n {
            for y in 0..self.n {
                let p = self.get(y, x);
                if p > 0.0 {
                    h -= p * p.log2() / n;
                }
            }
        }
        h
    }
}

/// Homodyne outcome probabilities `P(correct sign)`, `P(wrong sign)` for BPSK.
pub(crate) fn bpsk_sign_probabilities(alpha: f64, eta: f64) -> (f64, f64) {
    let z = (2.0 * eta).sqrt() * alpha;
    (0.5 * (1.0 + erf(z)), 0.5 * erfc(z))
}

/// Per-quadrature probabilities `P_(+/-) = (1 +/- erf(sqrt(eta/2) alpha)) / 2` for QPSK.
pub(crate) fn qpsk_quadrature_probabilities(alpha: f64, eta: f64) -> (f64, f64) {
    let z = (0.5 * eta).sqrt() * alpha;
    (0.5 * (1.0 + erf(z)), 0.5 * erfc(z))
}

/// `p(y|x)` for BPSK with sign-discretised homodyne detection.
pub fn cond_prob_bpsk(params: &ProtocolParams) -> Result<CondProbTable> {
    expect(params, Modulation::Bpsk)?;
    let (same, flip) = bpsk_sign_probabilities(params.alpha, params.eta);
    CondProbTable::new(vec![vec![same, flip], vec![flip, same]])
}

/// `p(y|k)` for QPSK with quadrant-discretised heterodyne detection.
///
/// The table is circulant: `P_+^2` on the diagonal, `P_+ P_-` for neighbouring
/// quadrants and `P_-^2` for the opposite quadrant.
pub fn cond_prob_qpsk(params: &ProtocolParams) -> Result<CondProbTable> {
    expect(params, Modulation::Qpsk)?;
    let (pp, pm) = qpsk_quadrature_probabilities(params.alpha, params.eta);
    let by_distance = [pp * pp, pp * pm, pm * pm, pp * pm];
    let rows = (0..4)
        .map(|y| (0..4).map(|k| by_distance[(y + 4 - k) % 4]).collect())
        .collect();
    CondProbTable::new(rows)
}

pub fn cond_prob(params: &ProtocolParams) -> Result<CondProbTable> {
    match params.modulation {
        Modulation::Bpsk => cond_prob_bpsk(params),
        Modulation::Qpsk => cond_prob_qpsk(params),
    }
}

fn expect(params: &ProtocolParams, m: Modulation) -> Result<()> {
    if params.modulation != m {
        return Err(Error::InvalidParameter(format!(
            "expected {} parameters, got {}",
            m.name(),
            params.modulation.name()
        )));
    }
    Ok(())
}

/// Label of the orthonormal basis Eve's matrices are written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// `(psi_+, psi_-)`.
    PlusMinus,
    /// `(psi_0, psi_1, psi_2, psi_3)`.
    Fourier4,
    /// Caller-supplied basis.
    Custom,
}

/// Diagonal unitaries `U_t` with `U_t rho_{E|y} U_t^dagger = rho_{E|y+t mod N}`.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    unitaries: Vec<Matrix>,
}

impl SymmetryGroup {
    /// Wraps a list of unitaries, checking unitarity to 1e-12.
    pub fn new(unitaries: Vec<Matrix>) -> Result<Self> {
        for u in &unitaries {
            if !u.is_square() {
                return Err(Error::InvalidParameter(
                    "symmetry element must be square".into(),
                ));
            }
            let defect = u.isometry_defect();
            if defect > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "symmetry element is not unitary (defect {defect:.3e})"
                )));
            }
        }
        Ok(SymmetryGroup { unitaries })
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn element(&self, t: usize) -> &Matrix {
        &self.unitaries[t]
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.unitaries
    }

    /// Diagonal phases of every element, if all elements are diagonal.
    pub fn diagonal_phases(&self) -> Option<Vec<Vec<Complex64>>> {
        self.unitaries
            .iter()
            .map(|u| {
                let n = u.rows();
                let off = (0..n)
                    .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                    .map(|(i, j)| u[(i, j)].norm())
                    .fold(0.0, f64::max);
                (off <= 1e-12).then(|| (0..n).map(|i| u[(i, i)]).collect())
            })
            .collect()
    }

    /// Largest residual of `U_t rho_y U_t^dagger = rho_{y+t}` and `U_t rho U_t^dagger = rho`.
    pub fn residual(&self, cond_states: &[DensityMatrix], avg: &DensityMatrix) -> f64 {
        let n = cond_states.len();
        let mut worst: f64 = 0.0;
        for (t, u) in self.unitaries.iter().enumerate() {
            for (y, rho) in cond_states.iter().enumerate() {
                let image = u.conjugate(rho);
                worst = worst.max(image.max_abs_diff(&cond_states[(y + t) % n]));
            }
            worst = worst.max(u.conjugate(avg).max_abs_diff(avg));
        }
        worst
    }
}

/// Eve's classical-quantum ensemble `rho_YE = sum_y p_y |y><y| (x) rho_{E|y}`.
#[derive(Debug, Clone)]
pub struct CqEnsemble {
    probs: Vec<f64>,
    cond_states: Vec<DensityMatrix>,
    avg_state: DensityMatrix,
    symmetry: SymmetryGroup,
    basis: BasisLabel,
    gamma: f64,
}

impl CqEnsemble {
    /// Assembles a uniform ensemble from its conditional states and a symmetry
    /// group, checking `U_t rho_{E|y} U_t^dagger = rho_{E|y+t}` within 1e-9.
    ///
    /// Every symmetry-reduced entropy formula relies on that relation.
    pub fn new(
        cond_states: Vec<DensityMatrix>,
        symmetry: SymmetryGroup,
        basis: BasisLabel,
        gamma: f64,
    ) -> Result<Self> {
        let n = cond_states.len();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "ensemble needs at least one state".into(),
            ));
        }
        let dim = cond_states[0].dim();
        if let Some(bad) = cond_states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.dim(),
            });
        }
        if symmetry.len() != n || symmetry.elements().iter().any(|u| u.rows() != dim) {
            return Err(Error::InvalidParameter(
                "symmetry group must have one dim x dim element per symbol".into(),
            ));
        }
        let p = 1.0 / n as f64;
        let avg = cond_states
            .iter()
            .skip(1)
            .fold(cond_states[0].as_hermitian().clone(), |acc, s| acc.add(s))
            .scale(p);
        let avg_state = DensityMatrix::new_unchecked(avg);
        let residual = symmetry.residual(&cond_states, &avg_state);
        if residual > SYMMETRY_TOLERANCE {
            return Err(Error::SymmetryViolation(residual));
        }
        Ok(CqEnsemble {
            probs: vec![p; n],
            cond_states,
            avg_state,
            symmetry,
            basis,
            gamma,
        })
    }

    /// Number of key symbols `N`.
    pub fn size(&self) -> usize {
        self.cond_states.len()
    }

    /// `log2 N`.
    pub fn log_size(&self) -> f64 {
        (self.size() as f64).log2()
    }

    /// Dimension of Eve's space.
    pub fn dim(&self) -> usize {
        self.avg_state.dim()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cond_state(&self, y: usize) -> &DensityMatrix {
        &self.cond_states[y]
    }

    pub fn cond_states(&self) -> &[DensityMatrix] {
        &self.cond_states
    }

    pub fn avg_state(&self) -> &DensityMatrix {
        &self.avg_state
    }

    pub fn symmetry(&self) -> &SymmetryGroup {
        &self.symmetry
    }

    pub fn basis(&self) -> BasisLabel {
        self.basis
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The full block-diagonal `rho_YE` of dimension `N * dim`.
    pub fn joint_state(&self) -> HermitianMatrix {
        block_diagonal(
            &self
                .cond_states
                .iter()
                .zip(&self.probs)
                .map(|(s, &p)| s.scale(p))
                .collect::<Vec<_>>(),
        )
    }
}

/// Direct sum of equally sized Hermitian blocks.
pub fn block_diagonal(blocks: &[HermitianMatrix]) -> HermitianMatrix {
    let d = blocks.first().map_or(0, |b| b.dim());
    let n = blocks.len() * d;
    let m = Matrix::from_fn(n, n, |i, j| {
        if i / d == j / d {
            blocks[i / d].get(i % d, j % d)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    HermitianMatrix::new(m).expect("direct sum of Hermitian blocks is Hermitian")
}

fn clamp_rank(x: f64) -> f64 {
    if x < RANK_CUTOFF {
        0.0
    } else {
        x
    }
}

/// `c_(+/-) = 1 +/- e^{-2 gamma^2}`, with the minus branch via `expm1`.
pub(crate) fn bpsk_normalisations(gamma: f64) -> (f64, f64) {
    let g2 = gamma * gamma;
    (1.0 + (-2.0 * g2).exp(), -(-2.0 * g2).exp_m1())
}

/// `N_s^{-2}` for `s = 0..3`.
///
/// With `x = gamma^2` and `<gamma_0|gamma_d> = exp(-x (1 - i^d))`,
/// `N_s^{-2} = sum_d e^{-i pi s d / 2} <gamma_0|gamma_d>`, which gives
/// `2 e^{-x} (cosh x + cos x, sinh x + sin x, cosh x - cos x, sinh x - sin x)`.
/// The differences use their Taylor series for small `x`.
pub(crate) fn qpsk_normalisations(gamma: f64) -> [f64; 4] {
    let x = gamma * gamma;
    let pre = 2.0 * (-x).exp();
    let (cosh_m_cos, sinh_m_sin) = if x < 0.05 {
        // cosh x - cos x = 2 (x^2/2! + x^6/6! + x^10/10!)
        // sinh x - sin x = 2 (x^3/3! + x^7/7! + x^11/11!)
        let x2 = x * x;
        let x4 = x2 * x2;
        (
            2.0 * x2 * (0.5 + x4 / 720.0 + x4 * x4 / 3_628_800.0),
            2.0 * x2 * x * (1.0 / 6.0 + x4 / 5040.0 + x4 * x4 / 39_916_800.0),
        )
    } else {
        (x.cosh() - x.cos(), x.sinh() - x.sin())
    };
    [
        pre * (x.cosh() + x.cos()),
        pre * (x.sinh() + x.sin()),
        pre * cosh_m_cos,
        pre * sinh_m_sin,
    ]
}

/// Eve's BPSK ensemble in the `(psi_+, psi_-)` basis.
///
/// `rho_{E|y} = (1/2) [[c_+, +/- r sqrt(c_+ c_-)], [+/- r sqrt(c_+ c_-), c_-]]`
/// with `r = erf(sqrt(2 eta) alpha)`, sign `+` for `y = 0`.
pub fn build_bpsk_ensemble(params: &ProtocolParams) -> Result<CqEnsemble> {
    expect(params, Modulation::Bpsk)?;
    let gamma = params.gamma();
    let (c_plus, c_minus) = bpsk_normalisations(gamma);
    let c_minus = clamp_rank(c_minus);
    let r = erf((2.0 * params.eta).sqrt() * params.alpha);
    let coupling = 0.5 * r * (c_plus * c_minus).sqrt();
    let state = |sign: f64| {
        let m = Matrix::from_real_rows(&[
            vec![0.5 * c_plus, sign * coupling],
            vec![sign * coupling, 0.5 * c_minus],
        ])
        .expect("2x2 rows");
        DensityMatrix::new_unchecked(HermitianMatrix::symmetrize(m))
    };
    let cond_states = vec![state(1.0), state(-1.0)];
    let symmetry = symmetry_group_for(Modulation::Bpsk);
    CqEnsemble::new(cond_states, symmetry, BasisLabel::PlusMinus, gamma)
}

/// Eve's QPSK ensemble in the `psi_s` basis:
/// `rho_{E|y}[s][s'] = (1 / (4 N_s N_s')) sum_k p(y|k) e^{i pi (s - s') k / 2}`.
pub fn build_qpsk_ensemble(params: &ProtocolParams) -> Result<CqEnsemble> {
    expect(params, Modulation::Qpsk)?;
    let gamma = params.gamma();
    let weights: Vec<f64> = qpsk_normalisations(gamma)
        .iter()
        .map(|&n2| 0.5 * clamp_rank(n2).sqrt())
        .collect();
    let table = cond_prob_qpsk(params)?;
    let phase = |d: i64| Complex64::from_polar(1.0, FRAC_PI_2 * d as f64);
    let cond_states = (0..4)
        .map(|y| {
            let m = Matrix::from_fn(4, 4, |s, sp| {
                let d = s as i64 - sp as i64;
                let sum: Complex64 = (0..4)
                    .map(|k| phase((d * k as i64).rem_euclid(4)) * table.get(y, k))
                    .sum();
                sum * (weights[s] * weights[sp])
            });
            DensityMatrix::new_unchecked(HermitianMatrix::symmetrize(m))
        })
        .collect();
    let symmetry = symmetry_group_for(Modulation::Qpsk);
    CqEnsemble::new(cond_states, symmetry, BasisLabel::Fourier4, gamma)
}

pub fn build_ensemble(params: &ProtocolParams) -> Result<CqEnsemble> {
    match params.modulation {
        Modulation::Bpsk => build_bpsk_ensemble(params),
        Modulation::Qpsk => build_qpsk_ensemble(params),
    }
}

fn symmetry_group_for(modulation: Modulation) -> SymmetryGroup {
    let unitaries = match modulation {
        // parity: |gamma> <-> |-gamma>
        Modulation::Bpsk => (0..2)
            .map(|t| {
                let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
                Matrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(sign, 0.0)])
            })
            .collect(),
        // quarter-turn phase rotation: |gamma_k> -> |gamma_{k+t}>
        Modulation::Qpsk => (0..4)
            .map(|t| {
                let phases: Vec<Complex64> = (0..4)
                    .map(|s| Complex64::from_polar(1.0, FRAC_PI_2 * ((s * t) % 4) as f64))
                    .collect();
                Matrix::diagonal(&phases)
            })
            .collect(),
    };
    SymmetryGroup { unitaries }
}

/// The symmetry group of a protocol ensemble, verified against it.
pub fn symmetry_group(modulation: Modulation, ensemble: &CqEnsemble) -> Result<SymmetryGroup> {
    if ensemble.size() != modulation.size() {
        return Err(Error::DimensionMismatch {
            expected: modulation.size(),
            got: ensemble.size(),
        });
    }
    let group = symmetry_group_for(modulation);
    let residual = group.residual(ensemble.cond_states(), ensemble.avg_state());
    if residual > SYMMETRY_TOLERANCE {
        return Err(Error::SymmetryViolation(residual));
    }
    Ok(group)
}

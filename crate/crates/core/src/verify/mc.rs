//! Monte-Carlo samplers for Bob's discretised measurements.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::GaussianStream;
use crate::states::{cond_prob, CondProbTable, Modulation, ProtocolParams};

/// Shots per input symbol, seed and protocol point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub shots: u64,
    pub seed: u64,
    pub protocol: ProtocolParams,
}

impl McConfig {
    pub fn new(shots: u64, seed: u64, protocol: ProtocolParams) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidParameter("shots must be >= 1".into()));
        }
        Ok(McConfig {
            shots,
            seed,
            protocol,
        })
    }
}

/// Empirical table and its agreement with the analytic one.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    /// `counts[y][x]`
    pub counts: Vec<Vec<u64>>,
    pub empirical: CondProbTable,
    /// Binomial standard error `sqrt(p (1 - p) / shots)` of each entry, `[y][x]`,
    /// with `p` the analytic probability.
    pub std_error: Vec<Vec<f64>>,
    /// `max |empirical - analytic| / std_error`.
    pub max_deviation_sigma: f64,
}

impl McReport {
    /// Agreement within `k` standard errors for every entry.
    pub fn within(&self, k: f64) -> bool {
        self.max_deviation_sigma <= k
    }
}

/// Sign-discretised homodyne detection of `|(-1)^x sqrt(eta) alpha>`.
///
/// The quadrature is drawn from `exp(-(q - mu)^2) / sqrt(pi)`, i.e. a normal
/// with mean `(-1)^x sqrt(2 eta) alpha` and variance 1/2; `y = 0` iff `q > 0`.
pub fn sample_homodyne_bpsk(cfg: &McConfig) -> Result<McReport> {
    let p = &cfg.protocol;
    if p.modulation != Modulation::Bpsk {
        return Err(Error::InvalidParameter(
            "homodyne sampler needs BPSK".into(),
        ));
    }
    let mu = (2.0 * p.eta).sqrt() * p.alpha;
    let counts = per_symbol(cfg, 2, |x, g| {
        let mean = if x == 0 { mu } else { -mu };
        usize::from(g.next_normal(mean, FRAC_1_SQRT_2) <= 0.0)
    });
    report(cfg, counts)
}

/// Quadrant-discretised heterodyne detection of `|sqrt(eta) alpha_x>`,
/// `alpha_x = alpha exp(i (pi/4 + x pi/2))`.
///
/// The outcome follows the Husimi function `exp(-|z - beta|^2) / pi`: real and
/// imaginary parts are independent normals with variance 1/2. Quadrant `y`
/// covers phases `(y pi/2, (y + 1) pi/2)`.
pub fn sample_heterodyne_qpsk(cfg: &McConfig) -> Result<McReport> {
    let p = &cfg.protocol;
    if p.modulation != Modulation::Qpsk {
        return Err(Error::InvalidParameter(
            "heterodyne sampler needs QPSK".into(),
        ));
    }
    let amp = p.eta.sqrt() * p.alpha;
    let counts = per_symbol(cfg, 4, |x, g| {
        let phase = FRAC_PI_4 + x as f64 * FRAC_PI_2;
        let re = g.next_normal(amp * phase.cos(), FRAC_1_SQRT_2);
        let im = g.next_normal(amp * phase.sin(), FRAC_1_SQRT_2);
        match (re > 0.0, im > 0.0) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        }
    });
    report(cfg, counts)
}

/// Runs the sampler matching the protocol's modulation.
pub fn sample(cfg: &McConfig) -> Result<McReport> {
    match cfg.protocol.modulation {
        Modulation::Bpsk => sample_homodyne_bpsk(cfg),
        Modulation::Qpsk => sample_heterodyne_qpsk(cfg),
    }
}

/// Counts `[y][x]`; symbol `x` draws from its own stream `(seed, x)`.
fn per_symbol(
    cfg: &McConfig,
    n: usize,
    outcome: impl Fn(usize, &mut GaussianStream) -> usize + Sync,
) -> Vec<Vec<u64>> {
    let columns: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut g = GaussianStream::new(cfg.seed, x as u64);
            let mut col = vec![0u64; n];
            for _ in 0..cfg.shots {
                col[outcome(x, &mut g)] += 1;
            }
            col
        })
        .collect();
    (0..n)
        .map(|y| (0..n).map(|x| columns[x][y]).collect())
        .collect()
}

fn report(cfg: &McConfig, counts: Vec<Vec<u64>>) -> Result<McReport> {
    let analytic = cond_prob(&cfg.protocol)?;
    let n = counts.len();
    let shots = cfg.shots as f64;
    let entries: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / shots).collect())
        .collect();
    let mut std_error = vec![vec![0.0; n]; n];
    let mut worst: f64 = 0.0;
    for y in 0..n {
        for x in 0..n {
            let p = analytic.get(y, x);
            let se = (p * (1.0 - p) / shots).sqrt();
            std_error[y][x] = se;
            let diff = (entries[y][x] - p).abs();
            let dev = if se > 0.0 {
                diff / se
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(dev);
        }
    }
    Ok(McReport {
        counts,
        empirical: CondProbTable::new(entries)?,
        std_error,
        max_deviation_sigma: worst,
    })
}

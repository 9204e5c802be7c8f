//! Independent oracles and the verification suites built on them.

pub mod brute;
pub mod duality;
pub mod erf;
pub mod mc;

pub use brute::{brute_entropy_cq, joint_density, BruteKind};
pub use duality::{duality_suite, duality_suite_with, DualityFunctionals, DualityReport};
pub use erf::{erf_oracle, max_erf_deviation};
pub use mc::{sample, sample_heterodyne_qpsk, sample_homodyne_bpsk, McConfig, McReport};

use std::fmt;
use std::str::FromStr;

use crate::entropy::{
    bpsk_closed_forms, petz_down_cq, petz_up_cq, sandwiched_down_cq, variance_v_cq, von_neumann_cq,
    RenyiOrder,
};
use crate::error::{Error, Result};
use crate::states::{build_ensemble, Modulation, ProtocolParams};

/// Agreement threshold of the Monte-Carlo suite, in binomial standard errors.
/// Applied per entry without a multiple-comparison correction; with at most 32
/// entries per run the chance of a false alarm stays below 0.2%.
pub const MC_SIGMA: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Mc,
    Duality,
    Analytic,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mc" => Ok(Suite::Mc),
            "duality" => Ok(Suite::Duality),
            "analytic" => Ok(Suite::Analytic),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidParameter(format!("unknown suite '{s}'"))),
        }
    }
}

/// One verified invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.observed <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    fn push(
        &mut self,
        suite: &'static str,
        name: impl Into<String>,
        observed: f64,
        tolerance: f64,
    ) {
        self.checks.push(Check {
            suite,
            name: name.into(),
            observed,
            tolerance,
        });
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} [{}] {}: residual {:.3e} (tolerance {:.1e})",
                if c.passed() { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.observed,
                c.tolerance
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Settings for [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub shots: u64,
    /// Number of random tripartite states per dimension triple.
    pub duality_states: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 20240601,
            shots: 1_000_000,
            duality_states: 200,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    if matches!(suite, Suite::Mc | Suite::All) {
        mc_suite(opts, &mut report)?;
    }
    if matches!(suite, Suite::Duality | Suite::All) {
        let seeds: Vec<u64> = (0..opts.duality_states)
            .map(|k| opts.seed.wrapping_add(k))
            .collect();
        let r = duality_suite(&seeds, &[(2, 2, 2), (2, 3, 4)])?;
        report.push(
            "duality",
            "H_a^down(A|B) + H_{2-a}^down(A|C)",
            r.dual1,
            duality::DUAL1_TOLERANCE,
        );
        report.push(
            "duality",
            "H_a^up(A|B) + H~_{1/a}^down(A|C)",
            r.dual3,
            duality::DUAL3_TOLERANCE,
        );
        report.push(
            "duality",
            "H~_a^up(A|B) + H~_b^up(A|C)",
            r.dual2,
            duality::DUAL2_TOLERANCE,
        );
    }
    if matches!(suite, Suite::Analytic | Suite::All) {
        analytic_suite(&mut report)?;
    }
    Ok(report)
}

fn mc_suite(opts: &VerifyOptions, report: &mut SuiteReport) -> Result<()> {
    let cases = [
        (Modulation::Bpsk, 0.0, 0.9),
        (Modulation::Bpsk, 1.0, 0.9),
        (Modulation::Qpsk, 0.0, 0.9),
        (Modulation::Qpsk, 1.0, 0.9),
    ];
    for (k, (m, alpha, eta)) in cases.into_iter().enumerate() {
        let cfg = McConfig::new(
            opts.shots,
            opts.seed.wrapping_add(k as u64),
            ProtocolParams::new(m, alpha, eta)?,
        )?;
        let r = sample(&cfg)?;
        report.push(
            "mc",
            format!(
                "{} alpha={alpha} eta={eta}: max deviation in sigma",
                m.name()
            ),
            r.max_deviation_sigma,
            MC_SIGMA,
        );
    }
    Ok(())
}

fn analytic_suite(report: &mut SuiteReport) -> Result<()> {
    report.push(
        "analytic",
        "erf oracle vs erf on [-6, 6]",
        max_erf_deviation(-6.0, 6.0, 100_001)?,
        2e-15,
    );

    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let alpha = 3.0 * (i + 1) as f64 / 50.0;
        for j in 0..50 {
            let eta = 0.01 + 0.98 * j as f64 / 49.0;
            let p = ProtocolParams::bpsk(alpha, eta)?;
            let e = build_ensemble(&p)?;
            for a in [1.1, 1.3, 1.5, 1.8, 2.0] {
                let o = RenyiOrder::new(a)?;
                let c = bpsk_closed_forms(&p, o)?;
                worst = worst
                    .max((c.petz_down - petz_down_cq(&e, o)?).abs())
                    .max((c.petz_up - petz_up_cq(&e, o)?).abs())
                    .max((c.sand_down - sandwiched_down_cq(&e, o)?).abs());
            }
        }
    }
    report.push(
        "analytic",
        "BPSK closed forms vs numeric (50x50x5 grid)",
        worst,
        1e-10,
    );

    let mut worst: f64 = 0.0;
    for m in [Modulation::Bpsk, Modulation::Qpsk] {
        for alpha in [0.3, 1.0, 2.2] {
            for eta in [0.0, 0.25, 0.6, 0.95, 1.0] {
                let e = build_ensemble(&ProtocolParams::new(m, alpha, eta)?)?;
                worst = worst
                    .max((von_neumann_cq(&e) - brute_entropy_cq(&e, BruteKind::VonNeumann)?).abs())
                    .max((variance_v_cq(&e) - brute_entropy_cq(&e, BruteKind::Variance)?).abs());
                for a in [0.6, 1.2, 2.0, 3.0] {
                    let o = RenyiOrder::new(a)?;
                    worst = worst
                        .max(
                            (petz_down_cq(&e, o)? - brute_entropy_cq(&e, BruteKind::PetzDown(o))?)
                                .abs(),
                        )
                        .max(
                            (petz_up_cq(&e, o)? - brute_entropy_cq(&e, BruteKind::PetzUp(o))?)
                                .abs(),
                        )
                        .max(
                            (sandwiched_down_cq(&e, o)?
                                - brute_entropy_cq(&e, BruteKind::SandDown(o))?)
                            .abs(),
                        );
                }
            }
        }
    }
    report.push(
        "analytic",
        "symmetry-reduced vs unreduced entropies",
        worst,
        1e-10,
    );
    Ok(())
}

use psk_keyrate::entropy::{petz_down_general, RenyiOrder};
use psk_keyrate::linalg::DensityMatrix;
use psk_keyrate::states::{cond_prob, Modulation, ProtocolParams};
use psk_keyrate::verify::{
    duality_suite, duality_suite_with, erf_oracle, max_erf_deviation, run_suite, sample,
    DualityFunctionals, McConfig, Suite, VerifyOptions, MC_SIGMA,
};
use psk_keyrate::Result;

// a sign flip or a rescaling would survive H(A|B) + H(A|C) = 0; an offset does not
fn shifted_petz_down(rho: &DensityMatrix, dims: (usize, usize), a: RenyiOrder) -> Result<f64> {
    petz_down_general(rho, dims, a).map(|v| v + 1e-3)
}

#[test]
fn duality_identities_hold() {
    let seeds: Vec<u64> = (0..20).collect();
    let r = duality_suite(&seeds, &[(2, 2, 2), (2, 3, 4)]).unwrap();
    assert_eq!(r.states, 40);
    assert!(r.passed(), "{r:?}");
}

#[test]
fn duality_suite_detects_a_broken_functional() {
    let broken = DualityFunctionals {
        petz_down: shifted_petz_down,
        ..DualityFunctionals::default()
    };
    let r = duality_suite_with(&[1, 2, 3], &[(2, 2, 2)], &broken).unwrap();
    assert!(!r.passed());
    assert!((r.dual1 - 2e-3).abs() < 1e-12);
}

#[test]
fn monte_carlo_is_reproducible_and_unbiased() {
    for m in [Modulation::Bpsk, Modulation::Qpsk] {
        let p = ProtocolParams::new(m, 0.8, 0.7).unwrap();
        let cfg = McConfig::new(200_000, 42, p).unwrap();
        let a = sample(&cfg).unwrap();
        let b = sample(&cfg).unwrap();
        assert_eq!(a.counts, b.counts);
        assert!(a.within(MC_SIGMA));
        let table = cond_prob(&p).unwrap();
        for x in 0..table.size() {
            let total: u64 = (0..table.size()).map(|y| a.counts[y][x]).sum();
            assert_eq!(total, 200_000);
        }
        let c = sample(&McConfig::new(200_000, 43, p).unwrap()).unwrap();
        assert_ne!(a.counts, c.counts);
    }
}

#[test]
fn erf_oracle_agrees_with_production_erf() {
    assert!(max_erf_deviation(-6.0, 6.0, 10_001).unwrap() <= 2e-15);
    assert!(erf_oracle(0.0).unwrap().abs() < 1e-300);
    assert!((erf_oracle(10.0).unwrap() - 1.0).abs() < 1e-16);
    assert!(erf_oracle(11.0).is_err());
}

#[test]
fn analytic_suite_passes() {
    let r = run_suite(Suite::Analytic, &VerifyOptions::default()).unwrap();
    assert!(r.passed(), "{r}");
}

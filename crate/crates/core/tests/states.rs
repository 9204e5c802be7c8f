use std::f64::consts::PI;

use psk_keyrate::states::{
    build_bpsk_ensemble, build_ensemble, build_qpsk_ensemble, cond_prob, cond_prob_bpsk,
    cond_prob_qpsk, symmetry_group, Modulation, ProtocolParams,
};
use psk_keyrate::verify::erf_oracle;

const PROTOCOLS: [Modulation; 2] = [Modulation::Bpsk, Modulation::Qpsk];

fn grid() -> impl Iterator<Item = (f64, f64)> {
    (0..=31).flat_map(|i| (0..=31).map(move |j| (3.0 * i as f64 / 31.0, j as f64 / 31.0)))
}

#[test]
fn tables_are_stochastic_on_a_grid() {
    for m in PROTOCOLS {
        for (alpha, eta) in grid() {
            let t = cond_prob(&ProtocolParams::new(m, alpha, eta).unwrap()).unwrap();
            for x in 0..t.size() {
                assert!((t.column_sum(x) - 1.0).abs() <= 1e-12);
                for y in 0..t.size() {
                    assert!(t.get(y, x) >= 0.0);
                }
            }
        }
    }
}

#[test]
fn unmodulated_or_fully_lost_signals_are_uniform() {
    for (alpha, eta) in [(0.0, 0.7), (1.3, 0.0)] {
        let b = cond_prob_bpsk(&ProtocolParams::bpsk(alpha, eta).unwrap()).unwrap();
        let q = cond_prob_qpsk(&ProtocolParams::qpsk(alpha, eta).unwrap()).unwrap();
        for y in 0..2 {
            for x in 0..2 {
                assert!((b.get(y, x) - 0.5).abs() < 1e-15);
            }
        }
        for y in 0..4 {
            for x in 0..4 {
                assert!((q.get(y, x) - 0.25).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn probabilities_agree_with_the_series_erf() {
    let b = cond_prob_bpsk(&ProtocolParams::bpsk(1.0, 0.9).unwrap()).unwrap();
    let r = erf_oracle(1.8f64.sqrt()).unwrap();
    assert!((b.get(0, 0) - (1.0 + r) / 2.0).abs() < 1e-15);
    assert!((b.get(0, 0) - 0.9711102144).abs() < 1e-10);

    let q = cond_prob_qpsk(&ProtocolParams::qpsk(1.0, 0.9).unwrap()).unwrap();
    let plus = (1.0 + erf_oracle(0.45f64.sqrt()).unwrap()) / 2.0;
    let minus = 1.0 - plus;
    assert!((plus - 0.8286091444).abs() < 1e-10);
    for k in 0..4 {
        assert!((q.get(k, k) - plus * plus).abs() < 1e-15);
        assert!((q.get((k + 1) % 4, k) - plus * minus).abs() < 1e-15);
        assert!((q.get((k + 3) % 4, k) - plus * minus).abs() < 1e-15);
        assert!((q.get((k + 2) % 4, k) - minus * minus).abs() < 1e-15);
    }
}

#[test]
fn ensembles_are_consistent_on_a_grid() {
    for m in PROTOCOLS {
        for (alpha, eta) in grid() {
            let e = build_ensemble(&ProtocolParams::new(m, alpha, eta).unwrap()).unwrap();
            let avg = e.avg_state();
            assert!((avg.trace() - 1.0).abs() < 1e-12);
            assert!(avg.max_off_diagonal() < 1e-12);
            for s in e.cond_states() {
                assert!((s.trace() - 1.0).abs() < 1e-12);
                assert!(s.eigenvalues()[0] > -1e-12);
            }
            assert!(symmetry_group(m, &e).is_ok());
        }
    }
}

#[test]
fn bpsk_coupling_matches_direct_substitution() {
    let e = build_bpsk_ensemble(&ProtocolParams::bpsk(1.0, 0.9).unwrap()).unwrap();
    let c_plus = 1.0 + (-0.2f64).exp();
    let c_minus = 1.0 - (-0.2f64).exp();
    let coupling = erf_oracle(1.8f64.sqrt()).unwrap() * (c_plus * c_minus).sqrt() / 2.0;
    let rho0 = e.cond_state(0);
    assert!((rho0.get(0, 1).re - coupling).abs() < 1e-15);
    assert!((rho0.get(0, 0).re - c_plus / 2.0).abs() < 1e-15);
    assert!((e.cond_state(1).get(0, 1).re + coupling).abs() < 1e-15);
    assert!((e.avg_state().get(1, 1).re - c_minus / 2.0).abs() < 1e-15);
}

#[test]
fn qpsk_average_state_is_the_normalisation_diagonal() {
    let e = build_qpsk_ensemble(&ProtocolParams::qpsk(1.0, 0.9).unwrap()).unwrap();
    let g2: f64 = 0.1;
    let diag = e.avg_state().diagonal();
    let mut total = 0.0;
    for (s, d) in diag.iter().enumerate() {
        let s = s as f64;
        let inv_n2 = 1.0
            + (-2.0 * g2).exp() * (PI * s).cos()
            + 2.0 * (-g2).exp() * (g2 - PI * s / 2.0).cos();
        assert!((d - inv_n2 / 4.0).abs() < 1e-15);
        total += d;
    }
    assert!((total - 1.0).abs() < 1e-14);
}

#[test]
fn degenerate_limits() {
    // eta = 1: every conditional state is the same vacuum projector
    for m in PROTOCOLS {
        let e = build_ensemble(&ProtocolParams::new(m, 1.2, 1.0).unwrap()).unwrap();
        let first = e.cond_state(0);
        for s in e.cond_states() {
            assert!(s.max_abs_diff(first) < 1e-15);
        }
        assert!((first.get(0, 0).re - 1.0).abs() < 1e-15);
    }
    // alpha = 0: no modulation
    let e = build_bpsk_ensemble(&ProtocolParams::bpsk(0.0, 0.4).unwrap()).unwrap();
    assert!(e.cond_state(0).max_abs_diff(e.avg_state()) < 1e-15);
    assert!(e.cond_state(1).max_abs_diff(e.avg_state()) < 1e-15);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(ProtocolParams::bpsk(-0.1, 0.5).is_err());
    assert!(ProtocolParams::bpsk(1.0, 1.5).is_err());
    assert!(ProtocolParams::qpsk(f64::NAN, 0.5).is_err());
    assert!(Modulation::from_size(3).is_err());
}

//! Independent error-function oracle.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `erf(x)` for `|x| <= 10` without libm.
///
/// For `|x| <= 2` sums the positive series
/// `erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (1*3*...*(2n+1))`;
/// beyond that evaluates `erfc` by its continued fraction (modified Lentz).
/// Both stop once the next correction drops below 1e-18 relative.
pub fn erf_oracle(x: f64) -> Result<f64> {
    if !(x.abs() <= 10.0) {
        return Err(Error::Domain(format!(
            "erf oracle needs |x| <= 10, got {x}"
        )));
    }
    let ax = x.abs();
    let v = if ax <= 2.0 {
        series(ax)
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    Ok(v.copysign(x))
}

fn series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    while term > 1e-18 * sum {
        n += 1;
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

/// `erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfc_continued_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..10_000 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-18 {
            break;
        }
    }
    (-x * x).exp() / PI.sqrt() / f
}

/// Largest `|erf_oracle - erf|` over `points` equally spaced abscissae in `[lo, hi]`.
pub fn max_erf_deviation(lo: f64, hi: f64, points: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64;
        worst = worst.max((erf_oracle(x)? - crate::special::erf(x)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(erf_oracle(0.0).unwrap(), 0.0);
        // erf(1.341640786...) = erf(sqrt(1.8))
        assert!((erf_oracle(1.8f64.sqrt()).unwrap() - 0.9422204288764027).abs() < 2e-16);
        assert!((erf_oracle(0.5).unwrap() - 0.5204998778130465).abs() < 2e-16);
        assert!((erf_oracle(3.0).unwrap() - 0.9999779095030014).abs() < 2e-16);
        assert!((1.0 - erf_oracle(2.5).unwrap() - 4.06952017444959e-4).abs() < 2e-16);
        assert!(erf_oracle(10.5).is_err());
    }

    #[test]
    fn odd_symmetry() {
        for x in [0.1, 0.7, 1.9, 2.1, 4.0] {
            assert_eq!(erf_oracle(-x).unwrap(), -erf_oracle(x).unwrap());
        }
    }
}

//! Error function used by the detection probabilities.

/// `erf(x)`, accurate to about one ulp over the whole real line.
///
/// Backed by the fdlibm rational approximations shipped in `libm`.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `erfc(x) = 1 - erf(x)` without cancellation for large `x`.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(erf(0.0), 0.0);
        // erf(1) = 0.8427007929497148693...
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 2e-16);
        assert!((erf(-1.0) + 0.842_700_792_949_714_9).abs() < 2e-16);
        assert!((erfc(5.0) - 1.537_459_794_428_034_8e-12).abs() < 1e-26);
    }
}

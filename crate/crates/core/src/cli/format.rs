//! Locale-independent CSV output.

use std::io::{self, Write};

/// Shortest rendering with at most 12 significant digits, like C's `%.12g`.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Optional numeric cell; `None` leaves the field empty.
pub fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

/// CSV sink that writes the provenance comment and the header exactly once.
pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, invocation: &str, columns: &[&str]) -> io::Result<Self> {
        writeln!(out, "# {invocation}")?;
        writeln!(out, "{}", columns.join(","))?;
        Ok(CsvWriter { out })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.out, "{}", fields.join(","))
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-2.0), "-2");
        assert_eq!(sig12(0.9711102144382014), "0.971110214438");
        assert_eq!(sig12(1e12), "1e+12");
        assert_eq!(sig12(123456789012.0), "123456789012");
        assert_eq!(sig12(1.5e-7), "1.5e-07");
        assert_eq!(sig12(0.0001), "0.0001");
        assert_eq!(sig12(9.9999999999999e-1), "1");
        assert_eq!(sig12(f64::NAN), "nan");
    }
}

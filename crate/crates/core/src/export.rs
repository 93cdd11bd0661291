//! Number formatting shared by the file exports.

/// Lowercase scientific notation with 15 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.14e}")
    }
}

pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(",")
}

/// Rounds to 15 significant digits, so JSON output does not depend on the
/// last bits of a computation.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.14e}").parse().expect("formatted float parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_num(1.0), "1.00000000000000e0");
        assert_eq!(fmt_num(-0.000123), "-1.23000000000000e-4");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(csv_row(&[0.5, 2.0]), "5.00000000000000e-1,2.00000000000000e0");
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
    }
}

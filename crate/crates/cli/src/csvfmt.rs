//! Deterministic CSV formatting.

/// Fixed scientific notation with 17 significant digits.
///
/// Shortest round-trip formatting is locale- and implementation-stable in
/// Rust, but pinning the digit count keeps files byte-comparable across
/// versions; negative zero is normalized.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// `0`/`1` for CSV boolean columns.
pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_are_fixed_width_and_signed_zero_free() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-2.5e-3), "-2.5000000000000001e-3");
    }

    #[test]
    fn round_trips() {
        for &x in &[1.0, -0.1, std::f64::consts::PI, 1e-300, -7.25e88] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}

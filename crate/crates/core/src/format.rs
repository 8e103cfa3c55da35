//! C-style `%.12g` number formatting for CSV and report output.

/// Significant digits used for every emitted number.
pub const SIGNIFICANT: usize = 12;

/// Formats `x` like C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    fmt_g_prec(x, SIGNIFICANT)
}

/// Formats `x` like C's `%.{precision}g`.
pub fn fmt_g_prec(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    // round to p significant digits first; the exponent after rounding
    // decides the style
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1.0327, "1.0327"),
            (9.66215178, "9.66215178"),
            (1.0 / 3.0, "0.333333333333"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (4.2354e-3, "0.0042354"),
            (1e100, "1e+100"),
            (999999999999.5, "1e+12"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "formatting {x}");
        }
    }

    #[test]
    fn lower_precision() {
        assert_eq!(fmt_g_prec(4.56789, 3), "4.57");
        assert_eq!(fmt_g_prec(0.000123456, 2), "0.00012");
    }
}

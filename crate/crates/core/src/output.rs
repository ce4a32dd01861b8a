//! Number formatting and CSV writers shared by the reports and the CLI.

use std::fmt::Write as _;

/// Shortest decimal string that parses back to the same `f64`.
///
/// Plain notation for `1e-5 <= |v| < 1e16`, scientific otherwise.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Joins one CSV row of numbers.
pub fn csv_row(values: &[f64]) -> String {
    let mut s = String::new();
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&fmt_num(*v));
    }
    s
}

/// Header line followed by rows, newline terminated.
pub fn csv_table<I: IntoIterator<Item = Vec<f64>>>(header: &[&str], rows: I) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", csv_row(&r));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_num(0.1), "0.1");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(1e-20), "1e-20");
        assert_eq!(fmt_num(-3.5e17), "-3.5e17");
        assert_eq!(csv_row(&[1.0, 0.25]), "1,0.25");
    }

    proptest! {
        #[test]
        fn round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = fmt_num(v);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}

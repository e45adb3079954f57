//! Complex literals of the form `a+bi`, `bi`, `a` (signs optional, exponents allowed).

use std::fmt::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parses a complex literal such as `1.3i`, `-2.5e-3+4i`, `3`, `-i`.
pub fn parse_complex(input: &str) -> Result<Complex64> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty complex literal"));
    }
    let bad = || Error::invalid(format!("malformed complex literal `{input}`"));

    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s).ok_or_else(bad)?, 0.0));
    };

    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));

    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k]).ok_or_else(bad)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_real(t).ok_or_else(bad)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_real(s: &str) -> Option<f64> {
    if s.is_empty()
        || !s
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'))
    {
        return None;
    }
    s.parse().ok()
}

/// Formats `z` as `a+bi`; for finite components `parse_complex` recovers `z` exactly.
pub fn format_complex(z: Complex64) -> String {
    let mut out = String::new();
    let _ = write!(out, "{}", z.re);
    if z.im.is_sign_negative() {
        let _ = write!(out, "-{}i", -z.im);
    } else {
        let _ = write!(out, "+{}i", z.im);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accepts_the_documented_grammar() {
        assert_eq!(parse_complex("1.3i").unwrap(), c(0.0, 1.3));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("2+0i").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-0.4457i").unwrap(), c(0.0, -0.4457));
        assert_eq!(parse_complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(parse_complex("+2-3i").unwrap(), c(2.0, -3.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5E+2i").unwrap(), c(1e-3, 250.0));
        assert_eq!(parse_complex(" 0.5 ").unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1+", "i1", "1+2", "1+2j", "++1i", "1i+2", "nan", "inf", "1+-2i"] {
            assert!(parse_complex(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn negative_zero_survives() {
        let z = parse_complex(&format_complex(c(-0.0, -0.0))).unwrap();
        assert!(z.re.is_sign_negative() && z.im.is_sign_negative());
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(re in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO,
                                         im in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let z = c(re, im);
            let back = parse_complex(&format_complex(z)).unwrap();
            prop_assert_eq!(back.re.to_bits(), re.to_bits());
            prop_assert_eq!(back.im.to_bits(), im.to_bits());
        }
    }
}

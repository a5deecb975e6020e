//! Exact rational arithmetic helpers.
//!
//! All quantities the library reports (coordinates, areas, dispersion values,
//! bounds, discrepancies) are rationals held exactly; comparisons go through
//! integer cross-multiplication inside `num-rational`, never floats. Hot loops
//! elsewhere work on integer numerators over a common denominator and only
//! convert to [`Rational`] at the API boundary.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Builds a rational from unsigned numerator/denominator parts.
///
/// Panics if `den` is zero.
pub fn rat(num: u64, den: u64) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from a u128 numerator/denominator pair.
pub fn rat_u128(num: u128, den: u128) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: u64) -> Rational {
    BigRational::from(BigInt::from(n))
}

/// Exact three-way comparison of two rationals.
///
/// Equivalent to comparing `a.num * b.den` with `b.num * a.den` as integers.
pub fn rational_cmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

/// Renders a rational as a lowest-terms `"num/den"` string, e.g. `"39/256"`.
///
/// Integers keep an explicit `/1` so the format is uniform and unambiguous.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses a `"num/den"` string (or a bare integer) into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Decimal rendering to `digits` significant digits (round half away from zero).
///
/// Used for the human-facing columns next to exact values; the rational string
/// stays the primary datum.
pub fn to_decimal_string(r: &Rational, digits: usize) -> String {
    assert!(digits > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let abs = r.abs();

    // Find exponent e with 10^e <= abs < 10^(e+1).
    let ten = BigInt::from(10);
    let mut e: i64 = 0;
    let one = BigRational::from(BigInt::from(1));
    let ten_r = BigRational::from(ten.clone());
    let mut scaled = abs.clone();
    if scaled >= one {
        while scaled >= ten_r {
            scaled /= &ten_r;
            e += 1;
        }
    } else {
        while scaled < one {
            scaled *= &ten_r;
            e -= 1;
        }
    }

    // mantissa = round(abs * 10^(digits-1-e)) as an integer with `digits` digits.
    let shift = digits as i64 - 1 - e;
    let pow = ten.pow(shift.unsigned_abs() as u32);
    let scaled = if shift >= 0 {
        abs * BigRational::from(pow)
    } else {
        abs / BigRational::from(pow)
    };
    let (num, den) = (scaled.numer().clone(), scaled.denom().clone());
    let mut mant = (&num * 2u32 + &den) / (&den * 2u32); // round half away from zero
    let mut e = e;
    // Rounding can carry (e.g. 9.99995 -> 10.0000): renormalize.
    if mant.to_string().len() > digits {
        mant /= &ten;
        e += 1;
    }
    let mant_s = mant.to_string();
    debug_assert_eq!(mant_s.len(), digits);

    let sign = if neg { "-" } else { "" };
    if e >= 0 && (e as usize) < digits {
        let point = e as usize + 1;
        let (int_part, frac_part) = mant_s.split_at(point);
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    } else if e >= 0 && e <= 15 {
        // Moderate integers spelled out in full rather than scientifically.
        let zeros = "0".repeat(e as usize + 1 - digits);
        format!("{sign}{mant_s}{zeros}")
    } else if e < 0 && e >= -4 {
        let zeros = "0".repeat((-e - 1) as usize);
        let mant_s = mant_s.trim_end_matches('0');
        format!("{sign}0.{zeros}{mant_s}")
    } else {
        let (head, tail) = mant_s.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{e}")
        } else {
            format!("{sign}{head}.{tail}e{e}")
        }
    }
}

/// Lossy conversion for trend checks and plots; never used in exact assertions.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cmp_identical_value() {
        assert_eq!(rational_cmp(&rat(1, 3), &rat(2, 6)), Ordering::Equal);
    }

    #[test]
    fn cmp_common_denominator() {
        // 39/256 < 5/32 = 40/256.
        assert_eq!(rational_cmp(&rat(39, 256), &rat(5, 32)), Ordering::Less);
    }

    #[test]
    fn cmp_cross_multiply() {
        // 5*17 = 85 > 84 = 1*84.
        assert_eq!(rational_cmp(&rat(5, 84), &rat(1, 17)), Ordering::Greater);
    }

    #[test]
    fn format_lowest_terms() {
        assert_eq!(format_rational(&rat(39, 256)), "39/256");
        assert_eq!(format_rational(&rat(2, 6)), "1/3");
        assert_eq!(format_rational(&rat(0, 7)), "0/1");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["39/256", "0/1", "1/1", "7/3"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("5").unwrap(), rat(5, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&rat(1, 2), 12), "0.5");
        assert_eq!(to_decimal_string(&rat(39, 256), 12), "0.15234375");
        assert_eq!(to_decimal_string(&rat(1, 3), 6), "0.333333");
        assert_eq!(to_decimal_string(&rat(2, 3), 6), "0.666667");
        assert_eq!(to_decimal_string(&rat(0, 1), 12), "0");
        assert_eq!(to_decimal_string(&rat(1000, 1), 3), "1000");
        assert_eq!(to_decimal_string(&rat(1, 100000), 3), "1e-5");
        assert_eq!(&to_decimal_string(&rat(1, 7), 12), "0.142857142857");
    }

    proptest! {
        // Closure and ring identities on randomized inputs; den > 0 keeps
        // construction valid, values may exceed u64 after multiplication.
        #[test]
        fn add_mul_commute_and_associate(
            a in (0u64..1_000_000, 1u64..1_000_000),
            b in (0u64..1_000_000, 1u64..1_000_000),
            c in (0u64..1_000_000, 1u64..1_000_000),
        ) {
            let (a, b, c) = (rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn format_parse_identity(n in 0u64..u64::MAX, d in 1u64..u64::MAX) {
            let r = rat(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }
}

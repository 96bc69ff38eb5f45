//! Exact rational scalars used throughout the polyhedron and exponent
//! arithmetic. Everything downstream of the Taylor support is computed in
//! `Rat`; floating point only enters when a value is handed to quadrature
//! or serialized for plotting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

/// Canonical string form: `"2/3"`, integers without the denominator (`"2"`).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"1.4"` (exact digits).
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.len() as u32;
        let mut joined = String::new();
        joined.push_str(int_part);
        joined.push_str(frac_part);
        let n: BigInt = joined.parse().ok()?;
        let d = BigInt::from(10u32).pow(digits);
        return Some(Rat::new(n, d));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// Exact non-negativity check used by facet validation.
pub fn rat_is_nonneg(r: &Rat) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        let r = rat(10, 7);
        assert_eq!(rat_to_string(&r), "10/7");
        assert_eq!(rat_from_str("10/7").unwrap(), r);
        assert_eq!(rat_to_string(&rat(4, 2)), "2");
        assert_eq!(rat_from_str("2").unwrap(), rat_int(2));
        assert_eq!(rat_from_str("1.4").unwrap(), rat(7, 5));
        assert_eq!(rat_from_str("-0.25").unwrap(), rat(-1, 4));
        assert!(rat_from_str("1/0").is_none());
    }

    #[test]
    fn f64_conversion() {
        assert!((rat_to_f64(&rat(2, 3)) - 2.0 / 3.0).abs() < 1e-15);
    }
}

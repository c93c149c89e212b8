//! Arbitrary-precision rationals and the handful of exact special values
//! used throughout the crate (Pochhammer symbols, factorials, square roots
//! of perfect squares).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// (-1)^k as a rational.
pub fn sign_pow(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` text (integers print without a denominator).
pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Rising factorial (a)_n = a(a+1)...(a+n-1).
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for _ in 0..n {
        acc *= &x;
        x += Rational::one();
    }
    acc
}

pub fn factorial(n: u32) -> Rational {
    pochhammer(&Rational::one(), n)
}

/// Exact square root if `q` is the square of a rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Floor of a rational as an integer.
pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// `serde` adapters that carry rationals as canonical strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&fmt_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 4/6 ").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn lowest_terms_and_display() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(fmt_rational(&q), "-3/2");
        assert_eq!(fmt_rational(&int(7)), "7");
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8));
        assert_eq!(pochhammer(&int(5), 0), int(1));
        assert_eq!(factorial(5), int(120));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&rat(2, 1)), None);
        assert_eq!(exact_sqrt(&rat(-1, 4)), None);
    }
}

//! Signed square roots of rational multiples of gamma-function products,
//! sign * sqrt(q * prod Gamma(f)^e), kept in a canonical form so that ratios
//! can be tested for rationality.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{exact_sqrt, floor, fmt_rational, pochhammer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Radical {
    pub negative: bool,
    #[serde(with = "crate::rational::serde_str")]
    pub square: Rational,
    /// Gamma arguments reduced to (0, 1], with exponents.
    #[serde(skip)]
    pub gammas: BTreeMap<Rational, i64>,
}

impl Radical {
    pub fn one() -> Radical {
        Radical { negative: false, square: Rational::one(), gammas: BTreeMap::new() }
    }

    pub fn zero() -> Radical {
        Radical { negative: false, square: Rational::zero(), gammas: BTreeMap::new() }
    }

    /// sqrt(q) for q >= 0.
    pub fn sqrt_of(q: Rational) -> Result<Radical> {
        if q.is_negative() {
            return Err(Error::NegativeRadicand { what: "radical".into(), value: fmt_rational(&q) });
        }
        Ok(Radical { negative: false, square: q, gammas: BTreeMap::new() })
    }

    /// The rational q itself, i.e. sqrt(q^2) with the sign of q.
    pub fn rational(q: Rational) -> Radical {
        Radical { negative: q.is_negative(), square: &q * &q, gammas: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    /// Multiplies the radicand by Gamma(x)^e, x > 0.
    pub fn with_gamma(mut self, x: &Rational, e: i64) -> Result<Radical> {
        if !x.is_positive() {
            return Err(Error::GammaPole(fmt_rational(x)));
        }
        // x = f + j with f in (0, 1] and j >= 0, so Gamma(x) = (f)_j Gamma(f).
        let mut j = floor(x);
        if Rational::from_integer(j.clone()) == *x {
            j -= 1;
        }
        let f = x - Rational::from_integer(j.clone());
        let shift: u32 = j.try_into().expect("gamma argument too large");
        let poch = pochhammer(&f, shift);
        if e >= 0 {
            self.square *= poch.pow(e as i32);
        } else {
            self.square /= poch.pow((-e) as i32);
        }
        if f != Rational::one() {
            let entry = self.gammas.entry(f.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                self.gammas.remove(&f);
            }
        }
        Ok(self)
    }

    pub fn negated(mut self) -> Radical {
        self.negative = !self.negative;
        self
    }

    pub fn signed(self, negative: bool) -> Radical {
        if negative {
            self.negated()
        } else {
            self
        }
    }

    pub fn mul(&self, other: &Radical) -> Radical {
        let mut gammas = self.gammas.clone();
        for (f, e) in &other.gammas {
            let entry = gammas.entry(f.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                gammas.remove(f);
            }
        }
        Radical {
            negative: self.negative != other.negative,
            square: &self.square * &other.square,
            gammas,
        }
    }

    pub fn inv(&self) -> Radical {
        Radical {
            negative: self.negative,
            square: self.square.recip(),
            gammas: self.gammas.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        }
    }

    /// self / other as an exact rational, when it is one.
    pub fn ratio(&self, other: &Radical) -> Result<Rational> {
        let q = self.mul(&other.inv());
        if !q.gammas.is_empty() {
            return Err(Error::IrrationalCombination(format!("gamma factors {:?} remain", q.gammas)));
        }
        let root = exact_sqrt(&q.square)
            .ok_or_else(|| Error::IrrationalCombination(format!("{} is not a square", fmt_rational(&q.square))))?;
        Ok(if q.negative { -root } else { root })
    }

    pub fn to_f64(&self) -> f64 {
        if self.square.is_zero() {
            return 0.0;
        }
        let log_gamma: f64 = self
            .gammas
            .iter()
            .map(|(f, e)| *e as f64 * libm::lgamma(crate::rational::to_f64(f)))
            .sum();
        let q = crate::rational::to_f64(&self.square);
        let v = if q.is_normal() {
            q.sqrt() * (0.5 * log_gamma).exp()
        } else {
            (0.5 * (ln_rational(&self.square) + log_gamma)).exp()
        };
        if self.negative {
            -v
        } else {
            v
        }
    }
}

/// ln q for q > 0, robust to large numerators and denominators.
fn ln_rational(q: &Rational) -> f64 {
    fn ln_big(n: &num_bigint::BigInt) -> f64 {
        let bits = n.bits();
        if bits < 1000 {
            return crate::rational::to_f64(&Rational::from_integer(n.clone())).ln();
        }
        let shift = bits - 900;
        let top: num_bigint::BigInt = n >> shift;
        crate::rational::to_f64(&Rational::from_integer(top)).ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_big(q.numer()) - ln_big(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn gamma_shift_is_canonical() {
        // Gamma(7/2) / Gamma(3/2) = (5/2)(3/2).
        let a = Radical::one().with_gamma(&rat(7, 2), 2).unwrap();
        let b = Radical::one().with_gamma(&rat(3, 2), 2).unwrap();
        assert_eq!(a.ratio(&b).unwrap(), rat(15, 4));
        assert!(a.clone().with_gamma(&int(4), 1).unwrap().gammas.len() == 1);
    }

    #[test]
    fn values() {
        let g = Radical::one().with_gamma(&rat(1, 2), 2).unwrap();
        assert!((g.to_f64() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let s = Radical::sqrt_of(rat(9, 4)).unwrap().negated();
        assert_eq!(s.to_f64(), -1.5);
        assert_eq!(Radical::rational(rat(-2, 3)).to_f64(), -2.0 / 3.0);
    }

    #[test]
    fn irrational_ratio_detected() {
        let a = Radical::sqrt_of(int(2)).unwrap();
        assert!(matches!(a.ratio(&Radical::one()), Err(Error::IrrationalCombination(_))));
        let g = Radical::one().with_gamma(&rat(1, 3), 1).unwrap();
        assert!(g.ratio(&Radical::one()).is_err());
    }

    #[test]
    fn pole_rejected() {
        assert!(matches!(Radical::one().with_gamma(&int(0), 1), Err(Error::GammaPole(_))));
    }
}

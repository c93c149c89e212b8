//! Coefficients of the K3-eigenbasis functions in the Dunkl harmonics.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::basis::HarmonicIndex;
use crate::poly::Params;
use crate::rational::{fmt_rational, half, int, serde_str, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionCoefficient {
    pub index: HarmonicIndex,
    pub negative: bool,
    /// The coefficient squared, exact.
    #[serde(with = "serde_str")]
    pub square: Rational,
    pub value: f64,
}

struct Builder {
    big_n: u32,
    out: Vec<ExpansionCoefficient>,
}

impl Builder {
    /// Pushes sign * sqrt(outer * inner) at harmonic (n, e).
    fn push(&mut self, n: u32, e: [u8; 3], negative: bool, outer: &Rational, inner: Rational) -> Result<()> {
        let square = outer * &inner;
        if square.is_negative() {
            return Err(Error::NegativeRadicand { what: format!("coefficient at n={n}"), value: fmt_rational(&square) });
        }
        if square.is_zero() {
            return Ok(());
        }
        let index = HarmonicIndex::new(self.big_n, n, e)?;
        let magnitude = to_f64(&square).sqrt();
        self.out.push(ExpansionCoefficient {
            index,
            negative,
            value: if negative { -magnitude } else { magnitude },
            square,
        });
        Ok(())
    }
}

/// (k + mu1 + mu2) / (2k + mu1 + mu2), which tends to 1 at k = 0.
fn lead_ratio(k: &Rational, m12: &Rational) -> Rational {
    if k.is_zero() {
        Rational::one()
    } else {
        (k + m12) / (int(2) * k + m12)
    }
}

pub fn harmonic_expansion(big_n: u32, big_k: u32, params: &Params) -> Result<Vec<ExpansionCoefficient>> {
    if big_k > big_n {
        return Err(Error::IndexOutOfRange { index: big_k, max: big_n });
    }
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    let m12 = m1 + m2;
    let g = params.gamma();
    let h = half();
    let (k, p) = (big_k / 2, big_k % 2);
    let kk = int(k as i64);
    let mut b = Builder { big_n, out: Vec::new() };
    let k2 = 2 * k;
    let two_k = int(2) * &kk;
    let odd_den = &two_k + &m12 + int(1);
    let even_den = &two_k + &m12 + int(2);
    if big_n.is_multiple_of(2) {
        let n = int((big_n / 2) as i64);
        let d = int(2) * &n + &g + &h;
        if p == 0 {
            let a = (&n + &kk + &g + &h) / &d;
            let bq = (&n - &kk) / &d;
            b.push(k2, [0, 0, 0], false, &a, lead_ratio(&kk, &m12))?;
            if k > 0 {
                b.push(k2, [1, 1, 0], true, &a, &kk / (&two_k + &m12))?;
            }
            b.push(k2 + 1, [0, 1, 1], false, &bq, (&kk + m2 + &h) / &odd_den)?;
            b.push(k2 + 1, [1, 0, 1], false, &bq, (&kk + m1 + &h) / &odd_den)?;
        } else {
            let a = (&n - &kk + m3 - &h) / &d;
            let bq = (&n + &kk + &m12 + int(1)) / &d;
            b.push(k2 + 2, [0, 0, 0], false, &a, (&kk + int(1)) / &even_den)?;
            b.push(k2 + 2, [1, 1, 0], false, &a, (&kk + &m12 + int(1)) / &even_den)?;
            b.push(k2 + 1, [0, 1, 1], false, &bq, (&kk + m1 + &h) / &odd_den)?;
            b.push(k2 + 1, [1, 0, 1], true, &bq, (&kk + m2 + &h) / &odd_den)?;
        }
    } else {
        let n = int(((big_n - 1) / 2) as i64);
        let d = int(2) * &n + &g + int(3) * &h;
        if p == 0 {
            let a = (&kk + &n + &m12 + int(1)) / &d;
            let bq = (&n - &kk + m3 + &h) / &d;
            b.push(k2, [0, 0, 1], false, &a, lead_ratio(&kk, &m12))?;
            if k > 0 {
                b.push(k2, [1, 1, 1], true, &a, &kk / (&two_k + &m12))?;
            }
            b.push(k2 + 1, [0, 1, 0], true, &bq, (&kk + m2 + &h) / &odd_den)?;
            b.push(k2 + 1, [1, 0, 0], true, &bq, (&kk + m1 + &h) / &odd_den)?;
        } else {
            let a = (&n + &kk + &g + int(3) * &h) / &d;
            let bq = (&n - &kk) / &d;
            b.push(k2 + 1, [0, 1, 0], false, &a, (&kk + m1 + &h) / &odd_den)?;
            b.push(k2 + 1, [1, 0, 0], true, &a, (&kk + m2 + &h) / &odd_den)?;
            b.push(k2 + 2, [0, 0, 1], true, &bq, (&kk + int(1)) / &even_den)?;
            b.push(k2 + 2, [1, 1, 1], true, &bq, (&kk + &m12 + int(1)) / &even_den)?;
        }
    }
    Ok(b.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::basis::{bi_basis, dunkl_harmonic, sphere_point, Family};
    use crate::rational::rat;
    use std::f64::consts::PI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parameter_sets() -> Vec<Params> {
        vec![
            Params::new(rat(1, 2), rat(1, 3), rat(1, 4)).unwrap(),
            Params::new(int(0), int(0), int(0)).unwrap(),
            Params::new(rat(2, 5), rat(7, 3), rat(1, 7)).unwrap(),
        ]
    }

    #[test]
    fn constant_case() {
        let c = harmonic_expansion(0, 0, &parameter_sets()[0]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].square, int(1));
    }

    #[test]
    fn unit_norm() {
        for pr in parameter_sets() {
            for big_n in 0..=6 {
                for k in 0..=big_n {
                    let norm: Rational = harmonic_expansion(big_n, k, &pr).unwrap().iter().map(|c| c.square.clone()).sum();
                    assert_eq!(norm, int(1), "N={big_n} K={k}");
                }
            }
        }
    }

    #[test]
    fn sparsity_at_even_degree() {
        let c = harmonic_expansion(2, 0, &parameter_sets()[0]).unwrap();
        let ids: Vec<_> = c.iter().map(|c| (c.index.n, c.index.e)).collect();
        assert_eq!(ids, vec![(0, [0, 0, 0]), (1, [0, 1, 1]), (1, [1, 0, 1])]);
        for c in harmonic_expansion(4, 2, &parameter_sets()[2]).unwrap() {
            assert!([(2, [0, 0, 0]), (2, [1, 1, 0]), (3, [0, 1, 1]), (3, [1, 0, 1])].contains(&(c.index.n, c.index.e)));
        }
    }

    #[test]
    fn reconstructs_basis_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for pr in parameter_sets() {
            for big_n in 0..=5 {
                for k in 0..=big_n {
                    let target = bi_basis(big_n, k, &pr, Family::Y).unwrap();
                    let parts: Vec<_> = harmonic_expansion(big_n, k, &pr)
                        .unwrap()
                        .into_iter()
                        .map(|c| (c.value, dunkl_harmonic(c.index, &pr).unwrap()))
                        .collect();
                    for _ in 0..20 {
                        let x = sphere_point(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
                        let sum: f64 = parts.iter().map(|(c, y)| c * y.eval(x)).sum();
                        let want = target.eval(x);
                        assert!((sum - want).abs() <= 1e-12 * want.abs().max(1.0), "N={big_n} K={k}: {sum} vs {want}");
                    }
                }
            }
        }
    }
}

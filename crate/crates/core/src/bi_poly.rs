//! Bannai-Ito polynomials from their three-term recurrence, and the Racah
//! specialization: grid, weights, norms and discrete orthogonality.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Params;
use crate::rational::{half, int, pochhammer, serde_str, sign_pow, Rational};

/// The parameter quadruple (rho1, rho2, r1, r2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BIParams {
    #[serde(with = "serde_str")]
    pub rho1: Rational,
    #[serde(with = "serde_str")]
    pub rho2: Rational,
    #[serde(with = "serde_str")]
    pub r1: Rational,
    #[serde(with = "serde_str")]
    pub r2: Rational,
}

impl BIParams {
    pub fn new(rho1: Rational, rho2: Rational, r1: Rational, r2: Rational) -> BIParams {
        BIParams { rho1, rho2, r1, r2 }
    }

    /// rho1 + rho2 - r1 - r2.
    fn g(&self) -> Rational {
        &self.rho1 + &self.rho2 - &self.r1 - &self.r2
    }
}

/// (A_n, C_n) from the parity-split formulas.
pub fn recurrence_coeffs(n: usize, bp: &BIParams) -> Result<(Rational, Rational)> {
    let nn = int(n as i64);
    let one = Rational::one();
    let two = int(2);
    let g = bp.g();
    let den_a = int(4) * (&nn + &g + &one);
    if den_a.is_zero() {
        return Err(Error::DegenerateDenominator { n });
    }
    let den_c = int(4) * (&nn + &g);
    let (rho1, rho2, r1, r2) = (&bp.rho1, &bp.rho2, &bp.r1, &bp.r2);
    if n.is_multiple_of(2) {
        let a = (&nn + &two * rho1 - &two * r1 + &one) * (&nn + &two * rho1 - &two * r2 + &one) / den_a;
        let c = if n == 0 {
            Rational::zero()
        } else {
            if den_c.is_zero() {
                return Err(Error::DegenerateDenominator { n });
            }
            -(&nn * (&nn - &two * r1 - &two * r2)) / den_c
        };
        Ok((a, c))
    } else {
        if den_c.is_zero() {
            return Err(Error::DegenerateDenominator { n });
        }
        let a = (&nn + &two * rho1 + &two * rho2 - &two * r1 - &two * r2 + &one)
            * (&nn + &two * rho1 + &two * rho2 + &one)
            / den_a;
        let c = -((&nn + &two * rho2 - &two * r2) * (&nn + &two * rho2 - &two * r1)) / den_c;
        Ok((a, c))
    }
}

/// B_0(y), ..., B_nmax(y).
pub fn bi_values(nmax: usize, y: &Rational, bp: &BIParams) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::one()];
    let mut prev = Rational::zero();
    let mut a_prev = Rational::zero();
    for n in 0..nmax {
        let (a, c) = recurrence_coeffs(n, bp)?;
        let cur = out[n].clone();
        let next = (y - (&bp.rho1 - &a - &c)) * &cur - &a_prev * &c * &prev;
        prev = cur;
        a_prev = a;
        out.push(next);
    }
    Ok(out)
}

pub fn bi_eval(n: usize, y: &Rational, bp: &BIParams) -> Result<Rational> {
    Ok(bi_values(n, y, bp)?.pop().unwrap())
}

/// Coefficients of B_n in the monomial basis, constant term first.
pub fn bi_coefficients(n: usize, bp: &BIParams) -> Result<Vec<Rational>> {
    let mut prev: Vec<Rational> = Vec::new();
    let mut cur = vec![Rational::one()];
    let mut a_prev = Rational::zero();
    for k in 0..n {
        let (a, c) = recurrence_coeffs(k, bp)?;
        let shift = &bp.rho1 - &a - &c;
        let mut next = vec![Rational::zero(); cur.len() + 1];
        for (i, v) in cur.iter().enumerate() {
            next[i + 1] += v;
            next[i] -= &shift * v;
        }
        let w = &a_prev * &c;
        for (i, v) in prev.iter().enumerate() {
            next[i] -= &w * v;
        }
        prev = cur;
        cur = next;
        a_prev = a;
    }
    Ok(cur)
}

/// Parameters of the Racah problem at total degree N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RacahSpec {
    #[serde(skip)]
    pub params: Params,
    #[serde(rename = "N")]
    pub n: usize,
    /// (-1)^N (N + 1 + mu1 + mu2 + mu3).
    #[serde(with = "serde_str")]
    pub mu: Rational,
    pub bi: BIParams,
}

pub fn signed_total(params: &Params, n: usize) -> Rational {
    sign_pow(n as i64) * (int(n as i64) + int(1) + params.gamma())
}

pub fn racah_spec(params: &Params, n: usize) -> RacahSpec {
    let mu = signed_total(params, n);
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    let h = half();
    let bi = BIParams {
        rho1: (m2 + m3) * &h,
        rho2: (m1 + &mu) * &h,
        r1: (m3 - m2) * &h,
        r2: (&mu - m1) * &h,
    };
    RacahSpec { params: params.clone(), n, mu, bi }
}

/// x_S = ((-1)^S (S + mu2 + mu3 + 1/2) - 1/2) / 2.
pub fn racah_grid(s: usize, params: &Params) -> Rational {
    let h = half();
    (sign_pow(s as i64) * (int(s as i64) + params.mu2() + params.mu3() + &h) - &h) * &h
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RacahData {
    #[serde(with = "serde_str::vec")]
    pub grid: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    pub weights: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub h_n: Rational,
    /// u_n = A_{n-1} C_n for n = 1..N.
    #[serde(with = "serde_str::vec")]
    pub u: Vec<Rational>,
}

impl RacahData {
    /// u_1 ... u_n, with the empty product at n = 0.
    pub fn norm(&self, n: usize) -> Rational {
        self.u[..n].iter().fold(Rational::one(), |acc, v| acc * v)
    }
}

fn nonzero(q: Rational, n: usize) -> Result<Rational> {
    if q.is_zero() {
        Err(Error::DegenerateDenominator { n })
    } else {
        Ok(q)
    }
}

fn normalization(n: usize, bp: &BIParams) -> Result<Rational> {
    let (rho1, rho2, r1, r2) = (&bp.rho1, &bp.rho2, &bp.r1, &bp.r2);
    let h = half();
    let one = Rational::one();
    let two = int(2);
    if n.is_multiple_of(2) {
        let m = (n / 2) as u32;
        let num = pochhammer(&(&two * rho1 + &one), m) * pochhammer(&(r1 - rho2 + &h), m);
        let den = pochhammer(&(rho1 - rho2 + &one), m) * pochhammer(&(rho1 + r1 + &h), m);
        Ok(num / nonzero(den, n)?)
    } else {
        let m = n.div_ceil(2) as u32;
        let num = pochhammer(&(&two * rho1 + &one), m) * pochhammer(&(r1 + r2), m);
        let den = pochhammer(&(rho1 + r1 + &h), m) * pochhammer(&(rho1 + r2 + &h), m);
        Ok(num / nonzero(den, n)?)
    }
}

/// Grid, weights w_{S;N}, h_N and the u_n for a Racah spec.
pub fn weights_and_norms(spec: &RacahSpec) -> Result<RacahData> {
    let bp = &spec.bi;
    let (rho1, rho2, r1, r2) = (&bp.rho1, &bp.rho2, &bp.r1, &bp.r2);
    let h = half();
    let one = Rational::one();
    let two = int(2);
    let h_n = nonzero(normalization(spec.n, bp)?, spec.n)?;
    let mut weights = Vec::with_capacity(spec.n + 1);
    for s in 0..=spec.n {
        let (l, nu) = ((s / 2) as u32, (s % 2) as u32);
        let num = sign_pow(nu as i64)
            * pochhammer(&(rho1 - r1 + &h), l + nu)
            * pochhammer(&(rho1 - r2 + &h), l + nu)
            * pochhammer(&(rho1 + rho2 + &one), l)
            * pochhammer(&(&two * rho1 + &one), l);
        let den = pochhammer(&(rho1 + r1 + &h), l + nu)
            * pochhammer(&(rho1 + r2 + &h), l + nu)
            * pochhammer(&one, l)
            * pochhammer(&(rho1 - rho2 + &one), l);
        weights.push(num / nonzero(den, s)? / &h_n);
    }
    let mut u = Vec::with_capacity(spec.n);
    for n in 1..=spec.n {
        let (a_prev, _) = recurrence_coeffs(n - 1, bp)?;
        let (_, c) = recurrence_coeffs(n, bp)?;
        u.push(a_prev * c);
    }
    let grid = (0..=spec.n).map(|s| racah_grid(s, &spec.params)).collect();
    Ok(RacahData { grid, weights, h_n, u })
}

/// G[n][m] = sum_S w_S B_n(x_S) B_m(x_S), exact.
pub fn gram_matrix(spec: &RacahSpec) -> Result<Vec<Vec<Rational>>> {
    let data = weights_and_norms(spec)?;
    let values: Vec<Vec<Rational>> = data
        .grid
        .iter()
        .map(|x| bi_values(spec.n, x, &spec.bi))
        .collect::<Result<_>>()?;
    let size = spec.n + 1;
    let mut g = vec![vec![Rational::zero(); size]; size];
    for (w, vals) in data.weights.iter().zip(&values) {
        for a in 0..size {
            for b in 0..size {
                g[a][b] += w * &vals[a] * &vals[b];
            }
        }
    }
    Ok(g)
}

/// How to read the symbol written `rho^2` in the second structure constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Alpha2Reading {
    Rho2Squared,
    Rho1Squared,
}

/// (alpha1, alpha2, alpha3) = (4(rho1 rho2 + r1 r2), 2(rho1^2 + rho^2 - r1^2 - r2^2),
/// 4(rho1 rho2 - r1 r2)).
pub fn structure_constants(bp: &BIParams, reading: Alpha2Reading) -> [Rational; 3] {
    let (rho1, rho2, r1, r2) = (&bp.rho1, &bp.rho2, &bp.r1, &bp.r2);
    let second = match reading {
        Alpha2Reading::Rho2Squared => rho2 * rho2,
        Alpha2Reading::Rho1Squared => rho1 * rho1,
    };
    [
        int(4) * (rho1 * rho2 + r1 * r2),
        int(2) * (rho1 * rho1 + second - r1 * r1 - r2 * r2),
        int(4) * (rho1 * rho2 - r1 * r2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn generic() -> Params {
        Params::new(rat(1, 2), rat(1, 3), rat(1, 4)).unwrap()
    }

    fn sample_bp() -> BIParams {
        BIParams::new(rat(1, 2), rat(1, 2), int(0), int(0))
    }

    #[test]
    fn recurrence_examples() {
        let (a0, c0) = recurrence_coeffs(0, &sample_bp()).unwrap();
        assert_eq!((a0, c0), (rat(1, 2), int(0)));
        // Odd branch at n = 1: (1+1+1+1)(1+1+1+1) / (4 (1+1+1)).
        let (a1, c1) = recurrence_coeffs(1, &sample_bp()).unwrap();
        assert_eq!(a1, rat(16, 12));
        // -(1 + 1)(1 + 1) / (4 (1 + 1)).
        assert_eq!(c1, rat(-4, 8));
        let odd = BIParams::new(rat(2, 7), rat(-1, 3), rat(1, 5), rat(5, 11));
        assert!(recurrence_coeffs(0, &odd).unwrap().1.is_zero());
    }

    #[test]
    fn degenerate_denominator() {
        // g = -1 makes 4(n + g + 1) vanish at n = 0.
        let bp = BIParams::new(int(0), int(0), int(1), int(0));
        assert_eq!(recurrence_coeffs(0, &bp), Err(Error::DegenerateDenominator { n: 0 }));
    }

    #[test]
    fn first_polynomials() {
        let bp = sample_bp();
        assert_eq!(bi_eval(0, &rat(3, 7), &bp).unwrap(), int(1));
        let y = rat(-5, 9);
        assert_eq!(bi_eval(1, &y, &bp).unwrap(), y);
        let coeffs = bi_coefficients(4, &BIParams::new(rat(2, 7), rat(-1, 3), rat(1, 5), rat(5, 11)))
            .unwrap();
        assert_eq!(coeffs.len(), 5);
        assert_eq!(coeffs[4], int(1));
    }

    #[test]
    fn coefficients_match_values() {
        let bp = BIParams::new(rat(2, 7), rat(-1, 3), rat(1, 5), rat(5, 11));
        let y = rat(3, 4);
        for n in 0..6 {
            let c = bi_coefficients(n, &bp).unwrap();
            let horner = c.iter().rev().fold(Rational::zero(), |acc, v| acc * &y + v);
            assert_eq!(horner, bi_eval(n, &y, &bp).unwrap());
        }
    }

    #[test]
    fn racah_spec_examples() {
        // mu = -(1 + 1 + 13/12) at N = 1.
        let s = racah_spec(&generic(), 1);
        assert_eq!(s.mu, rat(-37, 12));
        assert_eq!(s.bi, BIParams::new(rat(7, 24), rat(-31, 24), rat(-1, 24), rat(-43, 24)));
        assert_eq!(racah_spec(&generic(), 0).mu, rat(25, 12));
        let zero = Params::new(int(0), int(0), int(0)).unwrap();
        let z = racah_spec(&zero, 0);
        assert_eq!(z.mu, int(1));
        assert_eq!(z.bi, BIParams::new(int(0), rat(1, 2), int(0), rat(1, 2)));
        for n in 0..8 {
            let ratio = racah_spec(&generic(), n + 1).mu / racah_spec(&generic(), n).mu;
            assert!(ratio < Rational::zero());
        }
    }

    #[test]
    fn grid_examples() {
        let pr = generic();
        assert_eq!(racah_grid(0, &pr), racah_spec(&pr, 3).bi.rho1);
        assert_eq!(racah_grid(1, &pr), rat(-31, 24));
        let pts: Vec<Rational> = (0..=6).map(|s| racah_grid(s, &pr)).collect();
        for i in 0..pts.len() {
            for j in 0..i {
                assert_ne!(pts[i], pts[j]);
            }
        }
    }

    #[test]
    fn weights_examples() {
        let pr = generic();
        let d0 = weights_and_norms(&racah_spec(&pr, 0)).unwrap();
        assert_eq!(d0.weights, vec![int(1)]);
        assert!(d0.u.is_empty());
        let d1 = weights_and_norms(&racah_spec(&pr, 1)).unwrap();
        assert_eq!(&d1.weights[0] + &d1.weights[1], int(1));
        let g = gram_matrix(&racah_spec(&pr, 2)).unwrap();
        assert!(g[1][2].is_zero());
    }

    #[test]
    fn gram_is_diagonal_with_norms() {
        for pr in [generic(), Params::new(rat(2, 5), rat(7, 3), rat(1, 7)).unwrap()] {
            for n in 0..=4 {
                let spec = racah_spec(&pr, n);
                let g = gram_matrix(&spec).unwrap();
                let d = weights_and_norms(&spec).unwrap();
                for (a, row) in g.iter().enumerate() {
                    for (b, v) in row.iter().enumerate() {
                        let expected = if a == b { d.norm(a) } else { Rational::zero() };
                        assert_eq!(*v, expected, "N={n} ({a},{b})");
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_example() {
        let pr = generic();
        let spec = racah_spec(&pr, 1);
        let a1 = int(2) * (pr.mu1() * &spec.mu + pr.mu2() * pr.mu3());
        assert_eq!(a1, rat(-35, 12));
    }

    #[test]
    fn three_term_residual_vanishes() {
        let spec = racah_spec(&generic(), 5);
        for k in 0..20 {
            let y = rat(k * 7 - 31, 13 + k);
            let b = bi_values(6, &y, &spec.bi).unwrap();
            for n in 1..6 {
                let (a, c) = recurrence_coeffs(n, &spec.bi).unwrap();
                let (a_prev, _) = recurrence_coeffs(n - 1, &spec.bi).unwrap();
                let residual = &y * &b[n]
                    - (&b[n + 1] + (&spec.bi.rho1 - &a - &c) * &b[n] + a_prev * c * &b[n - 1]);
                assert!(residual.is_zero());
            }
        }
    }

    #[test]
    fn alpha_readings() {
        // With the Racah parameters, the rho2^2 reading reproduces the module
        // constants (2(mu1 mu + mu2 mu3), 2(mu1 mu3 + mu2 mu), 2(mu1 mu2 + mu3 mu))
        // relabelled cyclically; the rho1^2 reading does not.
        let pr = generic();
        for n in 0..5 {
            let spec = racah_spec(&pr, n);
            let (m1, m2, m3, mu) = (pr.mu1(), pr.mu2(), pr.mu3(), &spec.mu);
            let rea = [
                int(2) * (m1 * mu + m2 * m3),
                int(2) * (m1 * m3 + m2 * mu),
                int(2) * (m1 * m2 + m3 * mu),
            ];
            let a = structure_constants(&spec.bi, Alpha2Reading::Rho2Squared);
            assert_eq!([a[0].clone(), a[1].clone(), a[2].clone()], [rea[2].clone(), rea[0].clone(), rea[1].clone()]);
            let b = structure_constants(&spec.bi, Alpha2Reading::Rho1Squared);
            assert_ne!(b[1], rea[0]);
        }
    }
}

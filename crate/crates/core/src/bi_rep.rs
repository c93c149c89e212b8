//! The (N+1)-dimensional Bannai-Ito modules in the K3 eigenbasis, their
//! residual checks and the cyclic relabelling of generators and parameters.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bi_poly::{racah_spec, signed_total, structure_constants, Alpha2Reading};
use crate::error::{Error, Result};
use crate::poly::Params;
use crate::rational::{fmt_rational, half, int, rat, serde_str, sign_pow, to_f64, Rational};

/// Exact diagonal data of a module before any square root is taken.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactEntries {
    #[serde(with = "serde_str::vec")]
    pub omega: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    pub v: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    pub w: Vec<Rational>,
    /// U_k^2 for k = 1..N.
    #[serde(with = "serde_str::vec")]
    pub u_squared: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BIModuleMatrices {
    #[serde(rename = "N")]
    pub n: usize,
    pub params: Params,
    #[serde(with = "serde_str")]
    pub mu: Rational,
    #[serde(serialize_with = "rows")]
    pub k1: DMatrix<f64>,
    #[serde(serialize_with = "rows")]
    pub k2: DMatrix<f64>,
    #[serde(serialize_with = "rows")]
    pub k3: DMatrix<f64>,
    #[serde(with = "serde_str::vec")]
    pub alpha: Vec<Rational>,
    /// Value of K1^2 + K2^2 + K3^2.
    #[serde(with = "serde_str")]
    pub casimir: Rational,
    pub exact: ExactEntries,
}

fn rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    out.serialize(s)
}

/// omega_k = (-1)^k (k + mu1 + mu2 + 1/2).
pub fn omega(k: usize, params: &Params) -> Rational {
    sign_pow(k as i64) * (int(k as i64) + params.mu1() + params.mu2() + half())
}

/// (alpha1, alpha2, alpha3) = 2(mu1 mu + mu2 mu3, mu1 mu3 + mu2 mu, mu1 mu2 + mu3 mu).
pub fn module_constants(params: &Params, mu: &Rational) -> [Rational; 3] {
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    [
        int(2) * (m1 * mu + m2 * m3),
        int(2) * (m1 * m3 + m2 * mu),
        int(2) * (m1 * m2 + m3 * mu),
    ]
}

/// mu1^2 + mu2^2 + mu3^2 + mu^2 - 1/4.
pub fn casimir_value(params: &Params, mu: &Rational) -> Rational {
    params.as_array().iter().map(|m| m * m).sum::<Rational>() + mu * mu - rat(1, 4)
}

pub fn b_coeff(k: usize, params: &Params, mu: &Rational) -> Rational {
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    let kk = int(k as i64);
    let one = int(1);
    let two = int(2);
    let m12 = m1 + m2;
    let den = &two * (&kk + &m12 + &one);
    if k.is_multiple_of(2) {
        (&kk + &two * m2 + &one) * (&kk + &m12 + m3 - mu + &one) / den
    } else {
        (&kk + &two * &m12 + &one) * (&kk + &m12 + m3 + mu + &one) / den
    }
}

pub fn d_coeff(k: usize, params: &Params, mu: &Rational) -> Rational {
    if k == 0 {
        return Rational::zero();
    }
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    let kk = int(k as i64);
    let two = int(2);
    let m12 = m1 + m2;
    let den = &two * (&kk + &m12);
    if k.is_multiple_of(2) {
        -(&kk * (&kk + &m12 - m3 - mu)) / den
    } else {
        -((&kk + &two * m1) * (&kk + &m12 - m3 + mu)) / den
    }
}

fn exact_entries(n: usize, params: &Params, mu: &Rational, alpha: &[Rational; 3]) -> Result<ExactEntries> {
    let omega: Vec<Rational> = (0..=n).map(|k| omega(k, params)).collect();
    let base = params.mu2() + params.mu3() + half();
    let v: Vec<Rational> = (0..=n)
        .map(|k| &base - b_coeff(k, params, mu) - d_coeff(k, params, mu))
        .collect();
    let w: Vec<Rational> = omega
        .iter()
        .zip(&v)
        .map(|(o, v)| int(2) * o * v - &alpha[1])
        .collect();
    let mut u_squared = Vec::with_capacity(n);
    for k in 1..=n {
        let q = b_coeff(k - 1, params, mu) * d_coeff(k, params, mu);
        if q.is_negative() {
            return Err(Error::NegativeRadicand {
                what: format!("U_{k}^2 = B_{}D_{k}", k - 1),
                value: fmt_rational(&q),
            });
        }
        u_squared.push(q);
    }
    Ok(ExactEntries { omega, v, w, u_squared })
}

fn assemble(n: usize, e: &ExactEntries) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let size = n + 1;
    let mut k1 = DMatrix::zeros(size, size);
    let mut k2 = DMatrix::zeros(size, size);
    let mut k3 = DMatrix::zeros(size, size);
    for k in 0..size {
        k3[(k, k)] = to_f64(&e.omega[k]);
        k1[(k, k)] = to_f64(&e.v[k]);
        k2[(k, k)] = to_f64(&e.w[k]);
    }
    for k in 1..size {
        let u = to_f64(&e.u_squared[k - 1]).sqrt();
        // (-1)^k U_k couples psi_{k-1} and psi_k in K2.
        let signed = if k.is_multiple_of(2) { u } else { -u };
        k1[(k, k - 1)] = u;
        k1[(k - 1, k)] = u;
        k2[(k, k - 1)] = signed;
        k2[(k - 1, k)] = signed;
    }
    (k1, k2, k3)
}

pub fn module_matrices(n: usize, params: &Params) -> Result<BIModuleMatrices> {
    let mu = signed_total(params, n);
    let alpha = module_constants(params, &mu);
    let exact = exact_entries(n, params, &mu, &alpha)?;
    let (k1, k2, k3) = assemble(n, &exact);
    Ok(BIModuleMatrices {
        n,
        params: params.clone(),
        casimir: casimir_value(params, &mu),
        mu,
        k1,
        k2,
        k3,
        alpha: alpha.to_vec(),
        exact,
    })
}

/// Relabels K_i -> K_{i+power} and mu_i -> mu_{i+power} (indices mod 3).
pub fn cyclic_transform(m: &BIModuleMatrices, power: u32) -> BIModuleMatrices {
    let mut ks = [m.k1.clone(), m.k2.clone(), m.k3.clone()];
    let mut alpha = m.alpha.clone();
    let p = (power % 3) as usize;
    ks.rotate_left(p);
    alpha.rotate_left(p);
    let [k1, k2, k3] = ks;
    BIModuleMatrices {
        n: m.n,
        params: m.params.cyclic(power),
        mu: m.mu.clone(),
        k1,
        k2,
        k3,
        alpha,
        casimir: m.casimir.clone(),
        exact: m.exact.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub tol: f64,
    /// {K1,K2} - K3 - alpha3, {K2,K3} - K1 - alpha1, {K3,K1} - K2 - alpha2.
    pub anticommutator_residuals: [f64; 3],
    pub casimir_residual: f64,
    /// Reading of the rho-form constants that reproduces `alpha` up to relabelling.
    pub alpha2_reading: Option<Alpha2Reading>,
    pub pass: bool,
}

impl ModuleReport {
    pub fn max_residual(&self) -> f64 {
        self.anticommutator_residuals
            .iter()
            .copied()
            .fold(self.casimir_residual, f64::max)
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

fn relation(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, alpha: &Rational) -> f64 {
    let id = DMatrix::<f64>::identity(a.nrows(), a.ncols());
    max_abs(&(a * b + b * a - c - id * to_f64(alpha)))
}

/// Which reading of the rho-form constants equals the module constants after
/// the relabelling (alpha1, alpha2, alpha3) -> (alpha3, alpha1, alpha2).
pub fn matching_alpha2_reading(params: &Params, n: usize, alpha: &[Rational]) -> Option<Alpha2Reading> {
    let bi = racah_spec(params, n).bi;
    let target = [alpha[2].clone(), alpha[0].clone(), alpha[1].clone()];
    [Alpha2Reading::Rho2Squared, Alpha2Reading::Rho1Squared]
        .into_iter()
        .find(|&r| structure_constants(&bi, r) == target)
}

pub fn verify_module(m: &BIModuleMatrices, tol: f64) -> ModuleReport {
    let triples = [
        (&m.k1, &m.k2, &m.k3, &m.alpha[2]),
        (&m.k2, &m.k3, &m.k1, &m.alpha[0]),
        (&m.k3, &m.k1, &m.k2, &m.alpha[1]),
    ];
    let res: Vec<f64> = triples
        .par_iter()
        .map(|(a, b, c, al)| relation(a, b, c, al))
        .collect();
    let size = m.n + 1;
    let id = DMatrix::<f64>::identity(size, size);
    let k2sum = &m.k1 * &m.k1 + &m.k2 * &m.k2 + &m.k3 * &m.k3;
    let casimir_residual = max_abs(&(k2sum - id * to_f64(&m.casimir)));
    let anticommutator_residuals = [res[0], res[1], res[2]];
    let pass = anticommutator_residuals.iter().all(|r| *r <= tol) && casimir_residual <= tol;
    ModuleReport {
        n: m.n,
        tol,
        anticommutator_residuals,
        casimir_residual,
        alpha2_reading: matching_alpha2_reading(&m.params, m.n, &m.alpha),
        pass,
    }
}

/// U_k^2 for k = 1..N obtained from the diagonal of the first relation and of
/// the Casimir, with V_k = (alpha1 + 2 omega_k alpha2) / (4 omega_k^2 - 1).
pub fn u_squared_from_relations(n: usize, params: &Params) -> Vec<Rational> {
    let mu = signed_total(params, n);
    let alpha = module_constants(params, &mu);
    let kk = casimir_value(params, &mu);
    (1..=n)
        .map(|k| {
            let om = omega(k, params);
            let v = (&alpha[0] + int(2) * &om * &alpha[1]) / (int(4) * &om * &om - int(1));
            let w = int(2) * &om * &v - &alpha[1];
            let s = sign_pow(k as i64);
            (&kk - &om * &om - &w * &w - &v * &v - int(2) * s * (&w * &v - (&om + &alpha[2]) * half()))
                / int(4)
        })
        .collect()
}

/// Sorted eigenvalues of K1.
pub fn k1_spectrum(m: &BIModuleMatrices) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.k1.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// {(-1)^S (S + mu2 + mu3 + 1/2) : S = 0..N}, sorted.
pub fn expected_k1_spectrum(n: usize, params: &Params) -> Vec<f64> {
    let mut ev: Vec<f64> = (0..=n)
        .map(|s| to_f64(&(sign_pow(s as i64) * (int(s as i64) + params.mu2() + params.mu3() + half()))))
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> Params {
        Params::new(rat(1, 2), rat(1, 3), rat(1, 4)).unwrap()
    }

    fn third() -> Params {
        Params::new(rat(2, 5), rat(7, 3), rat(1, 7)).unwrap()
    }

    fn zero() -> Params {
        Params::new(int(0), int(0), int(0)).unwrap()
    }

    #[test]
    fn one_dimensional_module() {
        let pr = generic();
        let m = module_matrices(0, &pr).unwrap();
        assert_eq!(m.k3[(0, 0)], to_f64(&(pr.mu1() + pr.mu2() + half())));
        assert_eq!(m.k1[(0, 0)], to_f64(&m.exact.v[0]));
        assert_eq!(m.exact.w[0], int(2) * &m.exact.omega[0] * &m.exact.v[0] - &m.alpha[1]);
        let r = verify_module(&m, 1e-14);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn alpha_at_degree_one() {
        // mu = -(1 + 1 + 13/12) = -37/12.
        let m = module_matrices(1, &generic()).unwrap();
        assert_eq!(m.mu, rat(-37, 12));
        assert_eq!(m.alpha[0], rat(-35, 12));
    }

    #[test]
    fn radicands_positive() {
        let m = module_matrices(3, &generic()).unwrap();
        assert!(m.exact.u_squared.iter().all(|q| q.is_positive()));
    }

    #[test]
    fn negative_radicand_reported() {
        // Outside mu > -1/2 the products B_{k-1} D_k can turn negative.
        let raw = Params::unchecked([rat(1, 2), rat(-9, 10), rat(1, 4)]);
        let err = (1..6).find_map(|n| module_matrices(n, &raw).err());
        assert!(matches!(err, Some(Error::NegativeRadicand { .. })), "{err:?}");
    }

    #[test]
    fn module_relations_hold() {
        for pr in [generic(), zero(), third()] {
            for n in 0..=12 {
                let r = verify_module(&module_matrices(n, &pr).unwrap(), 1e-10);
                assert!(r.pass, "N={n} {pr}: {r:?}");
            }
        }
        let r = verify_module(&module_matrices(2, &zero()).unwrap(), 1e-12);
        assert!(r.casimir_residual <= 1e-12);
    }

    #[test]
    fn u_squared_matches_relations() {
        for pr in [generic(), zero(), third()] {
            for n in 0..=8 {
                let m = module_matrices(n, &pr).unwrap();
                assert_eq!(m.exact.u_squared, u_squared_from_relations(n, &pr), "N={n}");
            }
        }
    }

    #[test]
    fn diagonal_matches_direct_formula() {
        let pr = third();
        let m = module_matrices(5, &pr).unwrap();
        for k in 0..=5 {
            let om = &m.exact.omega[k];
            let v = (&m.alpha[0] + int(2) * om * &m.alpha[1]) / (int(4) * om * om - int(1));
            assert_eq!(v, m.exact.v[k]);
        }
    }

    #[test]
    fn cyclic_covariance() {
        let m = module_matrices(6, &generic()).unwrap();
        for p in [1, 2] {
            let t = cyclic_transform(&m, p);
            assert!(verify_module(&t, 1e-10).pass);
            let mu = &t.mu;
            assert_eq!(t.alpha, module_constants(&t.params, mu).to_vec());
        }
        let once = cyclic_transform(&m, 1);
        assert_eq!(once.alpha[0], m.alpha[1]);
        assert_eq!(once.alpha[1], m.alpha[2]);
        assert_eq!(once.alpha[2], m.alpha[0]);
        let thrice = cyclic_transform(&cyclic_transform(&once, 1), 1);
        assert_eq!(thrice.alpha, m.alpha);
        assert_eq!(thrice.params, m.params);
    }

    #[test]
    fn k1_spectrum_is_the_grid() {
        for pr in [generic(), zero(), third()] {
            for n in 0..=10 {
                let m = module_matrices(n, &pr).unwrap();
                let got = k1_spectrum(&m);
                let want = expected_k1_spectrum(n, &pr);
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-9, "N={n}: {got:?} vs {want:?}");
                }
            }
        }
    }

    #[test]
    fn truncation_at_top() {
        for pr in [generic(), third()] {
            for n in 0..6 {
                let mu = signed_total(&pr, n);
                assert!(b_coeff(n, &pr, &mu).is_zero());
            }
        }
    }

    #[test]
    fn alpha2_reading_selected() {
        let m = module_matrices(4, &third()).unwrap();
        assert_eq!(verify_module(&m, 1e-10).alpha2_reading, Some(Alpha2Reading::Rho2Squared));
    }
}

//! Product Gauss-Jacobi quadrature for the weight
//! h = |x1|^(2 mu1) |x2|^(2 mu2) |x3|^(2 mu3) on the unit sphere.
//!
//! With s = x3^2 and t = x1^2 / (x1^2 + x2^2) the weight separates into
//! s^(mu3-1/2) (1-s)^(mu1+mu2) ds and t^(mu1-1/2) (1-t)^(mu2-1/2) dt on the
//! positive octant; the other octants are reached by the eight sign images,
//! which also kill every odd parity sector.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::harmonics::jacobi::jacobi_f64_with_derivative;
use crate::poly::Params;

/// Nodes and weights on [-1, 1] for (1-x)^alpha (1+x)^beta with n points.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Vec<(f64, f64)> {
    if n == 0 {
        return Vec::new();
    }
    let ab = alpha + beta;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        jm[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (c * (c + 2.0))
        };
        if k + 1 < n {
            let j = kf + 1.0;
            let c = 2.0 * j + ab;
            let off = if j == 1.0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (c * c * (c + 1.0) * (c - 1.0))
            };
            jm[(k, k + 1)] = off.sqrt();
            jm[(k + 1, k)] = off.sqrt();
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));
    let nf = n as f64;
    let log_const = (ab + 1.0) * std::f64::consts::LN_2 + libm::lgamma(nf + alpha + 1.0) + libm::lgamma(nf + beta + 1.0)
        - libm::lgamma(nf + ab + 1.0)
        - libm::lgamma(nf + 1.0);
    nodes
        .into_iter()
        .map(|mut x| {
            for _ in 0..3 {
                let (p, dp) = jacobi_f64_with_derivative(n as u32, alpha, beta, x);
                if dp == 0.0 {
                    break;
                }
                x -= p / dp;
            }
            let dp = jacobi_f64_with_derivative(n as u32, alpha, beta, x).1;
            (x, log_const.exp() / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub exactness_degree: u32,
    /// (s, weight) for s = cos^2 theta.
    pub s: Vec<(f64, f64)>,
    /// (t, weight) for t = cos^2 phi.
    pub t: Vec<(f64, f64)>,
}

/// int h over the sphere = 2 Gamma(mu1+1/2) Gamma(mu2+1/2) Gamma(mu3+1/2) / Gamma(mu1+mu2+mu3+3/2).
pub fn total_mass(params: &Params) -> f64 {
    let [m1, m2, m3] = params.to_f64();
    2.0 * (libm::lgamma(m1 + 0.5) + libm::lgamma(m2 + 0.5) + libm::lgamma(m3 + 0.5) - libm::lgamma(m1 + m2 + m3 + 1.5)).exp()
}

/// Rule exact for sphere polynomials of total degree <= `exactness_degree`.
pub fn build_quadrature(params: &Params, exactness_degree: u32) -> QuadratureRule {
    let [m1, m2, m3] = params.to_f64();
    let n = (exactness_degree as usize + 2).div_ceil(2);
    let map = |alpha: f64, beta: f64, scale: f64| -> Vec<(f64, f64)> {
        let factor = scale / 2f64.powf(alpha + beta + 1.0);
        gauss_jacobi(n, alpha, beta)
            .into_iter()
            .map(|(x, w)| ((1.0 + x) / 2.0, w * factor))
            .collect()
    };
    QuadratureRule {
        exactness_degree,
        s: map(m1 + m2, m3 - 0.5, 1.0),
        t: map(m2 - 0.5, m1 - 0.5, 2.0),
    }
}

impl QuadratureRule {
    /// Points on the sphere with weights, the eight sign images sharing the
    /// weight of their octant representative.
    pub fn points(&self) -> Vec<([f64; 3], f64)> {
        let mut out = Vec::with_capacity(8 * self.s.len() * self.t.len());
        for &(s, ws) in &self.s {
            let x3 = s.sqrt();
            let rho = (1.0 - s).sqrt();
            for &(t, wt) in &self.t {
                let (x1, x2) = (rho * t.sqrt(), rho * (1.0 - t).sqrt());
                let w = ws * wt / 8.0;
                for signs in 0..8 {
                    let sg = |bit: u32| if signs >> bit & 1 == 1 { -1.0 } else { 1.0 };
                    out.push(([sg(0) * x1, sg(1) * x2, sg(2) * x3], w));
                }
            }
        }
        out
    }

    pub fn integrate<F: Fn([f64; 3]) -> f64 + Sync>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self.points().par_iter().map(|(x, w)| w * f(*x)).collect();
        terms.iter().sum()
    }

    /// Gram matrix G[a][b] = sum w f_a f_b for functions evaluated by `eval`.
    /// Point values are computed in parallel and summed in node order, so the
    /// result does not depend on the thread count.
    pub fn gram<F: Fn([f64; 3]) -> Vec<f64> + Sync>(&self, size: usize, eval: F) -> DMatrix<f64> {
        self.cross(size, size, &eval, &eval)
    }

    /// Cross matrix M[a][b] = sum w f_a g_b.
    pub fn cross<F, G>(&self, rows: usize, cols: usize, f: F, g: G) -> DMatrix<f64>
    where
        F: Fn([f64; 3]) -> Vec<f64> + Sync,
        G: Fn([f64; 3]) -> Vec<f64> + Sync,
    {
        let values: Vec<(Vec<f64>, Vec<f64>, f64)> =
            self.points().par_iter().map(|(x, w)| (f(*x), g(*x), *w)).collect();
        let mut out = DMatrix::zeros(rows, cols);
        for (a, b, w) in &values {
            for (i, ai) in a.iter().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    out[(i, j)] += w * ai * bj;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::jacobi::jacobi_f64;
    use crate::rational::{int, rat};

    fn generic() -> Params {
        Params::new(rat(1, 2), rat(1, 3), rat(1, 4)).unwrap()
    }

    #[test]
    fn jacobi_orthogonality_by_own_rule() {
        let (a, b) = (0.5, -0.25);
        let rule = gauss_jacobi(6, a, b);
        let ip: f64 = rule.iter().map(|(x, w)| w * jacobi_f64(1, a, b, *x) * jacobi_f64(2, a, b, *x)).sum();
        assert!(ip.abs() <= 1e-14, "{ip}");
    }

    #[test]
    fn weights_sum_to_moment() {
        for (a, b) in [(0.0, 0.0), (0.5, -0.5), (1.3, 0.2), (-0.5, -0.5)] {
            let rule = gauss_jacobi(7, a, b);
            let sum: f64 = rule.iter().map(|(_, w)| w).sum();
            let moment = ((a + b + 1.0) * std::f64::consts::LN_2 + libm::lgamma(a + 1.0) + libm::lgamma(b + 1.0)
                - libm::lgamma(a + b + 2.0))
            .exp();
            assert!((sum - moment).abs() <= 1e-14 * moment, "{a} {b}: {sum} vs {moment}");
        }
    }

    #[test]
    fn unweighted_area() {
        let zero = Params::new(int(0), int(0), int(0)).unwrap();
        let rule = build_quadrature(&zero, 2);
        let area = rule.integrate(|_| 1.0);
        assert!((area - 4.0 * std::f64::consts::PI).abs() <= 1e-13 * area);
        assert!((total_mass(&zero) - 4.0 * std::f64::consts::PI).abs() <= 1e-13);
    }

    fn weight(params: &Params, x: [f64; 3]) -> f64 {
        let m = params.to_f64();
        (0..3).map(|i| x[i].abs().powf(2.0 * m[i])).product()
    }

    #[test]
    fn total_mass_matches_independent_integral() {
        // Double-exponential integration over theta, phi in (0, pi/2), times 8.
        for pr in [generic(), Params::new(rat(2, 5), rat(7, 3), rat(1, 7)).unwrap()] {
            let half_pi = std::f64::consts::FRAC_PI_2;
            let inner = |theta: f64| {
                quadrature::double_exponential::integrate(
                    |phi| {
                        let x = crate::harmonics::basis::sphere_point(theta, phi);
                        weight(&pr, x) * theta.sin()
                    },
                    0.0,
                    half_pi,
                    1e-13,
                )
                .integral
            };
            let mass = 8.0 * quadrature::double_exponential::integrate(inner, 0.0, half_pi, 1e-12).integral;
            assert!((mass - total_mass(&pr)).abs() <= 1e-10 * mass, "{mass} vs {}", total_mass(&pr));
            let rule = build_quadrature(&pr, 0);
            assert!((rule.integrate(|_| 1.0) - total_mass(&pr)).abs() <= 1e-13 * mass);
        }
    }

    #[test]
    fn polynomial_moments_are_exact() {
        // int x1^2a x2^2b x3^2c h = 2 prod Gamma(a + mu1 + 1/2) / Gamma(a + b + c + gamma + 3/2).
        let pr = generic();
        let m = pr.to_f64();
        let rule = build_quadrature(&pr, 12);
        for (a, b, c) in [(1, 0, 0), (0, 2, 1), (3, 1, 2), (0, 0, 6), (2, 2, 2)] {
            let exact = 2.0
                * (libm::lgamma(a as f64 + m[0] + 0.5) + libm::lgamma(b as f64 + m[1] + 0.5) + libm::lgamma(c as f64 + m[2] + 0.5)
                    - libm::lgamma((a + b + c) as f64 + m[0] + m[1] + m[2] + 1.5))
                .exp();
            let got = rule.integrate(|x| x[0].powi(2 * a) * x[1].powi(2 * b) * x[2].powi(2 * c));
            assert!((got - exact).abs() <= 1e-13 * exact, "{a}{b}{c}: {got} vs {exact}");
            let odd = rule.integrate(|x| x[0].powi(2 * a + 1) * x[1].powi(2 * b) * x[2]);
            assert!(odd.abs() <= 1e-15);
        }
    }
}

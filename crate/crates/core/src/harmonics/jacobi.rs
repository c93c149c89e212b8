//! Jacobi polynomials P_n^{(alpha,beta)} with the weight (1-x)^alpha (1+x)^beta.

use num_traits::{One, Zero};

use crate::poly::TriPoly;
use crate::rational::{int, Rational};

/// Exact value by the three-term recurrence.
pub fn jacobi_eval(n: u32, alpha: &Rational, beta: &Rational, x: &Rational) -> Rational {
    let one = Rational::one();
    let two = int(2);
    if n == 0 {
        return one;
    }
    let ab = alpha + beta;
    let mut prev = one.clone();
    let mut cur = alpha + &one + (&ab + &two) * (x - &one) / &two;
    for k in 2..=n {
        let k = int(k as i64);
        let c = &two * &k + &ab;
        let den = &two * &k * (&k + &ab) * (&c - &two);
        let lin = (&c - &one) * (&c * (&c - &two) * x + alpha * alpha - beta * beta);
        let back = &two * (&k + alpha - &one) * (&k + beta - &one) * &c;
        let next = (lin * &cur - back * &prev) / den;
        prev = cur;
        cur = next;
    }
    cur
}

/// Binomial coefficient with a rational upper argument.
pub fn binomial(z: &Rational, k: u32) -> Rational {
    let mut out = Rational::one();
    for i in 0..k {
        out = out * (z - int(i as i64)) / int(i as i64 + 1);
    }
    out
}

/// The homogeneous form v^n P_n(x) with (x-1)/2 = -a/v and (x+1)/2 = b/v:
/// sum_s C(n+alpha, n-s) C(n+beta, s) (-a)^s b^(n-s).
pub fn jacobi_homogeneous(n: u32, alpha: &Rational, beta: &Rational, a: &TriPoly, b: &TriPoly) -> TriPoly {
    let na = int(n as i64) + alpha;
    let nb = int(n as i64) + beta;
    let neg_a = -a.clone();
    let mut out = TriPoly::zero();
    for s in 0..=n {
        let c = binomial(&na, n - s) * binomial(&nb, s);
        if c.is_zero() {
            continue;
        }
        out += (neg_a.pow(s) * b.pow(n - s)).scale(&c);
    }
    out
}

/// (P_n(x), P_n'(x)) in binary64 by the same recurrence.
pub fn jacobi_f64_with_derivative(n: u32, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = alpha + 1.0 + (ab + 2.0) * (x - 1.0) / 2.0;
    let mut dprev = 0.0;
    let mut dcur = (ab + 2.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let den = 2.0 * k * (k + ab) * (c - 2.0);
        let a1 = (c - 1.0) * c * (c - 2.0);
        let a0 = (c - 1.0) * (alpha * alpha - beta * beta);
        let back = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = ((a1 * x + a0) * cur - back * prev) / den;
        let dnext = ((a1 * x + a0) * dcur + a1 * cur - back * dprev) / den;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    (cur, dcur)
}

pub fn jacobi_f64(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    jacobi_f64_with_derivative(n, alpha, beta, x).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Axis, Monomial};
    use crate::rational::{factorial, pochhammer, rat, to_f64};

    #[test]
    fn low_degrees() {
        let (a, b) = (rat(1, 3), rat(-1, 4));
        assert_eq!(jacobi_eval(0, &a, &b, &rat(5, 7)), int(1));
        assert_eq!(jacobi_eval(1, &int(1), &int(0), &int(1)), int(2));
    }

    #[test]
    fn value_at_one() {
        for (a, b) in [(rat(1, 3), rat(-1, 4)), (rat(-1, 2), rat(-1, 2)), (rat(7, 3), rat(2, 5))] {
            for n in 0..8 {
                let want = pochhammer(&(&a + int(1)), n) / factorial(n);
                assert_eq!(jacobi_eval(n, &a, &b, &int(1)), want);
            }
        }
    }

    #[test]
    fn homogeneous_form_matches_recurrence() {
        // With a = x2, b = x1 (degree-one placeholders) and v = a + b, x = (b - a)/(a + b).
        let (al, be) = (rat(5, 6), rat(-1, 2));
        let hom = jacobi_homogeneous(5, &al, &be, &TriPoly::var(Axis::X2), &TriPoly::var(Axis::X1));
        for (p, q) in [(1, 3), (2, 5), (7, 4)] {
            let (xa, xb) = (int(p), int(q));
            let v = &xa + &xb;
            let x = (&xb - &xa) / &v;
            let lhs = hom.eval(&[xb.clone(), xa.clone(), int(0)]);
            assert_eq!(lhs, v.pow(5) * jacobi_eval(5, &al, &be, &x));
        }
        assert!(hom.terms().all(|(m, _)| m.degree() == 5));
        assert_ne!(hom.coefficient(&Monomial::new(5, 0, 0)), int(0));
    }

    #[test]
    fn f64_matches_exact() {
        let (a, b) = (rat(4, 3), rat(-1, 6));
        for n in 0..10 {
            for x in [rat(-9, 10), rat(0, 1), rat(1, 3)] {
                let exact = to_f64(&jacobi_eval(n, &a, &b, &x));
                let approx = jacobi_f64(n, to_f64(&a), to_f64(&b), to_f64(&x));
                assert!((exact - approx).abs() <= 1e-13 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let (a, b, x) = (0.3, 1.7, 0.25);
        let h = 1e-6;
        for n in 1..8 {
            let d = jacobi_f64_with_derivative(n, a, b, x).1;
            let fd = (jacobi_f64(n, a, b, x + h) - jacobi_f64(n, a, b, x - h)) / (2.0 * h);
            assert!((d - fd).abs() < 1e-6 * d.abs().max(1.0));
        }
    }
}

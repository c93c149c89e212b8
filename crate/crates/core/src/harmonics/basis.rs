//! Dunkl spherical harmonics Y_{n;N}^{(e)} and the Bannai-Ito basis
//! functions, both as trigonometric evaluators and as exact cartesian
//! polynomials on the unit sphere.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::jacobi::{jacobi_f64, jacobi_homogeneous};
use crate::harmonics::radical::Radical;
use crate::poly::{Axis, Params, TriPoly};
use crate::rational::{half, int, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HarmonicIndex {
    #[serde(rename = "N")]
    pub big_n: u32,
    pub n: u32,
    pub e: [u8; 3],
}

impl HarmonicIndex {
    pub fn new(big_n: u32, n: u32, e: [u8; 3]) -> Result<HarmonicIndex> {
        let idx = HarmonicIndex { big_n, n, e };
        if idx.is_admissible() {
            Ok(idx)
        } else {
            Err(Error::InadmissibleIndex { big_n, n, e1: e[0], e2: e[1], e3: e[2] })
        }
    }

    pub fn is_admissible(&self) -> bool {
        let [e1, e2, e3] = self.e.map(|v| v as i64);
        let (big_n, n) = (self.big_n as i64, self.n as i64);
        let a = n - e1 - e2;
        let b = big_n - n - e3;
        self.e.iter().all(|&v| v <= 1) && a >= 0 && a % 2 == 0 && b >= 0 && b % 2 == 0
    }
}

impl std::fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={} n={} e=({},{},{})", self.big_n, self.n, self.e[0], self.e[1], self.e[2])
    }
}

/// All admissible (n, e1, e2, e3) at degree N; there are 2N + 1 of them.
pub fn admissible_indices(big_n: u32) -> Vec<HarmonicIndex> {
    let mut out = Vec::new();
    for n in 0..=big_n {
        for e1 in 0..2 {
            for e2 in 0..2 {
                for e3 in 0..2 {
                    let idx = HarmonicIndex { big_n, n, e: [e1, e2, e3] };
                    if idx.is_admissible() {
                        out.push(idx);
                    }
                }
            }
        }
    }
    out
}

/// A Jacobi factor P_m^{(alpha,beta)} of cos 2(angle).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiFactor {
    pub degree: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub beta: Rational,
}

impl JacobiFactor {
    fn new(degree: u32, alpha: Rational, beta: Rational) -> JacobiFactor {
        JacobiFactor { degree, alpha, beta }
    }

    fn eval(&self, x: f64) -> f64 {
        jacobi_f64(self.degree, to_f64(&self.alpha), to_f64(&self.beta), x)
    }
}

/// coeff * cos^e3(theta) sin^(e1+e2+2m)(theta) cos^e1(phi) sin^e2(phi)
/// * P_theta(cos 2 theta) * P_phi(cos 2 phi), with m the degree of P_phi.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigTerm {
    #[serde(skip)]
    pub coeff: Radical,
    pub e: [u8; 3],
    pub theta: JacobiFactor,
    pub phi: JacobiFactor,
}

impl TrigTerm {
    fn sin_theta_power(&self) -> i32 {
        (self.e[0] + self.e[1]) as i32 + 2 * self.phi.degree as i32
    }

    pub fn degree(&self) -> u32 {
        self.e[2] as u32 + 2 * self.theta.degree + self.sin_theta_power() as u32
    }

    /// Value without the coefficient.
    fn eval_shape(&self, theta: f64, phi: f64) -> f64 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        ct.powi(self.e[2] as i32)
            * st.powi(self.sin_theta_power())
            * cp.powi(self.e[0] as i32)
            * sp.powi(self.e[1] as i32)
            * self.theta.eval((2.0 * theta).cos())
            * self.phi.eval((2.0 * phi).cos())
    }

    /// Exact homogeneous lift with cos(theta) -> x3, sin(theta) cos(phi) -> x1,
    /// sin(theta) sin(phi) -> x2.
    pub fn cartesian(&self) -> TriPoly {
        let x = |a| TriPoly::var(a);
        let sq = |a| x(a).pow(2);
        let rho2 = sq(Axis::X1) + sq(Axis::X2);
        let theta = jacobi_homogeneous(self.theta.degree, &self.theta.alpha, &self.theta.beta, &rho2, &sq(Axis::X3));
        let phi = jacobi_homogeneous(self.phi.degree, &self.phi.alpha, &self.phi.beta, &sq(Axis::X2), &sq(Axis::X1));
        x(Axis::X1).pow(self.e[0] as u32)
            * x(Axis::X2).pow(self.e[1] as u32)
            * x(Axis::X3).pow(self.e[2] as u32)
            * theta
            * phi
    }
}

/// A function on the sphere given as a sum of trigonometric terms, together
/// with its cartesian form `normalization * cartesian`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereFunction {
    pub label: String,
    pub degree: u32,
    #[serde(skip)]
    pub terms: Vec<TrigTerm>,
    /// Coordinates the terms are written in: X_j = (-1)^neg_j x_{axis_j}.
    #[serde(skip)]
    pub frame: [(Axis, bool); 3],
    pub cartesian: TriPoly,
    pub normalization: f64,
}

const IDENTITY_FRAME: [(Axis, bool); 3] = [(Axis::X1, false), (Axis::X2, false), (Axis::X3, false)];

pub fn sphere_point(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

pub fn sphere_angles(x: [f64; 3]) -> (f64, f64) {
    (x[2].clamp(-1.0, 1.0).acos(), x[1].atan2(x[0]))
}

impl SphereFunction {
    fn from_terms(label: String, degree: u32, terms: Vec<TrigTerm>, frame: [(Axis, bool); 3]) -> Result<SphereFunction> {
        let terms: Vec<TrigTerm> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        let lead = terms.first().map(|t| t.coeff.clone()).unwrap_or_else(Radical::zero);
        let mut local = TriPoly::zero();
        for t in &terms {
            debug_assert_eq!(t.degree(), degree);
            local += t.cartesian().scale(&t.coeff.ratio(&lead)?);
        }
        Ok(SphereFunction {
            label,
            degree,
            terms,
            frame,
            cartesian: local.substitute_axes(frame),
            normalization: lead.to_f64(),
        })
    }

    /// Trigonometric evaluation at the point with angles (theta, phi).
    pub fn eval_trig(&self, theta: f64, phi: f64) -> f64 {
        let (th, ph) = if self.frame == IDENTITY_FRAME {
            (theta, phi)
        } else {
            let x = sphere_point(theta, phi);
            let local: [f64; 3] = std::array::from_fn(|j| {
                let (axis, neg) = self.frame[j];
                if neg {
                    -x[axis.index()]
                } else {
                    x[axis.index()]
                }
            });
            sphere_angles(local)
        };
        self.terms.iter().map(|t| t.coeff.to_f64() * t.eval_shape(th, ph)).sum()
    }

    /// normalization * cartesian(x).
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.normalization * self.cartesian.eval_f64(x)
    }
}

fn radical_gamma_ratio(num: &[Rational], den: &[Rational], factor: Rational) -> Result<Radical> {
    let mut r = Radical::sqrt_of(factor)?;
    for x in num {
        r = r.with_gamma(x, 1)?;
    }
    for x in den {
        r = r.with_gamma(x, -1)?;
    }
    Ok(r)
}

/// eta_{n;N}^{(e)}, with (x) Gamma(x) merged into Gamma(x + 1) where the
/// two arguments coincide.
fn eta(idx: &HarmonicIndex, params: &Params) -> Result<Radical> {
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    let m12 = m1 + m2;
    let g = params.gamma();
    let h = half();
    let [e1, e2, e3] = idx.e.map(|v| int(v as i64));
    let (big_n, n) = (int(idx.big_n as i64), int(idx.n as i64));
    let mut num = vec![(&n - &e1 - &e2) * &h + int(1)];
    let mut factor = h.clone();
    let phi_arg = (&n + &e1 + &e2) * &h + &m12;
    if idx.n as u8 == idx.e[0] + idx.e[1] {
        num.push(phi_arg + int(1));
    } else {
        factor *= &n + &m12;
        num.push(phi_arg);
    }
    num.push((&big_n - &n - &e3) * &h + int(1));
    let theta_arg = (&big_n + &n + &e3) * &h + &g + &h;
    if idx.big_n == idx.n + idx.e[2] as u32 {
        num.push(theta_arg + int(1));
    } else {
        factor *= &big_n + &g + &h;
        num.push(theta_arg);
    }
    let den = vec![
        (&n + &e1 - &e2) * &h + m1 + &h,
        (&n + &e2 - &e1) * &h + m2 + &h,
        (&big_n + &n - &e3) * &h + &m12 + int(1),
        (&big_n - &n + &e3) * &h + m3 + &h,
    ];
    radical_gamma_ratio(&num, &den, factor)
}

/// The orthonormal Dunkl harmonic Y_{n;N}^{(e1,e2,e3)}.
pub fn dunkl_harmonic(idx: HarmonicIndex, params: &Params) -> Result<SphereFunction> {
    let idx = HarmonicIndex::new(idx.big_n, idx.n, idx.e)?;
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    let h = half();
    let [e1, e2, e3] = idx.e.map(|v| int(v as i64));
    let term = TrigTerm {
        coeff: eta(&idx, params)?,
        e: idx.e,
        theta: JacobiFactor::new(
            (idx.big_n - idx.n - idx.e[2] as u32) / 2,
            int(idx.n as i64) + m1 + m2,
            m3 + &e3 - &h,
        ),
        phi: JacobiFactor::new((idx.n - (idx.e[0] + idx.e[1]) as u32) / 2, m2 + &e2 - &h, m1 + &e1 - &h),
    };
    SphereFunction::from_terms(format!("Y[{idx}]"), idx.big_n, vec![term], IDENTITY_FRAME)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Eigenbasis of K3.
    Y,
    /// Eigenbasis of K1.
    Z,
}

/// A term of the azimuthal factors: coefficient, (e1, e2) and the Jacobi factor.
type Azimuthal = (Radical, [u8; 2], JacobiFactor);

fn radical_power(q: Rational, half_power: i32) -> Result<Radical> {
    let r = Radical::sqrt_of(q)?;
    Ok(match half_power {
        0 => Radical::one(),
        1 => r,
        -1 => r.inv(),
        _ => unreachable!("only half-integer powers -1/2, 0, 1/2 occur"),
    })
}

/// F_+ for K = 2k + p.
fn f_plus(k: u32, p: u32, params: &Params) -> Result<Vec<Azimuthal>> {
    let (m1, m2) = (params.mu1(), params.mu2());
    let m12 = m1 + m2;
    let h = half();
    let (kk, pp) = (int(k as i64), int(p as i64));
    let z = radical_gamma_ratio(
        &[&kk + &pp + int(1), &kk + &m12 + int(1) + &pp],
        &[&kk + m1 + &h + &pp, &kk + m2 + &h + &pp],
        h.clone(),
    )?;
    let a = radical_power((&kk + int(1)) / (&kk + &m12 + int(1)), p as i32)?;
    let mut out = vec![(z.mul(&a), [0, 0], JacobiFactor::new(k + p, m2 - &h, m1 - &h))];
    if k + p >= 1 {
        out.push((
            z.mul(&a.inv()).signed(p == 0),
            [1, 1],
            JacobiFactor::new(k + p - 1, m2 + &h, m1 + &h),
        ));
    }
    Ok(out)
}

/// F_- for K = 2k + p.
fn f_minus(k: u32, p: u32, params: &Params) -> Result<Vec<Azimuthal>> {
    let (m1, m2) = (params.mu1(), params.mu2());
    let m12 = m1 + m2;
    let h = half();
    let kk = int(k as i64);
    let z = radical_gamma_ratio(&[&kk + int(1), &kk + &m12 + int(1)], &[&kk + m1 + &h, &kk + m2 + &h], h.clone())?;
    let c = radical_power((&kk + m1 + &h) / (&kk + m2 + &h), p as i32)?;
    Ok(vec![
        (z.mul(&c), [0, 1], JacobiFactor::new(k, m2 + &h, m1 - &h)),
        (z.mul(&c.inv()).signed(p == 1), [1, 0], JacobiFactor::new(k, m2 - &h, m1 + &h)),
    ])
}

fn polar_terms(coeff: &Radical, e3: u8, theta: JacobiFactor, azimuthal: &[Azimuthal]) -> Vec<TrigTerm> {
    azimuthal
        .iter()
        .map(|(c, e, phi)| TrigTerm {
            coeff: coeff.mul(c),
            e: [e[0], e[1], e3],
            theta: theta.clone(),
            phi: phi.clone(),
        })
        .collect()
}

/// Terms of the K3-eigenbasis function of degree N and index K.
fn k3_basis_terms(big_n: u32, big_k: u32, params: &Params) -> Result<Vec<TrigTerm>> {
    let (m1, m2, m3) = (params.mu1(), params.mu2(), params.mu3());
    let m12 = m1 + m2;
    let g = params.gamma();
    let h = half();
    let (k, p) = (big_k / 2, big_k % 2);
    let (kk, pp) = (int(k as i64), int(p as i64));
    let fp = f_plus(k, p, params)?;
    let fm = f_minus(k, p, params)?;
    let mut terms = Vec::new();
    if big_n.is_multiple_of(2) {
        let n = big_n / 2;
        let nn = int(n as i64);
        let pre = radical_gamma_ratio(
            &[&nn - &kk - &pp + int(1), &nn + &kk + &g + rat32()],
            &[&nn + &kk + &m12 + int(1), &nn - &kk + m3 + &h - &pp],
            int(1),
        )?;
        let b = || (&nn - &kk + m3 - &h) / (&nn + &kk + &m12 + int(1));
        let (b_up, b_down) = if p == 1 {
            (radical_power(b(), 1)?, radical_power(b(), -1)?)
        } else {
            (Radical::one(), Radical::one())
        };
        if n >= k + p {
            let theta = JacobiFactor::new(n - k - p, int(2 * (k + p) as i64) + &m12, m3 - &h);
            terms.extend(polar_terms(&pre.mul(&b_up), 0, theta, &fp));
        }
        if n > k {
            let theta = JacobiFactor::new(n - k - 1, int(2 * k as i64 + 1) + &m12, m3 + &h);
            terms.extend(polar_terms(&pre.mul(&b_down), 1, theta, &fm));
        }
    } else {
        let n = (big_n - 1) / 2;
        let nn = int(n as i64);
        let pre = radical_gamma_ratio(
            &[&nn - &kk + int(1), &nn + &kk + &g + rat32() + &pp],
            &[&nn - &kk + m3 + &h, &nn + &kk + &m12 + int(1) + &pp],
            int(1),
        )?
        .signed(big_k % 2 == 1);
        let b = || (&nn + &kk + &m12 + int(1)) / (&nn - &kk + m3 + &h);
        let (b_up, b_down) = if p == 0 {
            (radical_power(b(), 1)?, radical_power(b(), -1)?)
        } else {
            (Radical::one(), Radical::one())
        };
        if n >= k + p {
            let theta = JacobiFactor::new(n - k - p, int(2 * (k + p) as i64) + &m12, m3 + &h);
            terms.extend(polar_terms(&pre.mul(&b_up), 1, theta, &fp));
        }
        let theta = JacobiFactor::new(n - k, int(2 * k as i64 + 1) + &m12, m3 - &h);
        terms.extend(polar_terms(&pre.mul(&b_down).negated(), 0, theta, &fm));
    }
    Ok(terms)
}

fn rat32() -> Rational {
    int(3) * half()
}

/// The K3 eigenbasis (`Y`) or K1 eigenbasis (`Z`) function of degree N and index K.
pub fn bi_basis(big_n: u32, big_k: u32, params: &Params, which: Family) -> Result<SphereFunction> {
    if big_k > big_n {
        return Err(Error::IndexOutOfRange { index: big_k, max: big_n });
    }
    match which {
        Family::Y => {
            let terms = k3_basis_terms(big_n, big_k, params)?;
            SphereFunction::from_terms(format!("Y[N={big_n} K={big_k}]"), big_n, terms, IDENTITY_FRAME)
        }
        Family::Z => {
            // Parameters (mu2, mu3, mu1) in the frame X = (x2, x3, -+x1).
            let terms = k3_basis_terms(big_n, big_k, &params.cyclic(1))?;
            let frame = [(Axis::X2, false), (Axis::X3, false), (Axis::X1, big_n.is_multiple_of(2))];
            SphereFunction::from_terms(format!("Z[N={big_n} S={big_k}]"), big_n, terms, frame)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn generic() -> Params {
        Params::new(rat(1, 2), rat(1, 3), rat(1, 4)).unwrap()
    }

    fn parameter_sets() -> Vec<Params> {
        vec![
            generic(),
            Params::new(int(0), int(0), int(0)).unwrap(),
            Params::new(rat(2, 5), rat(7, 3), rat(1, 7)).unwrap(),
        ]
    }

    fn brute_force_count(big_n: u32) -> usize {
        let mut count = 0;
        for n in 0..=big_n {
            for e in 0..8u8 {
                let (e1, e2, e3) = ((e & 1) as i64, ((e >> 1) & 1) as i64, ((e >> 2) & 1) as i64);
                let a = n as i64 - e1 - e2;
                let b = big_n as i64 - n as i64 - e3;
                if a >= 0 && b >= 0 && a % 2 == 0 && b % 2 == 0 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn admissible_counts() {
        assert_eq!(admissible_indices(0), vec![HarmonicIndex { big_n: 0, n: 0, e: [0, 0, 0] }]);
        let one: Vec<_> = admissible_indices(1).iter().map(|i| (i.n, i.e)).collect();
        assert_eq!(one.len(), 3);
        for want in [(0, [0, 0, 1]), (1, [1, 0, 0]), (1, [0, 1, 0])] {
            assert!(one.contains(&want));
        }
        for big_n in 0..10 {
            assert_eq!(admissible_indices(big_n).len(), brute_force_count(big_n));
            assert_eq!(admissible_indices(big_n).len(), 2 * big_n as usize + 1);
        }
    }

    #[test]
    fn inadmissible_rejected() {
        let err = HarmonicIndex::new(2, 1, [0, 0, 0]).unwrap_err();
        assert_eq!(err, Error::InadmissibleIndex { big_n: 2, n: 1, e1: 0, e2: 0, e3: 0 });
    }

    #[test]
    fn low_degree_shapes() {
        let y0 = dunkl_harmonic(HarmonicIndex::new(0, 0, [0, 0, 0]).unwrap(), &generic()).unwrap();
        assert_eq!(y0.cartesian, TriPoly::one());
        let y = dunkl_harmonic(HarmonicIndex::new(1, 0, [0, 0, 1]).unwrap(), &generic()).unwrap();
        assert_eq!(y.cartesian, TriPoly::var(Axis::X3));
        let b = bi_basis(0, 0, &generic(), Family::Y).unwrap();
        assert_eq!(b.cartesian, TriPoly::one());
    }

    #[test]
    fn trig_and_cartesian_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for pr in parameter_sets() {
            for big_n in 0..=5 {
                let mut funcs: Vec<SphereFunction> = admissible_indices(big_n)
                    .into_iter()
                    .map(|i| dunkl_harmonic(i, &pr).unwrap())
                    .collect();
                for k in 0..=big_n {
                    funcs.push(bi_basis(big_n, k, &pr, Family::Y).unwrap());
                    funcs.push(bi_basis(big_n, k, &pr, Family::Z).unwrap());
                }
                for f in &funcs {
                    assert!(f.cartesian.is_homogeneous());
                    assert_eq!(f.cartesian.degree().unwrap_or(0), big_n);
                    for _ in 0..100 {
                        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                        let phi: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
                        let a = f.eval_trig(theta, phi);
                        let b = f.eval(sphere_point(theta, phi));
                        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{}: {a} vs {b}", f.label);
                    }
                }
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            bi_basis(2, 3, &generic(), Family::Y).unwrap_err(),
            Error::IndexOutOfRange { index: 3, max: 2 }
        );
    }
}

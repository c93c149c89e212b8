//! Exact operator identities decided on the graded monomial basis, and the
//! spectral checks on harmonic polynomials.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{build_dunkl_without_reflection, Operator, OperatorSet, SlQuadruple};
use crate::poly::{Axis, Monomial, Params, TriPoly};
use crate::rational::{fmt_rational, int, serde_str, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub max_degree: u32,
    pub status: Status,
    /// Monomials evaluated: all C(dmax+3, 3) when the identity holds, up to
    /// and including the counterexample otherwise.
    pub monomials_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    fn new(name: &str, dmax: u32, checked: usize, cx: Option<Counterexample>) -> Self {
        IdentityReport {
            name: name.to_string(),
            max_degree: dmax,
            status: if cx.is_none() { Status::Holds } else { Status::Fails },
            monomials_checked: checked,
            counterexample: cx,
            wall_time_ms: None,
        }
    }
}

fn two_pow_half(k: i32) -> Rational {
    let p = int(2).pow(k.abs() / 2);
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Compares `lhs` and `rhs` on every monomial of degree at most `dmax`.
///
/// Both sides may carry a deferred sqrt(2) factor as long as the parities
/// agree: the common factor is nonzero, so equality is decided on the rest.
pub fn operators_equal_on_degrees(
    name: &str,
    lhs: &Operator,
    rhs: &Operator,
    dmax: u32,
) -> Result<IdentityReport> {
    let (pl, pr) = (lhs.sqrt2_power(), rhs.sqrt2_power());
    if (pl - pr).rem_euclid(2) != 0 {
        return Err(Error::MixedScale { left: pl, right: pr });
    }
    let lo = pl.min(pr);
    let (fl, fr) = (two_pow_half(pl - lo), two_pow_half(pr - lo));
    let basis = Monomial::up_to_degree(dmax);
    let found = basis.par_iter().enumerate().find_map_first(|(i, m)| {
        let input = TriPoly::monomial(*m);
        let l = lhs.apply_unscaled(&input).scale(&fl);
        let r = rhs.apply_unscaled(&input).scale(&fr);
        (l != r).then(|| {
            (
                i,
                Counterexample { monomial: m.to_string(), lhs: l.to_string(), rhs: r.to_string() },
            )
        })
    });
    Ok(match found {
        None => IdentityReport::new(name, dmax, basis.len(), None),
        Some((i, cx)) => IdentityReport::new(name, dmax, i + 1, Some(cx)),
    })
}

/// `op` maps each monomial of degree d to a homogeneous polynomial of
/// degree d (or zero), for all d up to `dmax`.
pub fn preserves_degree(name: &str, op: &Operator, dmax: u32) -> Result<IdentityReport> {
    if op.sqrt2_power().rem_euclid(2) != 0 {
        return Err(Error::IrrationalScale { power: op.sqrt2_power() });
    }
    let basis = Monomial::up_to_degree(dmax);
    let found = basis.par_iter().enumerate().find_map_first(|(i, m)| {
        let image = op.apply_unscaled(&TriPoly::monomial(*m));
        let ok = image.is_zero() || (image.is_homogeneous() && image.degree() == Some(m.degree()));
        (!ok).then(|| {
            (
                i,
                Counterexample {
                    monomial: m.to_string(),
                    lhs: image.to_string(),
                    rhs: format!("homogeneous of degree {}", m.degree()),
                },
            )
        })
    });
    Ok(match found {
        None => IdentityReport::new(name, dmax, basis.len(), None),
        Some((i, cx)) => IdentityReport::new(name, dmax, i + 1, Some(cx)),
    })
}

fn timed(
    name: &str,
    lhs: &Operator,
    rhs: &Operator,
    dmax: u32,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let mut r = operators_equal_on_degrees(name, lhs, rhs, dmax)?;
    r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(r)
}

fn scalar(c: Rational) -> Operator {
    Operator::scalar(c)
}

/// The relations of sl_{-1}(2) for an arbitrary quadruple: the commutators
/// with A0, the anticommutator of A+ and A-, the anticommutators with P,
/// P^2 = 1 and [A0, P] = 0.
pub fn verify_sl_quadruple(q: &SlQuadruple, label: &str, dmax: u32) -> Result<Vec<IdentityReport>> {
    let zero = Operator::zero();
    let checks: Vec<(String, Operator, Operator)> = vec![
        (format!("[A0,A+] = A+ {label}"), q.a0.commutator(&q.aplus), q.aplus.clone()),
        (format!("[A0,A-] = -A- {label}"), q.a0.commutator(&q.aminus), -&q.aminus),
        (
            format!("{{A+,A-}} = 2 A0 {label}"),
            q.aplus.anticommutator(&q.aminus),
            q.a0.scale(&int(2)),
        ),
        (format!("{{A+,P}} = 0 {label}"), q.aplus.anticommutator(&q.parity), zero.with_sqrt2(-1)),
        (format!("{{A-,P}} = 0 {label}"), q.aminus.anticommutator(&q.parity), zero.with_sqrt2(-1)),
        (format!("P^2 = 1 {label}"), &q.parity * &q.parity, Operator::identity()),
        (format!("[A0,P] = 0 {label}"), q.a0.commutator(&q.parity), zero),
    ];
    checks.iter().map(|(n, l, r)| timed(n, l, r, dmax)).collect()
}

pub fn verify_sl_relations(axis: Axis, params: &Params, dmax: u32) -> Result<Vec<IdentityReport>> {
    let q = crate::operator::build_sl_generators(axis, params);
    verify_sl_quadruple(&q, &format!("(axis {axis})"), dmax)
}

pub fn verify_casimir_constants(params: &Params, dmax: u32) -> Result<Vec<IdentityReport>> {
    Axis::ALL
        .iter()
        .map(|ax| {
            let c = crate::operator::build_casimir(crate::operator::CasimirKind::Initial(*ax), params);
            let target = -params.mu(*ax).clone();
            timed(&format!("C({ax}) = {}", fmt_rational(&target)), &c, &scalar(target), dmax)
        })
        .collect()
}

fn verify_symmetry_with(set: &OperatorSet, dmax: u32) -> Result<Vec<IdentityReport>> {
    let [k1, k2, k3] = &set.k;
    let mu = set.params.as_array();
    let ct = &set.casimir_total;
    let rhs = |k: &Operator, m: &Rational, a: &Rational, b: &Rational| -> Operator {
        &(k - &ct.scale(&(int(2) * m))) + &scalar(int(2) * a * b)
    };
    let mut checks: Vec<(String, Operator, Operator)> = vec![
        (
            "{K1,K2} = K3 - 2 mu3 C~ + 2 mu1 mu2".into(),
            k1.anticommutator(k2),
            rhs(k3, &mu[2], &mu[0], &mu[1]),
        ),
        (
            "{K2,K3} = K1 - 2 mu1 C~ + 2 mu2 mu3".into(),
            k2.anticommutator(k3),
            rhs(k1, &mu[0], &mu[1], &mu[2]),
        ),
        (
            "{K3,K1} = K2 - 2 mu2 C~ + 2 mu1 mu3".into(),
            k3.anticommutator(k1),
            rhs(k2, &mu[1], &mu[0], &mu[2]),
        ),
    ];
    for (i, k) in set.k.iter().enumerate() {
        checks.push((format!("[C~,K{}] = 0", i + 1), ct.commutator(k), Operator::zero()));
    }
    for (i, k) in set.k.iter().enumerate() {
        checks.push((format!("[Delta,K{}] = 0", i + 1), set.laplacian.commutator(k), Operator::zero()));
    }
    checks.push(("K3 = -C(12)".into(), k3.clone(), -&set.casimir12));
    checks.push(("K1 = -C(23)".into(), k1.clone(), -&set.casimir23));
    for (i, k) in set.k.iter().enumerate() {
        checks.push((
            format!("[Delta_S2,K{}] = 0", i + 1),
            set.sphere_laplacian.commutator(k),
            Operator::zero(),
        ));
    }
    checks.iter().map(|(n, l, r)| timed(n, l, r, dmax)).collect()
}

pub fn verify_symmetry_algebra(params: &Params, dmax: u32) -> Result<Vec<IdentityReport>> {
    verify_symmetry_with(&OperatorSet::new(params), dmax)
}

fn verify_omega_with(set: &OperatorSet, dmax: u32) -> Result<Vec<IdentityReport>> {
    let omega = &set.omega;
    let xt = &set.xtilde;
    let gamma = set.params.gamma();
    let pt = &set.coupled.parity;
    let main_rhs = &(&(omega * omega) + omega) - &scalar(&gamma * (&gamma + int(1)));
    let checks: Vec<(String, Operator, Operator)> = vec![
        ("{Omega,X~} = 0".into(), omega.anticommutator(xt), Operator::zero()),
        ("X~^2 = r^2".into(), xt * xt, Operator::mul_poly(TriPoly::r_squared())),
        (
            "Omega = -K1 R2 R3 - K2 R1 R3 - K3 R1 R2 + mu1 R1 + mu2 R2 + mu3 R3 + 1/2".into(),
            omega.clone(),
            set.omega_from_bi.clone(),
        ),
        (
            "-Delta_S2 = Omega^2 + Omega - gamma(gamma+1)".into(),
            -&set.sphere_laplacian,
            main_rhs,
        ),
        ("[Omega,P~] = 0".into(), omega.commutator(pt), Operator::zero()),
    ];
    let mut out: Vec<IdentityReport> =
        checks.iter().map(|(n, l, r)| timed(n, l, r, dmax)).collect::<Result<_>>()?;
    for (i, k) in set.k.iter().enumerate() {
        out.push(timed(&format!("[K{},P~] = 0", i + 1), &k.commutator(pt), &Operator::zero(), dmax)?);
    }
    Ok(out)
}

pub fn verify_omega_relations(params: &Params, dmax: u32) -> Result<Vec<IdentityReport>> {
    verify_omega_with(&OperatorSet::new(params), dmax)
}

fn verify_degrees_with(set: &OperatorSet, dmax: u32) -> Result<Vec<IdentityReport>> {
    let named = [
        ("Omega", &set.omega),
        ("K1", &set.k[0]),
        ("K2", &set.k[1]),
        ("K3", &set.k[2]),
        ("C(12)", &set.casimir12),
        ("C(23)", &set.casimir23),
        ("C~", &set.casimir_total),
    ];
    named
        .iter()
        .map(|(n, op)| preserves_degree(&format!("{n} preserves degree"), op, dmax))
        .collect()
}

/// Every exact identity of the suite for one parameter triple.
pub fn verify_all(params: &Params, dmax: u32) -> Result<Vec<IdentityReport>> {
    let set = OperatorSet::new(params);
    let mut out = Vec::new();
    for ax in Axis::ALL {
        out.extend(verify_sl_quadruple(&set.sl[ax.index()], &format!("(axis {ax})"), dmax)?);
    }
    out.extend(verify_casimir_constants(params, dmax)?);
    out.extend(verify_symmetry_with(&set, dmax)?);
    out.extend(verify_omega_with(&set, dmax)?);
    out.extend(verify_degrees_with(&set, dmax)?);
    Ok(out)
}

/// The sl_{-1}(2) relations and the Casimir value for the realization built
/// from the plain partial derivative instead of the Dunkl operator on
/// `axis`.
pub fn verify_without_reflection(
    axis: Axis,
    params: &Params,
    dmax: u32,
) -> Result<Vec<IdentityReport>> {
    let q = SlQuadruple::from_dunkl(axis, &build_dunkl_without_reflection(axis));
    let mut out = verify_sl_quadruple(&q, &format!("(axis {axis}, no reflection term)"), dmax)?;
    let target = -params.mu(axis).clone();
    out.push(timed(
        &format!("C({axis}) = {} (no reflection term)", fmt_rational(&target)),
        &crate::operator::casimir_of(&q),
        &scalar(target),
        dmax,
    )?);
    Ok(out)
}

/// Matrix of `op` from degree-`d_in` monomials to degree-`d_out` monomials,
/// as rows indexed by output monomials.
fn homogeneous_matrix(op: &Operator, d_in: u32, d_out: Option<u32>) -> Vec<Vec<Rational>> {
    let cols = Monomial::of_degree(d_in);
    let Some(d_out) = d_out else { return Vec::new() };
    let rows = Monomial::of_degree(d_out);
    let images: Vec<TriPoly> =
        cols.par_iter().map(|m| op.apply_unscaled(&TriPoly::monomial(*m))).collect();
    rows.iter()
        .map(|r| images.iter().map(|img| img.coefficient(r)).collect())
        .collect()
}

fn kernel_of(op: &Operator, degree: u32, shift: u32) -> Vec<TriPoly> {
    let cols = Monomial::of_degree(degree);
    let matrix = homogeneous_matrix(op, degree, degree.checked_sub(shift));
    linalg::nullspace(&matrix, cols.len())
        .into_iter()
        .map(|v| TriPoly::from_terms(cols.iter().copied().zip(v)))
        .collect()
}

/// Basis of the degree-N homogeneous polynomials annihilated by the Dunkl
/// Laplacian.
pub fn harmonic_kernel(n: u32, params: &Params) -> Vec<TriPoly> {
    kernel_of(&crate::operator::build_laplacian(params), n, 2)
}

/// Basis of the degree-N homogeneous polynomials annihilated by
/// D1 R2 R3 + D2 R3 + D3.
pub fn dirac_kernel(n: u32, params: &Params) -> Vec<TriPoly> {
    kernel_of(&crate::operator::build_dirac(params), n, 1)
}

/// omega_N = -(N + gamma + 1).
pub fn omega_eigenvalue(n: u32, params: &Params) -> Rational {
    -(int(n as i64) + params.gamma() + int(1))
}

/// delta_N = -N(N + 2 gamma + 1).
pub fn sphere_eigenvalue(n: u32, params: &Params) -> Rational {
    let nn = int(n as i64);
    -(&nn * (&nn + int(2) * params.gamma() + int(1)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(with = "serde_str")]
    pub omega_n: Rational,
    #[serde(with = "serde_str")]
    pub delta_n: Rational,
    /// dim of the degree-N harmonic kernel.
    pub multiplicity: usize,
    /// dim of the part of the kernel on which Omega = omega_N.
    pub lowest_weight_multiplicity: usize,
    /// Omega on the complementary part X~ (ker Dt at degree N-1).
    #[serde(with = "serde_str")]
    pub paired_eigenvalue: Rational,
    pub paired_multiplicity: usize,
}

/// Checks the spectral structure on degree-N harmonics and returns it.
///
/// The kernel splits as ker Dt (degree N) plus X~ ker Dt (degree N-1), of
/// dimensions N+1 and N. Omega is omega_N on the first piece and
/// -omega_{N-1} = N + gamma on the second; both values solve
/// Omega^2 + Omega - gamma(gamma+1) = -delta_N, which is verified on the
/// whole kernel through Delta_S2.
pub fn spectral_checks(n: u32, params: &Params) -> Result<SpectrumEntry> {
    let set = OperatorSet::new(params);
    let gamma = params.gamma();
    let omega_n = omega_eigenvalue(n, params);
    let delta_n = sphere_eigenvalue(n, params);
    let scalar_delta = -(&omega_n * &omega_n + &omega_n - &gamma * (&gamma + int(1)));
    if scalar_delta != delta_n {
        return Err(Error::SpectralMismatch {
            degree: n,
            index: 0,
            expected: format!("delta_N = {}", fmt_rational(&delta_n)),
        });
    }
    let kernel = harmonic_kernel(n, params);
    let expected_dim = 2 * n as usize + 1;
    if kernel.len() != expected_dim {
        return Err(Error::SpectralMismatch {
            degree: n,
            index: kernel.len(),
            expected: format!("kernel dimension {expected_dim}"),
        });
    }
    for (i, p) in kernel.iter().enumerate() {
        if set.sphere_laplacian.apply(p)? != p.scale(&delta_n) {
            return Err(Error::SpectralMismatch {
                degree: n,
                index: i,
                expected: format!("Delta_S2 eigenvalue {}", fmt_rational(&delta_n)),
            });
        }
    }
    let lowest = dirac_kernel(n, params);
    let paired_eigenvalue = int(n as i64) + &gamma;
    let paired: Vec<TriPoly> = if n == 0 {
        Vec::new()
    } else {
        dirac_kernel(n - 1, params)
            .iter()
            .map(|p| set.xtilde.apply(p))
            .collect::<Result<_>>()?
    };
    let lap = &set.laplacian;
    for (i, p) in lowest.iter().enumerate() {
        if !lap.apply(p)?.is_zero() || set.omega.apply(p)? != p.scale(&omega_n) {
            return Err(Error::SpectralMismatch {
                degree: n,
                index: i,
                expected: format!("harmonic Omega-eigenvector, eigenvalue {}", fmt_rational(&omega_n)),
            });
        }
    }
    for (i, p) in paired.iter().enumerate() {
        if !lap.apply(p)?.is_zero() || set.omega.apply(p)? != p.scale(&paired_eigenvalue) {
            return Err(Error::SpectralMismatch {
                degree: n,
                index: lowest.len() + i,
                expected: format!(
                    "harmonic Omega-eigenvector, eigenvalue {}",
                    fmt_rational(&paired_eigenvalue)
                ),
            });
        }
    }
    let monomials = Monomial::of_degree(n);
    let rows: Vec<Vec<Rational>> = lowest
        .iter()
        .chain(paired.iter())
        .map(|p| monomials.iter().map(|m| p.coefficient(m)).collect())
        .collect();
    if lowest.len() != n as usize + 1
        || paired.len() != n as usize
        || linalg::rank(&rows, monomials.len()) != expected_dim
    {
        return Err(Error::SpectralMismatch {
            degree: n,
            index: lowest.len() + paired.len(),
            expected: format!("ker Dt and X~ ker Dt spanning the {expected_dim}-dimensional kernel"),
        });
    }
    Ok(SpectrumEntry {
        n,
        omega_n,
        delta_n,
        multiplicity: kernel.len(),
        lowest_weight_multiplicity: lowest.len(),
        paired_eigenvalue,
        paired_multiplicity: paired.len(),
    })
}

/// Whether Omega acts as the single scalar omega_N on the whole degree-N
/// harmonic kernel. It does not for N >= 1 (see [`spectral_checks`]); the
/// report names the first basis element that is not an omega_N-eigenvector.
pub fn omega_scalar_on_kernel(n: u32, params: &Params) -> Result<IdentityReport> {
    let omega = crate::operator::build_omega(params);
    let omega_n = omega_eigenvalue(n, params);
    let kernel = harmonic_kernel(n, params);
    let name = format!("Omega = {} on ker Delta (degree {n})", fmt_rational(&omega_n));
    for (i, p) in kernel.iter().enumerate() {
        let image = omega.apply(p)?;
        let target = p.scale(&omega_n);
        if image != target {
            return Ok(IdentityReport::new(
                &name,
                n,
                i + 1,
                Some(Counterexample { monomial: p.to_string(), lhs: image.to_string(), rhs: target.to_string() }),
            ));
        }
    }
    Ok(IdentityReport::new(&name, n, kernel.len(), None))
}

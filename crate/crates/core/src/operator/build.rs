//! Constructors for the concrete operators: Dunkl operators and Laplacian,
//! the one-axis sl_{-1}(2) realization, its three-fold coupling, Casimirs,
//! the Bannai-Ito generators and the sphere Laplacian.

use serde::Serialize;

use crate::poly::{Axis, Params, TriPoly};
use crate::rational::{half, int};

use super::Operator;

/// Realization of the one-axis algebra.
///
/// `Polynomial` acts on polynomials directly. `Gaussian` conjugates by
/// exp(-r^2/2), i.e. replaces `D_i` by `D_i - x_i`, so that the constant
/// function plays the role of the lowest-weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    #[default]
    Polynomial,
    Gaussian,
}

fn mu_scalar(params: &Params, axis: Axis) -> Operator {
    Operator::labeled_scalar(params.mu(axis).clone(), format!("mu{axis}"))
}

fn r(axis: Axis) -> Operator {
    Operator::reflect(axis)
}

fn x(axis: Axis) -> Operator {
    Operator::mul_x(axis)
}

fn half_op() -> Operator {
    Operator::scalar(half())
}

/// D_i = d_i + (mu_i / x_i)(1 - R_i).
pub fn build_dunkl(axis: Axis, params: &Params) -> Operator {
    (Operator::partial(axis) + mu_scalar(params, axis) * Operator::difference_quotient(axis))
        .named(format!("D{axis}"))
}

/// Same as [`build_dunkl`] with the reflection term removed; used to check
/// that the identity suite notices.
pub fn build_dunkl_without_reflection(axis: Axis) -> Operator {
    Operator::partial(axis).named(format!("D{axis}"))
}

pub fn build_dunkl_in(axis: Axis, params: &Params, gauge: Gauge) -> Operator {
    match gauge {
        Gauge::Polynomial => build_dunkl(axis, params),
        Gauge::Gaussian => (build_dunkl(axis, params) - x(axis)).named(format!("G{axis}")),
    }
}

pub fn build_laplacian(params: &Params) -> Operator {
    let terms: Vec<Operator> = Axis::ALL
        .iter()
        .map(|ax| {
            let d = build_dunkl(*ax, params);
            &d * &d
        })
        .collect();
    Operator::checked_sum(&terms).expect("even-scale terms").named("Delta")
}

/// Generators (A0, A+, A-, P) of one copy of sl_{-1}(2).
#[derive(Debug, Clone, PartialEq)]
pub struct SlQuadruple {
    pub a0: Operator,
    pub aplus: Operator,
    pub aminus: Operator,
    pub parity: Operator,
}

impl SlQuadruple {
    /// A0 = -D^2/2 + x^2/2, A(+/-) = (x -/+ D)/sqrt(2), P = R, built from an
    /// arbitrary Dunkl-type operator on one axis.
    pub fn from_dunkl(axis: Axis, dunkl: &Operator) -> SlQuadruple {
        let xi = x(axis);
        let a0 = ((dunkl * dunkl).scale(&-half()) + (&xi * &xi).scale(&half()))
            .named(format!("A0({axis})"));
        let aplus = (&xi - dunkl).with_sqrt2(-1).named(format!("A+({axis})"));
        let aminus = (&xi + dunkl).with_sqrt2(-1).named(format!("A-({axis})"));
        SlQuadruple { a0, aplus, aminus, parity: r(axis).named(format!("P({axis})")) }
    }

    pub fn operators(&self) -> [&Operator; 4] {
        [&self.a0, &self.aplus, &self.aminus, &self.parity]
    }
}

pub fn build_sl_generators(axis: Axis, params: &Params) -> SlQuadruple {
    build_sl_generators_in(axis, params, Gauge::Polynomial)
}

pub fn build_sl_generators_in(axis: Axis, params: &Params, gauge: Gauge) -> SlQuadruple {
    SlQuadruple::from_dunkl(axis, &build_dunkl_in(axis, params, gauge))
}

pub fn build_coupled_generators(params: &Params) -> SlQuadruple {
    build_coupled_generators_in(params, Gauge::Polynomial)
}

/// A~0 = sum of A0, A~(+/-) = A(1) P2 P3 + A(2) P3 + A(3), P~ = P1 P2 P3.
pub fn build_coupled_generators_in(params: &Params, gauge: Gauge) -> SlQuadruple {
    let [s1, s2, s3] = Axis::ALL.map(|ax| build_sl_generators_in(ax, params, gauge));
    let p23 = &s2.parity * &s3.parity;
    let couple = |a1: &Operator, a2: &Operator, a3: &Operator| -> Operator {
        &(&(a1 * &p23) + &(a2 * &s3.parity)) + a3
    };
    SlQuadruple {
        a0: (&(&s1.a0 + &s2.a0) + &s3.a0).named("A0~"),
        aplus: couple(&s1.aplus, &s2.aplus, &s3.aplus).named("A+~"),
        aminus: couple(&s1.aminus, &s2.aminus, &s3.aminus).named("A-~"),
        parity: (&s1.parity * &p23).named("P~"),
    }
}

/// C = (A+ A- - A0 + 1/2) P.
pub fn casimir_of(q: &SlQuadruple) -> Operator {
    let p = &q.parity;
    &(&(&(&q.aplus * &q.aminus) * p) - &(&q.a0 * p)) + &(&half_op() * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CasimirKind {
    Initial(Axis),
    Intermediate12,
    Intermediate23,
    Total,
}

/// Casimir of the two-fold coupling of axes `i` and `j` (i before j):
/// (A+i Pj + A+j)(A-i Pj + A-j) Pi Pj - (A0i + A0j) Pi Pj + Pi Pj / 2.
fn intermediate_casimir(i: &SlQuadruple, j: &SlQuadruple) -> Operator {
    let ap = &(&i.aplus * &j.parity) + &j.aplus;
    let am = &(&i.aminus * &j.parity) + &j.aminus;
    let pij = &i.parity * &j.parity;
    &(&(&(&ap * &am) * &pij) - &(&(&i.a0 + &j.a0) * &pij)) + &(&half_op() * &pij)
}

pub fn build_casimir(kind: CasimirKind, params: &Params) -> Operator {
    match kind {
        CasimirKind::Initial(axis) => {
            casimir_of(&build_sl_generators(axis, params)).named(format!("C({axis})"))
        }
        CasimirKind::Intermediate12 => intermediate_casimir(
            &build_sl_generators(Axis::X1, params),
            &build_sl_generators(Axis::X2, params),
        )
        .named("C(12)"),
        CasimirKind::Intermediate23 => intermediate_casimir(
            &build_sl_generators(Axis::X2, params),
            &build_sl_generators(Axis::X3, params),
        )
        .named("C(23)"),
        CasimirKind::Total => casimir_of(&build_coupled_generators(params)).named("C~"),
    }
}

/// The two-fold Casimir in the literal form
/// (A+i Pi + A+j Pj)(A-i Pi + A-j Pj) - (A0i + A0j) Pi Pj + Pi Pj,
/// kept only to document that it differs from the coproduct form.
pub fn build_intermediate_casimir_literal(i: Axis, j: Axis, params: &Params) -> Operator {
    let (si, sj) = (build_sl_generators(i, params), build_sl_generators(j, params));
    let ap = &(&si.aplus * &si.parity) + &(&sj.aplus * &sj.parity);
    let am = &(&si.aminus * &si.parity) + &(&sj.aminus * &sj.parity);
    let pij = &si.parity * &sj.parity;
    (&(&(&ap * &am) - &(&(&si.a0 + &sj.a0) * &pij)) + &pij).named(format!("C({i}{j})'"))
}

/// Omega = C~ P~.
pub fn build_omega(params: &Params) -> Operator {
    let coupled = build_coupled_generators(params);
    (&build_casimir(CasimirKind::Total, params) * &coupled.parity).named("Omega")
}

/// X~ = (A~+ + A~-)/sqrt(2); the sqrt(2) powers cancel.
pub fn build_xtilde(params: &Params) -> Operator {
    let coupled = build_coupled_generators(params);
    (&coupled.aplus + &coupled.aminus).with_sqrt2(-1).named("X~")
}

/// K_k for the axis pair (i, j) with i < j and k the remaining axis:
/// (x_i D_j - x_j D_i) * tail + mu_i R_j + mu_j R_i + 1/2 R_i R_j.
fn bi_generator(i: Axis, j: Axis, tail: Operator, params: &Params, name: &str) -> Operator {
    let (di, dj) = (build_dunkl(i, params), build_dunkl(j, params));
    let angular = &(&x(i) * &dj) - &(&x(j) * &di);
    let terms = [
        &angular * &tail,
        &mu_scalar(params, i) * &r(j),
        &mu_scalar(params, j) * &r(i),
        (&r(i) * &r(j)).scale(&half()),
    ];
    Operator::checked_sum(&terms).expect("even-scale terms").named(name)
}

pub fn build_bi_generators(params: &Params) -> (Operator, Operator, Operator) {
    use Axis::*;
    let k1 = bi_generator(X2, X3, r(X2), params, "K1");
    let k2 = bi_generator(X1, X3, &r(X1) * &r(X2), params, "K2");
    let k3 = bi_generator(X1, X2, r(X1), params, "K3");
    (k1, k2, k3)
}

/// -K1 R2 R3 - K2 R1 R3 - K3 R1 R2 + mu1 R1 + mu2 R2 + mu3 R3 + 1/2.
pub fn build_omega_from_bi(params: &Params) -> Operator {
    use Axis::*;
    let (k1, k2, k3) = build_bi_generators(params);
    let terms = [
        -(&(&k1 * &r(X2)) * &r(X3)),
        -(&(&k2 * &r(X1)) * &r(X3)),
        -(&(&k3 * &r(X1)) * &r(X2)),
        &mu_scalar(params, X1) * &r(X1),
        &mu_scalar(params, X2) * &r(X2),
        &mu_scalar(params, X3) * &r(X3),
        half_op(),
    ];
    Operator::checked_sum(&terms).expect("even-scale terms").named("Omega'")
}

/// D1 R2 R3 + D2 R3 + D3, i.e. sqrt(2) A~- in the Gaussian gauge. Its kernel
/// on degree-N polynomials is the space of lowest-weight vectors.
pub fn build_dirac(params: &Params) -> Operator {
    use Axis::*;
    let [d1, d2, d3] = Axis::ALL.map(|ax| build_dunkl(ax, params));
    let terms = [&(&d1 * &r(X2)) * &r(X3), &d2 * &r(X3), d3];
    Operator::checked_sum(&terms).expect("even-scale terms").named("Dt")
}

/// E = x1 d1 + x2 d2 + x3 d3.
pub fn build_euler() -> Operator {
    let terms: Vec<Operator> =
        Axis::ALL.iter().map(|ax| &x(*ax) * &Operator::partial(*ax)).collect();
    Operator::checked_sum(&terms).expect("even-scale terms").named("E")
}

/// r^2 Delta - E (E + 2 gamma + 1): the angular part of the Dunkl Laplacian
/// written with Cartesian operators.
pub fn build_sphere_laplacian(params: &Params) -> Operator {
    let e = build_euler();
    let shift = Operator::scalar(int(2) * params.gamma() + int(1));
    let r2_delta = &Operator::mul_poly(TriPoly::r_squared()) * &build_laplacian(params);
    (&r2_delta - &(&e * &(&e + &shift))).named("Delta_S2")
}

/// Everything built once for a parameter triple.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub params: Params,
    pub dunkl: [Operator; 3],
    pub laplacian: Operator,
    pub sl: [SlQuadruple; 3],
    pub coupled: SlQuadruple,
    pub casimir_initial: [Operator; 3],
    pub casimir12: Operator,
    pub casimir23: Operator,
    pub casimir_total: Operator,
    pub omega: Operator,
    pub omega_from_bi: Operator,
    pub k: [Operator; 3],
    pub xtilde: Operator,
    pub sphere_laplacian: Operator,
    pub dirac: Operator,
}

impl OperatorSet {
    pub fn new(params: &Params) -> OperatorSet {
        let (k1, k2, k3) = build_bi_generators(params);
        OperatorSet {
            params: params.clone(),
            dunkl: Axis::ALL.map(|ax| build_dunkl(ax, params)),
            laplacian: build_laplacian(params),
            sl: Axis::ALL.map(|ax| build_sl_generators(ax, params)),
            coupled: build_coupled_generators(params),
            casimir_initial: Axis::ALL
                .map(|ax| build_casimir(CasimirKind::Initial(ax), params)),
            casimir12: build_casimir(CasimirKind::Intermediate12, params),
            casimir23: build_casimir(CasimirKind::Intermediate23, params),
            casimir_total: build_casimir(CasimirKind::Total, params),
            omega: build_omega(params),
            omega_from_bi: build_omega_from_bi(params),
            k: [k1, k2, k3],
            xtilde: build_xtilde(params),
            sphere_laplacian: build_sphere_laplacian(params),
            dirac: build_dirac(params),
        }
    }

    /// Operators that should map homogeneous polynomials to homogeneous
    /// polynomials of the same degree.
    pub fn degree_preserving(&self) -> Vec<&Operator> {
        vec![
            &self.omega,
            &self.k[0],
            &self.k[1],
            &self.k[2],
            &self.casimir12,
            &self.casimir23,
            &self.casimir_total,
        ]
    }
}

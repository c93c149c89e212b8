//! Exact structural checks on the cartesian lifts and quadrature
//! orthonormality of the sphere bases at a fixed degree.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::harmonics::basis::{admissible_indices, dunkl_harmonic, Family, SphereFunction};
use crate::harmonics::overlap::family;
use crate::harmonics::quadrature::build_quadrature;
use crate::identity::omega_eigenvalue;
use crate::operator::{Operator, OperatorSet};
use crate::poly::{Axis, Params, TriPoly};
use crate::rational::{half, int, sign_pow, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicsReport {
    #[serde(rename = "N")]
    pub n: u32,
    /// R_i Y = (1 - 2 e_i) Y for every Dunkl harmonic.
    pub reflection_covariant: bool,
    /// Laplacian of every Y, K3-basis and K1-basis lift vanishes.
    pub harmonic: bool,
    /// K3 on the K3 basis and K1 on the K1 basis give their eigenvalues.
    pub eigenrelations: bool,
    /// R1 R2 R3 acts as (-1)^N on both BI bases.
    pub total_parity: bool,
    /// Omega = -(N + gamma + 1) on both BI bases.
    pub omega_eigen: bool,
    pub orthonormality_y: f64,
    pub orthonormality_k3_basis: f64,
    pub orthonormality_k1_basis: f64,
    pub failures: Vec<String>,
}

impl HarmonicsReport {
    pub fn exact_checks_hold(&self) -> bool {
        self.reflection_covariant && self.harmonic && self.eigenrelations && self.total_parity && self.omega_eigen
    }

    pub fn max_orthonormality_residual(&self) -> f64 {
        self.orthonormality_y.max(self.orthonormality_k3_basis).max(self.orthonormality_k1_basis)
    }
}

fn is_eigen(op: &Operator, p: &TriPoly, value: &Rational) -> Result<bool> {
    Ok(op.apply(p)? == p.scale(value))
}

fn orthonormality(funcs: &[SphereFunction], params: &Params, degree: u32) -> f64 {
    let rule = build_quadrature(params, 2 * degree);
    let g = rule.gram(funcs.len(), |x| funcs.iter().map(|f| f.eval(x)).collect());
    (g - DMatrix::<f64>::identity(funcs.len(), funcs.len())).abs().max()
}

pub fn verify_harmonics(n: u32, params: &Params, ops: &OperatorSet) -> Result<HarmonicsReport> {
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
        ok
    };

    let ys: Vec<SphereFunction> = admissible_indices(n)
        .into_iter()
        .map(|i| dunkl_harmonic(i, params))
        .collect::<Result<_>>()?;
    let k3_basis = family(n, params, Family::Y)?;
    let k1_basis = family(n, params, Family::Z)?;

    let mut reflection_covariant = true;
    for (idx, y) in admissible_indices(n).iter().zip(&ys) {
        for axis in Axis::ALL {
            let expected = if idx.e[axis.index()] == 1 { -y.cartesian.clone() } else { y.cartesian.clone() };
            reflection_covariant &= check(y.cartesian.reflect(axis) == expected, format!("R{axis} on {}", y.label));
        }
    }

    let mut harmonic = true;
    for f in ys.iter().chain(&k3_basis).chain(&k1_basis) {
        harmonic &= check(ops.laplacian.apply(&f.cartesian)?.is_zero(), format!("Delta on {}", f.label));
    }

    let h = half();
    let mut eigenrelations = true;
    let mut total_parity = true;
    let mut omega_eigen = true;
    let parity = sign_pow(n as i64);
    let omega_n = omega_eigenvalue(n, params);
    let all_reflections = |p: &TriPoly| p.reflect(Axis::X1).reflect(Axis::X2).reflect(Axis::X3);
    for (k, (y, z)) in k3_basis.iter().zip(&k1_basis).enumerate() {
        let s = sign_pow(k as i64);
        let k3_value = &s * (int(k as i64) + params.mu1() + params.mu2() + &h);
        let k1_value = &s * (int(k as i64) + params.mu2() + params.mu3() + &h);
        eigenrelations &= check(is_eigen(&ops.k[2], &y.cartesian, &k3_value)?, format!("K3 on {}", y.label));
        eigenrelations &= check(is_eigen(&ops.k[0], &z.cartesian, &k1_value)?, format!("K1 on {}", z.label));
        for f in [y, z] {
            total_parity &= check(all_reflections(&f.cartesian) == f.cartesian.scale(&parity), format!("R1R2R3 on {}", f.label));
            omega_eigen &= check(is_eigen(&ops.omega, &f.cartesian, &omega_n)?, format!("Omega on {}", f.label));
        }
    }

    Ok(HarmonicsReport {
        n,
        reflection_covariant,
        harmonic,
        eigenrelations,
        total_parity,
        omega_eigen,
        orthonormality_y: orthonormality(&ys, params, n),
        orthonormality_k3_basis: orthonormality(&k3_basis, params, n),
        orthonormality_k1_basis: orthonormality(&k1_basis, params, n),
        failures,
    })
}

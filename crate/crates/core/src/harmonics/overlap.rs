//! Overlaps between the K3 and K1 eigenbases and their closed form in terms
//! of Bannai-Ito polynomials on the Racah grid.

use nalgebra::DMatrix;
use num_traits::Signed;
use serde::Serialize;

use crate::bi_poly::{bi_values, racah_spec, weights_and_norms};
use crate::error::{Error, Result};
use crate::harmonics::basis::{bi_basis, Family, SphereFunction};
use crate::harmonics::quadrature::build_quadrature;
use crate::poly::Params;
use crate::rational::{fmt_rational, to_f64};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapMatrix {
    #[serde(rename = "N")]
    pub n: usize,
    /// R[S][K] = <Y_K, Z_S>.
    #[serde(serialize_with = "rows")]
    pub matrix: DMatrix<f64>,
    /// Rows S whose sign was flipped so that the K = 0 column is positive.
    pub flipped_rows: Vec<usize>,
    pub unitarity_residual: f64,
}

fn rows<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    out.serialize(s)
}

pub fn family(big_n: u32, params: &Params, which: Family) -> Result<Vec<SphereFunction>> {
    (0..=big_n).map(|k| bi_basis(big_n, k, params, which)).collect()
}

/// max |M M^T - I| and max |M^T M - I|.
pub fn unitarity_residual(m: &DMatrix<f64>) -> f64 {
    let id = DMatrix::<f64>::identity(m.nrows(), m.ncols());
    let a = (m * m.transpose() - &id).abs().max();
    let b = (m.transpose() * m - &id).abs().max();
    a.max(b)
}

pub fn overlap_matrix(big_n: u32, params: &Params) -> Result<OverlapMatrix> {
    let ys = family(big_n, params, Family::Y)?;
    let zs = family(big_n, params, Family::Z)?;
    let rule = build_quadrature(params, 2 * big_n);
    let size = big_n as usize + 1;
    let eval = |fs: &[SphereFunction], x: [f64; 3]| fs.iter().map(|f| f.eval(x)).collect::<Vec<f64>>();
    let mut matrix = rule.cross(size, size, |x| eval(&zs, x), |x| eval(&ys, x));
    let flipped_rows: Vec<usize> = (0..size).filter(|&s| matrix[(s, 0)] < 0.0).collect();
    for &s in &flipped_rows {
        matrix.row_mut(s).neg_mut();
    }
    let unitarity_residual = unitarity_residual(&matrix);
    Ok(OverlapMatrix { n: size - 1, matrix, flipped_rows, unitarity_residual })
}

/// sqrt(w_S / (u_1 ... u_K)) B_K(x_S), the radicand checked exactly.
pub fn racah_closed_form(s: usize, k: usize, big_n: usize, params: &Params) -> Result<f64> {
    if s > big_n || k > big_n {
        return Err(Error::IndexOutOfRange { index: s.max(k) as u32, max: big_n as u32 });
    }
    Ok(racah_matrix(big_n, params)?[(s, k)])
}

pub fn racah_matrix(big_n: usize, params: &Params) -> Result<DMatrix<f64>> {
    let spec = racah_spec(params, big_n);
    let data = weights_and_norms(&spec)?;
    let mut out = DMatrix::zeros(big_n + 1, big_n + 1);
    for s in 0..=big_n {
        let values = bi_values(big_n, &data.grid[s], &spec.bi)?;
        for k in 0..=big_n {
            let radicand = &data.weights[s] / data.norm(k);
            if radicand.is_negative() {
                return Err(Error::NegativeRadicand {
                    what: format!("w_S / (u_1...u_K) at S={s}, K={k}"),
                    value: fmt_rational(&radicand),
                });
            }
            out[(s, k)] = to_f64(&radicand).sqrt() * to_f64(&values[k]);
        }
    }
    Ok(out)
}

/// max |R - C| entrywise.
pub fn closed_form_deviation(overlap: &DMatrix<f64>, closed: &DMatrix<f64>) -> f64 {
    (overlap - closed).abs().max()
}

//! Exact linear algebra over the rationals by fraction-free elimination.
//!
//! Rows are cleared to integers, eliminated with integer row operations and
//! kept primitive (content divided out) so entries stay small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Reduced echelon form with integer entries: returns the surviving rows and
/// their pivot columns. Each pivot column is zero in every other row.
fn echelon(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    for r in m.iter_mut() {
        make_primitive(r);
    }
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(found) = (next..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(next, found);
        let pivot_row = m[next].clone();
        let p = pivot_row[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                *v = &*v * &p - &a * pv;
            }
            make_primitive(row);
        }
        pivots.push(col);
        next += 1;
        if next == m.len() {
            break;
        }
    }
    m.truncate(next);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    echelon(rows, ncols).1.len()
}

/// A basis of the right nullspace `{v : rows * v = 0}`, one vector per free
/// column, scaled to primitive integer entries.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (m, pivots) = echelon(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        // x_free = L, x_pivot(i) = -m[i][free] * L / m[i][pivot(i)], with L the
        // lcm of the pivot entries involved.
        let l = m
            .iter()
            .zip(&pivots)
            .filter(|(row, _)| !row[free].is_zero())
            .fold(BigInt::one(), |acc, (row, &pc)| acc.lcm(&row[pc].abs()));
        let mut v = vec![BigInt::zero(); ncols];
        v[free] = l.clone();
        for (row, &pc) in m.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[pc] = -(&row[free] * &l) / &row[pc];
            }
        }
        make_primitive(&mut v);
        basis.push(v.into_iter().map(Rational::from_integer).collect());
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn times(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn rank_and_kernel_small() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(times(&a, &k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rational_entries() {
        let a = vec![vec![rat(1, 2), rat(-1, 3), int(0)], vec![int(0), rat(2, 5), rat(-1, 7)]];
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(times(&a, &k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn empty_matrix_kernel_is_everything() {
        let k = nullspace(&[], 4);
        assert_eq!(k.len(), 4);
        assert_eq!(rank(&[], 4), 0);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        assert!(nullspace(&a, 2).is_empty());
    }
}

//! Exact Gaussian elimination over [`Scalar`].

use crate::error::{Error, Result};
use crate::scalar::{Decision, Scalar, ZeroConfig};

pub type Matrix = Vec<Vec<Scalar>>;

fn pivot(m: &Matrix, col: usize, cfg: &ZeroConfig) -> Option<usize> {
    let mut fallback = None;
    for (r, row) in m.iter().enumerate().skip(col) {
        match row[col].decide(cfg) {
            Decision::NonZero => return Some(r),
            Decision::ProbablyNonZero | Decision::Indeterminate if fallback.is_none() => fallback = Some(r),
            _ => {}
        }
    }
    fallback
}

/// Inverse of a square matrix, or `Singular` when no usable pivot exists.
pub fn inverse(m: &Matrix, cfg: &ZeroConfig) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Singular("matrix is not square".into()));
    }
    let mut a = m.clone();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = pivot(&a, col, cfg).ok_or_else(|| Error::Singular(format!("no pivot in column {}", col + 1)))?;
        a.swap(col, p);
        inv.swap(col, p);
        let d = a[col][col].recip()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &d;
            inv[col][j] = &inv[col][j] * &d;
        }
        for r in 0..n {
            if r == col || a[r][col].is_structurally_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
            }
        }
    }
    Ok(inv)
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let k = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..k).map(|l| &row[l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

pub fn trace(a: &Matrix) -> Scalar {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

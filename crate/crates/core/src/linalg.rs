//! Small dense linear-algebra helpers shared by the fitting routines.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Solves `min ||A x - b||_2` with a Householder QR of `A`; rank is decided from
/// the singular values of the triangular factor (they equal those of `A`).
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (rows, cols) = a.shape();
    if b.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: b.len(),
        });
    }
    if cols == 0 {
        return Ok(DVector::zeros(0));
    }
    if rows < cols {
        return Err(Error::IllPosedFit {
            rank: numerical_rank(a),
            columns: cols,
        });
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let rank = numerical_rank(&r);
    if rank < cols {
        return Err(Error::IllPosedFit {
            rank,
            columns: cols,
        });
    }
    let mut qtb = b.clone();
    qr.q_tr_mul(&mut qtb);
    let head = qtb.rows(0, cols).into_owned();
    r.solve_upper_triangular(&head).ok_or(Error::IllPosedFit {
        rank,
        columns: cols,
    })
}

pub fn numerical_rank(a: &DMatrix<f64>) -> usize {
    let sv = a.singular_values();
    let smax = sv.max();
    if !(smax > 0.0) {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * smax).count()
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    }
}

/// Largest absolute entry.
pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `||A^T A - I||_inf` measured entrywise.
pub fn orthonormality_defect(a: &DMatrix<f64>) -> f64 {
    let gram = a.transpose() * a;
    let eye = DMatrix::<f64>::identity(a.ncols(), a.ncols());
    max_abs(&(gram - eye))
}

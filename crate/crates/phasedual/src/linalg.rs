//! Shared dense symmetric-matrix helpers.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Max |m - mᵀ| entry, for symmetry validation.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Eigendecomposition of a symmetric positive-definite matrix.
///
/// Rejects non-square and non-symmetric input (1e-12 relative) and
/// eigenvalues below `1e-12 * λ_max`. Returns `(eigenvalues, eigenvectors)`.
pub fn spd_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSpd(format!(
            "matrix is {}x{}, not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.amax().max(1e-300);
    if asymmetry(m) > 1e-12 * scale {
        return Err(Error::NotSpd(format!(
            "matrix is not symmetric (asymmetry {:.3e})",
            asymmetry(m)
        )));
    }
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    let max_eig = sym.eigenvalues.amax();
    let min_eig = sym.eigenvalues.min();
    if min_eig <= 1e-12 * max_eig.max(1e-300) {
        return Err(Error::NotSpd(format!(
            "not positive definite (eigenvalues {})",
            sym.eigenvalues
                .iter()
                .map(|v| format!("{v:.6}"))
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    Ok((sym.eigenvalues, sym.eigenvectors))
}

fn spd_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let (vals, vecs) = spd_eigen(m)?;
    let d = DMatrix::from_diagonal(&vals.map(f));
    let out = &vecs * d * vecs.transpose();
    Ok(symmetrize(&out))
}

/// Average out roundoff asymmetry from products like VDVᵀ.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn spd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    spd_map(m, f64::sqrt)
}

pub fn spd_inv_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    spd_map(m, |v| 1.0 / v.sqrt())
}

pub fn spd_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    spd_map(m, |v| 1.0 / v)
}

/// Quadratic form x·(M⁻¹ x) for SPD `m`, via Cholesky solve.
pub fn inv_quadratic_form(m: &DMatrix<f64>, x: &DVector<f64>) -> Result<f64> {
    let chol = nalgebra::Cholesky::new(m.clone())
        .ok_or_else(|| Error::NotSpd("Cholesky factorization failed".into()))?;
    let y = chol.solve(x);
    Ok(x.dot(&y))
}

/// 2-norm condition number by singular values; `Err` when numerically rank
/// deficient.
pub fn condition_number(m: &DMatrix<f64>) -> Result<f64> {
    let sv = m.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin <= 0.0 || smin < 1e-300 * smax {
        return Err(Error::Singular("zero singular value".into()));
    }
    Ok(smax / smin)
}

/// Inverse that rejects numerically singular input (condition > 1e12).
pub fn checked_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let cond = condition_number(m)?;
    if cond > 1e12 {
        return Err(Error::Singular(format!("condition number {cond:.3e}")));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("inverse failed".into()))
}

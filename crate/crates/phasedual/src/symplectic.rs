//! The standard symplectic structure, quantum blobs, and Lagrangian polar
//! duality.
//!
//! Convention, fixed once for the whole crate: phase-space vectors are
//! ordered `z = (x₁…xₙ, p₁…pₙ)` and the symplectic form is `σ(z, z′) = Jz·z′`
//! with
//!
//! ```text
//! J = [ 0   I ]
//!     [ −I  0 ]
//! ```
//!
//! A quantum blob is the image `S·B²ⁿ(√ℏ)` of the phase-space ball under a
//! linear symplectic map; for an ellipsoid `X = {x : Ax·x ≤ ℏ}` the map
//! `S = diag(A^{−1/2}, A^{1/2})` sends the ball onto the largest ellipsoid
//! inscribed in `X × X^ℏ`.

use crate::geometry::ConvexBody;
use crate::linalg;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Entrywise tolerance for `SᵀJS = J`.
pub const SYMPLECTIC_TOL: f64 = 1e-12;

/// The standard form matrix `J` on `ℝ^(2n)`.
pub fn standard_j(half_dim: usize) -> DMatrix<f64> {
    let n = half_dim;
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// `σ(z, z′) = Jz·z′`; antisymmetric and bilinear.
pub fn symplectic_form(z: &DVector<f64>, z_prime: &DVector<f64>) -> Result<f64> {
    if z.len() != z_prime.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            got: z_prime.len(),
        });
    }
    if !z.len().is_multiple_of(2) || z.is_empty() {
        return Err(Error::InvalidBody(format!(
            "phase-space vectors have even dimension, got {}",
            z.len()
        )));
    }
    let n = z.len() / 2;
    // Jz = (p, −x) in block form; avoid materializing J.
    let mut acc = 0.0;
    for i in 0..n {
        acc += z[n + i] * z_prime[i] - z[i] * z_prime[n + i];
    }
    Ok(acc)
}

/// Max-norm defect `‖SᵀJS − J‖_max`.
pub fn symplectic_defect(s: &DMatrix<f64>) -> Result<f64> {
    if s.nrows() != s.ncols() || !s.nrows().is_multiple_of(2) || s.is_empty() {
        return Err(Error::InvalidBody(format!(
            "symplectic candidates are square with even dimension, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let j = standard_j(s.nrows() / 2);
    Ok((s.transpose() * &j * s - j).amax())
}

/// Is `‖SᵀJS − J‖_max ≤ tol`?
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(symplectic_defect(s)? <= tol)
}

/// A validated linear symplectic map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymplecticMap {
    /// Row-major 2n×2n matrix.
    matrix: Vec<Vec<f64>>,
    half_dim: usize,
    /// The `‖SᵀJS − J‖_max` defect certified at construction.
    defect: f64,
}

impl SymplecticMap {
    pub fn new(matrix: DMatrix<f64>, tol: f64) -> Result<SymplecticMap> {
        let defect = symplectic_defect(&matrix)?;
        if defect > tol {
            return Err(Error::InvalidBody(format!(
                "matrix is not symplectic: defect {defect:.3e} exceeds {tol:.3e}"
            )));
        }
        Ok(SymplecticMap {
            half_dim: matrix.nrows() / 2,
            matrix: (0..matrix.nrows())
                .map(|i| matrix.row(i).iter().copied().collect())
                .collect(),
            defect,
        })
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let d = 2 * self.half_dim;
        DMatrix::from_row_slice(
            d,
            d,
            &self.matrix.iter().flatten().copied().collect::<Vec<_>>(),
        )
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }
}

/// Phase-space ellipsoid `{z : Qz·z ≤ ℏ}` with SPD `Q`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseSpaceEllipsoid {
    /// Row-major 2n×2n SPD matrix.
    matrix: Vec<Vec<f64>>,
    pub hbar: f64,
}

impl PhaseSpaceEllipsoid {
    pub fn new(q: DMatrix<f64>, hbar: f64) -> Result<PhaseSpaceEllipsoid> {
        linalg::spd_eigen(&q)?;
        if !(hbar > 0.0) {
            return Err(Error::InvalidBody("hbar must be positive".into()));
        }
        Ok(PhaseSpaceEllipsoid {
            matrix: (0..q.nrows())
                .map(|i| q.row(i).iter().copied().collect())
                .collect(),
            hbar,
        })
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.matrix.len();
        DMatrix::from_row_slice(
            d,
            d,
            &self.matrix.iter().flatten().copied().collect::<Vec<_>>(),
        )
    }

    pub fn membership(&self, z: &DVector<f64>) -> Result<bool> {
        let q = self.matrix();
        if z.len() != q.nrows() {
            return Err(Error::DimensionMismatch {
                expected: q.nrows(),
                got: z.len(),
            });
        }
        Ok((q * z).dot(z) <= self.hbar)
    }

    /// Exact volume `Vol(B^(2n)(√ℏ)) / √det Q`.
    pub fn volume(&self) -> Result<f64> {
        let q = self.matrix();
        let (eigs, _) = linalg::spd_eigen(&q)?;
        let det: f64 = eigs.iter().product();
        Ok(crate::volumes::ball_volume(q.nrows(), self.hbar.sqrt()) / det.sqrt())
    }
}

/// Blob factorization of `X × X^ℏ` for an ellipsoidal `X`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumBlob {
    pub map: SymplecticMap,
    pub blob: PhaseSpaceEllipsoid,
}

/// Build the quantum blob of the ellipsoid `{x : Ax·x ≤ ℏ}`:
/// `S = diag(A^{−1/2}, A^{1/2})` and the blob `{z : diag(A, A⁻¹) z·z ≤ ℏ}`,
/// which is `S·B²ⁿ(√ℏ)` and sits inside `X × X^ℏ`.
pub fn quantum_blob(a: &DMatrix<f64>, hbar: f64) -> Result<QuantumBlob> {
    let n = a.nrows();
    let (sqrt_a, inv_sqrt_a) = (linalg::spd_sqrt(a)?, linalg::spd_inv_sqrt(a)?);
    let inv_a = linalg::spd_inverse(a)?;

    let mut s = DMatrix::zeros(2 * n, 2 * n);
    let mut q = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = inv_sqrt_a[(i, j)];
            s[(n + i, n + j)] = sqrt_a[(i, j)];
            q[(i, j)] = a[(i, j)];
            q[(n + i, n + j)] = inv_a[(i, j)];
        }
    }
    Ok(QuantumBlob {
        map: SymplecticMap::new(s, SYMPLECTIC_TOL)?,
        blob: PhaseSpaceEllipsoid::new(q, hbar)?,
    })
}

/// A frame whose columns span a Lagrangian plane: `LᵀJL = 0`, rank n.
#[derive(Debug, Clone)]
pub struct LagrangianFrame {
    basis: DMatrix<f64>,
}

impl LagrangianFrame {
    pub fn new(basis: DMatrix<f64>) -> Result<LagrangianFrame> {
        if !basis.nrows().is_multiple_of(2) || basis.ncols() * 2 != basis.nrows() {
            return Err(Error::InvalidBody(format!(
                "Lagrangian frame must be 2n×n, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        let n = basis.ncols();
        if basis.rank(1e-12) != n {
            return Err(Error::InvalidBody(
                "frame columns are rank deficient".into(),
            ));
        }
        let j = standard_j(n);
        let isotropy = (basis.transpose() * &j * &basis).amax();
        let scale = basis.amax().powi(2).max(1e-300);
        if isotropy > 1e-12 * scale {
            return Err(Error::InvalidBody(format!(
                "frame is not isotropic: ‖LᵀJL‖_max = {isotropy:.3e}"
            )));
        }
        Ok(LagrangianFrame { basis })
    }

    /// The x-coordinate plane `span(e₁…eₙ)`.
    pub fn position_plane(n: usize) -> LagrangianFrame {
        let mut b = DMatrix::zeros(2 * n, n);
        for i in 0..n {
            b[(i, i)] = 1.0;
        }
        LagrangianFrame { basis: b }
    }

    /// The p-coordinate plane `span(eₙ₊₁…e₂ₙ)`.
    pub fn momentum_plane(n: usize) -> LagrangianFrame {
        let mut b = DMatrix::zeros(2 * n, n);
        for i in 0..n {
            b[(n + i, i)] = 1.0;
        }
        LagrangianFrame { basis: b }
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn half_dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Polar duality between transverse Lagrangian planes: the dual of a body
/// `C` of frame coefficients on ℓ is `{c′ : (Mc)·c′ ≤ ℏ for all c ∈ C}` with
/// `M = L′ᵀJL`, i.e. the ordinary polar dual of `M·C` (the sign of `M` is
/// immaterial for symmetric `C`).
pub fn lagrangian_polar_dual(
    frame: &LagrangianFrame,
    frame_prime: &LagrangianFrame,
    body: &ConvexBody,
) -> Result<ConvexBody> {
    let n = frame.half_dim();
    if frame_prime.half_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: frame_prime.half_dim(),
        });
    }
    if body.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: body.dim(),
        });
    }
    if !body.is_symmetric() || !body.is_centered() {
        return Err(Error::Unsupported(
            "Lagrangian duality needs a centered symmetric coefficient body".into(),
        ));
    }
    let j = standard_j(n);
    let pairing = frame_prime.basis().transpose() * j * frame.basis();
    let cond = linalg::condition_number(&pairing)
        .map_err(|_| Error::Singular("frames are not transverse: LᵀJL′ is singular".into()))?;
    if cond > 1e12 {
        return Err(Error::Singular(format!(
            "frames are numerically non-transverse (condition {cond:.3e})"
        )));
    }
    body.linear_image(&pairing)?.polar_dual()
}

/// Width of `X × X^ℏ` for an interval `X = [−a, a]`: the area of the
/// rectangle `[−a, a] × [−ℏ/a, ℏ/a]`, computed from the actual dual interval.
/// Capacities in n ≥ 2 are out of scope, so any longer half-width vector is
/// rejected.
pub fn gromov_width(half_widths: &[f64], hbar: f64) -> Result<f64> {
    match half_widths {
        [a] => {
            let x = ConvexBody::cuboid(DVector::from_column_slice(&[*a]), hbar)?;
            let dual = x.polar_dual()?;
            let dual_half = dual.support(&DVector::from_column_slice(&[1.0]))?;
            Ok((2.0 * a) * (2.0 * dual_half))
        }
        [] => Err(Error::InvalidBody(
            "at least one half-width required".into(),
        )),
        _ => Err(Error::Unsupported(
            "symplectic width is implemented for n = 1 only".into(),
        )),
    }
}

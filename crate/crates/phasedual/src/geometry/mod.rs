//! Symmetric convex bodies and polar duality.
//!
//! A body is one of five kinds (ball, ellipsoid `{x : Ax·x ≤ ℏ}`, symmetric
//! V-polytope `conv(V ∪ −V)`, symmetric H-polytope `{x : |uⱼ·x| ≤ ℏ}`, or an
//! axis-aligned box), together with the action scale ℏ and an optional center
//! offset for translated bodies. The polar dual
//!
//! ```text
//! X^ℏ = { p : p·x ≤ ℏ for all x ∈ X }
//! ```
//!
//! is computed exactly by representation swap: balls invert their radius
//! about √ℏ, ellipsoid matrices invert, vertices become halfspace normals and
//! vice versa, and boxes become cross-polytopes.

mod hull2d;
mod santalo;

pub use hull2d::{convex_hull_2d, halfplane_polygon, polygon_area};
pub use santalo::{santalo_point, SantaloSearch};

use crate::linalg;
use crate::lp;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Boundary tolerance for LP-backed membership tests.
const FEAS_TOL: f64 = 1e-9;

/// Shape payload of a [`ConvexBody`].
#[derive(Debug, Clone)]
pub enum BodyKind {
    Ball {
        radius: f64,
        dim: usize,
    },
    /// `{x : Ax·x ≤ ℏ}` for symmetric positive-definite `A`.
    Ellipsoid {
        matrix: DMatrix<f64>,
    },
    /// `conv(±g₁, …, ±gₖ)` when `symmetric`, `conv(g₁, …, gₖ)` otherwise.
    /// Asymmetric hulls exist only to feed the Santaló search.
    VPolytope {
        generators: Vec<DVector<f64>>,
        symmetric: bool,
    },
    /// `{x : |uⱼ·x| ≤ ℏ for all j}`.
    HPolytope {
        normals: Vec<DVector<f64>>,
    },
    /// Axis-aligned `∏ [−aⱼ, aⱼ]`.
    Box {
        half_widths: DVector<f64>,
    },
}

/// A compact convex body with nonempty interior, symmetric about its center.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    kind: BodyKind,
    hbar: f64,
    center: DVector<f64>,
}

/// Serializable body description (the documented JSON schema).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        hbar: f64,
        radius: f64,
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Ellipsoid {
        hbar: f64,
        /// Row-major n×n matrix.
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Vpolytope {
        hbar: f64,
        vertices: Vec<Vec<f64>>,
        #[serde(default = "default_true")]
        symmetric: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Hpolytope {
        hbar: f64,
        normals: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Box {
        hbar: f64,
        half_widths: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    /// Box with half-widths `√(2σⱼ)` from per-axis variances: the minimal
    /// uncertainty product state's variance box.
    VarianceBox { hbar: f64, variances: Vec<f64> },
}

fn default_true() -> bool {
    true
}

impl ConvexBody {
    /// Validate and build a body from its serializable description.
    pub fn from_spec(spec: &BodySpec) -> Result<ConvexBody> {
        let body = match spec {
            BodySpec::Ball {
                hbar, radius, dim, ..
            } => ConvexBody::ball(*radius, *dim, *hbar)?,
            BodySpec::Ellipsoid { hbar, matrix, .. } => {
                let n = matrix.len();
                if n == 0 || matrix.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidBody(
                        "ellipsoid matrix must be square and nonempty".into(),
                    ));
                }
                let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
                ConvexBody::ellipsoid(DMatrix::from_row_slice(n, n, &flat), *hbar)?
            }
            BodySpec::Vpolytope {
                hbar,
                vertices,
                symmetric,
                ..
            } => {
                let gens = vertices
                    .iter()
                    .map(|v| DVector::from_column_slice(v))
                    .collect();
                ConvexBody::vpolytope_with_symmetry(gens, *symmetric, *hbar)?
            }
            BodySpec::Hpolytope { hbar, normals, .. } => {
                let ns = normals
                    .iter()
                    .map(|v| DVector::from_column_slice(v))
                    .collect();
                ConvexBody::hpolytope(ns, *hbar)?
            }
            BodySpec::Box {
                hbar, half_widths, ..
            } => ConvexBody::cuboid(DVector::from_column_slice(half_widths), *hbar)?,
            BodySpec::VarianceBox { hbar, variances } => {
                return ConvexBody::from_variances(variances, *hbar);
            }
        };
        match spec_center(spec) {
            Some(c) => body.with_center(DVector::from_column_slice(c)),
            None => Ok(body),
        }
    }

    /// The serializable description of this body.
    pub fn to_spec(&self) -> BodySpec {
        let center = if self.is_centered() {
            None
        } else {
            Some(self.center.iter().copied().collect())
        };
        match &self.kind {
            BodyKind::Ball { radius, dim } => BodySpec::Ball {
                hbar: self.hbar,
                radius: *radius,
                dim: *dim,
                center,
            },
            BodyKind::Ellipsoid { matrix } => BodySpec::Ellipsoid {
                hbar: self.hbar,
                matrix: (0..matrix.nrows())
                    .map(|i| matrix.row(i).iter().copied().collect())
                    .collect(),
                center,
            },
            BodyKind::VPolytope {
                generators,
                symmetric,
            } => BodySpec::Vpolytope {
                hbar: self.hbar,
                vertices: generators
                    .iter()
                    .map(|g| g.iter().copied().collect())
                    .collect(),
                symmetric: *symmetric,
                center,
            },
            BodyKind::HPolytope { normals } => BodySpec::Hpolytope {
                hbar: self.hbar,
                normals: normals
                    .iter()
                    .map(|u| u.iter().copied().collect())
                    .collect(),
                center,
            },
            BodyKind::Box { half_widths } => BodySpec::Box {
                hbar: self.hbar,
                half_widths: half_widths.iter().copied().collect(),
                center,
            },
        }
    }

    pub fn ball(radius: f64, dim: usize, hbar: f64) -> Result<ConvexBody> {
        check_hbar(hbar)?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidBody(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidBody(
                "ball dimension must be at least 1".into(),
            ));
        }
        Ok(ConvexBody {
            kind: BodyKind::Ball { radius, dim },
            hbar,
            center: DVector::zeros(dim),
        })
    }

    pub fn ellipsoid(matrix: DMatrix<f64>, hbar: f64) -> Result<ConvexBody> {
        check_hbar(hbar)?;
        // spd_eigen rejects asymmetry and nonpositive eigenvalues with a
        // diagnostic naming the offending values.
        linalg::spd_eigen(&matrix)?;
        let dim = matrix.nrows();
        Ok(ConvexBody {
            kind: BodyKind::Ellipsoid { matrix },
            hbar,
            center: DVector::zeros(dim),
        })
    }

    /// Symmetric hull `conv(V ∪ −V)` of the given generators.
    pub fn vpolytope(generators: Vec<DVector<f64>>, hbar: f64) -> Result<ConvexBody> {
        ConvexBody::vpolytope_with_symmetry(generators, true, hbar)
    }

    /// Plain hull `conv(V)` without the ± closure. Only the Santaló search
    /// accepts these.
    pub fn vpolytope_hull(vertices: Vec<DVector<f64>>, hbar: f64) -> Result<ConvexBody> {
        ConvexBody::vpolytope_with_symmetry(vertices, false, hbar)
    }

    pub fn vpolytope_with_symmetry(
        generators: Vec<DVector<f64>>,
        symmetric: bool,
        hbar: f64,
    ) -> Result<ConvexBody> {
        check_hbar(hbar)?;
        if generators.is_empty() {
            return Err(Error::InvalidBody(
                "vpolytope has an empty vertex list".into(),
            ));
        }
        let dim = generators[0].len();
        if dim == 0 {
            return Err(Error::InvalidBody(
                "vpolytope vertices must have dimension ≥ 1".into(),
            ));
        }
        if generators.iter().any(|g| g.len() != dim) {
            return Err(Error::InvalidBody(
                "vpolytope vertices have mixed dimensions".into(),
            ));
        }
        if generators.iter().any(|g| g.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidBody(
                "vpolytope vertices must be finite".into(),
            ));
        }
        if dim > 6 {
            return Err(Error::Unsupported(format!(
                "vpolytope membership is dimension-capped at 6, got {dim}"
            )));
        }
        // Nonempty interior: the generators must span linearly (symmetric
        // hull) or affinely (plain hull).
        let spanning = if symmetric {
            let m = DMatrix::from_columns(&generators);
            m.rank(1e-12) == dim
        } else {
            let base = &generators[0];
            let diffs: Vec<DVector<f64>> = generators[1..].iter().map(|g| g - base).collect();
            !diffs.is_empty() && DMatrix::from_columns(&diffs).rank(1e-12) == dim
        };
        if !spanning {
            return Err(Error::InvalidBody(
                "vpolytope vertices do not span: the body has empty interior".into(),
            ));
        }
        Ok(ConvexBody {
            kind: BodyKind::VPolytope {
                generators,
                symmetric,
            },
            hbar,
            center: DVector::zeros(dim),
        })
    }

    pub fn hpolytope(normals: Vec<DVector<f64>>, hbar: f64) -> Result<ConvexBody> {
        check_hbar(hbar)?;
        if normals.is_empty() {
            return Err(Error::InvalidBody(
                "hpolytope has an empty normal list".into(),
            ));
        }
        let dim = normals[0].len();
        if normals.iter().any(|u| u.len() != dim) {
            return Err(Error::InvalidBody(
                "hpolytope normals have mixed dimensions".into(),
            ));
        }
        if normals.iter().any(|u| u.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidBody(
                "hpolytope normals must be finite".into(),
            ));
        }
        let m = DMatrix::from_columns(&normals);
        if m.rank(1e-12) != dim {
            return Err(Error::InvalidBody(
                "hpolytope normals do not span: the body is unbounded".into(),
            ));
        }
        Ok(ConvexBody {
            kind: BodyKind::HPolytope { normals },
            hbar,
            center: DVector::zeros(dim),
        })
    }

    pub fn cuboid(half_widths: DVector<f64>, hbar: f64) -> Result<ConvexBody> {
        check_hbar(hbar)?;
        if half_widths.is_empty() {
            return Err(Error::InvalidBody(
                "box needs at least one half-width".into(),
            ));
        }
        if half_widths.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidBody(format!(
                "box half-widths must be positive and finite, got {:?}",
                half_widths.iter().copied().collect::<Vec<_>>()
            )));
        }
        let dim = half_widths.len();
        Ok(ConvexBody {
            kind: BodyKind::Box { half_widths },
            hbar,
            center: DVector::zeros(dim),
        })
    }

    /// Variance box `∏ [−√(2σⱼ), √(2σⱼ)]`.
    pub fn from_variances(variances: &[f64], hbar: f64) -> Result<ConvexBody> {
        if variances.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::InvalidBody(
                "variance-box variances must be positive".into(),
            ));
        }
        let hw =
            DVector::from_iterator(variances.len(), variances.iter().map(|s| (2.0 * s).sqrt()));
        ConvexBody::cuboid(hw, hbar)
    }

    /// The same body translated to be centered at `center`.
    pub fn with_center(mut self, center: DVector<f64>) -> Result<ConvexBody> {
        if center.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: center.len(),
            });
        }
        if center.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("center must be finite".into()));
        }
        self.center = center;
        Ok(self)
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            BodyKind::Ball { dim, .. } => *dim,
            BodyKind::Ellipsoid { matrix } => matrix.nrows(),
            BodyKind::VPolytope { generators, .. } => generators[0].len(),
            BodyKind::HPolytope { normals } => normals[0].len(),
            BodyKind::Box { half_widths } => half_widths.len(),
        }
    }

    pub fn is_centered(&self) -> bool {
        self.center.amax() == 0.0
    }

    /// False only for plain-hull V-polytopes.
    pub fn is_symmetric(&self) -> bool {
        !matches!(
            self.kind,
            BodyKind::VPolytope {
                symmetric: false,
                ..
            }
        )
    }

    /// Is `x` in the body? Closed-form for ball/ellipsoid/box/H-polytope;
    /// a dense linear-feasibility solve for V-polytopes.
    pub fn membership(&self, x: &DVector<f64>) -> Result<bool> {
        let y = self.relative(x)?;
        Ok(match &self.kind {
            BodyKind::Ball { radius, .. } => y.norm_squared() <= radius * radius,
            BodyKind::Ellipsoid { matrix } => (matrix * &y).dot(&y) <= self.hbar,
            BodyKind::Box { half_widths } => {
                y.iter().zip(half_widths.iter()).all(|(v, a)| v.abs() <= *a)
            }
            BodyKind::HPolytope { normals } => normals.iter().all(|u| u.dot(&y).abs() <= self.hbar),
            BodyKind::VPolytope {
                generators,
                symmetric: true,
            } => match lp::symmetric_hull_gauge(generators, &y) {
                Some(g) => g <= 1.0 + FEAS_TOL,
                None => false,
            },
            BodyKind::VPolytope {
                generators,
                symmetric: false,
            } => lp::in_convex_hull(generators, &y, FEAS_TOL),
        })
    }

    /// Support function `h_X(u) = max { u·x : x ∈ X }`.
    pub fn support(&self, u: &DVector<f64>) -> Result<f64> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.len(),
            });
        }
        if u.amax() == 0.0 {
            return Err(Error::InvalidBody(
                "support direction must be nonzero".into(),
            ));
        }
        let centered = match &self.kind {
            BodyKind::Ball { radius, .. } => radius * u.norm(),
            BodyKind::Ellipsoid { matrix } => {
                (self.hbar * linalg::inv_quadratic_form(matrix, u)?).sqrt()
            }
            BodyKind::Box { half_widths } => u
                .iter()
                .zip(half_widths.iter())
                .map(|(ui, a)| a * ui.abs())
                .sum(),
            BodyKind::VPolytope {
                generators,
                symmetric,
            } => {
                let vals = generators.iter().map(|g| g.dot(u));
                if *symmetric {
                    vals.map(f64::abs).fold(f64::NEG_INFINITY, f64::max)
                } else {
                    vals.fold(f64::NEG_INFINITY, f64::max)
                }
            }
            BodyKind::HPolytope { normals } => {
                // h of the dual of conv(±normals): ℏ · gauge of u there.
                let g = lp::symmetric_hull_gauge(normals, u)
                    .ok_or_else(|| Error::Singular("hpolytope normals do not span".into()))?;
                self.hbar * g
            }
        };
        Ok(centered + self.center.dot(u))
    }

    /// Minkowski gauge of `x` about the center: least `t ≥ 0` with
    /// `x − c ∈ t·(X − c)`. Not defined for asymmetric hulls.
    pub fn gauge(&self, x: &DVector<f64>) -> Result<f64> {
        let y = self.relative(x)?;
        match &self.kind {
            BodyKind::Ball { radius, .. } => Ok(y.norm() / radius),
            BodyKind::Ellipsoid { matrix } => Ok(((matrix * &y).dot(&y) / self.hbar).sqrt()),
            BodyKind::Box { half_widths } => Ok(y
                .iter()
                .zip(half_widths.iter())
                .map(|(v, a)| v.abs() / a)
                .fold(0.0, f64::max)),
            BodyKind::HPolytope { normals } => Ok(normals
                .iter()
                .map(|u| u.dot(&y).abs() / self.hbar)
                .fold(0.0, f64::max)),
            BodyKind::VPolytope {
                generators,
                symmetric: true,
            } => lp::symmetric_hull_gauge(generators, &y)
                .ok_or_else(|| Error::Singular("point outside generator span".into())),
            BodyKind::VPolytope {
                symmetric: false, ..
            } => Err(Error::Unsupported(
                "gauge of an asymmetric hull is not defined".into(),
            )),
        }
    }

    /// The polar dual `X^ℏ`, exact by representation swap. Requires a
    /// centered body; use [`ConvexBody::polar_dual_about`] for translates.
    pub fn polar_dual(&self) -> Result<ConvexBody> {
        if !self.is_centered() {
            return Err(Error::TranslatedBody);
        }
        let hbar = self.hbar;
        Ok(match &self.kind {
            BodyKind::Ball { radius, dim } => ConvexBody::ball(hbar / radius, *dim, hbar)?,
            BodyKind::Ellipsoid { matrix } => {
                ConvexBody::ellipsoid(linalg::spd_inverse(matrix)?, hbar)?
            }
            BodyKind::VPolytope {
                generators,
                symmetric: true,
            } => ConvexBody::hpolytope(generators.clone(), hbar)?,
            BodyKind::VPolytope {
                symmetric: false, ..
            } => {
                return Err(Error::Unsupported(
                    "polar dual of an asymmetric hull requires polar_dual_about".into(),
                ))
            }
            BodyKind::HPolytope { normals } => ConvexBody::vpolytope(normals.clone(), hbar)?,
            BodyKind::Box { half_widths } => {
                let n = half_widths.len();
                let gens = (0..n)
                    .map(|j| {
                        let mut e = DVector::zeros(n);
                        e[j] = hbar / half_widths[j];
                        e
                    })
                    .collect();
                ConvexBody::vpolytope(gens, hbar)?
            }
        })
    }

    /// Polar dual about an interior point `x0`: translate by `−x0`, then
    /// dualize. When `x0` is the symmetry center this is the exact
    /// representation-swap dual; for other interior points the dual is a
    /// genuinely asymmetric set and is materialized as a polygon in 2D only.
    pub fn polar_dual_about(&self, x0: &DVector<f64>) -> Result<ConvexBody> {
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x0.len(),
            });
        }
        if !self.strictly_interior(x0, 1e-9)? {
            return Err(Error::NotInterior);
        }
        let at_center = {
            let d = x0 - &self.center;
            d.amax() <= 1e-12 * (1.0 + self.center.amax())
        };
        if at_center && self.is_symmetric() {
            let mut recentered = self.clone();
            recentered.center = DVector::zeros(self.dim());
            return recentered.polar_dual();
        }
        if self.dim() == 2 {
            let verts = self.polygon_vertices()?;
            let shifted: Vec<DVector<f64>> = verts.iter().map(|v| v - x0).collect();
            // (X − x0)^ℏ = { p : (v − x0)·p ≤ ℏ for every vertex v }.
            let constraints: Vec<(DVector<f64>, f64)> =
                shifted.iter().map(|v| (v.clone(), self.hbar)).collect();
            let dual_verts = halfplane_polygon(&constraints)?;
            return ConvexBody::vpolytope_hull(dual_verts, self.hbar);
        }
        Err(Error::Unsupported(
            "off-center polar dual is only materialized in 2D".into(),
        ))
    }

    /// Image `M·X` in the tightest closed form.
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<ConvexBody> {
        let n = self.dim();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.nrows().max(m.ncols()),
            });
        }
        let m_inv = linalg::checked_inverse(m)?;
        let hbar = self.hbar;
        let kind = match &self.kind {
            BodyKind::Ball { radius, dim } => {
                // Conformal maps keep balls balls.
                let mtm = m.transpose() * m;
                let s2 = mtm.diagonal().mean();
                let is_conformal =
                    (&mtm - DMatrix::from_diagonal_element(n, n, s2)).amax() <= 1e-12 * s2.abs();
                if is_conformal {
                    BodyKind::Ball {
                        radius: radius * s2.sqrt(),
                        dim: *dim,
                    }
                } else {
                    let a = DMatrix::from_diagonal_element(n, n, hbar / (radius * radius));
                    BodyKind::Ellipsoid {
                        matrix: linalg::symmetrize(&(m_inv.transpose() * a * &m_inv)),
                    }
                }
            }
            BodyKind::Ellipsoid { matrix } => BodyKind::Ellipsoid {
                matrix: linalg::symmetrize(&(m_inv.transpose() * matrix * &m_inv)),
            },
            BodyKind::VPolytope {
                generators,
                symmetric,
            } => BodyKind::VPolytope {
                generators: generators.iter().map(|g| m * g).collect(),
                symmetric: *symmetric,
            },
            BodyKind::HPolytope { normals } => BodyKind::HPolytope {
                normals: normals.iter().map(|u| m_inv.transpose() * u).collect(),
            },
            BodyKind::Box { half_widths } => {
                let is_diagonal =
                    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].abs() <= 1e-14 * m.amax()));
                if is_diagonal {
                    BodyKind::Box {
                        half_widths: DVector::from_iterator(
                            n,
                            (0..n).map(|j| m[(j, j)].abs() * half_widths[j]),
                        ),
                    }
                } else {
                    // Half of the 2^n sign patterns generate the symmetric hull.
                    let gens = box_generators(half_widths).iter().map(|g| m * g).collect();
                    BodyKind::VPolytope {
                        generators: gens,
                        symmetric: true,
                    }
                }
            }
        };
        Ok(ConvexBody {
            kind,
            hbar,
            center: m * &self.center,
        })
    }

    /// Strict interiority of `x`, with a relative boundary margin.
    pub fn strictly_interior(&self, x: &DVector<f64>, margin: f64) -> Result<bool> {
        match &self.kind {
            BodyKind::VPolytope {
                generators,
                symmetric: false,
            } => {
                let y = self.relative(x)?;
                // Shrink the hull about its vertex centroid and test membership.
                let mut centroid = DVector::zeros(self.dim());
                for g in generators {
                    centroid += g;
                }
                centroid /= generators.len() as f64;
                let shrunk: Vec<DVector<f64>> = generators
                    .iter()
                    .map(|g| &centroid + (g - &centroid) * (1.0 - margin))
                    .collect();
                Ok(lp::in_convex_hull(&shrunk, &y, 0.0))
            }
            _ => Ok(self.gauge(x)? < 1.0 - margin),
        }
    }

    /// Axis-aligned bounding box `(lo, hi)` from the support function.
    pub fn bounding_box(&self) -> Result<(DVector<f64>, DVector<f64>)> {
        let n = self.dim();
        let mut lo = DVector::zeros(n);
        let mut hi = DVector::zeros(n);
        for j in 0..n {
            let mut e = DVector::zeros(n);
            e[j] = 1.0;
            hi[j] = self.support(&e)?;
            e[j] = -1.0;
            lo[j] = -self.support(&e)?;
            if !(hi[j] > lo[j]) {
                return Err(Error::DegenerateBox);
            }
        }
        Ok((lo, hi))
    }

    /// Boundary point in direction `u` from the center.
    pub fn boundary_point(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        let g = self.gauge(&(u + &self.center))?;
        if g <= 0.0 {
            return Err(Error::InvalidBody("direction must be nonzero".into()));
        }
        Ok(&self.center + u / g)
    }

    /// Hull-ordered vertex list for 2D polytope-like bodies (absolute
    /// coordinates, counterclockwise).
    pub fn polygon_vertices(&self) -> Result<Vec<DVector<f64>>> {
        if self.dim() != 2 {
            return Err(Error::Unsupported("polygon vertices need a 2D body".into()));
        }
        let pts: Vec<DVector<f64>> = match &self.kind {
            BodyKind::VPolytope {
                generators,
                symmetric,
            } => {
                let mut pts: Vec<DVector<f64>> = generators.clone();
                if *symmetric {
                    pts.extend(generators.iter().map(|g| -g));
                }
                convex_hull_2d(&pts)
            }
            BodyKind::Box { half_widths } => {
                let (a, b) = (half_widths[0], half_widths[1]);
                vec![
                    DVector::from_column_slice(&[a, b]),
                    DVector::from_column_slice(&[-a, b]),
                    DVector::from_column_slice(&[-a, -b]),
                    DVector::from_column_slice(&[a, -b]),
                ]
            }
            BodyKind::HPolytope { normals } => {
                let mut constraints = Vec::with_capacity(2 * normals.len());
                for u in normals {
                    constraints.push((u.clone(), self.hbar));
                    constraints.push((-u, self.hbar));
                }
                halfplane_polygon(&constraints)?
            }
            _ => {
                return Err(Error::Unsupported(
                    "polygon vertices are defined for polytope-like kinds".into(),
                ))
            }
        };
        Ok(pts.into_iter().map(|p| p + &self.center).collect())
    }

    fn relative(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(x - &self.center)
    }
}

/// Generators of a box as a symmetric hull: the 2^(n−1) sign patterns with
/// positive first coordinate.
pub(crate) fn box_generators(half_widths: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = half_widths.len();
    let mut gens = Vec::with_capacity(1 << (n - 1));
    for mask in 0..(1u32 << (n - 1)) {
        let mut v = DVector::zeros(n);
        v[0] = half_widths[0];
        for j in 1..n {
            let sign = if mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 };
            v[j] = sign * half_widths[j];
        }
        gens.push(v);
    }
    gens
}

fn spec_center(spec: &BodySpec) -> Option<&Vec<f64>> {
    match spec {
        BodySpec::Ball { center, .. }
        | BodySpec::Ellipsoid { center, .. }
        | BodySpec::Vpolytope { center, .. }
        | BodySpec::Hpolytope { center, .. }
        | BodySpec::Box { center, .. } => center.as_ref(),
        BodySpec::VarianceBox { .. } => None,
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::InvalidBody(format!(
            "hbar must be positive and finite, got {hbar}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests;

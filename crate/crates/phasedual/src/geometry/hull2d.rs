//! 2D hull utilities: monotone-chain convex hull, halfplane-intersection
//! vertex enumeration, and the shoelace area. V↔H conversion is deliberately
//! implemented here only; higher dimensions use representation-swap duality
//! and Monte Carlo instead.

use crate::{Error, Result};
use nalgebra::DVector;

fn cross(o: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise convex hull of a 2D point set (Andrew's monotone chain).
/// Collinear interior points are dropped.
pub fn convex_hull_2d(points: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut pts: Vec<DVector<f64>> = points.to_vec();
    pts.sort_by(|a, b| (a[0], a[1]).partial_cmp(&(b[0], b[1])).unwrap());
    let scale = pts.iter().map(|p| p.amax()).fold(1.0f64, f64::max);
    pts.dedup_by(|a, b| {
        (a[0] - b[0]).abs() <= 1e-12 * scale && (a[1] - b[1]).abs() <= 1e-12 * scale
    });
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let eps = 1e-12 * scale * scale;
    let chain = |iter: &mut dyn Iterator<Item = &DVector<f64>>| {
        let mut half: Vec<DVector<f64>> = Vec::with_capacity(n);
        for p in iter {
            while half.len() >= 2 && cross(&half[half.len() - 2], &half[half.len() - 1], p) <= eps {
                half.pop();
            }
            half.push(p.clone());
        }
        half
    };
    let mut lower = chain(&mut pts.iter());
    let mut upper = chain(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Vertices of the bounded intersection `{x : uᵢ·x ≤ rᵢ}`, hull-ordered.
///
/// Enumerates pairwise line intersections and keeps the feasible ones. Errors
/// when the intersection is empty or unbounded (fewer than 3 vertices).
pub fn halfplane_polygon(constraints: &[(DVector<f64>, f64)]) -> Result<Vec<DVector<f64>>> {
    let scale = constraints
        .iter()
        .map(|(u, _)| u.amax())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut candidates = Vec::new();
    for i in 0..constraints.len() {
        for j in (i + 1)..constraints.len() {
            let (ui, ri) = &constraints[i];
            let (uj, rj) = &constraints[j];
            let det = ui[0] * uj[1] - ui[1] * uj[0];
            if det.abs() <= 1e-12 * scale * scale {
                continue;
            }
            let x = (ri * uj[1] - rj * ui[1]) / det;
            let y = (ui[0] * rj - uj[0] * ri) / det;
            let p = DVector::from_column_slice(&[x, y]);
            let feasible = constraints
                .iter()
                .all(|(u, r)| u.dot(&p) <= r + 1e-9 * (1.0 + r.abs()));
            if feasible {
                candidates.push(p);
            }
        }
    }
    let hull = convex_hull_2d(&candidates);
    if hull.len() < 3 {
        return Err(Error::InvalidBody(
            "halfplane intersection is empty or degenerate".into(),
        ));
    }
    Ok(hull)
}

/// Shoelace area of a hull-ordered polygon.
pub fn polygon_area(vertices: &[DVector<f64>]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        twice += a[0] * b[1] - b[0] * a[1];
    }
    twice.abs() * 0.5
}

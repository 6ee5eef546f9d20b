//! Small dense linear programs.
//!
//! Two-phase primal simplex with Bland's rule, dimensioned for the desk-scale
//! problems this crate produces: gauge evaluations and hull memberships for
//! V-polytopes, and support functions of halfspace intersections. Constraint
//! counts stay in the tens, so a dense tableau is the right tool.

use nalgebra::DVector;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

/// Minimize `c·x` subject to `A x = b`, `x ≥ 0`.
///
/// `a` is row-major `m × n`. Rows with negative `b` are sign-flipped
/// internally.
pub fn solve_min(c: &[f64], a: &[f64], b: &[f64], m: usize, n: usize) -> LpOutcome {
    assert_eq!(a.len(), m * n);
    assert_eq!(c.len(), n);
    assert_eq!(b.len(), m);

    // Tableau: m constraint rows over n real + m artificial columns, plus rhs.
    let width = n + m + 1;
    let mut t = vec![0.0; m * width];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i * width + j] = flip * a[i * n + j];
        }
        t[i * width + n + i] = 1.0;
        t[i * width + n + m] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut obj = vec![0.0; width];
    for i in 0..m {
        for j in 0..width {
            obj[j] -= t[i * width + j];
        }
    }
    obj[n..n + m].fill(0.0);
    if !pivot_to_optimality(&mut t, &mut obj, &mut basis, m, width, n + m) {
        // Phase 1 objective is bounded below by construction.
        unreachable!("phase-1 simplex reported unbounded");
    }
    if -obj[width - 1] > TOL * (1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max)) {
        return LpOutcome::Infeasible;
    }

    // Drive any remaining artificial variables out of the basis.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i * width + j].abs() > TOL) {
                pivot(&mut t, &mut obj, i, j, m, width);
                basis[i] = j;
            }
            // An all-zero row is a redundant constraint; the artificial stays
            // basic at level zero and never re-enters.
        }
    }

    // Phase 2: real objective, artificial columns barred from entering.
    let mut obj2 = vec![0.0; width];
    obj2[..n].copy_from_slice(c);
    for i in 0..m {
        if basis[i] < n {
            let coef = obj2[basis[i]];
            if coef != 0.0 {
                for j in 0..width {
                    obj2[j] -= coef * t[i * width + j];
                }
            }
        }
    }
    if !pivot_to_optimality(&mut t, &mut obj2, &mut basis, m, width, n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i * width + width - 1];
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, objective }
}

/// Bland-rule pivoting until no reduced cost is negative. Columns at index
/// `limit` and beyond never enter. Returns false on unboundedness.
fn pivot_to_optimality(
    t: &mut [f64],
    obj: &mut [f64],
    basis: &mut [usize],
    m: usize,
    width: usize,
    limit: usize,
) -> bool {
    loop {
        let Some(enter) = (0..limit).find(|&j| obj[j] < -TOL) else {
            return true;
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let aij = t[i * width + enter];
            if aij > TOL {
                let ratio = t[i * width + width - 1] / aij;
                let better = ratio < best_ratio - TOL
                    || (ratio < best_ratio + TOL && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(row) = leave else {
            return false;
        };
        pivot(t, obj, row, enter, m, width);
        basis[row] = enter;
    }
}

fn pivot(t: &mut [f64], obj: &mut [f64], row: usize, col: usize, m: usize, width: usize) {
    let piv = t[row * width + col];
    for j in 0..width {
        t[row * width + j] /= piv;
    }
    for i in 0..m {
        if i != row {
            let f = t[i * width + col];
            if f != 0.0 {
                for j in 0..width {
                    t[i * width + j] -= f * t[row * width + j];
                }
            }
        }
    }
    let f = obj[col];
    if f != 0.0 {
        for j in 0..width {
            obj[j] -= f * t[row * width + j];
        }
    }
}

/// Gauge of a point with respect to the symmetric hull `conv(±g₁, …, ±gₖ)`:
/// the least `t ≥ 0` with `x ∈ t·conv(±g)`, i.e. `min Σ|cᵢ|` over
/// representations `x = Σ cᵢ gᵢ`. `None` when `x` is outside the span.
pub fn symmetric_hull_gauge(generators: &[DVector<f64>], x: &DVector<f64>) -> Option<f64> {
    let n = x.len();
    let k = generators.len();
    // cᵢ = pᵢ − qᵢ with p, q ≥ 0, minimizing Σ(pᵢ + qᵢ).
    let vars = 2 * k;
    let mut a = vec![0.0; n * vars];
    for (i, g) in generators.iter().enumerate() {
        for r in 0..n {
            a[r * vars + i] = g[r];
            a[r * vars + k + i] = -g[r];
        }
    }
    let b: Vec<f64> = x.iter().copied().collect();
    let c = vec![1.0; vars];
    match solve_min(&c, &a, &b, n, vars) {
        LpOutcome::Optimal { objective, .. } => Some(objective.max(0.0)),
        _ => None,
    }
}

/// Is `x` in the plain convex hull of `generators` (no ± closure)?
/// Feasibility of `x = Σ λᵢ gᵢ`, `λ ≥ 0`, `Σ λᵢ = 1`, padded by `slack` on
/// the combination constraint to absorb roundoff at the boundary.
pub fn in_convex_hull(generators: &[DVector<f64>], x: &DVector<f64>, slack: f64) -> bool {
    let n = x.len();
    let k = generators.len();
    let m = n + 1;
    let mut a = vec![0.0; m * k];
    for (i, g) in generators.iter().enumerate() {
        for r in 0..n {
            a[r * k + i] = g[r];
        }
        a[n * k + i] = 1.0;
    }
    let mut b: Vec<f64> = x.iter().copied().collect();
    b.push(1.0);
    // Zero objective: phase 1 is the whole feasibility check. Boundary
    // points can fail it by rounding, so an infeasible verdict is retried
    // with the query pulled toward the vertex centroid by `slack`.
    let c = vec![0.0; k];
    match solve_min(&c, &a, &b, m, k) {
        LpOutcome::Optimal { .. } => true,
        LpOutcome::Infeasible => {
            if slack > 0.0 {
                // Retry with the point pulled slightly toward the hull centroid.
                let mut centroid = DVector::zeros(n);
                for g in generators {
                    centroid += g;
                }
                centroid /= k as f64;
                let pulled = x + (&centroid - x) * slack;
                matches!(
                    solve_min(
                        &c,
                        &a,
                        &{
                            let mut b2: Vec<f64> = pulled.iter().copied().collect();
                            b2.push(1.0);
                            b2
                        },
                        m,
                        k
                    ),
                    LpOutcome::Optimal { .. }
                )
            } else {
                false
            }
        }
        LpOutcome::Unbounded => unreachable!("feasibility LP cannot be unbounded"),
    }
}

/// Maximize `objective·p` over `{p : rows(normals)·p ≤ rhs}` with `p` free.
/// Returns `None` when the polyhedron is unbounded in that direction.
pub fn max_over_halfspaces(
    objective: &DVector<f64>,
    normals: &[DVector<f64>],
    rhs: &[f64],
) -> Option<f64> {
    let n = objective.len();
    let m = normals.len();
    // p = u − v, slack s per constraint.
    let vars = 2 * n + m;
    let mut a = vec![0.0; m * vars];
    for (i, nu) in normals.iter().enumerate() {
        for j in 0..n {
            a[i * vars + j] = nu[j];
            a[i * vars + n + j] = -nu[j];
        }
        a[i * vars + 2 * n + i] = 1.0;
    }
    let mut c = vec![0.0; vars];
    for j in 0..n {
        c[j] = -objective[j];
        c[n + j] = objective[j];
    }
    match solve_min(&c, &a, rhs, m, vars) {
        LpOutcome::Optimal { objective, .. } => Some(-objective),
        _ => None,
    }
}

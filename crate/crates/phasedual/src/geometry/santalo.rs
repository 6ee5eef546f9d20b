//! Santaló point: the unique interior point about which the polar dual has
//! minimal volume.
//!
//! The dual volume `Vol((X − x₀)^ℏ)` is convex in `x₀` and has no usable
//! gradient here, so the minimizer is located by simplex-reflection descent
//! (Nelder–Mead) with restarts. Every objective evaluation reuses the same
//! ChaCha substreams and the same fixed sampling box (common random numbers),
//! which turns the Monte Carlo noise into a frozen, slowly varying field the
//! descent can cross. A deterministic parabolic polish on an axis stencil
//! sharpens the minimizer afterwards.

use super::{BodyKind, ConvexBody};
use crate::lp;
use crate::rng::{McRng, BATCH_SIZE};
use crate::{Error, Result};
use nalgebra::DVector;

/// Tuning knobs for [`santalo_point`]. `Default` is sized for desk-scale
/// bodies in n ≤ 3.
#[derive(Debug, Clone)]
pub struct SantaloSearch {
    /// Monte Carlo samples per objective evaluation.
    pub mc_samples: u64,
    pub seed: u64,
    /// Convergence tolerance on the simplex diameter, relative to body scale.
    pub tolerance: f64,
    pub max_iters: usize,
    /// Total descent passes (first pass plus restarts from the incumbent).
    pub restarts: usize,
}

impl Default for SantaloSearch {
    fn default() -> Self {
        SantaloSearch {
            mc_samples: 60_000,
            seed: 0,
            tolerance: 2e-3,
            max_iters: 400,
            restarts: 2,
        }
    }
}

/// Find the Santaló point of `body`. Accepts translated and asymmetric-hull
/// bodies; this is the one geometry operation that does.
pub fn santalo_point(body: &ConvexBody, search: &SantaloSearch) -> Result<DVector<f64>> {
    let objective = DualVolume::prepare(body)?;
    let n = body.dim();
    let scale = objective.step_scale.amax().max(1e-12);

    let start = objective.start.clone();
    let mut best = start.clone();
    let mut step_factor = 0.15;
    let mut converged = false;
    let mut best_f = f64::INFINITY;

    for _ in 0..search.restarts.max(1) {
        let sampling_box = objective.sampling_box(&best, 1.6)?;
        let eval = |x: &DVector<f64>| objective.eval(x, &sampling_box, search);

        // Initial simplex: incumbent plus one axis offset per dimension,
        // pulled back inside if an offset leaves the body.
        let mut simplex: Vec<DVector<f64>> = vec![best.clone()];
        for j in 0..n {
            let mut p = best.clone();
            p[j] += step_factor * objective.step_scale[j];
            for _ in 0..30 {
                if objective.interior(&p) {
                    break;
                }
                p = (&p + &best) * 0.5;
            }
            simplex.push(p);
        }
        let mut fvals: Vec<f64> = simplex.iter().map(&eval).collect();

        for _ in 0..search.max_iters {
            let mut order: Vec<usize> = (0..simplex.len()).collect();
            order.sort_by(|&a, &b| fvals[a].total_cmp(&fvals[b]));
            let (ibest, iworst) = (order[0], order[n]);
            let isecond_worst = order[n - 1];

            let diameter = simplex
                .iter()
                .map(|p| (p - &simplex[ibest]).amax())
                .fold(0.0f64, f64::max);
            if diameter <= search.tolerance * scale {
                converged = true;
                break;
            }

            let mut centroid = DVector::zeros(n);
            for (i, p) in simplex.iter().enumerate() {
                if i != iworst {
                    centroid += p;
                }
            }
            centroid /= n as f64;

            let reflected = &centroid + (&centroid - &simplex[iworst]);
            let f_reflected = eval(&reflected);
            if f_reflected < fvals[ibest] {
                let expanded = &centroid + (&centroid - &simplex[iworst]) * 2.0;
                let f_expanded = eval(&expanded);
                if f_expanded < f_reflected {
                    simplex[iworst] = expanded;
                    fvals[iworst] = f_expanded;
                } else {
                    simplex[iworst] = reflected;
                    fvals[iworst] = f_reflected;
                }
            } else if f_reflected < fvals[isecond_worst] {
                simplex[iworst] = reflected;
                fvals[iworst] = f_reflected;
            } else {
                let contracted = &centroid + (&simplex[iworst] - &centroid) * 0.5;
                let f_contracted = eval(&contracted);
                if f_contracted < fvals[iworst] {
                    simplex[iworst] = contracted;
                    fvals[iworst] = f_contracted;
                } else {
                    // Shrink toward the incumbent.
                    let anchor = simplex[ibest].clone();
                    for (i, p) in simplex.iter_mut().enumerate() {
                        if i != ibest {
                            *p = (&anchor + &*p) * 0.5;
                            fvals[i] = eval(p);
                        }
                    }
                }
            }
        }

        let ibest = (0..simplex.len())
            .min_by(|&a, &b| fvals[a].total_cmp(&fvals[b]))
            .unwrap();
        if fvals[ibest] < best_f {
            best_f = fvals[ibest];
            best = simplex[ibest].clone();
        }
        step_factor *= 0.25;
    }

    if !converged || !best_f.is_finite() {
        return Err(Error::NoConvergence {
            best: best.iter().copied().collect(),
            objective: best_f,
        });
    }

    // Parabolic polish per axis with a larger sample budget.
    let sampling_box = objective.sampling_box(&best, 1.6)?;
    let polish = SantaloSearch {
        mc_samples: search.mc_samples * 4,
        ..search.clone()
    };
    let eval = |x: &DVector<f64>| objective.eval(x, &sampling_box, &polish);
    let f0 = eval(&best);
    for j in 0..n {
        let h = (0.03 * objective.step_scale[j]).max(2.0 * search.tolerance * scale);
        let mut plus = best.clone();
        plus[j] += h;
        let mut minus = best.clone();
        minus[j] -= h;
        if !objective.interior(&plus) || !objective.interior(&minus) {
            continue;
        }
        let (fp, fm) = (eval(&plus), eval(&minus));
        let curvature = fp - 2.0 * f0 + fm;
        if curvature > 0.0 && fp.is_finite() && fm.is_finite() {
            let delta = (-0.5 * h * (fp - fm) / curvature).clamp(-h, h);
            best[j] += delta;
        }
    }

    Ok(best)
}

/// Precomputed machinery for evaluating `Vol((X − x₀)^ℏ)` by rejection
/// sampling.
struct DualVolume {
    hbar: f64,
    route: Route,
    start: DVector<f64>,
    step_scale: DVector<f64>,
    body: ConvexBody,
}

enum Route {
    /// Dual is `{p : (v − x₀)·p ≤ ℏ}` over the absolute vertex list.
    Vertices(Vec<DVector<f64>>),
    /// Dual membership is `p·(c − x₀) + h_C(p) ≤ ℏ` with closed-form
    /// centered support; radius bound from the inradius.
    Smooth { inradius: f64 },
}

impl DualVolume {
    fn prepare(body: &ConvexBody) -> Result<DualVolume> {
        let n = body.dim();
        let route = match body.kind() {
            BodyKind::VPolytope {
                generators,
                symmetric,
            } => {
                let mut verts: Vec<DVector<f64>> =
                    generators.iter().map(|g| g + body.center()).collect();
                if *symmetric {
                    verts.extend(generators.iter().map(|g| -g + body.center()));
                }
                Route::Vertices(verts)
            }
            BodyKind::Box { half_widths } => {
                let mut verts = Vec::new();
                for g in super::box_generators(half_widths) {
                    verts.push(&g + body.center());
                    verts.push(-&g + body.center());
                }
                Route::Vertices(verts)
            }
            BodyKind::HPolytope { .. } if n == 2 => Route::Vertices(body.polygon_vertices()?),
            BodyKind::HPolytope { .. } => {
                return Err(Error::Unsupported(
                    "Santaló search over H-polytopes is implemented in 2D only".into(),
                ))
            }
            BodyKind::Ball { radius, .. } => Route::Smooth { inradius: *radius },
            BodyKind::Ellipsoid { matrix } => {
                let (eigs, _) = crate::linalg::spd_eigen(matrix)?;
                Route::Smooth {
                    inradius: (body.hbar() / eigs.max()).sqrt(),
                }
            }
        };
        let start = match &route {
            Route::Vertices(verts) => {
                let mut c = DVector::zeros(n);
                for v in verts {
                    c += v;
                }
                c / verts.len() as f64
            }
            Route::Smooth { .. } => body.center().clone(),
        };
        let (lo, hi) = body.bounding_box()?;
        let step_scale = DVector::from_iterator(n, (0..n).map(|j| 0.5 * (hi[j] - lo[j])));
        Ok(DualVolume {
            hbar: body.hbar(),
            route,
            start,
            step_scale,
            body: body.clone(),
        })
    }

    fn interior(&self, x0: &DVector<f64>) -> bool {
        self.body.strictly_interior(x0, 0.02).unwrap_or(false)
    }

    /// Bounding box of the dual at `x0`, inflated, used as the fixed
    /// sampling box for a whole descent pass.
    fn sampling_box(&self, x0: &DVector<f64>, inflate: f64) -> Result<Vec<(f64, f64)>> {
        let n = x0.len();
        match &self.route {
            Route::Vertices(verts) => {
                let normals: Vec<DVector<f64>> = verts.iter().map(|v| v - x0).collect();
                let rhs = vec![self.hbar; normals.len()];
                let mut bounds = Vec::with_capacity(n);
                for j in 0..n {
                    let mut e = DVector::zeros(n);
                    e[j] = 1.0;
                    let hi =
                        lp::max_over_halfspaces(&e, &normals, &rhs).ok_or(Error::NotInterior)?;
                    e[j] = -1.0;
                    let lo =
                        -lp::max_over_halfspaces(&e, &normals, &rhs).ok_or(Error::NotInterior)?;
                    let mid = 0.5 * (hi + lo);
                    let half = 0.5 * (hi - lo) * inflate;
                    bounds.push((mid - half, mid + half));
                }
                Ok(bounds)
            }
            Route::Smooth { inradius } => {
                let d = self.body.center() - x0;
                let g = self.body.gauge(&(self.body.center() + &d))?;
                if g >= 0.98 {
                    return Err(Error::NotInterior);
                }
                let r = inflate * self.hbar / (inradius * (1.0 - g));
                Ok(vec![(-r, r); n])
            }
        }
    }

    /// Monte Carlo dual volume at `x0` over a fixed sampling box. Returns
    /// infinity when `x0` is too close to the boundary or the dual escapes
    /// the trust box.
    fn eval(&self, x0: &DVector<f64>, bounds: &[(f64, f64)], search: &SantaloSearch) -> f64 {
        if !self.interior(x0) {
            return f64::INFINITY;
        }
        let Ok(own_box) = self.sampling_box(x0, 1.0) else {
            return f64::INFINITY;
        };
        if own_box
            .iter()
            .zip(bounds)
            .any(|((lo, hi), (blo, bhi))| lo < blo || hi > bhi)
        {
            return f64::INFINITY;
        }

        type Predicate = Box<dyn Fn(&[f64]) -> bool>;
        let n = x0.len();
        let membership: Predicate = match &self.route {
            Route::Vertices(verts) => {
                let normals: Vec<DVector<f64>> = verts.iter().map(|v| v - x0).collect();
                let hbar = self.hbar;
                Box::new(move |p: &[f64]| {
                    normals
                        .iter()
                        .all(|u| u.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() <= hbar)
                })
            }
            Route::Smooth { .. } => {
                let d = self.body.center() - x0;
                let hbar = self.hbar;
                let body = self.body.clone();
                Box::new(move |p: &[f64]| {
                    let pv = DVector::from_column_slice(p);
                    let support = match body.kind() {
                        BodyKind::Ball { radius, .. } => radius * pv.norm(),
                        BodyKind::Ellipsoid { matrix } => {
                            match crate::linalg::inv_quadratic_form(matrix, &pv) {
                                Ok(q) => (hbar * q).sqrt(),
                                Err(_) => return false,
                            }
                        }
                        _ => unreachable!("smooth route covers ball and ellipsoid only"),
                    };
                    pv.dot(&d) + support <= hbar
                })
            }
        };

        let box_volume: f64 = bounds.iter().map(|(lo, hi)| hi - lo).product();
        let mut hits: u64 = 0;
        let mut remaining = search.mc_samples;
        let mut stream = 0u64;
        let mut point = vec![0.0; n];
        while remaining > 0 {
            let batch = remaining.min(BATCH_SIZE);
            let mut rng = McRng::substream(search.seed, stream);
            for _ in 0..batch {
                for (pj, (lo, hi)) in point.iter_mut().zip(bounds) {
                    *pj = rng.uniform_in(*lo, *hi);
                }
                if membership(&point) {
                    hits += 1;
                }
            }
            remaining -= batch;
            stream += 1;
        }
        box_volume * hits as f64 / search.mc_samples as f64
    }
}

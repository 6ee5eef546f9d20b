//! Exact and Monte Carlo volumes, Mahler volumes, and the closed-form bound
//! suite.
//!
//! Volumes carry the body's own ℏ through every formula; nothing is
//! normalized to ℏ = 1. The Γ function is evaluated through `libm::lgamma`
//! so the bounds stay finite well past n ≈ 170.

use crate::geometry::{polygon_area, BodyKind, ConvexBody};
use crate::rng::{McRng, BATCH_SIZE};
use crate::{Error, Result};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// Volume of the n-ball of the given radius.
pub fn ball_volume(dim: usize, radius: f64) -> f64 {
    let n = dim as f64;
    (0.5 * n * std::f64::consts::PI.ln() + n * radius.ln() - libm::lgamma(0.5 * n + 1.0)).exp()
}

/// A volume value with its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Zero exactly when `method == Exact`.
    pub std_error: f64,
    pub method: Method,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

impl VolumeEstimate {
    pub fn exact(value: f64) -> VolumeEstimate {
        VolumeEstimate {
            value,
            std_error: 0.0,
            method: Method::Exact,
            samples: 0,
            seed: 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method == Method::Exact
    }
}

/// Monte Carlo configuration. The sample budget is consumed in fixed batches
/// of [`BATCH_SIZE`], one ChaCha substream per batch, so any `threads` value
/// produces bit-identical results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McParams {
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "one")]
    pub threads: usize,
}

fn one() -> usize {
    1
}

impl Default for McParams {
    fn default() -> Self {
        McParams {
            samples: 1_000_000,
            seed: 0,
            threads: 1,
        }
    }
}

/// Closed-form volume for the kinds that admit one: balls, ellipsoids, boxes,
/// axis-aligned cross-polytopes, intervals, and any 2D polytope.
pub fn volume_exact(body: &ConvexBody) -> Result<VolumeEstimate> {
    let n = body.dim();
    let hbar = body.hbar();
    let value = match body.kind() {
        BodyKind::Ball { radius, dim } => ball_volume(*dim, *radius),
        BodyKind::Ellipsoid { matrix } => {
            let (eigs, _) = crate::linalg::spd_eigen(matrix)?;
            let det: f64 = eigs.iter().product();
            ball_volume(n, hbar.sqrt()) / det.sqrt()
        }
        BodyKind::Box { half_widths } => half_widths.iter().map(|a| 2.0 * a).product(),
        BodyKind::VPolytope {
            generators,
            symmetric,
        } => {
            if *symmetric {
                if let Some(radii) = axis_cross_polytope_radii(generators) {
                    // 2^n ∏ rⱼ / n!
                    let mut v: f64 = radii.iter().map(|r| 2.0 * r).product();
                    for k in 2..=n {
                        v /= k as f64;
                    }
                    v
                } else if n == 1 {
                    2.0 * generators.iter().map(|g| g[0].abs()).fold(0.0, f64::max)
                } else if n == 2 {
                    polygon_area(&body.polygon_vertices()?)
                } else {
                    return Err(Error::Unsupported(
                        "exact V-polytope volume needs n ≤ 2 or an axis cross-polytope".into(),
                    ));
                }
            } else if n == 1 {
                let max = generators
                    .iter()
                    .map(|g| g[0])
                    .fold(f64::NEG_INFINITY, f64::max);
                let min = generators
                    .iter()
                    .map(|g| g[0])
                    .fold(f64::INFINITY, f64::min);
                max - min
            } else if n == 2 {
                polygon_area(&body.polygon_vertices()?)
            } else {
                return Err(Error::Unsupported(
                    "exact asymmetric hull volume is 2D only".into(),
                ));
            }
        }
        BodyKind::HPolytope { normals } => {
            if n == 1 {
                let umax = normals.iter().map(|u| u[0].abs()).fold(0.0, f64::max);
                2.0 * hbar / umax
            } else if n == 2 {
                polygon_area(&body.polygon_vertices()?)
            } else {
                return Err(Error::Unsupported(
                    "exact H-polytope volume is 2D only; use volume_mc".into(),
                ));
            }
        }
    };
    Ok(VolumeEstimate::exact(value))
}

/// Generator radii when the symmetric hull is an axis cross-polytope
/// (exactly one generator per axis, each supported on that axis alone).
fn axis_cross_polytope_radii(generators: &[DVector<f64>]) -> Option<Vec<f64>> {
    let n = generators[0].len();
    if generators.len() != n {
        return None;
    }
    let mut radii = vec![0.0; n];
    for g in generators {
        let mut nonzero = None;
        for (j, v) in g.iter().enumerate() {
            if v.abs() > 0.0 {
                if nonzero.is_some() {
                    return None;
                }
                nonzero = Some((j, v.abs()));
            }
        }
        let (axis, r) = nonzero?;
        if radii[axis] != 0.0 {
            return None;
        }
        radii[axis] = r;
    }
    radii.iter().all(|r| *r > 0.0).then_some(radii)
}

/// Rejection-sampling volume inside the support-function bounding box.
/// Bit-reproducible for a fixed seed, for any thread count.
pub fn volume_mc(body: &ConvexBody, params: &McParams) -> Result<VolumeEstimate> {
    if params.samples < 1000 {
        return Err(Error::InvalidBody(format!(
            "Monte Carlo needs at least 1000 samples, got {}",
            params.samples
        )));
    }
    let (lo, hi) = body.bounding_box()?;
    let widths: Vec<f64> = (0..body.dim()).map(|j| hi[j] - lo[j]).collect();
    let box_volume: f64 = widths.iter().product();
    if !(box_volume > 0.0) || !box_volume.is_finite() {
        return Err(Error::DegenerateBox);
    }
    let membership = fast_membership(body)?;
    let lo_vec: Vec<f64> = lo.iter().copied().collect();
    let hi_vec: Vec<f64> = hi.iter().copied().collect();

    let hits = count_hits(
        &|p| membership(p),
        &lo_vec,
        &hi_vec,
        params.samples,
        params.seed,
        params.threads,
    );
    let p_hat = hits as f64 / params.samples as f64;
    Ok(VolumeEstimate {
        value: box_volume * p_hat,
        std_error: box_volume * (p_hat * (1.0 - p_hat) / params.samples as f64).sqrt(),
        method: Method::MonteCarlo,
        samples: params.samples,
        seed: params.seed,
    })
}

/// Count membership hits over `samples` uniform draws from the box, batched
/// into substreams. Worker `w` of `threads` takes batches `w, w+T, w+2T, …`;
/// the total is a u64 sum, so the partition cannot change the result.
pub(crate) fn count_hits(
    membership: &(dyn Fn(&[f64]) -> bool + Sync),
    lo: &[f64],
    hi: &[f64],
    samples: u64,
    seed: u64,
    threads: usize,
) -> u64 {
    let n_batches = samples.div_ceil(BATCH_SIZE);
    let run_batch = |k: u64| -> u64 {
        let count = if (k + 1) * BATCH_SIZE <= samples {
            BATCH_SIZE
        } else {
            samples - k * BATCH_SIZE
        };
        let mut rng = McRng::substream(seed, k);
        let mut point = vec![0.0; lo.len()];
        let mut hits = 0u64;
        for _ in 0..count {
            for (pj, (l, h)) in point.iter_mut().zip(lo.iter().zip(hi)) {
                *pj = rng.uniform_in(*l, *h);
            }
            if membership(&point) {
                hits += 1;
            }
        }
        hits
    };

    if threads <= 1 || n_batches <= 1 {
        (0..n_batches).map(run_batch).sum()
    } else {
        let workers = threads.min(n_batches as usize);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let run = &run_batch;
                    scope
                        .spawn(move || (w as u64..n_batches).step_by(workers).map(run).sum::<u64>())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    }
}

type MembershipFn = Box<dyn Fn(&[f64]) -> bool + Sync + Send>;

/// Membership predicate specialized for tight Monte Carlo loops. 2D
/// V-polytopes are converted to an edge test once instead of solving a
/// feasibility LP per sample.
fn fast_membership(body: &ConvexBody) -> Result<MembershipFn> {
    let hbar = body.hbar();
    let center: Vec<f64> = body.center().iter().copied().collect();
    Ok(match body.kind() {
        BodyKind::Ball { radius, .. } => {
            let r2 = radius * radius;
            Box::new(move |p| {
                p.iter()
                    .zip(&center)
                    .map(|(v, c)| (v - c) * (v - c))
                    .sum::<f64>()
                    <= r2
            })
        }
        BodyKind::Ellipsoid { matrix } => {
            let n = matrix.nrows();
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| matrix.row(i).iter().copied().collect())
                .collect();
            Box::new(move |p| {
                let mut q = 0.0;
                for (i, row) in rows.iter().enumerate() {
                    let yi = p[i] - center[i];
                    let mut ri = 0.0;
                    for (j, a) in row.iter().enumerate() {
                        ri += a * (p[j] - center[j]);
                    }
                    q += yi * ri;
                }
                q <= hbar
            })
        }
        BodyKind::Box { half_widths } => {
            let hw: Vec<f64> = half_widths.iter().copied().collect();
            Box::new(move |p| {
                p.iter()
                    .zip(&center)
                    .zip(&hw)
                    .all(|((v, c), a)| (v - c).abs() <= *a)
            })
        }
        BodyKind::HPolytope { normals } => {
            let ns: Vec<Vec<f64>> = normals
                .iter()
                .map(|u| u.iter().copied().collect())
                .collect();
            Box::new(move |p| {
                ns.iter().all(|u| {
                    u.iter()
                        .zip(p.iter().zip(&center))
                        .map(|(ui, (v, c))| ui * (v - c))
                        .sum::<f64>()
                        .abs()
                        <= hbar
                })
            })
        }
        BodyKind::VPolytope {
            generators,
            symmetric: true,
        } if axis_cross_polytope_radii(generators).is_some() => {
            // Weighted ℓ1 ball: Σ |xⱼ − cⱼ| / rⱼ ≤ 1.
            let radii = axis_cross_polytope_radii(generators).unwrap();
            Box::new(move |p| {
                p.iter()
                    .zip(&center)
                    .zip(&radii)
                    .map(|((v, c), r)| (v - c).abs() / r)
                    .sum::<f64>()
                    <= 1.0
            })
        }
        BodyKind::VPolytope { .. } if body.dim() == 2 => {
            // Counterclockwise edge test on the hull polygon.
            let verts = body.polygon_vertices()?;
            let scale = verts.iter().map(|v| v.amax()).fold(1.0f64, f64::max);
            let edges: Vec<(f64, f64, f64, f64)> = (0..verts.len())
                .map(|i| {
                    let a = &verts[i];
                    let b = &verts[(i + 1) % verts.len()];
                    (a[0], a[1], b[0] - a[0], b[1] - a[1])
                })
                .collect();
            let tol = 1e-12 * scale * scale;
            Box::new(move |p| {
                edges
                    .iter()
                    .all(|(ax, ay, ex, ey)| ex * (p[1] - ay) - ey * (p[0] - ax) >= -tol)
            })
        }
        BodyKind::VPolytope { .. } => {
            let owned = body.clone();
            Box::new(move |p| {
                owned
                    .membership(&DVector::from_column_slice(p))
                    .unwrap_or(false)
            })
        }
    })
}

/// Which volume path the Mahler product should take per factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeRoute {
    /// Exact where a closed form exists, Monte Carlo otherwise.
    Auto,
    /// Closed forms only; errors on unsupported shapes.
    Exact,
    /// Rejection sampling for both factors.
    MonteCarlo,
}

/// Mahler volume `v(X) = Vol(X) · Vol(X^ℏ)`, exact when both factors are,
/// otherwise Monte Carlo with first-order error propagation. The dual factor
/// draws from a decorrelated seed derived from `params.seed`.
pub fn mahler_volume(
    body: &ConvexBody,
    route: VolumeRoute,
    params: &McParams,
) -> Result<VolumeEstimate> {
    if !body.is_centered() {
        return Err(Error::TranslatedBody);
    }
    if !body.is_symmetric() {
        return Err(Error::Unsupported(
            "Mahler volume requires a symmetric body".into(),
        ));
    }
    let dual = body.polar_dual()?;
    let v1 = volume_by_route(body, route, params)?;
    let dual_params = McParams {
        seed: params.seed.wrapping_add(0x9E37_79B9_7F4A_7C15),
        ..params.clone()
    };
    let v2 = volume_by_route(&dual, route, &dual_params)?;
    let value = v1.value * v2.value;
    let std_error = ((v2.value * v1.std_error).powi(2) + (v1.value * v2.std_error).powi(2)).sqrt();
    Ok(VolumeEstimate {
        value,
        std_error,
        method: if v1.is_exact() && v2.is_exact() {
            Method::Exact
        } else {
            Method::MonteCarlo
        },
        samples: v1.samples + v2.samples,
        seed: params.seed,
    })
}

/// Exact volume where a closed form exists, Monte Carlo otherwise.
pub fn volume_auto(body: &ConvexBody, params: &McParams) -> Result<VolumeEstimate> {
    volume_by_route(body, VolumeRoute::Auto, params)
}

fn volume_by_route(
    body: &ConvexBody,
    route: VolumeRoute,
    params: &McParams,
) -> Result<VolumeEstimate> {
    match route {
        VolumeRoute::Exact => volume_exact(body),
        VolumeRoute::MonteCarlo => volume_mc(body, params),
        VolumeRoute::Auto => match volume_exact(body) {
            Ok(v) => Ok(v),
            Err(Error::Unsupported(_)) => volume_mc(body, params),
            Err(e) => Err(e),
        },
    }
}

/// The closed-form bound suite at dimension `n` and scale ℏ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bounds {
    /// Blaschke–Santaló upper bound (πℏ)ⁿ / Γ(n/2 + 1)².
    pub bs_bound: f64,
    /// Kuperberg lower bound (πℏ)ⁿ / (4ⁿ n!).
    pub kuperberg_bound: f64,
    /// Conjectured minimum (4ℏ)ⁿ / n!, attained by parallelepipeds.
    pub mahler_conjecture_value: f64,
    /// δ(n) = 1 / (2^(n/2) Γ(n/2 + 1)).
    pub delta_n: f64,
}

/// Evaluate the bound suite. The half-integer Γ terms run through log-gamma
/// (finite past n ≈ 170); the integer-factorial bounds use a stable running
/// product whose factors shrink below 1, so they underflow gracefully
/// instead of overflowing.
pub fn bounds(n: usize, hbar: f64) -> Result<Bounds> {
    if n == 0 {
        return Err(Error::InvalidBody("dimension must be at least 1".into()));
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidBody("hbar must be positive".into()));
    }
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let lgamma_half = libm::lgamma(0.5 * nf + 1.0);
    let product = |term: f64| (1..=n).map(|k| term / k as f64).product::<f64>();
    Ok(Bounds {
        bs_bound: (nf * (pi * hbar).ln() - 2.0 * lgamma_half).exp(),
        kuperberg_bound: product(pi * hbar / 4.0),
        mahler_conjecture_value: product(4.0 * hbar),
        delta_n: (-0.5 * nf * 2f64.ln() - lgamma_half).exp(),
    })
}

/// Pass/fail verdict with margin for one side of the sandwich.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    /// Slack in the inequality after the 3·SE guard band.
    pub margin: f64,
}

/// Result of checking the bound sandwich on one body.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub hbar: f64,
    #[serde(flatten)]
    pub bounds: Bounds,
    pub mahler: VolumeEstimate,
    pub lower: Verdict,
    pub upper: Verdict,
    /// For ellipsoids: did the Mahler volume reproduce the Blaschke–Santaló
    /// bound to 1e-9 relative, as the equality case demands?
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ellipsoid_equality: Option<bool>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.lower.pass && self.upper.pass && self.ellipsoid_equality.unwrap_or(true)
    }
}

/// Check the sandwich `kuperberg ≤ v(X) ≤ bs` with a 3·SE guard band on
/// Monte Carlo estimates.
pub fn check_bounds(body: &ConvexBody, params: &McParams) -> Result<BoundReport> {
    let n = body.dim();
    let b = bounds(n, body.hbar())?;
    let mahler = mahler_volume(body, VolumeRoute::Auto, params)?;
    // Guard band: 3·SE for stochastic estimates plus a relative slack so the
    // ellipsoid equality case cannot fail by one rounding ulp.
    let guard = 3.0 * mahler.std_error + 1e-12 * b.bs_bound;
    let lower_margin = mahler.value - b.kuperberg_bound + guard;
    let upper_margin = b.bs_bound - mahler.value + guard;
    let is_ellipsoid = matches!(
        body.kind(),
        BodyKind::Ball { .. } | BodyKind::Ellipsoid { .. }
    );
    let ellipsoid_equality =
        is_ellipsoid.then(|| (mahler.value - b.bs_bound).abs() <= 1e-9 * b.bs_bound);
    Ok(BoundReport {
        n,
        hbar: body.hbar(),
        bounds: b,
        mahler,
        lower: Verdict {
            pass: lower_margin >= 0.0,
            margin: lower_margin,
        },
        upper: Verdict {
            pass: upper_margin >= 0.0,
            margin: upper_margin,
        },
        ellipsoid_equality,
    })
}

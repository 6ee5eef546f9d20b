//! Browser bindings for the interactive demo page.
//!
//! Three operations, each taking plain parameters and returning a JSON
//! string the page renders onto canvases:
//!
//! - [`dual_polygons`]: boundary outlines of a body and its polar dual,
//!   with the Mahler volume against the closed-form bounds;
//! - [`wigner_heatmap`]: the Wigner table of a Gaussian or an even
//!   two-Gaussian superposition, with the ball-concentration numbers;
//! - [`tradeoff_curve`]: ε* and η* against the box half-width,
//!   with the `1 − δ(n)` floor.

use nalgebra::{DMatrix, DVector};
use phasedual::harmonic::{
    concentration, gaussian_state, hbar_fourier, two_gaussian_superposition,
    wigner_ball_concentration, FourierDirection, GridSpec,
};
use phasedual::volumes::{bounds, mahler_volume, McParams, VolumeRoute};
use phasedual::{BodySpec, ConvexBody};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Boundary outlines of a centered body and its polar dual, plus the Mahler
/// volume and bound suite. `body_json` follows the documented body schema;
/// `outline_points` controls the boundary sampling density.
#[wasm_bindgen]
pub fn dual_polygons(body_json: &str, outline_points: usize) -> Result<String, JsError> {
    let spec: BodySpec = serde_json::from_str(body_json).map_err(err)?;
    let body = ConvexBody::from_spec(&spec).map_err(err)?;
    if body.dim() != 2 {
        return Err(JsError::new("the explorer draws 2D bodies"));
    }
    let dual = body.polar_dual().map_err(err)?;

    let outline = |b: &ConvexBody| -> Result<Vec<[f64; 2]>, JsError> {
        let k = outline_points.clamp(16, 1024);
        (0..k)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                let u = DVector::from_column_slice(&[t.cos(), t.sin()]);
                let p = b.boundary_point(&u).map_err(err)?;
                Ok([p[0], p[1]])
            })
            .collect()
    };

    let mahler = mahler_volume(&body, VolumeRoute::Auto, &McParams::default()).map_err(err)?;
    let suite = bounds(2, body.hbar()).map_err(err)?;
    Ok(json!({
        "body": outline(&body)?,
        "dual": outline(&dual)?,
        "mahler": mahler.value,
        "mahler_se": mahler.std_error,
        "bs_bound": suite.bs_bound,
        "kuperberg_bound": suite.kuperberg_bound,
        "conjecture": suite.mahler_conjecture_value,
        "hbar": body.hbar(),
    })
    .to_string())
}

/// Wigner table of a 1D state on an `N`-point grid. `kind` is "gaussian"
/// (with `param` the envelope coefficient a in e^(−a x²/2ℏ)) or
/// "superposition" (with `param` the center offset). Values are row-major
/// over (x, p).
#[wasm_bindgen]
pub fn wigner_heatmap(
    kind: &str,
    param: f64,
    hbar: f64,
    samples: usize,
) -> Result<String, JsError> {
    let grid = GridSpec {
        samples: samples.clamp(32, 512).next_power_of_two(),
        half_extent: 12.0 * hbar.sqrt(),
    };
    let state = match kind {
        "gaussian" => {
            if !(param > 0.05) {
                return Err(JsError::new("envelope coefficient must exceed 0.05"));
            }
            gaussian_state(&DMatrix::from_element(1, 1, param), grid, hbar).map_err(err)?
        }
        "superposition" => two_gaussian_superposition(param.abs(), grid, hbar).map_err(err)?,
        other => return Err(JsError::new(&format!("unknown state kind {other:?}"))),
    };
    let table = phasedual::harmonic::wigner(&state, phasedual::harmonic::PhaseSpaceMode::Wigner)
        .map_err(err)?;
    let report = wigner_ball_concentration(&state).map_err(err)?;

    let values: Vec<f64> = table.values().iter().map(|v| v.re).collect();
    Ok(json!({
        "x_samples": table.x_samples(),
        "p_samples": table.p_samples(),
        "x_spacing": table.x_spacing(),
        "p_spacing": table.p_spacing(),
        "hbar": hbar,
        "values": values,
        "eps_ball": report.epsilon_star,
        "eps_lower_bound": report.rhs,
    })
    .to_string())
}

/// ε*, η*, and their sum for φ₀ against boxes `[−a, a]`, swept over
/// `steps` half-widths, with the `1 − δ(1)` floor. Grid size trades speed
/// against boundary resolution.
#[wasm_bindgen]
pub fn tradeoff_curve(
    a_min: f64,
    a_max: f64,
    steps: usize,
    hbar: f64,
    samples: usize,
) -> Result<String, JsError> {
    if !(a_min > 0.0) || !(a_max > a_min) {
        return Err(JsError::new("need 0 < a_min < a_max"));
    }
    let samples = samples.clamp(256, 16384).next_power_of_two();
    // Balanced grid: Δx = Δp, so both concentrations resolve equally.
    let grid = GridSpec {
        samples,
        half_extent: (std::f64::consts::PI * hbar * samples as f64 / 2.0).sqrt(),
    };
    let state = gaussian_state(&DMatrix::identity(1, 1), grid, hbar).map_err(err)?;
    let state_hat = hbar_fourier(&state, FourierDirection::Forward).map_err(err)?;
    let delta = bounds(1, hbar).map_err(err)?.delta_n;

    let steps = steps.clamp(2, 400);
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let a = a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64;
        let x = ConvexBody::cuboid(DVector::from_column_slice(&[a]), hbar).map_err(err)?;
        let dual = x.polar_dual().map_err(err)?;
        let eps = concentration(&state, &x).map_err(err)?;
        let eta = concentration(&state_hat, &dual).map_err(err)?;
        rows.push(json!({
            "a": a,
            "eps": eps,
            "eta": eta,
            "sum": eps + eta,
        }));
    }
    Ok(json!({
        "rows": rows,
        "lower_bound": 1.0 - delta,
        "delta": delta,
        "hbar": hbar,
    })
    .to_string())
}

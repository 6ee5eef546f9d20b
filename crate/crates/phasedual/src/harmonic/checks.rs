//! Concentration functionals and the inequality checks built on them.
//!
//! Concentration integrals use cell-center membership: the grid samples are
//! the cell centers, and a cell is inside the body exactly when its center
//! is. The boundary fringe (cells whose membership differs from an axis
//! neighbor) is tracked and reported as a quadrature error estimate; every
//! theorem check widens its guard band by that fringe so a true inequality
//! cannot fail on discretization error alone.

use super::fourier::{centered_dft, hbar_fourier, AxisSpec, FourierDirection};
use super::wigner::{wigner, PhaseSpaceMode};
use super::{PhaseSpaceFunction, SampledFunction, Space};
use crate::geometry::ConvexBody;
use crate::linalg;
use crate::report::{CheckReport, Estimate, GridProvenance};
use crate::rng::McRng;
use crate::volumes::{self, McParams, VolumeRoute};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Evenness gate shared by the Wigner-side checks.
const EVEN_TOL: f64 = 1e-10;

/// Minimal ε for which `f` is ε-concentrated in `x`: the square root of the
/// L² mass fraction outside the body, cell-center membership.
pub fn concentration(f: &SampledFunction, x: &ConvexBody) -> Result<f64> {
    concentration_with_band(f, x).map(|(eps, _)| eps)
}

/// Concentration plus the boundary-fringe estimate (half the L² mass
/// fraction of cells adjacent to a membership flip).
pub fn concentration_with_band(f: &SampledFunction, x: &ConvexBody) -> Result<(f64, f64)> {
    if x.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x.dim(),
        });
    }
    let n = f.samples_per_axis();
    let dims = vec![n; f.dim()];
    let coords: Vec<Vec<f64>> = dims
        .iter()
        .map(|&len| (0..len).map(|i| f.coord(i)).collect())
        .collect();
    masses(f.values(), &dims, &coords, x)
}

/// Phase-space concentration of a Wigner/ambiguity table in a 2n-dimensional
/// body, as an L² function of `z = (x, p)`.
pub fn concentration_phase(w: &PhaseSpaceFunction, x: &ConvexBody) -> Result<f64> {
    concentration_phase_with_band(w, x).map(|(eps, _)| eps)
}

pub fn concentration_phase_with_band(w: &PhaseSpaceFunction, x: &ConvexBody) -> Result<(f64, f64)> {
    let n = w.dim();
    if x.dim() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: x.dim(),
        });
    }
    let mut dims = vec![w.x_samples(); n];
    dims.extend(vec![w.p_samples(); n]);
    let mut coords: Vec<Vec<f64>> = Vec::with_capacity(2 * n);
    for _ in 0..n {
        coords.push((0..w.x_samples()).map(|i| w.x_coord(i)).collect());
    }
    for _ in 0..n {
        coords.push((0..w.p_samples()).map(|i| w.p_coord(i)).collect());
    }
    masses(w.values(), &dims, &coords, x)
}

/// Shared mass accounting: (ε, half fringe fraction).
fn masses(
    values: &[num_complex::Complex64],
    dims: &[usize],
    coords: &[Vec<f64>],
    body: &ConvexBody,
) -> Result<(f64, f64)> {
    let total_len: usize = dims.iter().product();
    debug_assert_eq!(values.len(), total_len);

    let mut inside = vec![false; total_len];
    let mut point = DVector::zeros(dims.len());
    let mut idx = vec![0usize; dims.len()];
    for (flat, slot) in inside.iter_mut().enumerate() {
        let mut rem = flat;
        for a in (0..dims.len()).rev() {
            idx[a] = rem % dims[a];
            rem /= dims[a];
        }
        for a in 0..dims.len() {
            point[a] = coords[a][idx[a]];
        }
        *slot = body.membership(&point)?;
    }

    let mut total = 0.0;
    let mut outside = 0.0;
    for (v, &is_in) in values.iter().zip(&inside) {
        let m = v.norm_sqr();
        total += m;
        if !is_in {
            outside += m;
        }
    }
    if !(total > 0.0) {
        return Err(Error::Grid("state has zero L2 mass".into()));
    }

    // Fringe: any cell whose membership differs from a face neighbor.
    let mut strides = vec![1usize; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * dims[a + 1];
    }
    let mut fringe = 0.0;
    for flat in 0..total_len {
        let mut rem = flat;
        let mut on_fringe = false;
        for a in (0..dims.len()).rev() {
            idx[a] = rem % dims[a];
            rem /= dims[a];
        }
        'axes: for a in 0..dims.len() {
            for step in [-1isize, 1] {
                let j = idx[a] as isize + step;
                if j >= 0 && (j as usize) < dims[a] {
                    let neighbor = (flat as isize + step * strides[a] as isize) as usize;
                    if inside[neighbor] != inside[flat] {
                        on_fringe = true;
                        break 'axes;
                    }
                }
            }
        }
        if on_fringe {
            fringe += values[flat].norm_sqr();
        }
    }

    Ok(((outside / total).sqrt(), 0.5 * fringe / total))
}

fn factorial(n: usize) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

/// Concentration product check: with `ψ` ε-concentrated in `X` and `ψ̂`
/// η-concentrated in `P`, the volumes obey
/// `Vol(X)·Vol(P) ≥ (2πℏ)ⁿ(1 − ε − η)²`. The deficit is clamped at zero and
/// the report flagged vacuous when ε + η ≥ 1.
pub fn donoho_stark_check(
    f: &SampledFunction,
    x: &ConvexBody,
    p: &ConvexBody,
    mc: &McParams,
) -> Result<CheckReport> {
    if f.space() != Space::Position {
        return Err(Error::Grid("expected a position-space state".into()));
    }
    let n = f.dim();
    let hbar = f.hbar();
    let (eps, band_e) = concentration_with_band(f, x)?;
    let fhat = hbar_fourier(f, FourierDirection::Forward)?;
    let (eta, band_h) = concentration_with_band(&fhat, p)?;

    let vol_x = volumes::volume_auto(x, mc)?;
    let dual_mc = McParams {
        seed: mc.seed.wrapping_add(0x9E37_79B9_7F4A_7C15),
        ..mc.clone()
    };
    let vol_p = volumes::volume_auto(p, &dual_mc)?;
    let lhs = vol_x.value * vol_p.value;
    let lhs_se =
        ((vol_p.value * vol_x.std_error).powi(2) + (vol_x.value * vol_p.std_error).powi(2)).sqrt();

    let planck = (2.0 * std::f64::consts::PI * hbar).powi(n as i32);
    let deficit = (1.0 - eps - eta).max(0.0);
    let rhs = planck * deficit * deficit;
    // Guard: the continuum ε could sit a fringe below the grid value, which
    // raises the true right-hand side.
    let worst_deficit = (1.0 - (eps - band_e) - (eta - band_h)).max(0.0);
    let rhs_guard = planck * worst_deficit * worst_deficit;
    let pass = lhs + 3.0 * lhs_se >= rhs_guard - 1e-12 * (1.0 + rhs_guard);

    let mut report = CheckReport::new("donoho_stark", lhs, rhs, pass);
    report.epsilon_star = Some(eps);
    report.eta_star = Some(eta);
    report.grid = Some(GridProvenance {
        dim: n,
        samples_per_axis: f.samples_per_axis(),
        half_extent: f.half_extent(),
        quadrature_estimate: band_e + band_h,
    });
    report
        .provenance
        .push(Estimate::from_volume("vol_x", &vol_x));
    report
        .provenance
        .push(Estimate::from_volume("vol_p", &vol_p));
    report.set_param("hbar", hbar);
    report.set_param("rhs_guard", rhs_guard);
    if eps + eta >= 1.0 {
        report.flags.push("vacuous".into());
    }
    Ok(report)
}

fn inapplicable_report(name: &str, defect: f64) -> CheckReport {
    let mut report = CheckReport::new(name, 0.0, 0.0, false);
    report.flags.push(format!(
        "inapplicable: input is not even (parity defect {defect:.3e})"
    ));
    report
}

/// The even-state identity `FWψ(z) = 2^(−n) Wψ(−½Jz)`: the 2n-dimensional
/// ℏ-Fourier transform of the Wigner table, compared against the resampled
/// half-argument table. Both sides are computed independently; the report
/// carries the sup-norm discrepancy relative to the table peak.
pub fn wigner_fourier_relation_check(f: &SampledFunction, tol: f64) -> Result<CheckReport> {
    let defect = f.even_defect();
    if defect > EVEN_TOL {
        return Ok(inapplicable_report("wigner_fourier_even_identity", defect));
    }
    let w = wigner(f, PhaseSpaceMode::Wigner)?;
    let n = f.dim();
    let nn = w.x_samples();
    let hbar = f.hbar();

    let mut fw = w.values().to_vec();
    let mut axes = vec![
        AxisSpec {
            len: nn,
            spacing: w.x_spacing(),
        };
        n
    ];
    axes.extend(vec![
        AxisSpec {
            len: nn,
            spacing: w.p_spacing(),
        };
        n
    ]);
    centered_dft(&mut fw, &axes, hbar, true)?;

    // FW axes: ζx (spacing Δp = 2·Δp_w) then ζp (spacing 2Δx). The target
    // point −½Jζ = (−ζp/2, ζx/2) lands exactly on the Wigner lattice:
    // x-index N − l and p-index k. Edge rows l = 0 have no mirror and are
    // skipped.
    let scale = 0.5f64.powi(n as i32);
    let mut sup_target = 0.0f64;
    let mut sup_diff = 0.0f64;
    let wv = w.values();
    match n {
        1 => {
            for k in 0..nn {
                for l in 1..nn {
                    let lhs = fw[k * nn + l];
                    let target = wv[(nn - l) * nn + k].re * scale;
                    sup_target = sup_target.max(target.abs());
                    sup_diff =
                        sup_diff.max((lhs - num_complex::Complex64::new(target, 0.0)).norm());
                }
            }
        }
        2 => {
            for k0 in 0..nn {
                for k1 in 0..nn {
                    for l0 in 1..nn {
                        for l1 in 1..nn {
                            let fw_idx = ((k0 * nn + k1) * nn + l0) * nn + l1;
                            let w_idx = (((nn - l0) * nn + (nn - l1)) * nn + k0) * nn + k1;
                            let target = wv[w_idx].re * scale;
                            sup_target = sup_target.max(target.abs());
                            sup_diff = sup_diff.max(
                                (fw[fw_idx] - num_complex::Complex64::new(target, 0.0)).norm(),
                            );
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }

    let rel = sup_diff / sup_target.max(1e-300);
    let pass = rel <= tol;
    let mut report = CheckReport::new("wigner_fourier_even_identity", rel, tol, pass);
    report.margin = tol - rel;
    report.grid = Some(GridProvenance {
        dim: n,
        samples_per_axis: f.samples_per_axis(),
        half_extent: f.half_extent(),
        quadrature_estimate: 0.0,
    });
    report.set_param("sup_discrepancy_absolute", sup_diff);
    report.set_param("hbar", hbar);
    Ok(report)
}

/// Concentration of the Wigner table in the phase-space ball `B²ⁿ(√ℏ)`,
/// checked against the lower bound `ε ≥ ½ − 1/(2·n!)`.
pub fn wigner_ball_concentration(f: &SampledFunction) -> Result<CheckReport> {
    let defect = f.even_defect();
    if defect > EVEN_TOL {
        return Ok(inapplicable_report("wigner_ball_concentration", defect));
    }
    let n = f.dim();
    let hbar = f.hbar();
    let w = wigner(f, PhaseSpaceMode::Wigner)?;
    let ball = ConvexBody::ball(hbar.sqrt(), 2 * n, hbar)?;
    let (eps, band) = concentration_phase_with_band(&w, &ball)?;

    let bound = (0.5 - 0.5 / factorial(n)).max(0.0);
    let pass = eps >= bound - band - 1e-9;
    let mut report = CheckReport::new("wigner_ball_concentration", eps, bound, pass);
    report.epsilon_star = Some(eps);
    report.grid = Some(GridProvenance {
        dim: n,
        samples_per_axis: f.samples_per_axis(),
        half_extent: f.half_extent(),
        quadrature_estimate: band,
    });
    // The bound uses the 1/(2·n!) form; the coarser 1/n! factor is reported
    // alongside for reference.
    report.set_param("one_over_n_factorial", 1.0 / factorial(n));
    report.set_param("hbar", hbar);
    report.set_param(
        "volume_lower_bound",
        (std::f64::consts::PI * hbar).powi(n as i32) * (1.0 - 2.0 * eps).abs(),
    );
    Ok(report)
}

/// Volume form of the Wigner concentration bound for a caller-supplied
/// phase-space body: `Vol(X) ≥ (πℏ)ⁿ |1 − 2ε|` with ε the Wigner
/// concentration in `X` itself.
pub fn wigner_volume_bound(
    f: &SampledFunction,
    x: &ConvexBody,
    mc: &McParams,
) -> Result<CheckReport> {
    let defect = f.even_defect();
    if defect > EVEN_TOL {
        return Ok(inapplicable_report("wigner_volume_bound", defect));
    }
    let n = f.dim();
    let hbar = f.hbar();
    let w = wigner(f, PhaseSpaceMode::Wigner)?;
    let (eps, band) = concentration_phase_with_band(&w, x)?;
    let vol = volumes::volume_auto(x, mc)?;

    let planck = (std::f64::consts::PI * hbar).powi(n as i32);
    let rhs = planck * (1.0 - 2.0 * eps).abs();
    let rhs_guard = planck * ((1.0 - 2.0 * eps).abs() + 2.0 * band);
    let pass = vol.value + 3.0 * vol.std_error >= rhs_guard - 1e-12 * (1.0 + rhs_guard);

    let mut report = CheckReport::new("wigner_volume_bound", vol.value, rhs, pass);
    report.epsilon_star = Some(eps);
    report.grid = Some(GridProvenance {
        dim: n,
        samples_per_axis: f.samples_per_axis(),
        half_extent: f.half_extent(),
        quadrature_estimate: band,
    });
    report.provenance.push(Estimate::from_volume("vol_x", &vol));
    report.set_param("hbar", hbar);
    report.set_param("rhs_guard", rhs_guard);
    Ok(report)
}

/// The concentration trade-off against the polar dual: with
/// `η* = ε*(ψ̂, X^ℏ)`, the sum obeys `ε* + η* ≥ 1 − δ(n)`. Reports the full
/// chain `(2πℏ)ⁿ(1−ε−η)² ≤ v(X) ≤ bs(n)` and the presence probabilities.
pub fn tradeoff_check(f: &SampledFunction, x: &ConvexBody, mc: &McParams) -> Result<CheckReport> {
    if f.space() != Space::Position {
        return Err(Error::Grid("expected a position-space state".into()));
    }
    if !x.is_symmetric() || !x.is_centered() {
        return Err(Error::Unsupported(
            "the trade-off check needs a centered symmetric body".into(),
        ));
    }
    let n = f.dim();
    let hbar = f.hbar();
    let (eps, band_e) = concentration_with_band(f, x)?;
    let fhat = hbar_fourier(f, FourierDirection::Forward)?;
    let dual = x.polar_dual()?;
    let (eta, band_h) = concentration_with_band(&fhat, &dual)?;

    let delta = volumes::bounds(n, hbar)?.delta_n;
    let lhs = eps + eta;
    let rhs = 1.0 - delta;
    let quad = band_e + band_h;
    let pass = lhs >= rhs - 2.0 * quad - 1e-12;

    let planck = (2.0 * std::f64::consts::PI * hbar).powi(n as i32);
    let deficit = (1.0 - eps - eta).max(0.0);
    let mahler = volumes::mahler_volume(x, VolumeRoute::Auto, mc)?;
    let bs = volumes::bounds(n, hbar)?.bs_bound;

    let mut report = CheckReport::new("polar_duality_tradeoff", lhs, rhs, pass);
    report.epsilon_star = Some(eps);
    report.eta_star = Some(eta);
    report.delta_n = Some(delta);
    report.grid = Some(GridProvenance {
        dim: n,
        samples_per_axis: f.samples_per_axis(),
        half_extent: f.half_extent(),
        quadrature_estimate: quad,
    });
    report
        .provenance
        .push(Estimate::from_volume("mahler", &mahler));
    report.set_param("hbar", hbar);
    report.set_param("dsbs_lhs", planck * deficit * deficit);
    report.set_param("bs_bound", bs);
    report.set_param("presence_x", 1.0 - eps * eps);
    report.set_param("presence_p", 1.0 - eta * eta);
    report.set_param("upper_reference", 1.0 + delta);
    Ok(report)
}

/// Gaussian-decay compatibility: the envelopes `e^(−Ax·x/2ℏ)` and
/// `e^(−Bp·p/2ℏ)` admit a common state iff every eigenvalue of `AB` is ≤ 1,
/// equivalently `X^ℏ ⊆ P`. Both routes must agree: the spectrum of
/// `A^(1/2)BA^(1/2)` and support-function sampling.
pub fn hardy_check(a: &DMatrix<f64>, b: &DMatrix<f64>, hbar: f64) -> Result<CheckReport> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let n = a.nrows();
    let sqrt_a = linalg::spd_sqrt(a)?;
    linalg::spd_eigen(b)?;
    let m = linalg::symmetrize(&(&sqrt_a * b * &sqrt_a));
    let (eigs, _) = linalg::spd_eigen(&m)?;
    let max_eig = eigs.max();
    let eig_containment = max_eig <= 1.0 + 1e-9;
    let equality = eigs.iter().all(|l| (l - 1.0).abs() <= 1e-9);

    // Independent route: support comparison of X^ℏ = {p : A⁻¹p·p ≤ ℏ} inside
    // P = {p : Bp·p ≤ ℏ} on random directions plus the spectral stress
    // directions of the pencil.
    let x_dual = ConvexBody::ellipsoid(linalg::spd_inverse(a)?, hbar)?;
    let p_body = ConvexBody::ellipsoid(b.clone(), hbar)?;
    let sqrt_b = linalg::spd_sqrt(b)?;
    let m_b = linalg::symmetrize(&(&sqrt_b * a * &sqrt_b));
    let (_, stress_vectors) = linalg::spd_eigen(&m_b)?;

    let mut directions: Vec<DVector<f64>> = (0..n)
        .map(|i| &sqrt_b * stress_vectors.column(i).clone_owned())
        .collect();
    let mut rng = McRng::seeded(0);
    directions.extend((0..500).map(|_| DVector::from_vec(rng.unit_direction(n))));

    let mut sampled_containment = true;
    for u in &directions {
        if u.norm() < 1e-12 {
            continue;
        }
        let h_dual = x_dual.support(u)?;
        let h_p = p_body.support(u)?;
        if h_dual > h_p * (1.0 + 1e-9) + 1e-12 {
            sampled_containment = false;
            break;
        }
    }

    let agreement = eig_containment == sampled_containment;
    let mut report = CheckReport::new("hardy_eigenvalue_criterion", max_eig, 1.0, agreement);
    report.set_param("containment_eigenvalue_route", eig_containment);
    report.set_param("containment_support_route", sampled_containment);
    report.set_param("equality_case", equality);
    report.set_param("hbar", hbar);
    report.set_param("eigenvalues", eigs.iter().copied().collect::<Vec<f64>>());
    if equality {
        report.flags.push("equality: P = X^hbar".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{gaussian_state, two_gaussian_superposition, GridSpec};
    use nalgebra::{dmatrix, dvector};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn phi0(grid: GridSpec, hbar: f64) -> SampledFunction {
        gaussian_state(&dmatrix![1.0], grid, hbar).unwrap()
    }

    /// Balanced fine grid: Δx = Δp = √(2πℏ/N), so both concentration
    /// integrals resolve the boundary to ~1e-3.
    fn fine_grid(hbar: f64) -> GridSpec {
        let samples = 1usize << 19;
        GridSpec {
            samples,
            half_extent: (PI * hbar * samples as f64 / 2.0).sqrt(),
        }
    }

    /// Analytic oracle: the mass of φ₀ outside [−√ℏ, √ℏ] is erfc(1), so the
    /// minimal concentration is √erfc(1) ≈ 0.396608.
    #[test]
    fn concentration_erfc_oracle() {
        let hbar = 1.0;
        let f = phi0(fine_grid(hbar), hbar);
        let x = ConvexBody::cuboid(dvector![hbar.sqrt()], hbar).unwrap();
        let eps = concentration(&f, &x).unwrap();
        let oracle = libm::erfc(1.0).sqrt();
        assert!(
            (eps - oracle).abs() < 1e-3,
            "eps {eps} vs erfc oracle {oracle}"
        );
    }

    #[test]
    fn concentration_zero_when_body_covers_grid() {
        let f = phi0(GridSpec::default_1d(1.0), 1.0);
        let x = ConvexBody::cuboid(dvector![100.0], 1.0).unwrap();
        assert_eq!(concentration(&f, &x).unwrap(), 0.0);
    }

    /// A degenerate body that misses every cell center has unit
    /// concentration exactly. On this lattice the origin is a sample, so the
    /// empty intersection is realized by an off-lattice center.
    #[test]
    fn concentration_one_for_empty_intersection() {
        let f = phi0(GridSpec::default_1d(1.0), 1.0);
        let dx = f.spacing();
        let tiny = ConvexBody::ball(dx / 4.0, 1, 1.0)
            .unwrap()
            .with_center(dvector![dx / 2.0])
            .unwrap();
        assert_eq!(concentration(&f, &tiny).unwrap(), 1.0);
    }

    /// A degenerate centered body keeps exactly the origin cell.
    #[test]
    fn concentration_degenerate_centered_ball() {
        let f = phi0(GridSpec::default_1d(1.0), 1.0);
        let tiny = ConvexBody::ball(1e-9, 1, 1.0).unwrap();
        let eps = concentration(&f, &tiny).unwrap();
        let inside = f.values()[f.samples_per_axis() / 2].norm_sqr() * f.spacing();
        let expected = (1.0 - inside / f.norm_squared()).sqrt();
        assert!((eps - expected).abs() < 1e-12, "{eps} vs {expected}");
    }

    /// ε* is the smallest ε satisfying the concentration definition: the
    /// directly summed outside mass equals ε*²‖f‖² and exceeds every
    /// smaller ε²‖f‖². Independent route: a plain loop over grid cells.
    #[test]
    fn concentration_is_minimal_by_definition() {
        let f = phi0(GridSpec::default_1d(1.0), 1.0);
        let x = ConvexBody::cuboid(dvector![0.8], 1.0).unwrap();
        let eps = concentration(&f, &x).unwrap();

        let dx = f.spacing();
        let mut outside = 0.0;
        let mut total = 0.0;
        for (j, v) in f.values().iter().enumerate() {
            let point = dvector![f.coord(j)];
            total += v.norm_sqr() * dx;
            if !x.membership(&point).unwrap() {
                outside += v.norm_sqr() * dx;
            }
        }
        assert!(outside <= eps * eps * total * (1.0 + 1e-12));
        let smaller = eps * (1.0 - 1e-9);
        assert!(
            outside > smaller * smaller * total,
            "a smaller ε would still satisfy the definition"
        );
    }

    #[test]
    fn concentration_rejects_zero_state() {
        let grid = GridSpec::default_1d(1.0);
        let zero = SampledFunction::new(
            1,
            grid,
            1.0,
            Space::Position,
            vec![Complex64::default(); grid.samples],
        )
        .unwrap();
        let x = ConvexBody::cuboid(dvector![1.0], 1.0).unwrap();
        assert!(concentration(&zero, &x).is_err());
    }

    #[test]
    fn concentration_is_monotone() {
        let f = phi0(GridSpec::default_1d(1.0), 1.0);
        let mut prev = f64::INFINITY;
        for a in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let x = ConvexBody::cuboid(dvector![a], 1.0).unwrap();
            let eps = concentration(&f, &x).unwrap();
            assert!(eps <= prev, "not monotone at a = {a}");
            prev = eps;
        }
    }

    #[test]
    fn donoho_stark_self_dual_interval() {
        let hbar = 1.0;
        let f = phi0(fine_grid(hbar), hbar);
        let x = ConvexBody::cuboid(dvector![1.0], hbar).unwrap();
        let p = ConvexBody::cuboid(dvector![1.0], hbar).unwrap();
        let report = donoho_stark_check(&f, &x, &p, &McParams::default()).unwrap();
        assert!(report.pass);
        assert!((report.lhs - 4.0).abs() < 1e-12, "lhs {}", report.lhs);
        // ε must reproduce the erfc oracle to 1e-3; the rhs amplifies the
        // ε + η error by 2·(2π)·(1 − ε − η) ≈ 2.6, hence the wider band.
        let eps_oracle = libm::erfc(1.0).sqrt();
        assert!((report.epsilon_star.unwrap() - eps_oracle).abs() < 1e-3);
        assert!((report.eta_star.unwrap() - eps_oracle).abs() < 1e-3);
        let oracle = 2.0 * PI * (1.0 - 2.0 * eps_oracle).powi(2);
        assert!(
            (report.rhs - oracle).abs() < 4e-3,
            "rhs {} vs {oracle}",
            report.rhs
        );
        assert!((oracle - 0.26868).abs() < 1e-4, "frozen value drifted");
    }

    #[test]
    fn donoho_stark_vacuous_clamp() {
        let f = phi0(GridSpec::default_1d(1.0), 1.0);
        let dx = f.spacing();
        // Both bodies miss essentially all mass: ε + η ≥ 1.
        let x = ConvexBody::ball(dx / 4.0, 1, 1.0)
            .unwrap()
            .with_center(dvector![dx / 2.0])
            .unwrap();
        let report = donoho_stark_check(&f, &x, &x, &McParams::default()).unwrap();
        assert!(report.pass);
        assert_eq!(report.rhs, 0.0);
        assert!(report.flags.iter().any(|f| f == "vacuous"));
    }

    #[test]
    fn wigner_fourier_identity_for_gaussian() {
        let f = phi0(
            GridSpec {
                samples: 128,
                half_extent: 12.0,
            },
            1.0,
        );
        let report = wigner_fourier_relation_check(&f, 1e-6).unwrap();
        assert!(report.pass, "{}", report.summary_line());
        assert!(report.lhs <= 1e-6);
    }

    #[test]
    fn wigner_fourier_identity_for_superposition() {
        let f = two_gaussian_superposition(2.0, GridSpec::default_1d(1.0), 1.0).unwrap();
        let report = wigner_fourier_relation_check(&f, 1e-6).unwrap();
        assert!(report.pass, "{}", report.summary_line());
    }

    #[test]
    fn odd_state_flags_inapplicable() {
        // First Hermite function x·φ₀(x), which is odd.
        let grid = GridSpec::default_1d(1.0);
        let n = grid.samples;
        let dx = 2.0 * grid.half_extent / n as f64;
        let values: Vec<Complex64> = (0..n)
            .map(|j| {
                let x = (j as f64 - n as f64 / 2.0) * dx;
                Complex64::new(x * (-x * x / 2.0).exp(), 0.0)
            })
            .collect();
        let f = SampledFunction::new(1, grid, 1.0, Space::Position, values).unwrap();
        let report = wigner_fourier_relation_check(&f, 1e-6).unwrap();
        assert!(report.is_inapplicable());
        assert!(!report.pass);
        let report2 = wigner_ball_concentration(&f).unwrap();
        assert!(report2.is_inapplicable());
    }

    /// χ² tail oracle: |Wφ₀|² mass inside B²(√ℏ) is P(χ²₂ ≤ 4) = 1 − e⁻²,
    /// so ε*_W = e⁻¹.
    #[test]
    fn wigner_ball_concentration_gaussian_1d() {
        let f = phi0(
            GridSpec {
                samples: 1024,
                half_extent: 12.0,
            },
            1.0,
        );
        let report = wigner_ball_concentration(&f).unwrap();
        assert!(report.pass);
        let eps = report.epsilon_star.unwrap();
        let oracle = (-1.0f64).exp();
        assert!((eps - oracle).abs() < 5e-3, "eps {eps} vs {oracle}");
        assert_eq!(report.rhs, 0.0, "n = 1 bound is ½ − ½ = 0");
    }

    #[test]
    fn corollary_bound_values() {
        // ½ − 1/(2n!) for n = 2, 3.
        assert_eq!(0.5 - 0.5 / factorial(2), 0.25);
        assert!((0.5 - 0.5 / factorial(3) - (0.5 - 1.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn tradeoff_phi0_unit_interval() {
        let hbar = 1.0;
        let f = phi0(fine_grid(hbar), hbar);
        let x = ConvexBody::cuboid(dvector![1.0], hbar).unwrap();
        let report = tradeoff_check(&f, &x, &McParams::default()).unwrap();
        assert!(report.pass, "{}", report.summary_line());
        let sum = report.lhs;
        assert!((sum - 0.793216).abs() < 2e-3, "sum {sum}");
        assert!((report.rhs - 0.202115).abs() < 1e-6, "rhs {}", report.rhs);
        let pr_x = report.parameters["presence_x"].as_f64().unwrap();
        assert!((pr_x - (1.0 - libm::erfc(1.0))).abs() < 5e-3);
    }

    #[test]
    fn tradeoff_interval_sweep() {
        let hbar = 1.0;
        let f = phi0(fine_grid(hbar), hbar);
        for a in [0.5, 1.0, 2.0] {
            let x = ConvexBody::cuboid(dvector![a], hbar).unwrap();
            let report = tradeoff_check(&f, &x, &McParams::default()).unwrap();
            assert!(report.pass, "a = {a}: {}", report.summary_line());
        }
    }

    #[test]
    fn tradeoff_matched_gaussian_2d() {
        let hbar = 1.0;
        let a = dmatrix![4.0, 0.0; 0.0, 1.0];
        let f = gaussian_state(&a, GridSpec::default_2d_transform(hbar), hbar).unwrap();
        let x = ConvexBody::ellipsoid(a, hbar).unwrap();
        let report = tradeoff_check(&f, &x, &McParams::default()).unwrap();
        assert!(report.pass, "{}", report.summary_line());
    }

    #[test]
    fn hardy_identity_is_equality_case() {
        let id = DMatrix::identity(2, 2);
        let report = hardy_check(&id, &id, 1.0).unwrap();
        assert!(report.pass);
        assert!((report.lhs - 1.0).abs() < 1e-12);
        assert_eq!(report.parameters["equality_case"], true);
        assert_eq!(report.parameters["containment_eigenvalue_route"], true);
    }

    #[test]
    fn hardy_violation_1d() {
        // A = 4, B = 1: max eigenvalue 4; X^ℏ = [−2√ℏ, 2√ℏ] ⊄ [−√ℏ, √ℏ].
        let report = hardy_check(&dmatrix![4.0], &dmatrix![1.0], 1.0).unwrap();
        assert!(report.pass, "routes must agree");
        assert!((report.lhs - 4.0).abs() < 1e-12);
        assert_eq!(report.parameters["containment_eigenvalue_route"], false);
        assert_eq!(report.parameters["containment_support_route"], false);
    }

    #[test]
    fn hardy_containment_2d() {
        let report = hardy_check(
            &dmatrix![0.25, 0.0; 0.0, 1.0 / 9.0],
            &DMatrix::identity(2, 2),
            1.0,
        )
        .unwrap();
        assert!(report.pass);
        assert_eq!(report.parameters["containment_eigenvalue_route"], true);
        assert_eq!(report.parameters["containment_support_route"], true);
        assert_eq!(report.parameters["equality_case"], false);
    }

    #[test]
    fn hardy_dimension_mismatch() {
        assert!(hardy_check(&dmatrix![1.0], &DMatrix::identity(2, 2), 1.0).is_err());
    }
}

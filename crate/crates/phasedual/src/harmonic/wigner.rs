//! Wigner and ambiguity tables.
//!
//! Per position gridpoint the Wigner integrand `ψ(x + y/2)ψ̄(x − y/2)` lives
//! on the half-step lattice `y ∈ 2Δx·(m − N/2)`, so one centered FFT per
//! x-point evaluates
//!
//! ```text
//! Wψ(x, p) = (2πℏ)^(−n) ∫ e^(−ip·y/ℏ) ψ(x + y/2) ψ̄(x − y/2) dy
//! ```
//!
//! on a momentum grid of spacing `Δp/2 = πℏ/(NΔx)`. The integrand is
//! Hermitian in `y` cell-for-cell, so the table is real to rounding; the
//! residue is checked against 1e-12 before the imaginary parts are zeroed.
//! Ambiguity mode integrates over the full-step lattice instead, giving
//! x-spacing `2Δx` and momentum spacing `Δp`.

use super::fourier::{centered_dft, AxisSpec};
use super::{PhaseKind, PhaseSpaceFunction, SampledFunction, Space};
use crate::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSpaceMode {
    Wigner,
    Ambiguity,
}

/// Largest grid for 2D tables; the table holds `N^4` complex entries.
const MAX_SAMPLES_2D: usize = 32;
const MAX_SAMPLES_1D: usize = 4096;

/// Compute the Wigner or ambiguity table of a position-space state.
pub fn wigner(f: &SampledFunction, mode: PhaseSpaceMode) -> Result<PhaseSpaceFunction> {
    if f.space() != Space::Position {
        return Err(Error::Grid(
            "phase-space tables take a position-space input".into(),
        ));
    }
    let n = f.dim();
    let nn = f.samples_per_axis();
    let cap = if n == 2 {
        MAX_SAMPLES_2D
    } else {
        MAX_SAMPLES_1D
    };
    if nn > cap {
        return Err(Error::Grid(format!(
            "grid too large for a phase-space table: N = {nn} exceeds {cap} for n = {n}"
        )));
    }
    let hbar = f.hbar();
    let dx = f.spacing();
    let (y_spacing, x_spacing_out) = match mode {
        PhaseSpaceMode::Wigner => (2.0 * dx, dx),
        PhaseSpaceMode::Ambiguity => (dx, 2.0 * dx),
    };
    let p_spacing = 2.0 * std::f64::consts::PI * hbar / (nn as f64 * y_spacing);

    let table_len = nn.pow(n as u32) * nn.pow(n as u32);
    let mut table = vec![Complex64::default(); table_len];
    let axes = vec![
        AxisSpec {
            len: nn,
            spacing: y_spacing,
        };
        n
    ];
    // Extra (2πℏ)^(−n/2) on top of the unitary per-axis factors turns the
    // transform into the (2πℏ)^(−n)-normalized phase-space integral.
    let extra = (2.0 * std::f64::consts::PI * hbar).powf(-(n as f64) / 2.0);

    let values = f.values();
    let c = nn as isize / 2;
    let row_len = nn.pow(n as u32);
    let mut row = vec![Complex64::default(); row_len];

    let sample = |idx: &[isize]| -> Complex64 {
        for &i in idx {
            if i < 0 || i >= nn as isize {
                return Complex64::default();
            }
        }
        match *idx {
            [i] => values[i as usize],
            [i, j] => values[i as usize * nn + j as usize],
            _ => unreachable!(),
        }
    };

    match n {
        1 => {
            for j in 0..nn as isize {
                for m in 0..nn as isize {
                    let (u, v) = match mode {
                        PhaseSpaceMode::Wigner => (j + m - c, j - m + c),
                        PhaseSpaceMode::Ambiguity => (m + (j - c), m - (j - c)),
                    };
                    row[m as usize] = sample(&[u]) * sample(&[v]).conj();
                }
                centered_dft(&mut row, &axes, hbar, true)?;
                let base = j as usize * nn;
                for (k, val) in row.iter().enumerate() {
                    table[base + k] = val * extra;
                }
            }
        }
        2 => {
            for j0 in 0..nn as isize {
                for j1 in 0..nn as isize {
                    for m0 in 0..nn as isize {
                        for m1 in 0..nn as isize {
                            let (u, v) = match mode {
                                PhaseSpaceMode::Wigner => {
                                    ([j0 + m0 - c, j1 + m1 - c], [j0 - m0 + c, j1 - m1 + c])
                                }
                                PhaseSpaceMode::Ambiguity => (
                                    [m0 + (j0 - c), m1 + (j1 - c)],
                                    [m0 - (j0 - c), m1 - (j1 - c)],
                                ),
                            };
                            row[(m0 * nn as isize + m1) as usize] = sample(&u) * sample(&v).conj();
                        }
                    }
                    centered_dft(&mut row, &axes, hbar, true)?;
                    let base = (j0 as usize * nn + j1 as usize) * row_len;
                    for (k, val) in row.iter().enumerate() {
                        table[base + k] = val * extra;
                    }
                }
            }
        }
        _ => unreachable!("SampledFunction enforces n in 1..=2"),
    }

    if table.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Grid(
            "phase-space table has non-finite entries".into(),
        ));
    }

    let peak = table
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut residue = 0.0;
    if mode == PhaseSpaceMode::Wigner {
        residue = table.iter().map(|v| v.im.abs()).fold(0.0f64, f64::max) / peak;
        if residue > 1e-12 {
            return Err(Error::Grid(format!(
                "Wigner table is not real: imaginary residue {residue:.3e}"
            )));
        }
        for v in &mut table {
            v.im = 0.0;
        }
    }

    Ok(PhaseSpaceFunction::assemble(
        n,
        nn,
        x_spacing_out,
        nn,
        p_spacing,
        hbar,
        match mode {
            PhaseSpaceMode::Wigner => PhaseKind::Wigner,
            PhaseSpaceMode::Ambiguity => PhaseKind::Ambiguity,
        },
        table,
        residue,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{gaussian_state, hbar_fourier, FourierDirection, GridSpec};
    use crate::rng::McRng;
    use nalgebra::dmatrix;
    use std::f64::consts::PI;

    fn random_state(seed: u64) -> SampledFunction {
        let grid = GridSpec::default_1d(1.0);
        let mut rng = McRng::seeded(seed);
        let c: Vec<f64> = (0..8).map(|_| rng.normal()).collect();
        let n = grid.samples;
        let dx = 2.0 * grid.half_extent / n as f64;
        let values = (0..n)
            .map(|j| {
                let x = (j as f64 - n as f64 / 2.0) * dx;
                let env = (-x * x / 2.0).exp();
                Complex64::new(
                    env * (c[0] + c[1] * x + c[2] * x * x),
                    env * (c[4] + c[5] * x + c[6] * x * x * x),
                )
            })
            .collect();
        SampledFunction::new(1, grid, 1.0, Space::Position, values).unwrap()
    }

    /// Analytic oracle: Wφ₀(z) = (πℏ)^(−1) e^(−|z|²/ℏ).
    #[test]
    fn gaussian_wigner_table() {
        let hbar = 1.0;
        let f = gaussian_state(&dmatrix![1.0], GridSpec::default_1d(hbar), hbar).unwrap();
        let w = wigner(&f, PhaseSpaceMode::Wigner).unwrap();
        let nn = w.x_samples();
        let center = w.values()[w.flat_index(&[nn / 2], &[nn / 2])];
        assert!(
            (center.re - 1.0 / (PI * hbar)).abs() < 1e-8,
            "W(0,0) = {center}"
        );
        let mut worst = 0.0f64;
        for j in 0..nn {
            for k in 0..nn {
                let (x, p) = (w.x_coord(j), w.p_coord(k));
                let expected = (PI * hbar).recip() * (-(x * x + p * p) / hbar).exp();
                let got = w.values()[w.flat_index(&[j], &[k])].re;
                worst = worst.max((got - expected).abs());
            }
        }
        assert!(worst < 1e-8, "sup deviation {worst}");
    }

    #[test]
    fn wigner_is_real_and_even_for_even_states() {
        let f = gaussian_state(&dmatrix![2.0], GridSpec::default_1d(1.0), 1.0).unwrap();
        let w = wigner(&f, PhaseSpaceMode::Wigner).unwrap();
        assert!(w.max_imag_residue() <= 1e-12);
        let nn = w.x_samples();
        for j in 1..nn {
            for k in 1..nn {
                let a = w.values()[w.flat_index(&[j], &[k])].re;
                let b = w.values()[w.flat_index(&[nn - j], &[nn - k])].re;
                assert!((a - b).abs() < 1e-10, "not even in z at ({j}, {k})");
            }
        }
    }

    /// Position marginal: Σ_p Wψ Δp = |ψ(x)|², an exact identity of the
    /// discretization (oracle: the direct samples).
    #[test]
    fn position_marginal_matches() {
        for seed in [1, 2] {
            let f = random_state(seed);
            let w = wigner(&f, PhaseSpaceMode::Wigner).unwrap();
            let nn = w.x_samples();
            let mut worst = 0.0f64;
            for j in 0..nn {
                let mut acc = 0.0;
                for k in 0..nn {
                    acc += w.values()[w.flat_index(&[j], &[k])].re;
                }
                acc *= w.p_spacing();
                let expected = f.values()[j].norm_sqr();
                worst = worst.max((acc - expected).abs());
            }
            assert!(worst < 1e-8, "marginal defect {worst}");
        }
    }

    /// Momentum marginal: Σ_x Wψ Δx = |ψ̂(p)|², compared on the even-index
    /// sublattice where the half-step Wigner momentum grid meets the
    /// transform grid.
    #[test]
    fn momentum_marginal_matches() {
        let f = random_state(3);
        let w = wigner(&f, PhaseSpaceMode::Wigner).unwrap();
        let fhat = hbar_fourier(&f, FourierDirection::Forward).unwrap();
        let nn = w.p_samples();
        let c = nn / 2;
        let mut worst = 0.0f64;
        for k in (0..nn).step_by(2) {
            // p = (k − c)·Δp/2 with k − c even sits on the transform grid at
            // index (k − c)/2 + c.
            let offset = (k as isize - c as isize) / 2;
            let khat = (offset + c as isize) as usize;
            let mut acc = 0.0;
            for j in 0..w.x_samples() {
                acc += w.values()[w.flat_index(&[j], &[k])].re;
            }
            acc *= w.x_spacing();
            let expected = fhat.values()[khat].norm_sqr();
            worst = worst.max((acc - expected).abs());
        }
        assert!(worst < 1e-8, "momentum marginal defect {worst}");
    }

    /// Moyal identity ‖Wψ‖² = (2πℏ)^(−n) ‖ψ‖⁴ pins the (2πℏ)^(−n)
    /// normalization. Oracle: direct double sums on both sides.
    #[test]
    fn moyal_identity() {
        for seed in [5, 6] {
            let f = random_state(seed);
            let w = wigner(&f, PhaseSpaceMode::Wigner).unwrap();
            let lhs = w.l2_norm_squared();
            let rhs = f.norm_squared().powi(2) / (2.0 * PI * f.hbar());
            let rel = (lhs - rhs).abs() / rhs;
            assert!(rel < 1e-6, "Moyal defect {rel}");
        }
    }

    /// Aψ(0) = (2πℏ)^(−n) ‖ψ‖².
    #[test]
    fn ambiguity_at_origin() {
        let f = random_state(7);
        let a = wigner(&f, PhaseSpaceMode::Ambiguity).unwrap();
        let nn = a.x_samples();
        let got = a.values()[a.flat_index(&[nn / 2], &[nn / 2])];
        let expected = f.norm_squared() / (2.0 * PI);
        assert!((got.re - expected).abs() < 1e-10, "{got} vs {expected}");
        assert!(got.im.abs() < 1e-10);
    }

    /// Aψ(z) = FWψ(Jz) for arbitrary (not necessarily even) states: the
    /// ambiguity table and the Fourier-transformed Wigner table are computed
    /// through different code paths and must coincide on the shared lattice.
    #[test]
    fn ambiguity_is_fourier_of_wigner() {
        let f = random_state(13); // complex, no parity
        assert!(f.even_defect() > 1e-3, "want a non-even state");
        let nn = f.samples_per_axis();
        let hbar = f.hbar();

        let a = wigner(&f, PhaseSpaceMode::Ambiguity).unwrap();
        let w = wigner(&f, PhaseSpaceMode::Wigner).unwrap();
        let mut fw = w.values().to_vec();
        let axes = [
            AxisSpec {
                len: nn,
                spacing: w.x_spacing(),
            },
            AxisSpec {
                len: nn,
                spacing: w.p_spacing(),
            },
        ];
        centered_dft(&mut fw, &axes, hbar, true).unwrap();

        // A(x_l, p_k) = FW(p_k, −x_l): the ζ₁ grid matches A's p grid and
        // the ζ₂ grid matches A's (negated) x grid, index N − l.
        let mut worst = 0.0f64;
        let mut peak = 0.0f64;
        for l in 1..nn {
            for k in 0..nn {
                let lhs = a.values()[a.flat_index(&[l], &[k])];
                let rhs = fw[k * nn + (nn - l)];
                peak = peak.max(lhs.norm());
                worst = worst.max((lhs - rhs).norm());
            }
        }
        assert!(
            worst <= 1e-10 * peak,
            "sup |A − FW∘J| = {worst}, peak {peak}"
        );
    }

    #[test]
    fn gaussian_wigner_2d() {
        let hbar = 1.0;
        let f = gaussian_state(
            &dmatrix![1.0, 0.0; 0.0, 1.0],
            GridSpec::default_2d_wigner(hbar),
            hbar,
        )
        .unwrap();
        let w = wigner(&f, PhaseSpaceMode::Wigner).unwrap();
        let nn = w.x_samples();
        let center = w.values()[w.flat_index(&[nn / 2, nn / 2], &[nn / 2, nn / 2])].re;
        let expected = (PI * hbar).powi(-2);
        assert!(
            (center - expected).abs() < 1e-8 * expected.max(1.0),
            "W(0) = {center} vs {expected}"
        );
        // Spot-check the analytic table away from the origin.
        let (j, k) = (nn / 2 + 3, nn / 2 - 2);
        let z2 = w.x_coord(j).powi(2)
            + w.x_coord(nn / 2).powi(2)
            + w.p_coord(k).powi(2)
            + w.p_coord(nn / 2).powi(2);
        let got = w.values()[w.flat_index(&[j, nn / 2], &[k, nn / 2])].re;
        let analytic = expected * (-z2 / hbar).exp();
        assert!((got - analytic).abs() < 1e-8, "{got} vs {analytic}");
    }

    #[test]
    fn oversize_2d_grid_rejected() {
        let f = gaussian_state(
            &dmatrix![1.0, 0.0; 0.0, 1.0],
            GridSpec {
                samples: 64,
                half_extent: 12.0,
            },
            1.0,
        )
        .unwrap();
        assert!(wigner(&f, PhaseSpaceMode::Wigner).is_err());
    }
}

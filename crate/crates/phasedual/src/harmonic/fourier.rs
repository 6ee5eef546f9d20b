//! The unitary ℏ-Fourier transform on centered grids.
//!
//! With `xⱼ = (j − N/2)Δx` and `p_k = (k − N/2)Δp`, `ΔxΔp = 2πℏ/N`, the
//! continuum kernel factors as
//!
//! ```text
//! e^(−i p_k xⱼ/ℏ) = (−1)^k · e^(−2πi jk/N) · (−1)^j        (N ≡ 0 mod 4)
//! ```
//!
//! so one plain FFT with a (−1)^j pre-modulation and (−1)^k post-modulation
//! implements the symmetric-grid operator exactly. Gaussians map to Gaussians
//! with no index shifts, and Parseval holds to rounding because
//! `Δx·Δp·N = 2πℏ` makes the discrete operator unitary.

use super::{SampledFunction, Space};
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierDirection {
    Forward,
    Inverse,
}

/// One axis of a centered grid.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AxisSpec {
    pub len: usize,
    pub spacing: f64,
}

/// Apply the centered ℏ-Fourier kernel along every axis in place. `values`
/// is row-major over `axes`. Each axis contributes `(2πℏ)^(−1/2)·Δ_in`; the
/// conjugate spacing of axis `a` becomes `2πℏ/(len·spacing)`.
pub(crate) fn centered_dft(
    values: &mut [Complex64],
    axes: &[AxisSpec],
    hbar: f64,
    forward: bool,
) -> Result<()> {
    let total: usize = axes.iter().map(|a| a.len).product();
    if values.len() != total {
        return Err(Error::Grid(format!(
            "value length {} does not match axes ({total})",
            values.len()
        )));
    }
    let mut planner = FftPlanner::new();
    for (axis_index, axis) in axes.iter().enumerate() {
        let n = axis.len;
        if n % 4 != 0 {
            return Err(Error::Grid(format!(
                "centered transform needs axis lengths divisible by 4, got {n}"
            )));
        }
        let plan = if forward {
            planner.plan_fft_forward(n)
        } else {
            planner.plan_fft_inverse(n)
        };
        let scale = axis.spacing / (2.0 * std::f64::consts::PI * hbar).sqrt();
        let stride: usize = axes[axis_index + 1..].iter().map(|a| a.len).product();
        let block = stride * n;
        let mut line = vec![Complex64::default(); n];
        for chunk in (0..total).step_by(block) {
            for offset in 0..stride {
                let base = chunk + offset;
                for (j, slot) in line.iter_mut().enumerate() {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    *slot = values[base + j * stride] * sign;
                }
                plan.process(&mut line);
                for (k, slot) in line.iter().enumerate() {
                    let sign = if k % 2 == 0 { scale } else { -scale };
                    values[base + k * stride] = slot * sign;
                }
            }
        }
    }
    Ok(())
}

/// The unitary ℏ-Fourier transform
/// `ψ̂(p) = (2πℏ)^(−n/2) ∫ e^(−ip·x/ℏ) ψ(x) dx` (forward), or its inverse.
/// The output grid is the conjugate one: `Δp = 2πℏ/(NΔx)`.
pub fn hbar_fourier(f: &SampledFunction, direction: FourierDirection) -> Result<SampledFunction> {
    let expected_space = match direction {
        FourierDirection::Forward => Space::Position,
        FourierDirection::Inverse => Space::Momentum,
    };
    if f.space() != expected_space {
        return Err(Error::Grid(format!(
            "{direction:?} transform expects a {expected_space:?}-space input, got {:?}",
            f.space()
        )));
    }
    let n = f.samples_per_axis();
    let hbar = f.hbar();
    let spacing_in = f.spacing();
    let spacing_out = 2.0 * std::f64::consts::PI * hbar / (n as f64 * spacing_in);
    let half_extent_out = 0.5 * n as f64 * spacing_out;

    let mut values = f.values().to_vec();
    let axes = vec![
        AxisSpec {
            len: n,
            spacing: spacing_in,
        };
        f.dim()
    ];
    centered_dft(
        &mut values,
        &axes,
        hbar,
        direction == FourierDirection::Forward,
    )?;

    SampledFunction::new(
        f.dim(),
        super::GridSpec {
            samples: n,
            half_extent: half_extent_out,
        },
        hbar,
        match direction {
            FourierDirection::Forward => Space::Momentum,
            FourierDirection::Inverse => Space::Position,
        },
        values,
    )
}

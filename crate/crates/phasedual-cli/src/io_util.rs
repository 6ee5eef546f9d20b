//! Argument parsing helpers and output plumbing.

use nalgebra::{DMatrix, DVector};
use phasedual::harmonic::{gaussian_state, two_gaussian_superposition, GridSpec, SampledFunction};
use phasedual::{BodySpec, ConvexBody};
use std::path::{Path, PathBuf};

pub type CliResult<T> = Result<T, String>;

/// Row-major matrix from "a,b;c,d" form.
pub fn parse_matrix(text: &str) -> CliResult<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad number {v:?}: {e}"))
                })
                .collect()
        })
        .collect::<CliResult<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err("matrix must be square, rows separated by ';'".into());
    }
    Ok(DMatrix::from_row_slice(
        n,
        n,
        &rows.into_iter().flatten().collect::<Vec<_>>(),
    ))
}

pub fn parse_vector(text: &str) -> CliResult<DVector<f64>> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {v:?}: {e}"))
        })
        .collect::<CliResult<_>>()?;
    if vals.is_empty() {
        return Err("empty vector".into());
    }
    Ok(DVector::from_vec(vals))
}

pub fn read_body(path: &Path) -> CliResult<ConvexBody> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {path:?}: {e}"))?;
    let spec: BodySpec =
        serde_json::from_str(&text).map_err(|e| format!("parsing {path:?}: {e}"))?;
    ConvexBody::from_spec(&spec).map_err(|e| e.to_string())
}

/// Shared state-construction flags.
#[derive(clap::Args, Debug, Clone)]
pub struct StateArgs {
    /// State source: "gaussian", "superposition", or a path to a state file
    /// written by the fourier/wigner subcommands.
    #[arg(long, default_value = "gaussian")]
    pub state: String,
    /// Gaussian envelope matrix, rows ';'-separated: "4,0;0,1".
    #[arg(long = "A", default_value = "1")]
    pub a_matrix: String,
    /// Center offset of the superposition state.
    #[arg(long, default_value_t = 2.0)]
    pub offset: f64,
    /// Grid override "N,L".
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

impl StateArgs {
    pub fn build(&self) -> CliResult<SampledFunction> {
        match self.state.as_str() {
            "gaussian" => {
                let a = parse_matrix(&self.a_matrix)?;
                let grid = self.grid_for(a.nrows())?;
                gaussian_state(&a, grid, self.hbar).map_err(|e| e.to_string())
            }
            "superposition" => {
                let grid = self.grid_for(1)?;
                two_gaussian_superposition(self.offset, grid, self.hbar).map_err(|e| e.to_string())
            }
            path => {
                let mut file = std::fs::File::open(path)
                    .map_err(|e| format!("opening state {path:?}: {e}"))?;
                phasedual::harmonic::read_state(&mut file).map_err(|e| e.to_string())
            }
        }
    }

    fn grid_for(&self, dim: usize) -> CliResult<GridSpec> {
        if let Some(text) = &self.grid {
            let (n, l) = text
                .split_once(',')
                .ok_or_else(|| "grid must be \"N,L\"".to_string())?;
            Ok(GridSpec {
                samples: n.trim().parse().map_err(|e| format!("bad N: {e}"))?,
                half_extent: l.trim().parse().map_err(|e| format!("bad L: {e}"))?,
            })
        } else if dim == 1 {
            Ok(GridSpec::default_1d(self.hbar))
        } else {
            Ok(GridSpec::default_2d_transform(self.hbar))
        }
    }
}

/// Resolve the output path: relative paths are joined onto
/// `PHASEDUAL_OUTPUT_DIR` when that is set.
pub fn resolve_output(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var("PHASEDUAL_OUTPUT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// Write to the output path or stdout.
pub fn emit(output: Option<&Path>, content: &str) -> CliResult<()> {
    match output {
        Some(path) => {
            let path = resolve_output(path);
            std::fs::write(&path, content).map_err(|e| format!("writing {path:?}: {e}"))
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

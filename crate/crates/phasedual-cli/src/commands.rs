use crate::io_util::{emit, parse_matrix, parse_vector, read_body, to_json, CliResult, StateArgs};
use clap::{Args, Parser, Subcommand, ValueEnum};
use phasedual::harmonic::{
    concentration, donoho_stark_check, hardy_check, hbar_fourier, tradeoff_check, wigner,
    wigner_ball_concentration, wigner_fourier_relation_check, wigner_volume_bound,
    FourierDirection, PhaseSpaceMode,
};
use phasedual::report::CheckReport;
use phasedual::rng::McRng;
use phasedual::symplectic::{gromov_width, lagrangian_polar_dual, quantum_blob, LagrangianFrame};
use phasedual::volumes::{
    bounds, check_bounds, mahler_volume, volume_exact, volume_mc, McParams, VolumeRoute,
};
use phasedual::{ConvexBody, SantaloSearch};
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "phasedual",
    version,
    about = "Polar duals, Mahler volumes, quantum blobs, and concentration checks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output path (stdout when absent). Relative paths are joined onto
    /// $PHASEDUAL_OUTPUT_DIR when that variable is set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct McArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for Monte Carlo; any value reproduces the
    /// single-threaded stream bit-for-bit.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl McArgs {
    fn params(&self) -> McParams {
        McParams {
            samples: self.samples,
            seed: self.seed,
            threads: self.threads,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Mc,
}

impl MethodArg {
    fn route(self) -> VolumeRoute {
        match self {
            MethodArg::Auto => VolumeRoute::Auto,
            MethodArg::Exact => VolumeRoute::Exact,
            MethodArg::Mc => VolumeRoute::MonteCarlo,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polar dual of a centered body.
    Dual {
        #[arg(long)]
        body: PathBuf,
    },
    /// Volume of a body (exact where possible).
    Volume {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Mahler volume v(X) = Vol(X)·Vol(X^hbar) with the bound sandwich.
    Mahler {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Closed-form bound suite at dimension n.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Quantum blob of an ellipsoid body {x : Ax·x ≤ hbar}.
    Blob {
        /// SPD matrix, rows ';'-separated.
        #[arg(long = "A")]
        a_matrix: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Containment samples; zero violations are required for exit 0.
        #[arg(long, default_value_t = 10_000)]
        verify_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Polar duality across a transverse Lagrangian frame pair.
    LagrangianDual {
        #[arg(long)]
        body: PathBuf,
        /// Rotate the n = 1 frame pair by this angle (radians); the default
        /// uses the standard position/momentum planes.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Width of X × X^hbar for an interval X (n = 1 identity).
    Gromov1d {
        /// Half-widths; more than one entry demonstrates the unsupported
        /// n ≥ 2 error path.
        #[arg(long = "a")]
        half_widths: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Santaló point search.
    Santalo {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 60_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2e-3)]
        tolerance: f64,
    },
    /// hbar-Fourier transform of a state.
    Fourier {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        inverse: bool,
        /// Write the transformed state (JSON header + binary block) here.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
    /// Wigner or ambiguity table of a state.
    Wigner {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Wigner)]
        mode: ModeArg,
        /// Write the table (JSON header + binary block) here.
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
    /// Minimal concentration of a state in a body.
    Concentration {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        body: PathBuf,
    },
    /// Volume product bound from position/momentum concentrations.
    DsCheck {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Gaussian-decay compatibility criterion (two routes must agree).
    Hardy {
        #[arg(long = "A")]
        a_matrix: String,
        #[arg(long = "B")]
        b_matrix: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Wigner-concentration lower bound in the phase-space ball, plus the
    /// volume bound for an optional phase-space body.
    Corollary {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        body: Option<PathBuf>,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Concentration trade-off between a body and its polar dual.
    Tradeoff {
        #[command(flatten)]
        state: StateArgs,
        /// Box half-widths for X (comma-separated), or use --body.
        #[arg(long = "box")]
        box_half_widths: Option<String>,
        #[arg(long)]
        body: Option<PathBuf>,
        #[command(flatten)]
        mc: McArgs,
    },
    /// CSV of the bound suite for n = 1..nmax plus Gaussian trade-off rows.
    Sweep {
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[command(flatten)]
        mc: McArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Wigner,
    Ambiguity,
}

/// Run the parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok((content, all_pass)) => {
            if let Err(e) = emit(cli.output.as_deref(), &content) {
                eprintln!("error: {e}");
                return 2;
            }
            if all_pass {
                0
            } else {
                1
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn render_reports(format: Format, reports: &[&CheckReport]) -> String {
    match format {
        Format::Json => {
            if reports.len() == 1 {
                to_json(reports[0])
            } else {
                to_json(&reports.iter().collect::<Vec<_>>())
            }
        }
        Format::Csv => {
            let mut out = String::from("inequality,lhs,rhs,margin,pass\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.inequality, r.lhs, r.rhs, r.margin, r.pass
                ));
            }
            out.trim_end().to_string()
        }
    }
}

fn reports_verdict(reports: &[&CheckReport]) -> CliResult<bool> {
    if let Some(r) = reports.iter().find(|r| r.is_inapplicable()) {
        return Err(format!(
            "check {} is inapplicable: {}",
            r.inequality,
            r.flags.join(", ")
        ));
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn dispatch(cli: &Cli) -> CliResult<(String, bool)> {
    match &cli.command {
        Command::Dual { body } => {
            let x = read_body(body)?;
            let dual = x.polar_dual().map_err(|e| e.to_string())?;
            Ok((to_json(&dual.to_spec()), true))
        }
        Command::Volume { body, method, mc } => {
            let x = read_body(body)?;
            let est = match method {
                MethodArg::Exact => volume_exact(&x),
                MethodArg::Mc => volume_mc(&x, &mc.params()),
                MethodArg::Auto => phasedual::volumes::volume_auto(&x, &mc.params()),
            }
            .map_err(|e| e.to_string())?;
            Ok((to_json(&est), true))
        }
        Command::Mahler { body, method, mc } => {
            let x = read_body(body)?;
            let est = mahler_volume(&x, method.route(), &mc.params()).map_err(|e| e.to_string())?;
            let report = check_bounds(&x, &mc.params()).map_err(|e| e.to_string())?;
            let payload = json!({ "mahler": est, "bounds_check": report });
            Ok((to_json(&payload), report.all_pass()))
        }
        Command::Bounds { n, hbar } => {
            let b = bounds(*n, *hbar).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => Ok((
                    to_json(&json!({
                        "bs": b.bs_bound,
                        "kuperberg": b.kuperberg_bound,
                        "mahler_conj": b.mahler_conjecture_value,
                        "delta": b.delta_n,
                    })),
                    true,
                )),
                Format::Csv => Ok((
                    format!(
                        "n,hbar,bs,kuperberg,mahler_conj,delta_n\n{},{},{},{},{},{}",
                        n,
                        hbar,
                        b.bs_bound,
                        b.kuperberg_bound,
                        b.mahler_conjecture_value,
                        b.delta_n
                    ),
                    true,
                )),
            }
        }
        Command::Blob {
            a_matrix,
            hbar,
            verify_samples,
            seed,
        } => {
            let a = parse_matrix(a_matrix)?;
            let qb = quantum_blob(&a, *hbar).map_err(|e| e.to_string())?;
            let violations = blob_containment_violations(&a, *hbar, &qb, *verify_samples, *seed)?;
            let payload = json!({
                "blob": qb,
                "containment": {
                    "samples": verify_samples,
                    "violations": violations,
                },
            });
            Ok((to_json(&payload), violations == 0))
        }
        Command::LagrangianDual { body, theta } => {
            let c = read_body(body)?;
            let n = c.dim();
            let (frame, frame_prime) = match theta {
                None => (
                    LagrangianFrame::position_plane(n),
                    LagrangianFrame::momentum_plane(n),
                ),
                Some(t) => {
                    if n != 1 {
                        return Err("rotated frames are available for n = 1 bodies".into());
                    }
                    let l = nalgebra::DMatrix::from_column_slice(2, 1, &[t.cos(), t.sin()]);
                    let lp = nalgebra::DMatrix::from_column_slice(2, 1, &[-t.sin(), t.cos()]);
                    (
                        LagrangianFrame::new(l).map_err(|e| e.to_string())?,
                        LagrangianFrame::new(lp).map_err(|e| e.to_string())?,
                    )
                }
            };
            let dual =
                lagrangian_polar_dual(&frame, &frame_prime, &c).map_err(|e| e.to_string())?;
            Ok((to_json(&dual.to_spec()), true))
        }
        Command::Gromov1d { half_widths, hbar } => {
            let a = parse_vector(half_widths)?;
            let widths: Vec<f64> = a.iter().copied().collect();
            let w = gromov_width(&widths, *hbar).map_err(|e| e.to_string())?;
            Ok((to_json(&json!({ "width": w, "hbar": hbar })), true))
        }
        Command::Santalo {
            body,
            samples,
            seed,
            tolerance,
        } => {
            let x = read_body(body)?;
            let search = SantaloSearch {
                mc_samples: *samples,
                seed: *seed,
                tolerance: *tolerance,
                ..SantaloSearch::default()
            };
            let point =
                phasedual::geometry::santalo_point(&x, &search).map_err(|e| e.to_string())?;
            Ok((
                to_json(&json!({
                    "point": point.iter().copied().collect::<Vec<f64>>(),
                    "samples": samples,
                    "seed": seed,
                })),
                true,
            ))
        }
        Command::Fourier {
            state,
            inverse,
            state_out,
        } => {
            let f = state.build()?;
            let direction = if *inverse {
                FourierDirection::Inverse
            } else {
                FourierDirection::Forward
            };
            let fhat = hbar_fourier(&f, direction).map_err(|e| e.to_string())?;
            if let Some(path) = state_out {
                let path = crate::io_util::resolve_output(path);
                let mut file =
                    std::fs::File::create(&path).map_err(|e| format!("creating {path:?}: {e}"))?;
                phasedual::harmonic::write_state(&fhat, &mut file).map_err(|e| e.to_string())?;
            }
            let defect = (fhat.norm() - f.norm()).abs() / f.norm();
            Ok((
                to_json(&json!({
                    "direction": if *inverse { "inverse" } else { "forward" },
                    "norm_in": f.norm(),
                    "norm_out": fhat.norm(),
                    "unitarity_defect": defect,
                    "samples": fhat.samples_per_axis(),
                    "half_extent_out": fhat.half_extent(),
                })),
                defect <= 1e-10,
            ))
        }
        Command::Wigner {
            state,
            mode,
            table_out,
        } => {
            let f = state.build()?;
            let table = wigner(
                &f,
                match mode {
                    ModeArg::Wigner => PhaseSpaceMode::Wigner,
                    ModeArg::Ambiguity => PhaseSpaceMode::Ambiguity,
                },
            )
            .map_err(|e| e.to_string())?;
            if let Some(path) = table_out {
                let path = crate::io_util::resolve_output(path);
                let mut file =
                    std::fs::File::create(&path).map_err(|e| format!("creating {path:?}: {e}"))?;
                phasedual::harmonic::write_phase(&table, &mut file).map_err(|e| e.to_string())?;
            }
            let moyal_lhs = table.l2_norm_squared();
            let moyal_rhs = f.norm_squared().powi(2)
                / (2.0 * std::f64::consts::PI * f.hbar()).powi(f.dim() as i32);
            let rel = (moyal_lhs - moyal_rhs).abs() / moyal_rhs;
            Ok((
                to_json(&json!({
                    "kind": format!("{mode:?}").to_lowercase(),
                    "x_samples": table.x_samples(),
                    "p_samples": table.p_samples(),
                    "x_spacing": table.x_spacing(),
                    "p_spacing": table.p_spacing(),
                    "moyal_lhs": moyal_lhs,
                    "moyal_rhs": moyal_rhs,
                    "moyal_rel_defect": rel,
                    "max_imag_residue": table.max_imag_residue(),
                })),
                rel <= 1e-6,
            ))
        }
        Command::Concentration { state, body } => {
            let f = state.build()?;
            let x = read_body(body)?;
            let eps = concentration(&f, &x).map_err(|e| e.to_string())?;
            Ok((
                to_json(&json!({
                    "epsilon_star": eps,
                    "samples_per_axis": f.samples_per_axis(),
                    "half_extent": f.half_extent(),
                    "hbar": f.hbar(),
                })),
                true,
            ))
        }
        Command::DsCheck { state, x, p, mc } => {
            let f = state.build()?;
            let xb = read_body(x)?;
            let pb = read_body(p)?;
            let report =
                donoho_stark_check(&f, &xb, &pb, &mc.params()).map_err(|e| e.to_string())?;
            let pass = reports_verdict(&[&report])?;
            Ok((render_reports(cli.format, &[&report]), pass))
        }
        Command::Hardy {
            a_matrix,
            b_matrix,
            hbar,
        } => {
            let a = parse_matrix(a_matrix)?;
            let b = parse_matrix(b_matrix)?;
            let report = hardy_check(&a, &b, *hbar).map_err(|e| e.to_string())?;
            let pass = reports_verdict(&[&report])?;
            Ok((render_reports(cli.format, &[&report]), pass))
        }
        Command::Corollary { state, body, mc } => {
            let f = state.build()?;
            let ball_report = wigner_ball_concentration(&f).map_err(|e| e.to_string())?;
            let even_identity =
                wigner_fourier_relation_check(&f, 1e-6).map_err(|e| e.to_string())?;
            let volume_report = match body {
                Some(path) => {
                    let x = read_body(path)?;
                    Some(wigner_volume_bound(&f, &x, &mc.params()).map_err(|e| e.to_string())?)
                }
                None => None,
            };
            let mut reports = vec![&ball_report, &even_identity];
            if let Some(r) = &volume_report {
                reports.push(r);
            }
            let pass = reports_verdict(&reports)?;
            Ok((render_reports(cli.format, &reports), pass))
        }
        Command::Tradeoff {
            state,
            box_half_widths,
            body,
            mc,
        } => {
            let f = state.build()?;
            let x = match (box_half_widths, body) {
                (Some(widths), None) => ConvexBody::cuboid(parse_vector(widths)?, f.hbar())
                    .map_err(|e| e.to_string())?,
                (None, Some(path)) => read_body(path)?,
                (None, None) => return Err("one of --box or --body is required".into()),
                (Some(_), Some(_)) => return Err("--box and --body are exclusive".into()),
            };
            let report = tradeoff_check(&f, &x, &mc.params()).map_err(|e| e.to_string())?;
            let pass = reports_verdict(&[&report])?;
            Ok((render_reports(cli.format, &[&report]), pass))
        }
        Command::Sweep { nmax, hbar, mc } => sweep(*nmax, *hbar, &mc.params()),
    }
}

fn blob_containment_violations(
    a: &nalgebra::DMatrix<f64>,
    hbar: f64,
    qb: &phasedual::QuantumBlob,
    samples: u64,
    seed: u64,
) -> CliResult<u64> {
    let n = a.nrows();
    let x = ConvexBody::ellipsoid(a.clone(), hbar).map_err(|e| e.to_string())?;
    let dual = x.polar_dual().map_err(|e| e.to_string())?;
    let s = qb.map.matrix();
    let mut rng = McRng::seeded(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let w = nalgebra::DVector::from_vec(rng.in_unit_ball(2 * n)) * hbar.sqrt();
        let z = &s * w;
        let pos = z.rows(0, n).clone_owned();
        let mom = z.rows(n, n).clone_owned();
        if !x.membership(&pos).map_err(|e| e.to_string())?
            || !dual.membership(&mom).map_err(|e| e.to_string())?
        {
            violations += 1;
        }
    }
    Ok(violations)
}

/// The sweep CSV: the bound suite over the unit cube for n = 1..nmax, then a
/// Gaussian trade-off block for n ≤ 2.
fn sweep(nmax: usize, hbar: f64, mc: &McParams) -> CliResult<(String, bool)> {
    if nmax == 0 {
        return Err("--nmax must be at least 1".into());
    }
    let mut out = String::from(
        "n,hbar,bs,kuperberg,mahler_conj,delta_n,mahler_value,mahler_se,pass_lower,pass_upper\n",
    );
    let mut all_pass = true;
    for n in 1..=nmax {
        let cube = ConvexBody::cuboid(nalgebra::DVector::from_element(n, 1.0), hbar)
            .map_err(|e| e.to_string())?;
        let b = bounds(n, hbar).map_err(|e| e.to_string())?;
        let est = mahler_volume(&cube, VolumeRoute::Auto, mc).map_err(|e| e.to_string())?;
        let report = check_bounds(&cube, mc).map_err(|e| e.to_string())?;
        all_pass &= report.lower.pass && report.upper.pass;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            n,
            hbar,
            b.bs_bound,
            b.kuperberg_bound,
            b.mahler_conjecture_value,
            b.delta_n,
            est.value,
            est.std_error,
            report.lower.pass,
            report.upper.pass
        ));
    }

    out.push_str("\ntradeoff_n,hbar,eps,eta,sum,lower_bound,pass\n");
    for n in 1..=nmax.min(2) {
        let a = nalgebra::DMatrix::identity(n, n);
        let grid = if n == 1 {
            phasedual::GridSpec::default_1d(hbar)
        } else {
            phasedual::GridSpec::default_2d_transform(hbar)
        };
        let f = phasedual::harmonic::gaussian_state(&a, grid, hbar).map_err(|e| e.to_string())?;
        let x = ConvexBody::cuboid(nalgebra::DVector::from_element(n, hbar.sqrt()), hbar)
            .map_err(|e| e.to_string())?;
        let report = tradeoff_check(&f, &x, mc).map_err(|e| e.to_string())?;
        all_pass &= report.pass;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            n,
            hbar,
            report.epsilon_star.unwrap_or(f64::NAN),
            report.eta_star.unwrap_or(f64::NAN),
            report.lhs,
            report.rhs,
            report.pass
        ));
    }
    Ok((out.trim_end().to_string(), all_pass))
}

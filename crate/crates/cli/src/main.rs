//! `qloss`: exact simulation studies of photon-loss distributions in
//! rectangular vs triangular multiport interferometer designs.

mod grid;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qloss_core::experiments::{
    distill_simulate, ghz_infidelity_sweep, ghz_pipeline, lambda_rect_closed, lambda_tri_closed,
    p0_lossless, postselected_sweep, preimage_sweep, ps_rect_closed, search_input_assignments,
    DistillationSpec, GhzReport, GhzSpec, MatrixVariant,
};
use qloss_core::loss::{eta_from_db, DesignKind};

use grid::parse_grid;
use output::{fmt_float, provenance_comments, write_csv, write_json, TOOL_VERSION};
use svg::{line_plot, Series, SERIES_COLORS};

#[derive(Parser)]
#[command(
    name = "qloss",
    version,
    about = "Exact Fock-space studies of loss distributions in multiport interferometers"
)]
struct Cli {
    /// Worker threads (default: QLOSS_THREADS env var, then hardware
    /// parallelism). Results are identical for any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignArg {
    Rect,
    Tri,
    Both,
}

impl DesignArg {
    fn designs(self) -> Vec<DesignKind> {
        match self {
            DesignArg::Rect => vec![DesignKind::Rectangular],
            DesignArg::Tri => vec![DesignKind::Triangular],
            DesignArg::Both => DesignKind::BOTH.to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Non-postselected single-photon preimage fidelity vs unit-cell
    /// efficiency, averaged over seeded Haar-random circuits.
    Preimage {
        #[arg(short = 'm', long, default_value_t = 5)]
        modes: usize,
        #[arg(long, value_enum, default_value_t = DesignArg::Both)]
        design: DesignArg,
        /// Efficiency grid: start:stop:count (inclusive) or comma list.
        #[arg(long, default_value = "0.8:1.0:21")]
        etas: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "preimage.csv")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Postselected circuit fidelity vs uniform per-cell loss in dB.
    Postselected {
        #[arg(short = 'm', long, default_value_t = 20)]
        modes: usize,
        #[arg(long, value_enum, default_value_t = DesignArg::Both)]
        design: DesignArg,
        /// Loss grid in dB: start:stop:count or comma list.
        #[arg(long = "loss-db", default_value = "0:0.5:6")]
        loss_db: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "postselected.csv")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Exact photon-distillation transmittance and success probability vs
    /// the closed forms.
    Distill {
        #[arg(short = 'N', long, default_value_t = 5)]
        photons: usize,
        #[arg(long, value_enum, default_value_t = DesignArg::Both)]
        design: DesignArg,
        #[arg(long, default_value = "0.1:1.0:19")]
        etas: String,
        #[arg(long, default_value = "distill.csv")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Heralded GHZ-3 generation: success probability, per-qubit
    /// transmittance, dual-rail state quality, stabilizer errors.
    Ghz {
        #[arg(long, value_enum, default_value_t = DesignArg::Tri)]
        design: DesignArg,
        /// Single unit-cell efficiency, e.g. 0.9848.
        #[arg(long, conflicts_with = "loss_db")]
        eta: Option<f64>,
        /// Per-cell loss grid in dB; enables the infidelity power-law fit
        /// for the triangular design.
        #[arg(long = "loss-db")]
        loss_db: Option<String>,
        /// Rank all 6-of-10 input port subsets by survival weight.
        #[arg(long)]
        search_assignments: bool,
        #[arg(long, default_value = "ghz.json")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Run the invariant suite; nonzero exit on any violation.
    Selftest,
}

enum CliError {
    Config(String),
    Numeric(String),
    Io(std::io::Error),
}

impl From<qloss_core::Error> for CliError {
    fn from(e: qloss_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("QLOSS_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .is_err()
    {
        eprintln!("warning: thread pool already initialized");
    }

    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Preimage {
            modes,
            design,
            etas,
            samples,
            seed,
            out,
            format,
        } => cmd_preimage(modes, design, &etas, samples, seed, &out, format),
        Command::Postselected {
            modes,
            design,
            loss_db,
            samples,
            seed,
            out,
            format,
        } => cmd_postselected(modes, design, &loss_db, samples, seed, &out, format),
        Command::Distill {
            photons,
            design,
            etas,
            out,
            format,
        } => cmd_distill(photons, design, &etas, &out, format),
        Command::Ghz {
            design,
            eta,
            loss_db,
            search_assignments,
            out,
            format,
        } => cmd_ghz(design, eta, loss_db.as_deref(), search_assignments, &out, format),
        Command::Selftest => cmd_selftest(),
    }
}

fn cmd_preimage(
    modes: usize,
    design: DesignArg,
    etas: &str,
    samples: usize,
    seed: u64,
    out: &Path,
    format: FormatArg,
) -> Result<(), CliError> {
    if modes < 2 {
        return Err(CliError::Config("preimage needs at least 2 modes".into()));
    }
    if samples == 0 {
        return Err(CliError::Config("samples must be positive".into()));
    }
    let grid = parse_grid(etas).map_err(CliError::Config)?;
    if grid.iter().any(|&e| !(0.0..=1.0).contains(&e)) {
        return Err(CliError::Config("etas must lie in [0, 1]".into()));
    }
    let sweep = preimage_sweep(modes, &design.designs(), &grid, samples, seed)?;
    let config = format!(
        "preimage modes={modes} designs={:?} etas={etas} samples={samples} seed={seed}",
        design.designs().iter().map(|d| d.label()).collect::<Vec<_>>()
    );
    let comments = provenance_comments(&config);
    match format {
        FormatArg::Csv => {
            let rows: Vec<Vec<String>> = sweep
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.design.label().to_string(),
                        fmt_float(r.eta),
                        fmt_float(r.avg_fidelity),
                        fmt_float(r.min_mode_fidelity),
                        fmt_float(r.max_mode_fidelity),
                        r.samples.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &comments,
                &[
                    "design",
                    "eta",
                    "avg_fidelity",
                    "min_mode_fidelity",
                    "max_mode_fidelity",
                    "samples",
                ],
                &rows,
            )?;
        }
        FormatArg::Svg => {
            let mut series = Vec::new();
            for (k, d) in design.designs().iter().enumerate() {
                let pts: Vec<(f64, f64)> = sweep
                    .records
                    .iter()
                    .filter(|r| r.design == *d)
                    .map(|r| (r.eta, r.avg_fidelity))
                    .collect();
                series.push(Series {
                    label: format!("{d} avg"),
                    color: SERIES_COLORS[k % SERIES_COLORS.len()],
                    points: pts,
                });
            }
            let doc = line_plot("Preimage fidelity", "eta", "fidelity", &series);
            std::fs::write(out, doc)?;
        }
        FormatArg::Json => {
            let points: Vec<serde_json::Value> = sweep
                .records
                .iter()
                .map(|r| {
                    json!({
                        "design": r.design.label(),
                        "eta": r.eta,
                        "avg_fidelity": r.avg_fidelity,
                        "min_mode_fidelity": r.min_mode_fidelity,
                        "max_mode_fidelity": r.max_mode_fidelity,
                        "samples": r.samples,
                    })
                })
                .collect();
            write_json(out, &with_provenance(&config, json!({ "records": points })))?;
        }
    }
    println!("wrote {} ({} records)", out.display(), sweep.records.len());
    Ok(())
}

fn cmd_postselected(
    modes: usize,
    design: DesignArg,
    loss_db: &str,
    samples: usize,
    seed: u64,
    out: &Path,
    format: FormatArg,
) -> Result<(), CliError> {
    if modes < 2 {
        return Err(CliError::Config("postselected needs at least 2 modes".into()));
    }
    if samples == 0 {
        return Err(CliError::Config("samples must be positive".into()));
    }
    let grid = parse_grid(loss_db).map_err(CliError::Config)?;
    if grid.iter().any(|&l| l < 0.0) {
        return Err(CliError::Config("loss values must be nonnegative dB".into()));
    }
    let sweep = postselected_sweep(modes, &design.designs(), &grid, samples, seed)?;
    let config =
        format!("postselected modes={modes} loss_db={loss_db} samples={samples} seed={seed}");
    let comments = provenance_comments(&config);
    match format {
        FormatArg::Csv | FormatArg::Json => {
            let rows: Vec<Vec<String>> = sweep
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.design.label().to_string(),
                        fmt_float(r.loss_db),
                        fmt_float(r.mean_fidelity),
                        r.samples.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &comments,
                &["design", "loss_db", "mean_fidelity", "samples"],
                &rows,
            )?;
        }
        FormatArg::Svg => {
            let mut series = Vec::new();
            for (k, d) in design.designs().iter().enumerate() {
                let pts: Vec<(f64, f64)> = sweep
                    .records
                    .iter()
                    .filter(|r| r.design == *d)
                    .map(|r| (r.loss_db, r.mean_fidelity))
                    .collect();
                series.push(Series {
                    label: d.to_string(),
                    color: SERIES_COLORS[k % SERIES_COLORS.len()],
                    points: pts,
                });
            }
            let doc = line_plot("Postselected fidelity", "loss [dB]", "fidelity", &series);
            std::fs::write(out, doc)?;
        }
    }
    println!("wrote {} ({} records)", out.display(), sweep.records.len());
    Ok(())
}

fn cmd_distill(
    photons: usize,
    design: DesignArg,
    etas: &str,
    out: &Path,
    format: FormatArg,
) -> Result<(), CliError> {
    if !(2..=5).contains(&photons) {
        return Err(CliError::Config(
            "distill supports 2 <= N <= 5 (exact desk-scale simulation)".into(),
        ));
    }
    let grid = parse_grid(etas).map_err(CliError::Config)?;
    if grid.iter().any(|&e| !(0.0 < e && e <= 1.0)) {
        return Err(CliError::Config("etas must lie in (0, 1]".into()));
    }
    let mut rows = Vec::new();
    let mut plot: Vec<(DesignKind, Vec<(f64, f64)>)> = Vec::new();
    for d in design.designs() {
        let mut pts = Vec::new();
        for &eta in &grid {
            let closed = match d {
                DesignKind::Rectangular => lambda_rect_closed(photons, eta)?,
                DesignKind::Triangular => lambda_tri_closed(photons, eta)?,
            };
            let ps_closed = match d {
                DesignKind::Rectangular => Some(ps_rect_closed(photons, eta)?),
                DesignKind::Triangular => None,
            };
            match distill_simulate(&DistillationSpec::new(photons, d, eta)) {
                Ok(outcome) => {
                    rows.push(vec![
                        d.label().to_string(),
                        photons.to_string(),
                        fmt_float(eta),
                        fmt_float(outcome.p_s),
                        fmt_float(outcome.lambda),
                        fmt_float(closed),
                        ps_closed.map(fmt_float).unwrap_or_default(),
                        fmt_float((outcome.lambda - closed).abs()),
                    ]);
                    pts.push((eta, outcome.lambda));
                }
                Err(qloss_core::Error::DegenerateHerald) => {
                    // Herald probability below the resolvable threshold:
                    // emit the row with empty simulated columns.
                    rows.push(vec![
                        d.label().to_string(),
                        photons.to_string(),
                        fmt_float(eta),
                        String::new(),
                        String::new(),
                        fmt_float(closed),
                        ps_closed.map(fmt_float).unwrap_or_default(),
                        String::new(),
                    ]);
                }
                Err(e) => return Err(e.into()),
            }
        }
        plot.push((d, pts));
    }
    let config = format!("distill photons={photons} etas={etas} p0={}", p0_lossless(photons)?);
    let comments = provenance_comments(&config);
    match format {
        FormatArg::Csv | FormatArg::Json => {
            write_csv(
                out,
                &comments,
                &[
                    "design",
                    "N",
                    "eta",
                    "p_s_simulated",
                    "lambda_simulated",
                    "lambda_closed_form",
                    "p_s_closed_form",
                    "abs_diff",
                ],
                &rows,
            )?;
        }
        FormatArg::Svg => {
            let series: Vec<Series> = plot
                .into_iter()
                .enumerate()
                .map(|(k, (d, points))| Series {
                    label: d.to_string(),
                    color: SERIES_COLORS[k % SERIES_COLORS.len()],
                    points,
                })
                .collect();
            let doc = line_plot(
                "Distillation conditional transmittance",
                "eta",
                "lambda",
                &series,
            );
            std::fs::write(out, doc)?;
        }
    }
    println!("wrote {} ({} records)", out.display(), rows.len());
    Ok(())
}

fn ghz_report_json(r: &GhzReport) -> serde_json::Value {
    json!({
        "matrix_variant": r.matrix_variant.label(),
        "p_s": r.p_s,
        "qubit_lambdas": r.qubit_lambdas,
        "spectator_occupation": r.spectator_occupation,
        "dualrail_prob": r.dualrail_prob,
        "purity": r.purity,
        "fidelity": r.fidelity,
        "alpha": r.alpha,
        "alpha_warning": r.alpha_warning,
        "stabilizer_errors": r.stabilizer_errors.iter()
            .map(|(element, p_error)| json!({ "element": element, "p_error": p_error }))
            .collect::<Vec<_>>(),
        "column_residual": r.column_residual,
        "degenerate": r.degenerate,
    })
}

fn cmd_ghz(
    design: DesignArg,
    eta: Option<f64>,
    loss_db: Option<&str>,
    search_assignments: bool,
    out: &Path,
    format: FormatArg,
) -> Result<(), CliError> {
    if design == DesignArg::Both {
        return Err(CliError::Config(
            "ghz runs one design at a time (rect or tri)".into(),
        ));
    }
    if format == FormatArg::Svg {
        return Err(CliError::Config("ghz emits JSON reports; use --format json".into()));
    }
    let kind = design.designs()[0];
    // (loss_db, eta) per grid point.
    let points: Vec<(Option<f64>, f64)> = match (eta, loss_db) {
        (Some(e), None) => {
            if !(0.0..=1.0).contains(&e) {
                return Err(CliError::Config("eta must lie in [0, 1]".into()));
            }
            vec![(None, e)]
        }
        (None, Some(spec)) => {
            let dbs = parse_grid(spec).map_err(CliError::Config)?;
            if dbs.iter().any(|&l| l < 0.0) {
                return Err(CliError::Config("loss values must be nonnegative dB".into()));
            }
            dbs.iter().map(|&db| (Some(db), 0.0)).collect()
        }
        (None, None) => vec![(None, 0.9848)],
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    let mut point_reports = Vec::new();
    let mut fit_block = serde_json::Value::Null;

    if points.iter().all(|(db, _)| db.is_some()) && kind == DesignKind::Triangular {
        // Grid sweep with fit.
        let dbs: Vec<f64> = points.iter().map(|(db, _)| db.unwrap()).collect();
        let (reports, fit) = ghz_infidelity_sweep(&dbs)?;
        for (db, report) in &reports {
            let mut value = ghz_report_json(report);
            value["loss_db"] = json!(db);
            value["eta"] = json!(report.eta);
            value["design"] = json!(report.design.label());
            value["printed"] = variant_report(kind, report.eta, MatrixVariant::Printed)?;
            value["polar_corrected"] =
                variant_report(kind, report.eta, MatrixVariant::PolarCorrected)?;
            point_reports.push(value);
        }
        fit_block = json!({
            "coefficient": fit.coefficient,
            "exponent": fit.exponent,
            "residual": fit.residual,
        });
    } else {
        for (db, eta_val) in &points {
            let eta_val = match db {
                Some(db) => eta_from_db(*db)?,
                None => *eta_val,
            };
            let report = ghz_pipeline(&GhzSpec::new(kind, eta_val))?;
            let mut value = ghz_report_json(&report);
            value["loss_db"] = json!(db);
            value["eta"] = json!(eta_val);
            value["design"] = json!(kind.label());
            value["printed"] = variant_report(kind, eta_val, MatrixVariant::Printed)?;
            value["polar_corrected"] =
                variant_report(kind, eta_val, MatrixVariant::PolarCorrected)?;
            point_reports.push(value);
        }
    }

    let n_points = point_reports.len();
    let mut body = json!({ "points": point_reports, "fit": fit_block });
    if search_assignments {
        let eta_for_search = points
            .first()
            .map(|(db, e)| db.map_or(*e, |d| eta_from_db(d).unwrap_or(1.0)))
            .unwrap_or(0.9848);
        let ranked = search_input_assignments(kind, eta_for_search)?;
        let top: Vec<serde_json::Value> = ranked
            .iter()
            .take(10)
            .map(|c| {
                json!({
                    "ports_one_based": c.ports.iter().map(|p| p + 1).collect::<Vec<_>>(),
                    "survival_weight": c.survival_weight,
                    "alpha": c.alpha,
                    "fidelity": c.fidelity,
                })
            })
            .collect();
        let spread = ranked
            .iter()
            .map(|c| c.alpha)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
                (lo.min(a), hi.max(a))
            });
        body["assignment_search"] = json!({
            "candidates": ranked.len(),
            "alpha_min": spread.0,
            "alpha_max": spread.1,
            "top_by_survival_weight": top,
        });
    }

    let config = format!(
        "ghz design={} eta={eta:?} loss_db={loss_db:?} search={search_assignments}",
        kind.label()
    );
    write_json(out, &with_provenance(&config, body))?;
    println!("wrote {} ({n_points} points)", out.display());
    Ok(())
}

fn variant_report(
    kind: DesignKind,
    eta: f64,
    variant: MatrixVariant,
) -> Result<serde_json::Value, CliError> {
    let spec = GhzSpec::new(kind, eta).with_matrix(variant);
    Ok(ghz_report_json(&ghz_pipeline(&spec)?))
}

fn with_provenance(config: &str, mut body: serde_json::Value) -> serde_json::Value {
    body["tool"] = json!(format!("qloss {TOOL_VERSION}"));
    body["invocation"] = json!(output::invocation());
    body["config"] = json!(config);
    body["rng"] = json!(qloss_core::numerics::RNG_ALGORITHM);
    body
}

fn cmd_selftest() -> Result<(), CliError> {
    let checks = qloss_core::selftest::run_all()?;
    let mut failed = 0;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<34} worst {:.3e} (tol {:.1e})",
            check.name, check.worst, check.tolerance
        );
        if !check.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Numeric(format!("{failed} selftest check(s) failed")));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

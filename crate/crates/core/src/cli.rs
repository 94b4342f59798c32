//! `spinorsurf <command> --config <path> [--out <dir>]`.

use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::charts::compute_geometry;
use crate::config::{Command, RunConfig, SurfaceConfig};
use crate::error::{Error, Result};
use crate::export::{obj_string, spinor_columns, write_csv, write_obj};
use crate::periods::{diameter, rigid_align};
use crate::spinor::SpinorFieldGrid;
use crate::verify::{self, grid_label, patch_surface, Report, Sample};

#[derive(Debug, Parser)]
#[command(name = "spinorsurf", version, about = "Spinor fields on surfaces: generate, restrict, verify, reconstruct")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `out` in the config, default `out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit status of a run that got past configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

pub fn exit_code(result: &Result<Status>) -> i32 {
    match result {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) => 1,
        Err(Error::Config(_)) => 2,
        Err(_) => 1,
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    let cfg = RunConfig::load(&cli.config)?;
    if let Some(c) = cfg.command {
        if c != cli.command {
            return Err(Error::Config(format!(
                "config is for `{}`, command line asks for `{}`",
                name(c),
                name(cli.command)
            )));
        }
    }
    let out = cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    match cli.command {
        Command::Generate => generate(&cfg, &out),
        Command::Restrict => restrict(&cfg, &out),
        Command::Verify => verify_cmd(&cfg, &out),
        Command::Reconstruct => reconstruct_cmd(&cfg, &out).map(|(s, _)| s),
        Command::Report => report_cmd(&cfg, &out),
    }
}

fn name(c: Command) -> &'static str {
    match c {
        Command::Generate => "generate",
        Command::Restrict => "restrict",
        Command::Verify => "verify",
        Command::Reconstruct => "reconstruct",
        Command::Report => "report",
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })? + "\n";
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshSummary {
    pub surface: String,
    pub grid: String,
    pub vertices: usize,
    pub faces: usize,
    pub file: String,
}

fn meshes(cfg: &RunConfig, out: &Path) -> Result<Vec<MeshSummary>> {
    let [n_u, n_v] = cfg.finest();
    let mut all = Vec::new();
    for s in &cfg.surfaces {
        let label = s.label();
        let chart = s.build(n_u, n_v)?;
        let file = format!("{label}.obj");
        let text = obj_string(&label, &chart.grid, &chart.positions());
        std::fs::write(out.join(&file), &text).map_err(|e| Error::io(out.join(&file), e))?;
        all.push(MeshSummary {
            surface: label,
            grid: grid_label([n_u, n_v]),
            vertices: chart.grid.len(),
            faces: text.lines().filter(|l| l.starts_with("f ")).count(),
            file,
        });
    }
    Ok(all)
}

fn generate(cfg: &RunConfig, out: &Path) -> Result<Status> {
    for m in meshes(cfg, out)? {
        println!("{}: {} vertices, {} faces -> {}", m.surface, m.vertices, m.faces, m.file);
    }
    Ok(Status::Pass)
}

fn restrict(cfg: &RunConfig, out: &Path) -> Result<Status> {
    let [n_u, n_v] = cfg.finest();
    for s in &cfg.surfaces {
        let chart = s.build(n_u, n_v)?;
        let geom = compute_geometry(&chart, s.derivative_mode(cfg.derivative_mode))?;
        let phi = SpinorFieldGrid::restrict_parallel(&geom, cfg.spinor(), 0)?;
        let file = out.join(format!("{}_spinor.csv", s.label()));
        write_csv(&file, &geom.grid, &spinor_columns(&phi, &geom))?;
        println!("{}: {} nodes -> {}", s.label(), geom.grid.len(), file.display());
    }
    Ok(Status::Pass)
}

fn print_report(report: &Report) {
    for e in &report.entries {
        let residual = e.residual.map_or("error".to_owned(), |r| format!("{r:.3e}"));
        let order = e.measured_order.map_or(String::new(), |o| format!(" order {o:.2}"));
        println!(
            "{} {} [{} {}] residual {} tol {:.0e}{}",
            if e.pass { "PASS" } else { "FAIL" },
            e.check_id,
            e.surface,
            e.grid,
            residual,
            e.tolerance,
            order
        );
    }
    println!("{} passed, {} failed", report.passed, report.failed);
}

fn verify_cmd(cfg: &RunConfig, out: &Path) -> Result<Status> {
    let report = verify::run(cfg);
    std::fs::write(out.join("report.json"), report.to_json()).map_err(|e| Error::io(out.join("report.json"), e))?;
    print_report(&report);
    Ok(if report.all_pass() { Status::Pass } else { Status::Fail })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionSummary {
    pub surface: String,
    pub grid: String,
    pub rms: Option<f64>,
    pub diameter: Option<f64>,
    pub relative_rms: Option<f64>,
    pub loop_residual: Option<f64>,
    pub estimate: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

fn reconstruct_one(cfg: &RunConfig, s: &SurfaceConfig, out: &Path) -> Result<ReconstructionSummary> {
    let [n_u, n_v] = cfg.finest();
    let patch = patch_surface(s);
    let label = patch.label();
    let tolerance = cfg.tolerances.get("periods.round_trip").copied().unwrap_or(1e-3);
    let sample = Sample::new(patch.build(n_u, n_v)?, patch.derivative_mode(cfg.derivative_mode), cfg.spinor())?;
    let mut summary = ReconstructionSummary {
        surface: label.clone(),
        grid: grid_label([n_u, n_v]),
        rms: None,
        diameter: None,
        relative_rms: None,
        loop_residual: None,
        estimate: None,
        tolerance,
        pass: false,
        note: None,
        file: None,
    };
    match sample.reconstruction() {
        Err(e) => summary.note = Some(e),
        Ok(rec) => {
            let fit = rigid_align(&rec.immersion, &sample.chart);
            let aligned: Vec<_> = rec
                .immersion
                .points()
                .iter()
                .map(|p| fit.rotation * p + fit.translation)
                .collect();
            let file = format!("{label}_reconstructed.obj");
            write_obj(&out.join(&file), &format!("{label} reconstructed"), &rec.immersion.grid, &aligned)?;
            let d = diameter(&sample.chart.positions());
            summary.rms = Some(fit.rms);
            summary.diameter = Some(d);
            summary.relative_rms = Some(fit.rms / d);
            summary.loop_residual = Some(rec.loop_residual);
            summary.estimate = Some(rec.estimate);
            summary.pass = fit.rms / d <= tolerance;
            summary.file = Some(file);
        }
    }
    Ok(summary)
}

fn reconstruct_cmd(cfg: &RunConfig, out: &Path) -> Result<(Status, Vec<ReconstructionSummary>)> {
    let mut all = Vec::new();
    for s in &cfg.surfaces {
        let r = reconstruct_one(cfg, s, out)?;
        match (&r.relative_rms, &r.note) {
            (Some(rel), _) => println!(
                "{} {}: alignment RMS {:.3e} ({:.3e} of diameter)",
                if r.pass { "PASS" } else { "FAIL" },
                r.surface,
                r.rms.unwrap_or(f64::NAN),
                rel
            ),
            (None, note) => println!("FAIL {}: {}", r.surface, note.as_deref().unwrap_or("no reconstruction")),
        }
        all.push(r);
    }
    write_json(&out.join("reconstruction.json"), &all)?;
    let ok = all.iter().all(|r| r.pass);
    Ok((if ok { Status::Pass } else { Status::Fail }, all))
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub meshes: Vec<MeshSummary>,
    pub reconstructions: Vec<ReconstructionSummary>,
    pub verification: Report,
}

fn report_cmd(cfg: &RunConfig, out: &Path) -> Result<Status> {
    let meshes = meshes(cfg, out)?;
    let (rec_status, reconstructions) = reconstruct_cmd(cfg, out)?;
    let verification = verify::run(cfg);
    print_report(&verification);
    let ok = verification.all_pass() && rec_status == Status::Pass;
    write_json(
        &out.join("aggregate.json"),
        &Aggregate {
            meshes,
            reconstructions,
            verification,
        },
    )?;
    Ok(if ok { Status::Pass } else { Status::Fail })
}

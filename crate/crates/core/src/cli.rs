//! The `spherocurve` command line.
//!
//! Exit codes: 0 success, 1 output failure, 2 invalid input (schema, range
//! or usage), 3 geometric failure, 4 condition (L) or local convexity
//! violated. Errors go to stderr prefixed by their name, e.g.
//! `ChartError: ...`.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::convexity::{analyze_convexity, ConvexityOptions, WitnessOptions};
use crate::curves::{AnyCurve, Curve, Curve4, Space};
use crate::decomp::{compose, condition_l_report, decompose, ConditionLReport};
use crate::error::{Error, Result};
use crate::frenet::{frame_curve_uniform, FrameCurve};
use crate::io::{parse, to_json, CurveDoc, PairDoc};
use crate::quatspin::{SpinPair, UnitQuaternion};
use crate::sphere2::{
    distinguished_hemisphere, hemisphere_classify, necessary_convexity_condition, planar_svg, rotation_about,
    stereographic_project, HemisphereReport, Hemisphericity, NecessaryConditionReport, SphereRotation,
};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SPHEROCURVE_THREADS";
/// Smallest accepted `--samples`.
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "spherocurve", version, about = "Locally convex curves on S2 and S3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frenet frames, curvature, torsion and det(x, x', ...) along a grid (CSV by default).
    Frame(RunArgs),
    /// Split a curve on S3 into its left and right parts on S2 (pair document).
    Decompose(RunArgs),
    /// Rebuild a curve on S3 from a pair document.
    Compose(RunArgs),
    /// Witness search, certificate and top-cell monitor for a curve on S3.
    Convexity(RunArgs),
    /// Hemisphere and rotation number of a closed curve on S2; for a curve on
    /// S3 ending at (1, -1), the same for its left part.
    Rotation(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CatalogName {
    Sigma,
    Gamma1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Catalog curve to analyse.
    #[arg(long, value_enum, conflicts_with = "input")]
    pub catalog: Option<CatalogName>,
    /// Curve or pair document (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Length of the circle `sigma`.
    #[arg(long)]
    pub c: Option<f64>,
    /// Number of iterations of the catalog curve.
    #[arg(long)]
    pub m: Option<f64>,
    /// Intervals of the analysis grids (at least 16).
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// Tolerance for zeros of hyperplane functions.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for the budgeted searches.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub samples: usize,
    pub tol: f64,
    pub format: Option<Format>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum Source {
    Catalog(CatalogEntry),
    Document(String),
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        if args.samples < MIN_SAMPLES {
            return Err(Error::Range {
                what: "--samples",
                value: args.samples as f64,
                expected: ">= 16",
            });
        }
        let tol = args.tol.unwrap_or(crate::convexity::INTERSECTION_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Range {
                what: "--tol",
                value: tol,
                expected: "> 0",
            });
        }
        let source = match (&args.catalog, &args.input) {
            (Some(CatalogName::Sigma), None) => {
                let c = args
                    .c
                    .ok_or_else(|| Error::Schema("--catalog sigma needs --c".into()))?;
                Source::Catalog(CatalogEntry::Sigma {
                    c,
                    m: args.m.unwrap_or(1.0),
                })
            }
            (Some(CatalogName::Gamma1), None) => Source::Catalog(CatalogEntry::Gamma1 {
                m: args.m.unwrap_or(1.0),
            }),
            (None, Some(path)) => Source::Document(
                fs::read_to_string(path).map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?,
            ),
            _ => return Err(Error::Schema("exactly one of --catalog and --input is required".into())),
        };
        Ok(RunConfig {
            source,
            samples: args.samples,
            tol,
            format: args.format,
            seed: args.seed,
        })
    }

    fn curve(&self) -> Result<AnyCurve> {
        match &self.source {
            Source::Catalog(entry) => entry.build(),
            Source::Document(json) => parse::<CurveDoc>(json)?.build(),
        }
    }

    fn curve4(&self) -> Result<Curve4> {
        match self.curve()? {
            AnyCurve::Dim4(c) if c.space() == Space::S3 => Ok(c),
            other => Err(Error::Schema(format!(
                "expected a curve on S3, got {:?}",
                other.space()
            ))),
        }
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Error::Schema(format!("format {f:?} is not available for this command")))
        }
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema(_) | Error::Range { .. } => 2,
        Error::ConditionL { .. } | Error::Convexity { .. } => 4,
        _ => 3,
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("{}: {e}", e.name());
        return exit_code(&e);
    }
    let (Command::Frame(args)
    | Command::Decompose(args)
    | Command::Compose(args)
    | Command::Convexity(args)
    | Command::Rotation(args)) = &cli.command;
    let output = RunConfig::from_args(args).and_then(|cfg| execute(&cli.command, &cfg));
    match output {
        Ok(text) => {
            let written = match &args.out {
                Some(path) => fs::write(path, text.as_bytes()),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("IoError: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            exit_code(&e)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Schema(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // A second initialisation in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Runs a command and returns its rendered output.
pub fn execute(command: &Command, cfg: &RunConfig) -> Result<String> {
    match command {
        Command::Frame(_) => cmd_frame(cfg),
        Command::Decompose(_) => cmd_decompose(cfg),
        Command::Compose(_) => cmd_compose(cfg),
        Command::Convexity(_) => cmd_convexity(cfg),
        Command::Rotation(_) => cmd_rotation(cfg),
    }
}

#[derive(Serialize)]
struct FrameRecord {
    t: f64,
    frame: Vec<Vec<f64>>,
    kappa: f64,
    tau: Option<f64>,
    det: f64,
}

#[derive(Serialize)]
struct FrameReport {
    space: Space,
    samples: Vec<FrameRecord>,
}

fn frame_report<const D: usize>(fc: &FrameCurve<D>) -> FrameReport {
    FrameReport {
        space: Space::for_dim(D, true),
        samples: (0..fc.len())
            .map(|i| {
                let p = fc.point(i);
                let (_, kappa, tau) = p.invariants();
                let m = p.frame.matrix();
                FrameRecord {
                    t: fc.ts[i],
                    frame: (0..D).map(|r| (0..D).map(|c| m[(r, c)]).collect()).collect(),
                    kappa,
                    tau,
                    det: (0..D).map(|k| p.remainder[(k, k)]).product(),
                }
            })
            .collect(),
    }
}

pub fn cmd_frame(cfg: &RunConfig) -> Result<String> {
    let format = cfg.format(Format::Csv, &[Format::Csv, Format::Json])?;
    match cfg.curve()? {
        AnyCurve::Dim3(c) => render_frames(&frame_curve_uniform(&c, cfg.samples)?, format),
        AnyCurve::Dim4(c) => render_frames(&frame_curve_uniform(&c, cfg.samples)?, format),
    }
}

fn render_frames<const D: usize>(fc: &FrameCurve<D>, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => fc.to_csv(),
        _ => to_json(&frame_report(fc)),
    })
}

/// Lifted endpoint with a readable label such as `(-1, k)`.
#[derive(Debug, Clone, Serialize)]
pub struct EndpointReport {
    pub label: String,
    pub zl: [f64; 4],
    pub zr: [f64; 4],
}

impl From<SpinPair> for EndpointReport {
    fn from(p: SpinPair) -> Self {
        EndpointReport {
            label: format!("({}, {})", unit_label(p.zl), unit_label(p.zr)),
            zl: p.zl.quaternion().to_array(),
            zr: p.zr.quaternion().to_array(),
        }
    }
}

fn unit_label(z: UnitQuaternion) -> String {
    const NAMES: [&str; 4] = ["1", "i", "j", "k"];
    let q = z.quaternion().to_array();
    for (k, name) in NAMES.iter().enumerate() {
        for sign in [1.0, -1.0] {
            let off: f64 = (0..4)
                .map(|i| (q[i] - if i == k { sign } else { 0.0 }).powi(2))
                .sum::<f64>()
                .sqrt();
            if off < 1e-5 {
                return if sign > 0.0 {
                    name.to_string()
                } else {
                    format!("-{name}")
                };
            }
        }
    }
    format!("{:.6}{:+.6}i{:+.6}j{:+.6}k", q[0], q[1], q[2], q[3])
}

#[derive(Serialize)]
struct DecomposeReport {
    #[serde(flatten)]
    pair: PairDoc,
    endpoint: EndpointReport,
    condition_l: ConditionLReport,
}

pub fn cmd_decompose(cfg: &RunConfig) -> Result<String> {
    cfg.format(Format::Json, &[Format::Json])?;
    let gamma = cfg.curve4()?;
    let d = decompose(&gamma, cfg.samples)?;
    let condition_l = condition_l_report(&d.pair)?;
    Ok(to_json(&DecomposeReport {
        pair: PairDoc::from_pair(&d.left, &d.right, cfg.samples),
        endpoint: d.endpoint().into(),
        condition_l,
    }))
}

#[derive(Serialize)]
struct ComposeReport {
    curve: CurveDoc,
    endpoint: EndpointReport,
    condition_l: ConditionLReport,
}

pub fn cmd_compose(cfg: &RunConfig) -> Result<String> {
    cfg.format(Format::Json, &[Format::Json])?;
    let Source::Document(json) = &cfg.source else {
        return Err(Error::Schema("compose reads a pair document given with --input".into()));
    };
    let pair = parse::<PairDoc>(json)?.build()?;
    let condition_l = condition_l_report(&pair)?;
    let out = compose(&pair, pair.samples)?;
    Ok(to_json(&ComposeReport {
        curve: CurveDoc::from_sampled(&out.curve),
        endpoint: out.endpoint().into(),
        condition_l,
    }))
}

pub fn cmd_convexity(cfg: &RunConfig) -> Result<String> {
    cfg.format(Format::Json, &[Format::Json])?;
    let gamma = cfg.curve4()?;
    let opts = ConvexityOptions {
        samples: cfg.samples,
        witness: WitnessOptions {
            seed: cfg.seed,
            tol: cfg.tol,
            ..WitnessOptions::default()
        },
    };
    Ok(to_json(&analyze_convexity(&gamma, &opts)?))
}

/// Hemisphere and, when defined, rotation number of a closed curve on `S2`.
#[derive(Debug, Clone, Serialize)]
pub struct RotationReport {
    pub hemisphere: HemisphereReport,
    /// `None` when the curve lies in no closed hemisphere or passes the pole.
    pub rotation: Option<SphereRotation>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum RotationOutput {
    Sphere(RotationReport),
    Condition(NecessaryConditionReport),
}

pub fn cmd_rotation(cfg: &RunConfig) -> Result<String> {
    let format = cfg.format(Format::Json, &[Format::Json, Format::Svg])?;
    match cfg.curve()? {
        AnyCurve::Dim3(c) => {
            let hemisphere = hemisphere_classify(&c, cfg.samples);
            let center = match hemisphere.classification {
                Hemisphericity::Neither => None,
                _ => Some(distinguished_hemisphere(&c, cfg.samples)?),
            };
            if format == Format::Svg {
                let center = center.ok_or(Error::EmptyFeasible {
                    margin: hemisphere.margin,
                })?;
                return planar_svg(
                    &stereographic_project(&c, &center, cfg.samples)?,
                    "stereographic projection",
                );
            }
            let rotation = match center {
                Some(h) => match rotation_about(&c, hemisphere, h, cfg.samples) {
                    Ok(r) => Some(r),
                    Err(Error::Pole { .. }) => None,
                    Err(e) => return Err(e),
                },
                None => None,
            };
            Ok(to_json(&RotationOutput::Sphere(RotationReport {
                hemisphere,
                rotation,
            })))
        }
        AnyCurve::Dim4(g) => {
            let report = necessary_convexity_condition(&g, cfg.samples)?;
            if format == Format::Svg {
                let left = decompose(&g, cfg.samples)?.left;
                return planar_svg(
                    &stereographic_project(&left, &report.left.center, cfg.samples)?,
                    "left part, stereographic projection",
                );
            }
            Ok(to_json(&RotationOutput::Condition(report)))
        }
    }
}

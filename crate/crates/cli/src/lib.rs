//! Command-line front end: surface generation, analysis and the theorem suite.
//!
//! Exit codes: 0 success, 1 verification failed, 2 invalid flags or input,
//! 3 geometric failure (domain, singularity, degenerate data) or I/O.

pub mod mesh;
pub mod recipe;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use casurf::analysis::{
    check_theorem_suite, classify_curve, classify_surface, AxisFit, CurveClassification, Stats,
    SuiteReport, TheoremCase,
};
use casurf::surface::first_fundamental;
use casurf::{GeometryError, Interval};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use mesh::MeshBuffer;
pub use recipe::{build_curve, Family, Recipe};

pub const TOOL_VERSION: &str = concat!("casurf ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Usage(_) => "UsageError",
            Self::Geometry(e) => e.name(),
            Self::Io(_) => "IoError",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Geometry(GeometryError::InvalidInput(_)) => 2,
            Self::Geometry(_) | Self::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "casurf",
    version,
    about = "Constant angle spacelike surfaces in Minkowski 3-space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a surface and write a mesh.
    Generate(GenerateArgs),
    /// Fit an axis and report the constant angle verdict; exit 1 if it fails.
    Analyze(AnalyzeArgs),
    /// Run the seeded theorem checks; exit 1 if any fails.
    VerifySuite(SuiteArgs),
    /// Line, circle and helix tests for a curve, as JSON.
    CurveClassify(CurveArgs),
}

fn range_arg(s: &str) -> Result<Interval, String> {
    recipe::parse_range(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// theorem35 | tangent | cylinder | cone | plane
    #[arg(long)]
    pub family: Option<Family>,
    /// Hyperbolic angle.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// zero | one | invsin | poly:c0,c1,... | file:PATH
    #[arg(long)]
    pub alpha: Option<String>,
    /// Turning function of a helix, poly:c0,c1,...
    #[arg(long)]
    pub helix_lambda: Option<String>,
    /// file:PATH (columns s,x1,x2,x3) or a preset name
    #[arg(long)]
    pub curve: Option<String>,
    /// Ruling direction of a cylinder, x1,x2,x3
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
    #[arg(long, value_parser = range_arg, allow_hyphen_values = true)]
    pub u: Option<Interval>,
    #[arg(long, value_parser = range_arg, allow_hyphen_values = true)]
    pub v: Option<Interval>,
    #[arg(long, value_parser = range_arg, allow_hyphen_values = true)]
    pub s: Option<Interval>,
    #[arg(long, value_parser = range_arg, allow_hyphen_values = true)]
    pub t: Option<Interval>,
    #[arg(long, default_value_t = 64)]
    pub nu: usize,
    #[arg(long, default_value_t = 64)]
    pub nv: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Obj,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    pub format: Format,
    /// Also write the lattice samples as CSV.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// A JSON file written by `generate --format json`, or a bare recipe.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// Residual bound for the constant angle verdict.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma separated subset of theorem35,tangent,cylinder,cone.
    #[arg(long, value_delimiter = ',')]
    pub cases: Vec<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// file:PATH (columns s,x1,x2,x3) or a preset name
    #[arg(long)]
    pub curve: String,
    /// Hyperbolic angle used by the helix presets.
    #[arg(long, default_value_t = 2.0)]
    pub theta: f64,
    #[arg(long, value_parser = range_arg, allow_hyphen_values = true)]
    pub s: Option<Interval>,
    /// Number of sample parameters.
    #[arg(long, default_value_t = 33)]
    pub samples: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval { lo, hi }
}

impl SurfaceArgs {
    /// Resolves defaults and rejects flags that do not apply to the family.
    pub fn recipe(&self) -> Result<Recipe, CliError> {
        let family = self
            .family
            .ok_or_else(|| CliError::Usage("--family is required".into()))?;
        let over_curve = family.is_ruled_over_curve();
        let misplaced = if over_curve {
            [
                ("--u", self.u.is_some()),
                ("--v", self.v.is_some()),
                ("--alpha", self.alpha.is_some()),
            ]
        } else {
            [
                ("--s", self.s.is_some()),
                ("--t", self.t.is_some()),
                ("--curve", self.curve.is_some()),
            ]
        };
        if let Some((flag, _)) = misplaced.iter().find(|m| m.1) {
            return Err(CliError::Usage(format!(
                "{flag} does not apply to family {family}"
            )));
        }
        if family != Family::Tangent && self.helix_lambda.is_some() {
            return Err(CliError::Usage(format!(
                "--helix-lambda does not apply to family {family}"
            )));
        }
        if family != Family::Cylinder && self.direction.is_some() {
            return Err(CliError::Usage(format!(
                "--direction does not apply to family {family}"
            )));
        }
        let direction = match &self.direction {
            Some(d) => {
                let xs = recipe::parse_reals(d)?;
                let arr: [f64; 3] = xs.try_into().map_err(|_| {
                    CliError::Usage(format!("--direction needs three components, got {d:?}"))
                })?;
                Some(arr)
            }
            None => None,
        };
        let theta = self.theta.unwrap_or(1.0);
        let (first, second) = match family {
            Family::Canonical => {
                let v_default = if self.alpha.as_deref() == Some("invsin") {
                    iv(0.2, 2.94)
                } else {
                    iv(0.0, std::f64::consts::TAU)
                };
                (self.u.unwrap_or(iv(0.1, 2.0)), self.v.unwrap_or(v_default))
            }
            Family::Plane => (
                self.u.unwrap_or(iv(0.0, 1.0)),
                self.v.unwrap_or(iv(0.0, 1.0)),
            ),
            _ => {
                let s = match (self.s, &self.curve) {
                    (Some(s), _) => s,
                    (None, Some(c)) => build_curve(c, theta, None)?.domain(),
                    (None, None) => iv(0.0, std::f64::consts::TAU),
                };
                let t_default = match family {
                    Family::Cone => iv(0.2, 2.0),
                    Family::Cylinder => iv(-1.0, 1.0),
                    _ => iv(0.05, 1.0),
                };
                (s, self.t.unwrap_or(t_default))
            }
        };
        Ok(Recipe {
            family,
            theta,
            alpha: self.alpha.clone(),
            helix_lambda: self.helix_lambda.clone(),
            curve: self.curve.clone(),
            direction,
            first,
            second,
            nu: self.nu,
            nv: self.nv,
        })
    }
}

/// Output of `generate --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedSurface {
    pub tool_version: String,
    pub recipe: Recipe,
    pub mesh: MeshBuffer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    /// Lattice points left after excluding singular ones.
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormStats {
    pub e: Stats,
    pub f: Stats,
    pub g: Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub tool_version: String,
    pub seed: u64,
    pub surface: Recipe,
    pub grid: GridSpec,
    pub tolerance: f64,
    pub is_constant_angle: bool,
    pub axis_fit: AxisFit,
    pub flatness_max: f64,
    pub flatness_mean: f64,
    pub fundamental_forms: FormStats,
    pub notes: String,
}

/// Builds, samples and classifies the surface of `recipe`.
pub fn analyze_recipe(recipe: &Recipe, tol: f64, seed: u64) -> Result<AnalysisDocument, CliError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let surf = recipe.build()?;
    let grid = surf.grid(recipe.nu, recipe.nv);
    let report = classify_surface(&surf, recipe.family.surface_family(), &grid, tol)?;
    let forms = grid
        .iter()
        .map(|&p| first_fundamental(&surf, p))
        .collect::<casurf::Result<Vec<_>>>()?;
    let column = |k: usize| -> Stats {
        let xs: Vec<f64> = forms.iter().map(|&(e, f, g)| [e, f, g][k]).collect();
        Stats::of(&xs)
    };
    Ok(AnalysisDocument {
        tool_version: TOOL_VERSION.into(),
        seed,
        surface: recipe.clone(),
        grid: GridSpec {
            nu: recipe.nu,
            nv: recipe.nv,
            points: grid.len(),
        },
        tolerance: tol,
        is_constant_angle: report.is_constant_angle,
        axis_fit: report.axis_fit,
        flatness_max: report.flatness_max,
        flatness_mean: report.flatness_mean,
        fundamental_forms: FormStats {
            e: column(0),
            f: column(1),
            g: column(2),
        },
        notes: report.notes,
    })
}

/// Reads the recipe of a `generate --format json` file or a bare recipe.
pub fn read_recipe(path: &Path) -> Result<Recipe, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if let Ok(doc) = serde_json::from_str::<GeneratedSurface>(&text) {
        return Ok(doc.recipe);
    }
    serde_json::from_str::<Recipe>(&text).map_err(|e| {
        CliError::Usage(format!(
            "{}: not a surface file or recipe: {e}",
            path.display()
        ))
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<MeshBuffer, CliError> {
    let recipe = args.surface.recipe()?;
    let surf = recipe.build()?;
    let mesh = MeshBuffer::from_surface(&surf, recipe.nu, recipe.nv)?;
    let bytes = match args.format {
        Format::Obj => {
            let mut buf = Vec::new();
            mesh.write_obj(&mut buf)
                .map_err(|e| CliError::Io(e.to_string()))?;
            buf
        }
        Format::Csv => {
            let mut buf = Vec::new();
            mesh.write_csv(&mut buf)?;
            buf
        }
        Format::Json => to_json(&GeneratedSurface {
            tool_version: TOOL_VERSION.into(),
            recipe,
            mesh: mesh.clone(),
        })?,
    };
    emit(args.output.as_deref(), &bytes)?;
    if let Some(path) = &args.samples {
        let file =
            fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        mesh.write_csv(file)?;
    }
    Ok(mesh)
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalysisDocument, CliError> {
    if args.format != Format::Json {
        return Err(CliError::Usage("analyze writes JSON only".into()));
    }
    let recipe = match &args.input {
        Some(path) => read_recipe(path)?,
        None => args.surface.recipe()?,
    };
    let doc = analyze_recipe(&recipe, args.tol, args.seed)?;
    emit(args.output.as_deref(), &to_json(&doc)?)?;
    Ok(doc)
}

pub fn cmd_verify_suite(args: &SuiteArgs) -> Result<SuiteReport, CliError> {
    let cases = if args.cases.is_empty() {
        TheoremCase::ALL.to_vec()
    } else {
        args.cases
            .iter()
            .map(|c| {
                c.trim()
                    .parse::<TheoremCase>()
                    .map_err(|e| CliError::Usage(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let report = check_theorem_suite(args.seed, &cases);
    emit(args.output.as_deref(), &to_json(&report)?)?;
    Ok(report)
}

pub fn cmd_curve_classify(args: &CurveArgs) -> Result<CurveClassification, CliError> {
    if args.samples < 2 {
        return Err(CliError::Usage(format!(
            "--samples must be at least 2, got {}",
            args.samples
        )));
    }
    let curve = build_curve(&args.curve, args.theta, args.s)?;
    let result = classify_curve(&curve, &curve.domain().linspace(args.samples))?;
    emit(args.output.as_deref(), &to_json(&result)?)?;
    Ok(result)
}

/// Runs one command and returns its exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a).map(|_| 0),
        Command::Analyze(a) => cmd_analyze(a).map(|d| if d.is_constant_angle { 0 } else { 1 }),
        Command::VerifySuite(a) => cmd_verify_suite(a).map(|r| if r.all_passed { 0 } else { 1 }),
        Command::CurveClassify(a) => cmd_curve_classify(a).map(|_| 0),
    }
}

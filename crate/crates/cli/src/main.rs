//! `schwarzfn`: sample curves, fit Schwarz functions and inspect them.

mod demo;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use schwarzfn::field::{evaluate_field, write_csv, write_svg, FieldFormat, FieldMetric, GridSpec, Levels};
use schwarzfn::{
    fit_schwarz, format_complex, orbit, parse_complex, reflect, sample_clustered, sample_uniform, Complex64,
    Curve, CurveKind, EllipseOracle, FitConfig, FitMode, SampleSet, SchwarzApprox,
};

#[derive(Parser)]
#[command(name = "schwarzfn", version, about = "Rational approximation of Schwarz functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curve catalogue.
    Curves {
        #[command(subcommand)]
        action: CurvesAction,
    },
    /// Sample a curve and write the sample set as JSON.
    Sample(SampleArgs),
    /// Fit a Schwarz function to a sample set.
    Fit(FitArgs),
    /// Poles and residues of a fitted model as CSV.
    Poles(PolesArgs),
    /// Reflect a point: conj(r(z)).
    Reflect(PointArgs),
    /// Iterate the reflection from a point.
    Orbit(OrbitArgs),
    /// Evaluate an error field on a grid.
    Field(FieldArgs),
    /// Run a complete example pipeline and write all artifacts to a directory.
    Demo(demo::DemoArgs),
}

#[derive(Subcommand)]
enum CurvesAction {
    /// List the available curves.
    List,
}

#[derive(Args)]
struct SampleArgs {
    /// Curve id, e.g. `ellipse:rho=2` or `lshape`.
    #[arg(long)]
    curve: String,
    /// Points per piece.
    #[arg(long)]
    n: usize,
    /// Cluster toward corners at this rate (1.6 if no value is given).
    #[arg(long, num_args = 0..=1, default_missing_value = "1.6")]
    cluster: Option<f64>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    samples: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    cleanup_tol: Option<f64>,
    /// `standard` or `sign`.
    #[arg(long)]
    mode: Option<FitMode>,
    /// Model output file; the model goes to standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolesArgs {
    #[arg(long)]
    model: PathBuf,
    /// Leave out poles beyond the off-scale radius.
    #[arg(long)]
    onscale: bool,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    model: PathBuf,
    /// Complex literal such as `3i`, `0.5-1.2i` or `2`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    point: Complex64,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    at: PointArgs,
    #[arg(long, default_value_t = 4)]
    steps: usize,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    model: PathBuf,
    /// `involution` or `branch` (ellipse models only).
    #[arg(long, default_value = "involution")]
    metric: FieldMetric,
    /// Dark and light contour levels.
    #[arg(long, default_value = "1e-8,1e-1")]
    levels: String,
    /// Grid size `nx,ny`.
    #[arg(long, default_value = "400,400")]
    grid: String,
    /// Box `x0,x1,y0,y1`; 1.5 times the extent of the support points if absent.
    #[arg(long, allow_hyphen_values = true)]
    r#box: Option<String>,
    /// Output format: csv, json or svg.
    #[arg(long, default_value = "csv")]
    out: FieldFormat,
    /// Output file; standard output if absent.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Ellipse parameter for the branch metric, if the model does not record one.
    #[arg(long)]
    rho: Option<f64>,
}

/// Failure with its process exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    NotConverged(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Usage(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::NotConverged(m) | CliError::Io(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<schwarzfn::Error> for CliError {
    fn from(e: schwarzfn::Error) -> Self {
        use schwarzfn::Error as E;
        match e {
            E::Io { .. } => CliError::Io(e.to_string()),
            E::Linalg(_) => CliError::Numerical(e.to_string()),
            E::InvalidInput(_) | E::Domain(_) | E::Json(_) => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Curves { action: CurvesAction::List } => {
            for kind in CurveKind::ALL {
                let curve = Curve::from_kind(kind, None)?;
                println!("{:<16} {}", curve.id(), kind.description());
            }
            Ok(())
        }
        Command::Sample(a) => cmd_sample(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Poles(a) => cmd_poles(a),
        Command::Reflect(a) => {
            let s = load_model(&a.model)?;
            println!("{}", format_complex(reflect(&s, a.point)));
            Ok(())
        }
        Command::Orbit(a) => cmd_orbit(a),
        Command::Field(a) => cmd_field(a),
        Command::Demo(a) => demo::run(a),
    }
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, contents: &str) -> CliResult<()> {
    match out {
        Some(p) => write_file(p, contents),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn load_model(path: &Path) -> CliResult<SchwarzApprox> {
    SchwarzApprox::from_json(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{}: not a model file: {e}", path.display())))
}

pub fn sample(curve: &Curve, n: usize, cluster: Option<f64>) -> CliResult<SampleSet> {
    Ok(match cluster {
        Some(sigma) => sample_clustered(curve, n, sigma)?,
        None => sample_uniform(curve, n)?,
    })
}

fn cmd_sample(a: SampleArgs) -> CliResult<()> {
    let curve: Curve = a.curve.parse()?;
    let set = sample(&curve, a.n, a.cluster)?;
    emit(a.out.as_deref(), &set.to_json())
}

fn cmd_fit(a: FitArgs) -> CliResult<()> {
    let path = &a.samples;
    let set = SampleSet::from_json(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{}: not a sample file: {e}", path.display())))?;
    let mut cfg = FitConfig::default();
    if let Some(t) = a.tol {
        cfg.rel_tol = t;
    }
    if let Some(d) = a.max_degree {
        cfg.max_degree = d;
    }
    if let Some(t) = a.cleanup_tol {
        cfg.cleanup_residue_tol = t;
    }
    if let Some(m) = a.mode {
        cfg.mode = m;
    }
    let s = fit_schwarz(&set, &cfg)?;
    emit(a.out.as_deref(), &s.to_json())?;
    println!("{}", serde_json::to_string(&s.fit).expect("reports serialize"));
    converged(&s)
}

pub fn converged(s: &SchwarzApprox) -> CliResult<()> {
    if s.fit.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged(format!(
            "fit did not reach tolerance {:e}: relative error {:e} at degree {}",
            s.tol, s.fit.final_rel_error, s.fit.degree
        )))
    }
}

pub fn poles_csv(s: &SchwarzApprox, onscale_only: bool) -> CliResult<String> {
    let report = s.rat.poles()?;
    let mut out = String::from("re,im,residue_re,residue_im,offscale\n");
    for k in 0..report.len() {
        if onscale_only && report.offscale[k] {
            continue;
        }
        let (p, r) = (report.poles[k], report.residues[k]);
        out.push_str(&format!("{},{},{},{},{}\n", p.re, p.im, r.re, r.im, report.offscale[k]));
    }
    Ok(out)
}

fn cmd_poles(a: PolesArgs) -> CliResult<()> {
    let s = load_model(&a.model)?;
    print!("{}", poles_csv(&s, a.onscale)?);
    Ok(())
}

fn cmd_orbit(a: OrbitArgs) -> CliResult<()> {
    let s = load_model(&a.at.model)?;
    let o = orbit(&s, a.at.point, a.steps)?;
    for z in &o.points {
        println!("{}", format_complex(*z));
    }
    println!("two_cycle={} escaped={} hit_pole={}", o.two_cycle, o.escaped, o.hit_pole);
    Ok(())
}

fn parse_list<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> CliResult<Vec<T>> {
    let parts: Vec<T> = s
        .split(',')
        .map(|p| p.trim().parse::<T>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("{what} `{s}` is malformed")))?;
    if parts.len() != n {
        return Err(CliError::Usage(format!("{what} `{s}` needs {n} comma-separated values")));
    }
    Ok(parts)
}

/// The exact ellipse oracle for `s`, from its curve id or an explicit `rho`.
pub fn oracle_for(s: &SchwarzApprox, rho: Option<f64>) -> CliResult<EllipseOracle> {
    let rho = match rho {
        Some(r) => r,
        None => {
            let curve: Option<Curve> = s.curve.parse().ok();
            match curve {
                Some(c) if matches!(c.kind, CurveKind::RhoEllipse | CurveKind::HalfEllipse) => {
                    c.rho.expect("ellipse curves carry rho")
                }
                _ => {
                    return Err(CliError::Usage(format!(
                        "the branch metric needs an ellipse model or --rho (model curve is `{}`)",
                        s.curve
                    )))
                }
            }
        }
    };
    Ok(EllipseOracle::new(rho)?)
}

pub fn default_grid(s: &SchwarzApprox, n: usize) -> CliResult<GridSpec> {
    let z = s.rat.support();
    let fold = |f: fn(f64, f64) -> f64, init: f64, g: fn(&Complex64) -> f64| z.iter().map(g).fold(init, f);
    let bbox = (
        fold(f64::min, f64::INFINITY, |c| c.re),
        fold(f64::max, f64::NEG_INFINITY, |c| c.re),
        fold(f64::min, f64::INFINITY, |c| c.im),
        fold(f64::max, f64::NEG_INFINITY, |c| c.im),
    );
    Ok(GridSpec::around(bbox, n)?)
}

fn cmd_field(a: FieldArgs) -> CliResult<()> {
    let lv: Vec<f64> = parse_list(&a.levels, 2, "levels")?;
    let levels = Levels::new(lv[0], lv[1])?;
    let n: Vec<usize> = parse_list(&a.grid, 2, "grid")?;
    let s = load_model(&a.model)?;
    let grid = match &a.r#box {
        Some(b) => {
            let b: Vec<f64> = parse_list(b, 4, "box")?;
            GridSpec::new(b[0], b[1], b[2], b[3], n[0], n[1])?
        }
        None => {
            let g = default_grid(&s, n[0].max(n[1]))?;
            GridSpec::new(g.x0, g.x1, g.y0, g.y1, n[0], n[1])?
        }
    };
    let oracle = match a.metric {
        FieldMetric::BranchVsOracle => Some(oracle_for(&s, a.rho)?),
        FieldMetric::Involution => None,
    };
    let field = evaluate_field(&s, a.metric, oracle.as_ref(), grid, levels)?;
    match &a.file {
        Some(path) => schwarzfn::field::export(&field, a.out, path)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let written = match a.out {
                FieldFormat::Csv => write_csv(&field, &mut lock),
                FieldFormat::Svg => write_svg(&field, &mut lock),
                FieldFormat::Json => writeln!(lock, "{}", field.to_json()),
            };
            written.map_err(|e| CliError::Io(format!("standard output: {e}")))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bare_cluster_flag_uses_library_default() {
        let cli = Cli::try_parse_from(["schwarzfn", "sample", "--curve", "lshape", "--n", "10", "--cluster"]).unwrap();
        let Command::Sample(a) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(a.cluster, Some(schwarzfn::curves::DEFAULT_CLUSTER_SIGMA));
    }

    #[test]
    fn negative_points_parse() {
        let cli = Cli::try_parse_from(["schwarzfn", "reflect", "--model", "m.json", "--point", "-0.4457i"]).unwrap();
        let Command::Reflect(a) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(a.point, Complex64::new(0.0, -0.4457));
    }
}

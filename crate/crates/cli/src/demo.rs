use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use schwarzfn::curves::{Clustering, DEFAULT_CLUSTER_SIGMA};
use schwarzfn::field::{evaluate_field, export, FieldFormat, FieldMetric, GridSpec, Levels};
use schwarzfn::{fit_schwarz, Curve, FitConfig, FitReport, SchwarzApprox};

use crate::{converged, default_grid, oracle_for, poles_csv, sample, write_file, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DemoCase {
    Circle,
    Ellipse,
    Halfellipse,
    Squiggle,
    Superellipse,
    Inlet,
    Semis,
    Lshape,
}

#[derive(Args)]
pub struct DemoArgs {
    #[arg(long, value_enum)]
    case: DemoCase,
    /// Output directory; `demo-<case>` if absent.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Field grid points per side.
    #[arg(long, default_value_t = 400)]
    grid: usize,
}

/// Discretization and fit settings of one example.
#[derive(Debug, Clone, Serialize)]
pub struct CaseSetup {
    pub curve: String,
    pub n_per_piece: usize,
    pub cluster: Option<f64>,
    pub config: FitConfig,
}

pub fn setup(case: DemoCase) -> CaseSetup {
    let (curve, n_per_piece, cluster, config) = match case {
        DemoCase::Circle => ("circle", 100, None, FitConfig::default()),
        DemoCase::Ellipse => ("ellipse:rho=2", 100, None, FitConfig::default()),
        DemoCase::Halfellipse => ("halfellipse:rho=2", 100, None, FitConfig::default()),
        DemoCase::Squiggle => ("squiggle", 200, None, FitConfig::default()),
        DemoCase::Superellipse => ("superellipse6", 200, None, FitConfig::default()),
        // four pieces of 75
        DemoCase::Inlet => ("inlet", 75, None, FitConfig::default()),
        DemoCase::Semis => ("semis", 400, Some(DEFAULT_CLUSTER_SIGMA), FitConfig::default()),
        DemoCase::Lshape => (
            "lshape",
            300,
            Some(DEFAULT_CLUSTER_SIGMA),
            FitConfig {
                rel_tol: 1e-8,
                max_degree: 500,
                ..FitConfig::default()
            },
        ),
    };
    CaseSetup {
        curve: curve.to_string(),
        n_per_piece,
        cluster,
        config,
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    case: DemoCase,
    curve: &'a str,
    n_per_piece: usize,
    total_points: usize,
    dropped_points: usize,
    clustering: Clustering,
    config: &'a FitConfig,
    report: &'a FitReport,
    poles: usize,
    onscale_poles: usize,
    grid: GridSpec,
    levels: Levels,
    fields: Vec<&'static str>,
    files: Vec<String>,
}

pub fn run(a: DemoArgs) -> CliResult<()> {
    let setup = setup(a.case);
    let dir = a
        .dir
        .unwrap_or_else(|| PathBuf::from(format!("demo-{}", serde_json::to_value(a.case).unwrap().as_str().unwrap())));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    let save = |files: &mut Vec<String>, name: &str, text: &str| -> CliResult<()> {
        write_file(&dir.join(name), text)?;
        files.push(name.to_string());
        Ok(())
    };

    let curve: Curve = setup.curve.parse()?;
    let samples = sample(&curve, setup.n_per_piece, setup.cluster)?;
    save(&mut files, "samples.json", &samples.to_json())?;
    let s: SchwarzApprox = fit_schwarz(&samples, &setup.config)?;
    save(&mut files, "model.json", &s.to_json())?;
    save(&mut files, "poles.csv", &poles_csv(&s, false)?)?;
    let poles = s.rat.poles()?;

    let grid = default_grid(&s, a.grid)?;
    let levels = Levels::default();
    let mut fields = vec![FieldMetric::Involution];
    if curve.rho.is_some() {
        fields.push(FieldMetric::BranchVsOracle);
    }
    let mut field_names = Vec::new();
    for metric in fields {
        let oracle = match metric {
            FieldMetric::BranchVsOracle => Some(oracle_for(&s, None)?),
            FieldMetric::Involution => None,
        };
        let field = evaluate_field(&s, metric, oracle.as_ref(), grid, levels)?;
        let stem = match metric {
            FieldMetric::Involution => "field",
            FieldMetric::BranchVsOracle => "field_branch",
        };
        for fmt in [FieldFormat::Csv, FieldFormat::Svg] {
            let name = format!("{stem}.{}", fmt.extension());
            export(&field, fmt, &dir.join(&name))?;
            files.push(name);
        }
        field_names.push(metric.name());
    }

    let manifest = Manifest {
        case: a.case,
        curve: &samples.curve,
        n_per_piece: setup.n_per_piece,
        total_points: samples.len(),
        dropped_points: samples.dropped,
        clustering: samples.clustering,
        config: &setup.config,
        report: &s.fit,
        poles: poles.len(),
        onscale_poles: poles.onscale_count(),
        grid,
        levels,
        fields: field_names,
        files: files.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&dir.join("manifest.json"), &text)?;

    println!(
        "{}: {} points, degree {}, {} poles ({} on scale), relative error {:e}; wrote {}",
        setup.curve,
        samples.len(),
        s.fit.degree,
        poles.len(),
        poles.onscale_count(),
        s.fit.final_rel_error,
        dir.display()
    );
    converged(&s)
}

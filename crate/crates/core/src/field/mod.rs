//! Error fields of a fitted Schwarz function on rectangular grids, with
//! threshold classification and CSV/JSON/SVG export.

mod export;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schwarz::{branch_error, involution_error, EllipseOracle, SchwarzApprox};

pub use export::{export, write_csv, write_svg, FieldFormat};

/// Grid of `nx × ny` points spanning `[x0, x1] × [y0, y1]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = Self { x0, x1, y0, y1, nx, ny };
        g.validate()?;
        Ok(g)
    }

    /// A square-celled box 1.5 times the extent of `(xmin, xmax, ymin, ymax)`,
    /// centred on it, with `n` points along the longer side.
    pub fn around(bbox: (f64, f64, f64, f64), n: usize) -> Result<Self> {
        let (xmin, xmax, ymin, ymax) = bbox;
        let half = 0.75 * (xmax - xmin).max(ymax - ymin).max(f64::MIN_POSITIVE);
        let (cx, cy) = (0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
        Self::new(cx - half, cx + half, cy - half, cy + half, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::invalid(format!("grid {}x{} is empty", self.nx, self.ny)));
        }
        if self.nx.checked_mul(self.ny).is_none() {
            return Err(Error::invalid(format!("grid {}x{} is too large", self.nx, self.ny)));
        }
        if ![self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("grid box must be finite"));
        }
        if !(self.x0 < self.x1 && self.y0 < self.y1) {
            return Err(Error::invalid("grid box needs x0 < x1 and y0 < y1"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        coord(self.x0, self.x1, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        coord(self.y0, self.y1, self.ny, j)
    }

    /// Point with flat index `k = j·nx + i`.
    pub fn point(&self, k: usize) -> Complex64 {
        Complex64::new(self.x(k % self.nx), self.y(k / self.nx))
    }
}

fn coord(a: f64, b: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        0.5 * (a + b)
    } else if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64 / (n - 1) as f64)
    }
}

/// Contour levels `0 < dark < light`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Levels {
    pub dark: f64,
    pub light: f64,
}

impl Default for Levels {
    fn default() -> Self {
        Self { dark: 1e-8, light: 1e-1 }
    }
}

impl Levels {
    pub fn new(dark: f64, light: f64) -> Result<Self> {
        let l = Self { dark, light };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dark > 0.0 && self.dark < self.light && self.light.is_finite()) {
            return Err(Error::invalid(format!(
                "levels need 0 < dark < light, got {}, {}",
                self.dark, self.light
            )));
        }
        Ok(())
    }

    pub fn classify(&self, value: f64) -> Label {
        if value == f64::INFINITY {
            Label::Pole
        } else if value <= self.dark {
            Label::Dark
        } else if value <= self.light {
            Label::Light
        } else {
            Label::White
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMetric {
    /// `|conj(r(conj(r(z)))) - z|`.
    Involution,
    /// Distance from `r(z)` to the nearer exact ellipse branch.
    BranchVsOracle,
}

impl FieldMetric {
    pub fn name(self) -> &'static str {
        match self {
            FieldMetric::Involution => "involution",
            FieldMetric::BranchVsOracle => "branch_vs_oracle",
        }
    }
}

impl std::str::FromStr for FieldMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "involution" => Ok(FieldMetric::Involution),
            "branch" | "branch_vs_oracle" => Ok(FieldMetric::BranchVsOracle),
            other => Err(Error::invalid(format!(
                "unknown metric `{other}` (expected involution or branch)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Dark,
    Light,
    White,
    Pole,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Dark => "dark",
            Label::Light => "light",
            Label::White => "white",
            Label::Pole => "pole",
        }
    }
}

/// Metric values and labels on a grid, stored row by row (`k = j·nx + i`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldGrid {
    pub grid: GridSpec,
    pub levels: Levels,
    pub metric: FieldMetric,
    /// Curve identifier and tolerance of the model the field was computed from.
    pub model: ModelInfo,
    /// Infinite values (pole hits) are written as `null`.
    #[serde(with = "nullable_values")]
    pub values: Vec<f64>,
    pub labels: Vec<Label>,
    /// Finite poles of the model, for plotting.
    pub poles: Vec<Complex64>,
    /// Support points of the model, for plotting.
    pub samples: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelInfo {
    pub curve: String,
    pub tol: f64,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_rho: Option<f64>,
}

impl FieldGrid {
    pub fn from_json(text: &str) -> Result<Self> {
        let g: FieldGrid = serde_json::from_str(text)?;
        g.grid.validate()?;
        g.levels.validate()?;
        if g.values.len() != g.grid.len() || g.labels.len() != g.grid.len() {
            return Err(Error::invalid("field size does not match its grid"));
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("field grids always serialize")
    }

    pub fn label_at(&self, i: usize, j: usize) -> Label {
        self.labels[j * self.grid.nx + i]
    }

    pub fn value_at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    /// Same values classified against other levels.
    pub fn relabel(&self, levels: Levels) -> Result<Self> {
        levels.validate()?;
        Ok(Self {
            levels,
            labels: self.values.iter().map(|v| levels.classify(*v)).collect(),
            ..self.clone()
        })
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }
}

/// Evaluates `metric` at every grid point in parallel and classifies the
/// values. The branch metric needs the ellipse oracle.
pub fn evaluate_field(
    s: &SchwarzApprox,
    metric: FieldMetric,
    oracle: Option<&EllipseOracle>,
    grid: GridSpec,
    levels: Levels,
) -> Result<FieldGrid> {
    grid.validate()?;
    levels.validate()?;
    let oracle = match (metric, oracle) {
        (FieldMetric::BranchVsOracle, None) => {
            return Err(Error::invalid("the branch metric needs an ellipse oracle"));
        }
        (FieldMetric::BranchVsOracle, Some(o)) => Some(*o),
        (FieldMetric::Involution, _) => None,
    };
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let z = grid.point(k);
            match oracle {
                Some(o) => branch_error(&o, s, z),
                None => involution_error(s, z),
            }
        })
        .collect();
    let labels = values.iter().map(|v| levels.classify(*v)).collect();
    let poles = s.rat.poles().map(|p| p.onscale().collect()).unwrap_or_default();
    Ok(FieldGrid {
        grid,
        levels,
        metric,
        model: ModelInfo {
            curve: s.curve.clone(),
            tol: s.tol,
            degree: s.rat.degree(),
            oracle_rho: oracle.map(|o| o.rho),
        },
        values,
        labels,
        poles,
        samples: s.rat.support().to_vec(),
    })
}

mod nullable_values {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], ser: S) -> Result<S::Ok, S::Error> {
        let opt: Vec<Option<f64>> = v.iter().map(|x| x.is_finite().then_some(*x)).collect();
        opt.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<f64>, D::Error> {
        let opt = Vec::<Option<f64>>::deserialize(de)?;
        Ok(opt.into_iter().map(|x| x.unwrap_or(f64::INFINITY)).collect())
    }
}

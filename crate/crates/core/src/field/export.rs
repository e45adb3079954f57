use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FieldGrid, Label};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldFormat {
    Csv,
    Json,
    Svg,
}

impl FieldFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FieldFormat::Csv => "csv",
            FieldFormat::Json => "json",
            FieldFormat::Svg => "svg",
        }
    }
}

impl std::str::FromStr for FieldFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FieldFormat::Csv),
            "json" => Ok(FieldFormat::Json),
            "svg" => Ok(FieldFormat::Svg),
            other => Err(Error::invalid(format!("unknown format `{other}` (expected csv, json or svg)"))),
        }
    }
}

/// Writes `g` to `path` in the given format.
pub fn export(g: &FieldGrid, format: FieldFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let written = match format {
        FieldFormat::Csv => write_csv(g, &mut out),
        FieldFormat::Json => out.write_all(g.to_json().as_bytes()),
        FieldFormat::Svg => write_svg(g, &mut out),
    };
    written.and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

/// One `x,y,value,label` row per grid point.
pub fn write_csv<W: Write>(g: &FieldGrid, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "x,y,value,label")?;
    for (k, (v, l)) in g.values.iter().zip(&g.labels).enumerate() {
        let z = g.grid.point(k);
        writeln!(out, "{},{},{},{}", z.re, z.im, v, l.name())?;
    }
    Ok(())
}

const DARK: &str = "#1b7837";
const LIGHT: &str = "#a6dba0";
const POLE_CELL: &str = "#f4a582";
const POLE_DOT: &str = "#b2182b";
const SAMPLE: &str = "#2166ac";

/// Raster of labelled cells, one `rect` per non-white cell, a `circle` per
/// pole inside the box and the model's support points as dots.
pub fn write_svg<W: Write>(g: &FieldGrid, out: &mut W) -> std::io::Result<()> {
    let (nx, ny) = (g.grid.nx, g.grid.ny);
    let sx = if nx > 1 { (nx - 1) as f64 / (g.grid.x1 - g.grid.x0) } else { 1.0 };
    let sy = if ny > 1 { (ny - 1) as f64 / (g.grid.y1 - g.grid.y0) } else { 1.0 };
    // cell (i, j) is centred at (i + 0.5, ny - j - 0.5) in user units
    let px = |x: f64| (x - g.grid.x0) * sx + 0.5;
    let py = |y: f64| ny as f64 - 0.5 - (y - g.grid.y0) * sy;
    let scale = (800.0 / nx.max(ny) as f64).max(1.0);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {nx} {ny}" width="{:.0}" height="{:.0}" style="background:#ffffff" shape-rendering="crispEdges">"#,
        nx as f64 * scale,
        ny as f64 * scale
    )?;
    writeln!(
        out,
        "<title>{} field, {}</title>",
        g.metric.name(),
        escape(&g.model.curve)
    )?;
    writeln!(out, "<g stroke=\"none\">")?;
    for j in 0..ny {
        for i in 0..nx {
            let fill = match g.label_at(i, j) {
                Label::Dark => DARK,
                Label::Light => LIGHT,
                Label::Pole => POLE_CELL,
                Label::White => continue,
            };
            writeln!(
                out,
                r#"<rect x="{i}" y="{}" width="1" height="1" fill="{fill}"/>"#,
                ny - 1 - j
            )?;
        }
    }
    writeln!(out, "</g>")?;

    if !g.samples.is_empty() {
        let mut d = String::new();
        for z in &g.samples {
            let _ = write!(d, "M{:.3} {:.3}h0", px(z.re), py(z.im));
        }
        let w = (nx.max(ny) as f64 / 150.0).max(0.5);
        writeln!(
            out,
            r#"<path d="{d}" stroke="{SAMPLE}" stroke-width="{w:.3}" stroke-linecap="round" fill="none"/>"#
        )?;
    }

    let r = (nx.max(ny) as f64 / 200.0).max(0.5);
    for p in &g.poles {
        let inside = (g.grid.x0..=g.grid.x1).contains(&p.re) && (g.grid.y0..=g.grid.y1).contains(&p.im);
        if inside {
            writeln!(
                out,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{r:.3}" fill="{POLE_DOT}"/>"#,
                px(p.re),
                py(p.im)
            )?;
        }
    }
    writeln!(out, "</svg>")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldMetric, GridSpec, Levels, ModelInfo};
    use num_complex::Complex64;

    fn small() -> FieldGrid {
        let levels = Levels::default();
        let values = vec![1e-12, 1e-3, 5.0, f64::INFINITY];
        FieldGrid {
            grid: GridSpec::new(-1.0, 1.0, -1.0, 1.0, 2, 2).unwrap(),
            levels,
            metric: FieldMetric::Involution,
            model: ModelInfo {
                curve: "ellipse:rho=2".into(),
                tol: 1e-13,
                degree: 3,
                oracle_rho: None,
            },
            labels: values.iter().map(|v| levels.classify(*v)).collect(),
            values,
            poles: vec![Complex64::new(0.0, 0.0), Complex64::new(9.0, 0.0)],
            samples: vec![Complex64::new(0.5, 0.5)],
        }
    }

    #[test]
    fn csv_has_header_and_one_row_per_point() {
        let mut buf = Vec::new();
        write_csv(&small(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "x,y,value,label");
        assert_eq!(lines[1], "-1,-1,0.000000000001,dark");
        assert_eq!(lines[4], "1,1,inf,pole");
    }

    #[test]
    fn svg_parses_with_expected_elements() {
        let g = small();
        let mut buf = Vec::new();
        write_svg(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count();
        assert_eq!(count("rect"), 3);
        // the pole at 9 lies outside the box
        assert_eq!(count("circle"), 1);
        assert_eq!(count("path"), 1);
    }

    #[test]
    fn export_writes_files_and_reports_paths() {
        let dir = tempfile::tempdir().unwrap();
        let g = small();
        for fmt in [FieldFormat::Csv, FieldFormat::Json, FieldFormat::Svg] {
            let path = dir.path().join(format!("field.{}", fmt.extension()));
            export(&g, fmt, &path).unwrap();
            assert!(std::fs::metadata(&path).unwrap().len() > 0);
        }
        let back = FieldGrid::from_json(&std::fs::read_to_string(dir.path().join("field.json")).unwrap()).unwrap();
        assert_eq!(back, g);
        let bad = dir.path().join("missing").join("field.csv");
        let err = export(&g, FieldFormat::Csv, &bad).unwrap_err();
        assert!(err.to_string().contains("missing"));
    }

    #[test]
    fn format_names() {
        assert_eq!("svg".parse::<FieldFormat>().unwrap(), FieldFormat::Svg);
        assert!("png".parse::<FieldFormat>().is_err());
    }
}

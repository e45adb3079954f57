//! Boundary curves used in the experiments, as chains of parametric pieces.

mod sampling;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use sampling::first_duplicate;
pub use sampling::{sample_clustered, sample_uniform, Clustering, SampleSet, DEFAULT_CLUSTER_SIGMA, MIN_OFFSET};

const TAU: f64 = std::f64::consts::TAU;

/// Inlet slot: half-width and depth measured inward from `x = 1`.
const INLET_HALF_WIDTH: f64 = 0.05;
const INLET_DEPTH: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Circle,
    RhoEllipse,
    HalfEllipse,
    PolarSquiggle,
    Superellipse6,
    Inlet,
    SemicirclePair,
    Lshape,
}

impl CurveKind {
    pub const ALL: [CurveKind; 8] = [
        CurveKind::Circle,
        CurveKind::RhoEllipse,
        CurveKind::HalfEllipse,
        CurveKind::PolarSquiggle,
        CurveKind::Superellipse6,
        CurveKind::Inlet,
        CurveKind::SemicirclePair,
        CurveKind::Lshape,
    ];

    /// Whether the curve has junctions where smoothness drops.
    pub fn is_singular(self) -> bool {
        matches!(self, CurveKind::Inlet | CurveKind::SemicirclePair | CurveKind::Lshape)
    }

    pub fn id_name(self) -> &'static str {
        match self {
            CurveKind::Circle => "circle",
            CurveKind::RhoEllipse => "ellipse",
            CurveKind::HalfEllipse => "halfellipse",
            CurveKind::PolarSquiggle => "squiggle",
            CurveKind::Superellipse6 => "superellipse6",
            CurveKind::Inlet => "inlet",
            CurveKind::SemicirclePair => "semis",
            CurveKind::Lshape => "lshape",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CurveKind::Circle => "unit circle",
            CurveKind::RhoEllipse => "Joukowsky image of |w| = rho (foci ±1), rho > 1",
            CurveKind::HalfEllipse => "upper half of the rho-ellipse, open arc",
            CurveKind::PolarSquiggle => "polar curve r = 1 + 0.2 sin(5θ)",
            CurveKind::Superellipse6 => "superellipse x^6 + y^6 = 1",
            CurveKind::Inlet => "unit circle with a 0.1 × 0.7 slot cut in along the positive real axis",
            CurveKind::SemicirclePair => "semicircles about -i and +i joined at 0 (C1, not C2)",
            CurveKind::Lshape => "L-shaped hexagon (0,0),(2,0),(2,1),(1,1),(1,2),(0,2)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarLaw {
    /// `r = 1 + 0.2 sin(5θ)`
    Squiggle,
    /// `r = (cos⁶θ + sin⁶θ)^(-1/6)`
    Superellipse6,
}

impl PolarLaw {
    fn radius(self, turns: f64) -> f64 {
        match self {
            PolarLaw::Squiggle => 1.0 + 0.2 * cis_turns(5.0 * turns).im,
            PolarLaw::Superellipse6 => {
                let u = cis_turns(turns);
                (u.re.powi(6) + u.im.powi(6)).powf(-1.0 / 6.0)
            }
        }
    }
}

/// One smooth parametric segment; angular parameters are in turns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    Arc { center: Complex64, radius: f64, turn0: f64, turn1: f64 },
    /// `z = (w + 1/w) / 2` with `w = ρ e^{2πi·turn}`.
    Joukowsky { rho: f64, turn0: f64, turn1: f64 },
    Polar { law: PolarLaw, turn0: f64, turn1: f64 },
}

impl Segment {
    /// Point at parameter distance `u` from the start, or from the end when
    /// `from_end` is set. Measuring from the nearer end keeps tiny offsets exact.
    fn at(&self, u: f64, from_end: bool) -> Complex64 {
        let lerp = |a: f64, b: f64| if from_end { b + u * (a - b) } else { a + u * (b - a) };
        match *self {
            Segment::Line { from, to } => {
                if from_end {
                    to + (from - to) * u
                } else {
                    from + (to - from) * u
                }
            }
            Segment::Arc {
                center,
                radius,
                turn0,
                turn1,
            } => center + cis_turns(lerp(turn0, turn1)) * radius,
            Segment::Joukowsky { rho, turn0, turn1 } => {
                let e = cis_turns(lerp(turn0, turn1));
                Complex64::new(0.5 * (rho + 1.0 / rho) * e.re, 0.5 * (rho - 1.0 / rho) * e.im)
            }
            Segment::Polar { law, turn0, turn1 } => {
                let turns = lerp(turn0, turn1);
                cis_turns(turns) * law.radius(turns)
            }
        }
    }
}

/// `e^{2πi·turns}`, exact at multiples of a quarter turn.
pub(crate) fn cis_turns(turns: f64) -> Complex64 {
    let q = (4.0 * turns).rem_euclid(4.0);
    let quadrant = q.floor();
    let angle = (q - quadrant) * (TAU / 4.0);
    let (s, c) = angle.sin_cos();
    let base = Complex64::new(c, s);
    match quadrant as u8 {
        0 => base,
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub segment: Segment,
    pub start: Complex64,
    pub end: Complex64,
    /// Endpoints shared with a neighbouring piece at a corner; samples cluster there.
    pub corner_start: bool,
    pub corner_end: bool,
    /// Endpoints shared with a neighbour (or itself, for a closed piece);
    /// samples never land on these.
    pub junction_start: bool,
    pub junction_end: bool,
}

impl Piece {
    fn new(segment: Segment) -> Self {
        Self {
            segment,
            start: segment.at(0.0, false),
            end: segment.at(0.0, true),
            corner_start: false,
            corner_end: false,
            junction_start: false,
            junction_end: false,
        }
    }

    pub fn point_at(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            self.start
        } else if t == 1.0 {
            self.end
        } else {
            self.segment.at(t, false)
        }
    }

    /// Point at parameter offset `u` back from the end (`t = 1 - u`).
    pub fn point_from_end(&self, u: f64) -> Complex64 {
        if u == 0.0 {
            self.end
        } else {
            self.segment.at(u, true)
        }
    }

    /// Every piece is an analytic segment; smoothness only drops at junctions.
    pub fn is_analytic(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub kind: CurveKind,
    /// `ρ` for the ellipse kinds.
    pub rho: Option<f64>,
    pub pieces: Vec<Piece>,
    /// Global parameter values `piece_index + t` at corner junctions.
    pub corner_params: Vec<f64>,
    pub closed: bool,
}

impl Curve {
    pub fn circle() -> Self {
        Self::closed_single(
            CurveKind::Circle,
            None,
            Segment::Arc {
                center: Complex64::new(0.0, 0.0),
                radius: 1.0,
                turn0: 0.0,
                turn1: 1.0,
            },
        )
    }

    pub fn rho_ellipse(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self::closed_single(
            CurveKind::RhoEllipse,
            Some(rho),
            Segment::Joukowsky {
                rho,
                turn0: 0.0,
                turn1: 1.0,
            },
        ))
    }

    pub fn half_ellipse(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self {
            kind: CurveKind::HalfEllipse,
            rho: Some(rho),
            pieces: vec![Piece::new(Segment::Joukowsky {
                rho,
                turn0: 0.0,
                turn1: 0.5,
            })],
            corner_params: Vec::new(),
            closed: false,
        })
    }

    pub fn squiggle() -> Self {
        Self::closed_single(
            CurveKind::PolarSquiggle,
            None,
            Segment::Polar {
                law: PolarLaw::Squiggle,
                turn0: 0.0,
                turn1: 1.0,
            },
        )
    }

    pub fn superellipse6() -> Self {
        Self::closed_single(
            CurveKind::Superellipse6,
            None,
            Segment::Polar {
                law: PolarLaw::Superellipse6,
                turn0: 0.0,
                turn1: 1.0,
            },
        )
    }

    pub fn inlet() -> Self {
        let h = INLET_HALF_WIDTH;
        let xc = (1.0 - h * h).sqrt();
        let tip = 1.0 - INLET_DEPTH;
        let alpha = h.asin() / TAU;
        let mouth_top = Complex64::new(xc, h);
        let mouth_bottom = Complex64::new(xc, -h);
        let tip_bottom = Complex64::new(tip, -h);
        let tip_top = Complex64::new(tip, h);
        let mut arc = Piece::new(Segment::Arc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            turn0: alpha,
            turn1: 1.0 - alpha,
        });
        arc.start = mouth_top;
        arc.end = mouth_bottom;
        let pieces = vec![
            arc,
            Piece::new(Segment::Line {
                from: mouth_bottom,
                to: tip_bottom,
            }),
            Piece::new(Segment::Line {
                from: tip_bottom,
                to: tip_top,
            }),
            Piece::new(Segment::Line {
                from: tip_top,
                to: mouth_top,
            }),
        ];
        Self::closed_chain(CurveKind::Inlet, pieces)
    }

    pub fn semicircle_pair() -> Self {
        let i = Complex64::new(0.0, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut lower = Piece::new(Segment::Arc {
            center: -i,
            radius: 1.0,
            turn0: 0.75,
            turn1: 0.25,
        });
        lower.start = -2.0 * i;
        lower.end = zero;
        lower.corner_end = true;
        lower.junction_end = true;
        let mut upper = Piece::new(Segment::Arc {
            center: i,
            radius: 1.0,
            turn0: -0.25,
            turn1: 0.25,
        });
        upper.start = zero;
        upper.end = 2.0 * i;
        upper.corner_start = true;
        upper.junction_start = true;
        Self {
            kind: CurveKind::SemicirclePair,
            rho: None,
            pieces: vec![lower, upper],
            corner_params: vec![1.0],
            closed: false,
        }
    }

    pub fn lshape() -> Self {
        let v = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)].map(|(x, y)| Complex64::new(x, y));
        let pieces = (0..v.len())
            .map(|k| {
                Piece::new(Segment::Line {
                    from: v[k],
                    to: v[(k + 1) % v.len()],
                })
            })
            .collect();
        Self::closed_chain(CurveKind::Lshape, pieces)
    }

    fn closed_single(kind: CurveKind, rho: Option<f64>, segment: Segment) -> Self {
        let mut piece = Piece::new(segment);
        piece.end = piece.start;
        piece.junction_start = true;
        piece.junction_end = true;
        Self {
            kind,
            rho,
            pieces: vec![piece],
            corner_params: Vec::new(),
            closed: true,
        }
    }

    /// Closes a chain of pieces whose consecutive endpoints are corners.
    fn closed_chain(kind: CurveKind, mut pieces: Vec<Piece>) -> Self {
        let n = pieces.len();
        for k in 0..n {
            let next_start = pieces[(k + 1) % n].start;
            pieces[k].end = next_start;
            pieces[k].corner_start = true;
            pieces[k].corner_end = true;
            pieces[k].junction_start = true;
            pieces[k].junction_end = true;
        }
        Self {
            kind,
            rho: None,
            pieces,
            corner_params: (0..n).map(|k| k as f64).collect(),
            closed: true,
        }
    }

    pub fn from_kind(kind: CurveKind, rho: Option<f64>) -> Result<Self> {
        let rho = rho.unwrap_or(2.0);
        Ok(match kind {
            CurveKind::Circle => Self::circle(),
            CurveKind::RhoEllipse => Self::rho_ellipse(rho)?,
            CurveKind::HalfEllipse => Self::half_ellipse(rho)?,
            CurveKind::PolarSquiggle => Self::squiggle(),
            CurveKind::Superellipse6 => Self::superellipse6(),
            CurveKind::Inlet => Self::inlet(),
            CurveKind::SemicirclePair => Self::semicircle_pair(),
            CurveKind::Lshape => Self::lshape(),
        })
    }

    /// Canonical curve id, e.g. `ellipse:rho=2`.
    pub fn id(&self) -> String {
        match self.rho {
            Some(rho) => format!("{}:rho={rho}", self.kind.id_name()),
            None => self.kind.id_name().to_string(),
        }
    }

    pub fn point_at(&self, piece: usize, t: f64) -> Result<Complex64> {
        let p = self
            .pieces
            .get(piece)
            .ok_or_else(|| Error::invalid(format!("piece {piece} out of range (curve has {})", self.pieces.len())))?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("curve parameter {t} outside [0, 1]")));
        }
        Ok(p.point_at(t))
    }

    /// Axis-aligned extent `(xmin, xmax, ymin, ymax)` from a dense trace.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.pieces {
            for k in 0..=2000 {
                let z = p.point_at(k as f64 / 2000.0);
                b = (b.0.min(z.re), b.1.max(z.re), b.2.min(z.im), b.3.max(z.im));
            }
        }
        b
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 1.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("ellipse parameter rho must exceed 1, got {rho}")))
    }
}

impl FromStr for Curve {
    type Err = Error;

    /// Accepts `name[:key=value,...]`, e.g. `circle`, `ellipse:rho=2`, `lshape`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let kind = match name.to_ascii_lowercase().as_str() {
            "circle" => CurveKind::Circle,
            "ellipse" | "rho_ellipse" => CurveKind::RhoEllipse,
            "halfellipse" | "half_ellipse" => CurveKind::HalfEllipse,
            "squiggle" | "polar_squiggle" => CurveKind::PolarSquiggle,
            "superellipse" | "superellipse6" => CurveKind::Superellipse6,
            "inlet" => CurveKind::Inlet,
            "semis" | "semicircles" | "semicircle_pair" => CurveKind::SemicirclePair,
            "lshape" | "l-shape" => CurveKind::Lshape,
            _ => {
                return Err(Error::invalid(format!(
                    "unknown curve `{name}` (try: circle, ellipse:rho=2, halfellipse:rho=2, squiggle, superellipse6, inlet, semis, lshape)"
                )))
            }
        };

        let mut rho = None;
        for kv in args.into_iter().flat_map(|a| a.split(',')) {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("curve argument `{kv}` is not key=value")))?;
            match key.trim() {
                "rho" if matches!(kind, CurveKind::RhoEllipse | CurveKind::HalfEllipse) => {
                    let v: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("rho `{value}` is not a number")))?;
                    rho = Some(v);
                }
                other => return Err(Error::invalid(format!("curve `{name}` takes no argument `{other}`"))),
            }
        }
        Curve::from_kind(kind, rho)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn all_curves() -> Vec<Curve> {
        CurveKind::ALL.iter().map(|k| Curve::from_kind(*k, None).unwrap()).collect()
    }

    #[test]
    fn documented_points() {
        let e = Curve::rho_ellipse(2.0).unwrap();
        assert_eq!(e.point_at(0, 0.0).unwrap(), c(1.25, 0.0));
        let s = Curve::squiggle();
        let z = s.point_at(0, 1.0 / 20.0).unwrap();
        let expected = Complex64::from_polar(1.2, std::f64::consts::PI / 10.0);
        assert!((z - expected).norm() < 1e-15);
        assert_eq!(Curve::superellipse6().point_at(0, 0.0).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn parameter_range_is_checked() {
        let e = Curve::circle();
        assert!(e.point_at(0, -0.1).is_err());
        assert!(e.point_at(0, 1.5).is_err());
        assert!(e.point_at(0, f64::NAN).is_err());
        assert!(e.point_at(3, 0.5).is_err());
    }

    #[test]
    fn cis_turns_is_exact_on_quarters() {
        assert_eq!(cis_turns(0.0), c(1.0, 0.0));
        assert_eq!(cis_turns(0.25), c(0.0, 1.0));
        assert_eq!(cis_turns(0.5), c(-1.0, 0.0));
        assert_eq!(cis_turns(-0.25), c(0.0, -1.0));
        for k in 0..50 {
            let t = k as f64 / 37.0;
            let direct = Complex64::from_polar(1.0, TAU * t);
            assert!((cis_turns(t) - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn adjacent_pieces_share_endpoints_bitwise() {
        for curve in all_curves() {
            let n = curve.pieces.len();
            let pairs = if curve.closed { n } else { n - 1 };
            for k in 0..pairs {
                let a = curve.pieces[k].point_at(1.0);
                let b = curve.pieces[(k + 1) % n].point_at(0.0);
                assert_eq!(a.re.to_bits(), b.re.to_bits(), "{} piece {k}", curve.id());
                assert_eq!(a.im.to_bits(), b.im.to_bits(), "{} piece {k}", curve.id());
            }
            // exact endpoints agree with the segment formula to rounding
            for p in &curve.pieces {
                if p.end != p.start {
                    assert!((p.segment.at(1.0, false) - p.end).norm() < 1e-15);
                }
                assert!((p.segment.at(0.0, false) - p.start).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn corner_params_match_junctions() {
        for curve in all_curves() {
            if curve.kind.is_singular() {
                let expected: Vec<f64> = if curve.closed {
                    (0..curve.pieces.len()).map(|k| k as f64).collect()
                } else {
                    (1..curve.pieces.len()).map(|k| k as f64).collect()
                };
                assert_eq!(curve.corner_params, expected, "{}", curve.id());
            } else {
                assert!(curve.corner_params.is_empty(), "{}", curve.id());
            }
        }
    }

    #[test]
    fn semicircle_pair_is_c1_not_c2_at_origin() {
        let s = Curve::semicircle_pair();
        let h = 1e-6;
        let lower = &s.pieces[0];
        let upper = &s.pieces[1];
        let t_in = (lower.point_at(1.0) - lower.point_at(1.0 - h)) / h;
        let t_out = (upper.point_at(h) - upper.point_at(0.0)) / h;
        let dir_in = t_in / t_in.norm();
        let dir_out = t_out / t_out.norm();
        assert!((dir_in - dir_out).norm() < 1e-6);
        // analytic tangents: both +1 at the junction
        assert!((dir_out - c(1.0, 0.0)).norm() < 1e-5);
        // curvature centres on opposite sides
        let mid_lower = lower.point_at(0.5);
        let mid_upper = upper.point_at(0.5);
        assert!((mid_lower - c(-1.0, -1.0)).norm() < 1e-15);
        assert!((mid_upper - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn semicircle_tangents_agree_exactly() {
        // derivative of centre + e^{2πi turn}: i·2π·(turn1 - turn0)·e^{2πi turn}
        let s = Curve::semicircle_pair();
        let tangent = |p: &Piece, t: f64| match p.segment {
            Segment::Arc { turn0, turn1, .. } => {
                let turn = turn0 + t * (turn1 - turn0);
                c(0.0, TAU * (turn1 - turn0)) * cis_turns(turn)
            }
            _ => unreachable!(),
        };
        let a = tangent(&s.pieces[0], 1.0);
        let b = tangent(&s.pieces[1], 0.0);
        assert!((a / a.norm() - b / b.norm()).norm() < 1e-12);
    }

    #[test]
    fn lshape_corners_are_right_angles() {
        let l = Curve::lshape();
        let n = l.pieces.len();
        let mut reflex = 0;
        for k in 0..n {
            let d0 = l.pieces[k].end - l.pieces[k].start;
            let d1 = l.pieces[(k + 1) % n].end - l.pieces[(k + 1) % n].start;
            // exact for axis-aligned integer segments
            let turn = d1 / d0;
            assert_eq!(turn.re, 0.0);
            if turn.im < 0.0 {
                reflex += 1;
            }
        }
        assert_eq!(reflex, 1);
    }

    #[test]
    fn inlet_is_a_closed_chain_of_four() {
        let c = Curve::inlet();
        assert_eq!(c.pieces.len(), 4);
        assert!(c.closed);
        assert!((c.pieces[0].start.norm() - 1.0).abs() < 1e-15);
        assert_eq!(c.pieces[2].start.re, 1.0 - INLET_DEPTH);
    }

    #[test]
    fn spec_strings() {
        assert_eq!("ellipse:rho=2".parse::<Curve>().unwrap().id(), "ellipse:rho=2");
        assert_eq!("ellipse".parse::<Curve>().unwrap().rho, Some(2.0));
        assert_eq!("halfellipse:rho=3".parse::<Curve>().unwrap().kind, CurveKind::HalfEllipse);
        assert_eq!("superellipse".parse::<Curve>().unwrap().kind, CurveKind::Superellipse6);
        assert_eq!("semis".parse::<Curve>().unwrap().kind, CurveKind::SemicirclePair);
        for curve in all_curves() {
            assert_eq!(curve.id().parse::<Curve>().unwrap(), curve);
        }
        for bad in ["", "hexagon", "ellipse:rho=0.5", "ellipse:rho=x", "ellipse:r=2", "circle:rho=2", "lshape:"] {
            assert!(bad.parse::<Curve>().is_err(), "accepted `{bad}`");
        }
    }

    proptest! {
        #[test]
        fn ellipse_points_satisfy_the_conic(t in 0.0..1.0f64, rho in 1.01..5.0f64) {
            let e = Curve::rho_ellipse(rho).unwrap();
            let z = e.point_at(0, t).unwrap();
            let a = (rho + 1.0 / rho) / 2.0;
            let b = (rho - 1.0 / rho) / 2.0;
            prop_assert!(((z.re / a).powi(2) + (z.im / b).powi(2) - 1.0).abs() < 1e-14);
        }

        #[test]
        fn superellipse_points_satisfy_the_equation(t in 0.0..1.0f64) {
            let z = Curve::superellipse6().point_at(0, t).unwrap();
            prop_assert!((z.re.powi(6) + z.im.powi(6) - 1.0).abs() < 1e-14);
        }

        #[test]
        fn pieces_are_injective(kind in 0usize..8, a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let curve = Curve::from_kind(CurveKind::ALL[kind], None).unwrap();
            prop_assume!((a - b).abs() > 1e-9);
            for (k, piece) in curve.pieces.iter().enumerate() {
                // closed single pieces identify t = 0 and t = 1
                if curve.closed && curve.pieces.len() == 1 && ((a == 0.0 && b == 1.0) || (a == 1.0 && b == 0.0)) {
                    continue;
                }
                prop_assert!(piece.point_at(a) != piece.point_at(b), "{} piece {k}", curve.id());
            }
        }
    }
}

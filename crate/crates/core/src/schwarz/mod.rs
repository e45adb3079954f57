//! Schwarz functions fitted from boundary samples, and the reflection,
//! orbit and continuation operations built on them.

mod oracle;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::aaa::{aaa_fit, FitConfig, FitReport};
use crate::curves::SampleSet;
use crate::error::{Error, Result};
use crate::ratcore::{is_pole_hit, BarycentricRational, POLE_HIT};

pub use oracle::{oracle_circle, sqrt_z2_minus_1, Branch, EllipseOracle};

/// Two iterates closer than this count as a 2-cycle.
pub const CYCLE_TOL: f64 = 1e-6;
/// Orbits are cut off once an iterate exceeds this magnitude.
pub const ESCAPE_RADIUS: f64 = 1e8;

/// A rational approximation `r ≈ S` to the Schwarz function of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzApprox {
    pub rat: BarycentricRational,
    /// Identifier of the sampled curve, e.g. `ellipse:rho=2`.
    pub curve: String,
    pub fit: FitReport,
    pub tol: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawApprox {
    support: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
    curve: String,
    tol: f64,
    report: FitReport,
}

impl Serialize for SchwarzApprox {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RawApprox {
            support: self.rat.support().to_vec(),
            values: self.rat.values().to_vec(),
            weights: self.rat.weights().to_vec(),
            curve: self.curve.clone(),
            tol: self.tol,
            report: self.fit.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SchwarzApprox {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawApprox::deserialize(de)?;
        let rat = BarycentricRational::new(raw.support, raw.values, raw.weights).map_err(serde::de::Error::custom)?;
        Ok(Self {
            rat,
            curve: raw.curve,
            fit: raw.report,
            tol: raw.tol,
        })
    }
}

impl SchwarzApprox {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite data always serializes")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.rat.eval(z)
    }
}

/// Fits `r ≈ S` to samples whose values are `F = conj(Z)`.
pub fn fit_schwarz(samples: &SampleSet, cfg: &FitConfig) -> Result<SchwarzApprox> {
    if !samples.is_schwarz() {
        return Err(Error::invalid("Schwarz fitting needs sample values F = conj(Z)"));
    }
    let (rat, fit) = aaa_fit(&samples.z, &samples.f, cfg)?;
    Ok(SchwarzApprox {
        rat,
        curve: samples.curve.clone(),
        fit,
        tol: cfg.rel_tol,
    })
}

/// The reflection `z ↦ conj(r(z))`; a pole hit stays [`POLE_HIT`].
pub fn reflect(s: &SchwarzApprox, z: Complex64) -> Complex64 {
    let w = s.rat.eval(z);
    if is_pole_hit(w) {
        POLE_HIT
    } else {
        w.conj()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    /// Iterates `z_1, z_2, ...`, excluding the starting point.
    pub points: Vec<Complex64>,
    /// The last iterate is within [`CYCLE_TOL`] of the one two steps earlier.
    pub two_cycle: bool,
    /// Stopped early because an iterate left the disk of radius [`ESCAPE_RADIUS`].
    pub escaped: bool,
    /// Stopped early because an iterate landed on a pole.
    pub hit_pole: bool,
}

/// Applies [`reflect`] `steps` times starting from `z0`.
pub fn orbit(s: &SchwarzApprox, z0: Complex64, steps: usize) -> Result<Orbit> {
    if steps == 0 {
        return Err(Error::invalid("orbit needs at least one step"));
    }
    if !z0.is_finite() {
        return Err(Error::invalid("orbit start must be finite"));
    }
    let mut points = Vec::with_capacity(steps);
    let (mut escaped, mut hit_pole) = (false, false);
    let mut z = z0;
    for _ in 0..steps {
        z = reflect(s, z);
        if is_pole_hit(z) {
            hit_pole = true;
            break;
        }
        points.push(z);
        if z.norm() > ESCAPE_RADIUS {
            escaped = true;
            break;
        }
    }
    let n = points.len();
    let two_back = match n {
        0 | 1 => None,
        2 => Some(z0),
        _ => Some(points[n - 3]),
    };
    let two_cycle = n == steps && two_back.is_some_and(|w| (points[n - 1] - w).norm() < CYCLE_TOL);
    Ok(Orbit {
        points,
        two_cycle,
        escaped,
        hit_pole,
    })
}

/// How a function behaves on the curve, which fixes its reflection formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    RealOnGamma,
    ImagOnGamma,
}

/// Continues `f` across the curve by `conj(f(conj(r(z))))`, negated when
/// `f` is imaginary on the curve. The caller is responsible for `f` being
/// analytic at the reflected point.
pub fn continue_function<F>(s: &SchwarzApprox, f: F, z: Complex64, parity: Parity) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let w = reflect(s, z);
    if is_pole_hit(w) {
        return POLE_HIT;
    }
    let v = f(w).conj();
    match parity {
        Parity::RealOnGamma => v,
        Parity::ImagOnGamma => -v,
    }
}

/// `|conj(r(conj(r(z)))) - z|`, infinite when either reflection hits a pole.
pub fn involution_error(s: &SchwarzApprox, z: Complex64) -> f64 {
    let w = reflect(s, z);
    if is_pole_hit(w) {
        return f64::INFINITY;
    }
    let back = reflect(s, w);
    if is_pole_hit(back) {
        return f64::INFINITY;
    }
    (back - z).norm()
}

/// Distance from `r(z)` to the nearer of the two exact ellipse branches.
pub fn branch_error(o: &EllipseOracle, s: &SchwarzApprox, z: Complex64) -> f64 {
    let r = s.rat.eval(z);
    if is_pole_hit(r) {
        return f64::INFINITY;
    }
    (r - o.s1(z)).norm().min((r - o.s2(z)).norm())
}

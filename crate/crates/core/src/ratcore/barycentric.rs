use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Value returned when an evaluation lands on a pole.
pub const POLE_HIT: Complex64 = Complex64::new(f64::INFINITY, f64::INFINITY);

/// True for the pole sentinel and anything else that is not a finite number.
pub fn is_pole_hit(z: Complex64) -> bool {
    !z.is_finite()
}

/// Offsets closer than this (relative to the support scale) take the
/// first-order expansion about the support point.
const NEAR_SUPPORT_REL: f64 = 1e-13;

/// `r(z) = Σ w_j f_j / (z - z_j) / Σ w_j / (z - z_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarycentricRational {
    support: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawRational {
    support: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl<'de> Deserialize<'de> for BarycentricRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRational::deserialize(d)?;
        BarycentricRational::new(raw.support, raw.values, raw.weights).map_err(serde::de::Error::custom)
    }
}

impl BarycentricRational {
    pub fn new(support: Vec<Complex64>, values: Vec<Complex64>, weights: Vec<Complex64>) -> Result<Self> {
        let m = support.len();
        if m == 0 {
            return Err(Error::invalid("barycentric rational needs at least one support point"));
        }
        if values.len() != m || weights.len() != m {
            return Err(Error::invalid(format!(
                "support/values/weights lengths differ: {m}/{}/{}",
                values.len(),
                weights.len()
            )));
        }
        if support.iter().chain(&values).chain(&weights).any(|c| !c.is_finite()) {
            return Err(Error::invalid("barycentric data must be finite"));
        }
        if weights.iter().all(|w| *w == Complex64::new(0.0, 0.0)) {
            return Err(Error::invalid("weight vector is identically zero"));
        }
        for (j, a) in support.iter().enumerate() {
            if support[j + 1..].contains(a) {
                return Err(Error::invalid(format!("support point {a} repeated")));
            }
        }
        Ok(Self {
            support,
            values,
            weights,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite data always serializes")
    }

    pub fn support(&self) -> &[Complex64] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Nominal degree `m - 1`; the count of finite poles may be smaller.
    pub fn degree(&self) -> usize {
        self.support.len() - 1
    }

    /// Largest support-point modulus, used as the length scale for
    /// near-support detection.
    pub(crate) fn scale(&self) -> f64 {
        let s = self.support.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// Largest pairwise distance between support points.
    pub fn support_diameter(&self) -> f64 {
        let mut d = 0.0_f64;
        for (j, a) in self.support.iter().enumerate() {
            for b in &self.support[j + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Evaluates `r(z)`. Returns [`POLE_HIT`] when `z` is nonfinite or the
    /// denominator vanishes.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if !z.is_finite() {
            return POLE_HIT;
        }
        let zero = Complex64::new(0.0, 0.0);
        let near = NEAR_SUPPORT_REL * self.scale();
        for (j, &zj) in self.support.iter().enumerate() {
            if self.weights[j] == zero {
                continue;
            }
            let h = z - zj;
            if h == zero {
                return self.values[j];
            }
            if h.norm() < near {
                return self.values[j] + self.derivative_at_support(j) * h;
            }
        }

        let mut num = zero;
        let mut den = zero;
        for ((&zj, &fj), &wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            if wj == zero {
                continue;
            }
            let c = wj / (z - zj);
            num += c * fj;
            den += c;
        }
        if den == zero {
            return POLE_HIT;
        }
        let r = num / den;
        if r.is_finite() {
            r
        } else {
            POLE_HIT
        }
    }

    /// `r'(z_j) = -Σ_{k≠j} (w_k / w_j) (f_j - f_k) / (z_j - z_k)`.
    fn derivative_at_support(&self, j: usize) -> Complex64 {
        let (zj, fj, wj) = (self.support[j], self.values[j], self.weights[j]);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..self.len() {
            if k != j {
                acc += self.weights[k] * (fj - self.values[k]) / (zj - self.support[k]);
            }
        }
        -acc / wj
    }

    /// Barycentric numerator and denominator sums at `z` (not at a support point).
    pub(crate) fn sums(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for ((&zj, &fj), &wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            if wj == Complex64::new(0.0, 0.0) {
                continue;
            }
            let c = wj / (z - zj);
            num += c * fj;
            den += c;
        }
        (num, den)
    }
}

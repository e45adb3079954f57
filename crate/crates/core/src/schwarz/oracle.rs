//! Closed-form Schwarz functions for the circle and the ρ-ellipse.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `S(z) = 1/z` for the unit circle; the reflection domain is the punctured plane.
pub fn oracle_circle(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("the unit-circle Schwarz function 1/z is singular at 0".into()));
    }
    Ok(z.inv())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `a z - b √(z²-1)`: equals `conj(z)` on the ellipse, analytic off `[-1, 1]`.
    S1,
    /// `a z + b √(z²-1)`.
    S2,
}

/// Schwarz function of the ellipse `(w + 1/w)/2`, `|w| = ρ`:
/// `S(z) = a z ∓ b √(z² - 1)` with `a = (ρ² + ρ⁻²)/2`, `b = (ρ² - ρ⁻²)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseOracle {
    pub rho: f64,
    pub a: f64,
    pub b: f64,
}

impl EllipseOracle {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 1.0 && rho.is_finite()) {
            return Err(Error::invalid(format!("ellipse parameter rho must exceed 1, got {rho}")));
        }
        let (r2, ri2) = (rho * rho, 1.0 / (rho * rho));
        Ok(Self {
            rho,
            a: 0.5 * (r2 + ri2),
            b: 0.5 * (r2 - ri2),
        })
    }

    /// Endpoint `a` of the reflected cut: `S1` sends `[-1, 1]` to `|x| ≥ a` on the real axis.
    pub fn reflected_cut_start(&self) -> f64 {
        self.a
    }

    pub fn s1(&self, z: Complex64) -> Complex64 {
        self.a * z - self.b * sqrt_z2_minus_1(z)
    }

    pub fn s2(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b * sqrt_z2_minus_1(z)
    }

    pub fn eval(&self, z: Complex64, branch: Branch) -> Complex64 {
        match branch {
            Branch::S1 => self.s1(z),
            Branch::S2 => self.s2(z),
        }
    }
}

/// `√(z² - 1)` as `z √(1 - z⁻²)`: continuous off `[-1, 1]` and `~ z` at infinity.
/// On the cut itself the limit from the upper half-plane, `i √(1 - x²)`, is used.
pub fn sqrt_z2_minus_1(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        return Complex64::new(0.0, (1.0 - z.re * z.re).sqrt());
    }
    z * (Complex64::new(1.0, 0.0) - (z * z).inv()).sqrt()
}

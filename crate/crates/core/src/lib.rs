//! Schwarz functions of analytic arcs and curves, computed by AAA rational
//! approximation of `conj(z)` on boundary samples.
//!
//! The fitted rational `r ≈ S` gives the reflection `z ↦ conj(r(z))`, analytic
//! continuation of functions real (or imaginary) on the curve, iterated
//! reflection orbits, and grid diagnostics of where the fit behaves like a
//! true Schwarz function.
//!
//! ```
//! use schwarzfn::{fit_schwarz, orbit, reflect, sample_uniform, Complex64, Curve, FitConfig};
//!
//! let samples = sample_uniform(&Curve::rho_ellipse(2.0)?, 100)?;
//! let s = fit_schwarz(&samples, &FitConfig::default())?;
//! let w = reflect(&s, Complex64::new(0.0, 3.0));
//! assert!((w - Complex64::new(0.0, -0.4457)).norm() < 1e-3);
//! let o = orbit(&s, Complex64::new(0.0, 1.3), 4)?;
//! assert!(o.two_cycle);
//! assert_eq!(s.rat.poles()?.onscale_count(), 23);
//! # Ok::<(), schwarzfn::Error>(())
//! ```

pub mod aaa;
pub mod cplx;
pub mod curves;
mod error;
pub mod field;
pub mod ratcore;
pub mod schwarz;

pub use num_complex::Complex64;

pub use aaa::{aaa_fit, cleanup_spurious, AaaIteration, FitConfig, FitMode, FitReport};
pub use cplx::{format_complex, parse_complex};
pub use curves::{sample_clustered, sample_uniform, Curve, CurveKind, SampleSet};
pub use error::{Error, Result};
pub use ratcore::{is_pole_hit, BarycentricRational, PoleReport, ZeroReport, POLE_HIT};
pub use schwarz::{
    branch_error, continue_function, fit_schwarz, involution_error, oracle_circle, orbit, reflect, Branch,
    EllipseOracle, Orbit, Parity, SchwarzApprox,
};

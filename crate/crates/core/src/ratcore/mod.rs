//! Rational functions in barycentric form and their poles, residues and zeros.

mod barycentric;
mod roots;

pub use barycentric::{is_pole_hit, BarycentricRational, POLE_HIT};
pub use roots::{PoleReport, ZeroReport, DEFAULT_OFFSCALE_FACTOR};

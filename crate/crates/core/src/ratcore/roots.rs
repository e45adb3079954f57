use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::BarycentricRational;
use crate::error::{Error, Result};

/// Poles beyond `DEFAULT_OFFSCALE_FACTOR × diameter(support)` are flagged off-scale.
pub const DEFAULT_OFFSCALE_FACTOR: f64 = 1e6;

/// Candidate zeros whose normalized denominator residual is below this are
/// common roots of numerator and denominator and cancel out of `r`.
const CANCELLATION_TOL: f64 = 1e-10;

const NEWTON_STEPS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleReport {
    pub poles: Vec<Complex64>,
    pub residues: Vec<Complex64>,
    pub offscale: Vec<bool>,
    /// `|D(p)| / Σ_j |w_j / (p - z_j)|` for each pole, where `D` is the
    /// barycentric denominator sum.
    pub residuals: Vec<f64>,
    pub offscale_radius: f64,
}

impl PoleReport {
    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    /// Poles inside the off-scale radius.
    pub fn onscale(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.poles.iter().zip(&self.offscale).filter(|(_, off)| !**off).map(|(p, _)| *p)
    }

    pub fn onscale_count(&self) -> usize {
        self.offscale.iter().filter(|off| !**off).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroReport {
    pub zeros: Vec<Complex64>,
    /// Every product `w_j f_j` vanished, so `r ≡ 0` and no zeros are reported.
    pub degenerate: bool,
}

impl BarycentricRational {
    pub fn poles(&self) -> Result<PoleReport> {
        self.poles_with_radius(DEFAULT_OFFSCALE_FACTOR * self.support_diameter())
    }

    /// Finite poles with residues `N(p) / D'(p)`; poles with modulus above
    /// `offscale_radius` are kept and flagged.
    pub fn poles_with_radius(&self, offscale_radius: f64) -> Result<PoleReport> {
        let zero = Complex64::new(0.0, 0.0);
        let (nodes, coeffs): (Vec<_>, Vec<_>) = self
            .support()
            .iter()
            .zip(self.weights())
            .filter(|(_, w)| **w != zero)
            .map(|(z, w)| (*z, *w))
            .unzip();
        if coeffs.is_empty() {
            return Err(Error::invalid("weight vector is identically zero"));
        }
        let poles = secular_roots(&nodes, &coeffs)?;

        let mut residues = Vec::with_capacity(poles.len());
        let mut residuals = Vec::with_capacity(poles.len());
        for &p in &poles {
            let mut num = zero;
            let mut dprime = zero;
            for ((&zj, &fj), &wj) in self.support().iter().zip(self.values()).zip(self.weights()) {
                if wj == zero {
                    continue;
                }
                let c = wj / (p - zj);
                num += c * fj;
                dprime -= c / (p - zj);
            }
            residues.push(num / dprime);
            residuals.push(normalized_residual(&nodes, &coeffs, p));
        }
        let offscale = poles.iter().map(|p| p.norm() > offscale_radius).collect();
        Ok(PoleReport {
            poles,
            residues,
            offscale,
            residuals,
            offscale_radius,
        })
    }

    /// Finite zeros of `r`, excluding roots shared with the denominator.
    pub fn zeros(&self) -> Result<ZeroReport> {
        let zero = Complex64::new(0.0, 0.0);
        let mut nodes = Vec::new();
        let mut coeffs = Vec::new();
        let mut at_support = Vec::new();
        for ((&zj, &fj), &wj) in self.support().iter().zip(self.values()).zip(self.weights()) {
            if wj == zero {
                continue;
            }
            if fj == zero {
                at_support.push(zj);
            } else {
                nodes.push(zj);
                coeffs.push(wj * fj);
            }
        }
        if coeffs.is_empty() {
            return Ok(ZeroReport {
                zeros: Vec::new(),
                degenerate: true,
            });
        }

        let (dnodes, dcoeffs): (Vec<_>, Vec<_>) = self
            .support()
            .iter()
            .zip(self.weights())
            .filter(|(_, w)| **w != zero)
            .map(|(z, w)| (*z, *w))
            .unzip();
        let mut zeros: Vec<_> = secular_roots(&nodes, &coeffs)?
            .into_iter()
            .filter(|&q| normalized_residual(&dnodes, &dcoeffs, q) > CANCELLATION_TOL)
            .collect();
        zeros.extend(at_support);
        Ok(ZeroReport {
            zeros,
            degenerate: false,
        })
    }
}

fn partial_fractions(nodes: &[Complex64], coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64, f64) {
    let mut g = Complex64::new(0.0, 0.0);
    let mut dg = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for (&zj, &cj) in nodes.iter().zip(coeffs) {
        let t = cj / (x - zj);
        g += t;
        dg -= t / (x - zj);
        mag += t.norm();
    }
    (g, dg, mag)
}

fn normalized_residual(nodes: &[Complex64], coeffs: &[Complex64], x: Complex64) -> f64 {
    let (g, _, mag) = partial_fractions(nodes, coeffs, x);
    if mag > 0.0 && mag.is_finite() {
        g.norm() / mag
    } else {
        0.0
    }
}

/// Roots of `g(x) = Σ_j c_j / (x - z_j)` with every `c_j ≠ 0` and distinct nodes.
///
/// An exactly vanishing `Σ c_j` lowers the degree; the largest coefficient
/// is then factored out as in [`secular_core`] and the shorter sum solved
/// instead. Otherwise the problem is moved to `y = 1/(x - s)` for a shift
/// `s` away from the nodes, where `g = 0` becomes the partial-fraction
/// equation `Σ_j (c_j / (s - z_j)) / (y - 1/(z_j - s)) = 0` whose coefficient
/// sum `g(s)` is safely nonzero. Roots near infinity in `x` then sit near
/// `y = 0` instead of spoiling the reduction through a tiny `Σ c_j`.
pub(crate) fn secular_roots(nodes: &[Complex64], coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    debug_assert_eq!(nodes.len(), coeffs.len());
    if nodes.len() < 2 {
        return Ok(Vec::new());
    }
    let total: Complex64 = coeffs.iter().sum();
    if total == Complex64::new(0.0, 0.0) {
        let pivot = largest(coeffs);
        let zp = nodes[pivot];
        let (rest_nodes, reduced): (Vec<_>, Vec<_>) = nodes
            .iter()
            .zip(coeffs)
            .enumerate()
            .filter(|(j, _)| *j != pivot)
            .map(|(_, (&zj, &cj))| (zj, cj * (zj - zp)))
            .unzip();
        return secular_roots(&rest_nodes, &reduced);
    }

    let s = shift(nodes, coeffs);
    let (ynodes, ycoeffs): (Vec<_>, Vec<_>) = nodes
        .iter()
        .zip(coeffs)
        .map(|(&zj, &cj)| ((zj - s).inv(), cj / (s - zj)))
        .unzip();
    let roots = secular_core(&ynodes, &ycoeffs)?
        .into_iter()
        .filter(|y| *y != Complex64::new(0.0, 0.0))
        .map(|y| s + y.inv())
        .filter(|x| x.is_finite())
        .map(|x| polish(nodes, coeffs, x))
        .collect();
    Ok(roots)
}

fn largest(coeffs: &[Complex64]) -> usize {
    (0..coeffs.len())
        .max_by(|&a, &b| coeffs[a].norm().total_cmp(&coeffs[b].norm()))
        .unwrap()
}

/// A point on a circle around the nodes where `|g|` is largest relative to
/// the size of its terms.
fn shift(nodes: &[Complex64], coeffs: &[Complex64]) -> Complex64 {
    let centre = nodes.iter().sum::<Complex64>() / nodes.len() as f64;
    let radius = 1.5 * nodes.iter().map(|z| (z - centre).norm()).fold(0.0, f64::max);
    let radius = if radius > 0.0 { radius } else { 1.0 };
    (0..8)
        .map(|k| centre + Complex64::from_polar(radius, 0.3 + std::f64::consts::TAU * k as f64 / 8.0))
        .map(|s| (s, normalized_residual(nodes, coeffs, s)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0
}

/// Roots of `Σ_j c_j / (y - e_j)` when `W = Σ c_j` is well away from zero.
///
/// Multiplying by `(y - e_p)/W` for the largest `c_p` gives the secular
/// equation `1 + Σ_{j≠p} a_j / (y - e_j) = 0` with `a_j = c_j (e_j - e_p)/W`,
/// whose roots are the eigenvalues of `diag(e) - 1 aᵀ`.
fn secular_core(nodes: &[Complex64], coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let pivot = largest(coeffs);
    let ep = nodes[pivot];
    let total: Complex64 = coeffs.iter().sum();
    let (rest_nodes, a): (Vec<_>, Vec<_>) = nodes
        .iter()
        .zip(coeffs)
        .enumerate()
        .filter(|(j, _)| *j != pivot)
        .map(|(_, (&ej, &cj))| (ej, cj * (ej - ep) / total))
        .unzip();
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Linalg("secular coefficients overflowed".into()));
    }
    let nonzero: Vec<usize> = (0..a.len()).filter(|&j| a[j] != Complex64::new(0.0, 0.0)).collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }

    // Diagonal similarity so both factors of the rank-one term have modulus √|a_j|.
    let n = a.len();
    let u: Vec<f64> = a.iter().map(|x| -x.norm().sqrt()).collect();
    let v: Vec<Complex64> = a
        .iter()
        .map(|x| if x.norm() > 0.0 { x / x.norm().sqrt() } else { *x })
        .collect();
    let m = Mat::<Complex64>::from_fn(n, n, |i, j| {
        let d = if i == j { rest_nodes[i] } else { Complex64::new(0.0, 0.0) };
        d + u[i] * v[j]
    });
    m.eigenvalues()
        .map_err(|e| Error::Linalg(format!("eigenvalue iteration failed: {e:?}")))
}

fn polish(nodes: &[Complex64], coeffs: &[Complex64], mut x: Complex64) -> Complex64 {
    let (mut g, mut dg, mut mag) = partial_fractions(nodes, coeffs, x);
    for _ in 0..NEWTON_STEPS {
        if !(mag > 0.0 && mag.is_finite()) || dg == Complex64::new(0.0, 0.0) {
            break;
        }
        let cand = x - g / dg;
        let (g2, dg2, mag2) = partial_fractions(nodes, coeffs, cand);
        let improved = g2.norm() / mag2 < g.norm() / mag;
        if !cand.is_finite() || !improved {
            break;
        }
        (x, g, dg, mag) = (cand, g2, dg2, mag2);
    }
    x
}

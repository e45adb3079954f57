//! AAA rational fitting: greedy support selection with least-squares
//! barycentric weights, followed by removal of spurious pole–zero pairs.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::first_duplicate;
use crate::error::{Error, Result};
use crate::ratcore::BarycentricRational;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    #[default]
    Standard,
    /// Placeholder for the sign-function variant of AAA; currently fitted
    /// exactly like [`FitMode::Standard`].
    SignReserved,
}

impl std::str::FromStr for FitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(FitMode::Standard),
            "sign_reserved" | "sign" => Ok(FitMode::SignReserved),
            other => Err(Error::invalid(format!("unknown fit mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Stop once `max|F - r(Z)| ≤ rel_tol · max|F|`.
    pub rel_tol: f64,
    /// Largest degree `m - 1` the greedy loop may reach.
    pub max_degree: usize,
    /// Poles with `|residue| < cleanup_residue_tol · max|F|` are treated as spurious.
    pub cleanup_residue_tol: f64,
    pub mode: FitMode,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_degree: 150,
            cleanup_residue_tol: 1e-13,
            mode: FitMode::Standard,
        }
    }
}

impl FitConfig {
    pub fn with_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::invalid(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if self.max_degree == 0 {
            return Err(Error::invalid("max_degree must be at least 1"));
        }
        if !(self.cleanup_residue_tol > 0.0 && self.cleanup_residue_tol.is_finite()) {
            return Err(Error::invalid("cleanup_residue_tol must be positive"));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: FitConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// Greedy steps taken (support points added).
    pub iterations: usize,
    /// Number of support points minus one.
    pub degree: usize,
    /// Finite poles of the returned rational, off-scale ones included.
    pub finite_poles: usize,
    /// `max_i |F_i - r(Z_i)| / max_i |F_i|` for the returned rational.
    pub final_rel_error: f64,
    pub converged: bool,
    pub cleaned_pole_count: usize,
}

/// State of the greedy AAA loop, advanced one support point at a time.
pub struct AaaIteration<'a> {
    z: &'a [Complex64],
    f: &'a [Complex64],
    is_support: Vec<bool>,
    support_idx: Vec<usize>,
    weights: Vec<Complex64>,
    approx: Vec<Complex64>,
    history: Vec<f64>,
    sigma_min: f64,
}

impl<'a> AaaIteration<'a> {
    pub fn new(z: &'a [Complex64], f: &'a [Complex64]) -> Result<Self> {
        validate_samples(z, f)?;
        let mean = f.iter().sum::<Complex64>() / f.len() as f64;
        let approx = vec![mean; f.len()];
        let initial = max_abs_diff(f, &approx);
        Ok(Self {
            z,
            f,
            is_support: vec![false; z.len()],
            support_idx: Vec::new(),
            weights: Vec::new(),
            approx,
            history: vec![initial],
            sigma_min: f64::NAN,
        })
    }

    /// True while some sample is not yet a support point.
    pub fn has_candidates(&self) -> bool {
        self.support_idx.len() < self.z.len()
    }

    /// Current maximum residual `max_i |F_i - r(Z_i)|`.
    pub fn max_residual(&self) -> f64 {
        *self.history.last().unwrap()
    }

    /// Maximum residual before the first step and after each step.
    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn support_indices(&self) -> &[usize] {
        &self.support_idx
    }

    /// Smallest singular value of the latest Loewner matrix.
    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn degree(&self) -> usize {
        self.support_idx.len().saturating_sub(1)
    }

    /// Promotes the worst-approximated sample (lowest index on ties) to a
    /// support point and re-solves the weights. Returns the new max residual.
    pub fn step(&mut self) -> Result<f64> {
        let mut pick = None;
        let mut worst = f64::NEG_INFINITY;
        for i in 0..self.z.len() {
            if self.is_support[i] {
                continue;
            }
            let e = (self.f[i] - self.approx[i]).norm();
            let e = if e.is_nan() { f64::INFINITY } else { e };
            if e > worst {
                worst = e;
                pick = Some(i);
            }
        }
        let j = pick.ok_or_else(|| Error::invalid("every sample is already a support point"))?;
        self.is_support[j] = true;
        self.support_idx.push(j);

        let rows: Vec<usize> = (0..self.z.len()).filter(|&i| !self.is_support[i]).collect();
        let (w, smin) = min_singular_vector(self.z, self.f, &rows, &self.support_idx)?;
        self.weights = w;
        self.sigma_min = smin;

        let r = self.rational();
        for i in 0..self.z.len() {
            self.approx[i] = if self.is_support[i] { r.eval(self.z[i]) } else { eval_off_support(&r, self.z[i]) };
        }
        let err = max_abs_diff(self.f, &self.approx);
        self.history.push(err);
        Ok(err)
    }

    /// The rational defined by the current supports and weights.
    pub fn rational(&self) -> BarycentricRational {
        if self.support_idx.is_empty() {
            let mean = self.approx[0];
            // Constant stand-in before any support exists.
            return BarycentricRational::new(vec![self.z[0]], vec![mean], vec![Complex64::new(1.0, 0.0)])
                .expect("single finite support point");
        }
        BarycentricRational::new(
            self.support_idx.iter().map(|&j| self.z[j]).collect(),
            self.support_idx.iter().map(|&j| self.f[j]).collect(),
            self.weights.clone(),
        )
        .expect("supports are distinct samples and the weight vector has unit norm")
    }
}

/// Plain barycentric quotient, used at sample points known not to be supports.
fn eval_off_support(r: &BarycentricRational, z: Complex64) -> Complex64 {
    let (num, den) = r.sums(z);
    let v = num / den;
    if v.is_finite() {
        v
    } else {
        r.eval(z)
    }
}

fn validate_samples(z: &[Complex64], f: &[Complex64]) -> Result<()> {
    if z.len() != f.len() {
        return Err(Error::invalid(format!("{} sample points but {} values", z.len(), f.len())));
    }
    if z.len() < 2 {
        return Err(Error::invalid("AAA needs at least two samples"));
    }
    if let Some(k) = z.iter().position(|c| !c.is_finite()) {
        return Err(Error::invalid(format!("sample point {k} is not finite")));
    }
    if let Some(k) = f.iter().position(|c| !c.is_finite()) {
        return Err(Error::invalid(format!("sample value {k} is not finite")));
    }
    if let Some(k) = first_duplicate(z) {
        return Err(Error::invalid(format!("duplicate sample point {} at index {k}", z[k])));
    }
    Ok(())
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).norm();
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        })
        .fold(0.0, f64::max)
}

/// Unit right singular vector for the smallest singular value of the Loewner
/// matrix `L_ik = (F_i - f_k) / (Z_i - z_k)` over rows `rows` and supports `cols`.
fn min_singular_vector(
    z: &[Complex64],
    f: &[Complex64],
    rows: &[usize],
    cols: &[usize],
) -> Result<(Vec<Complex64>, f64)> {
    let m = cols.len();
    if rows.is_empty() {
        // No equations left; any unit vector is a null vector.
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        w[m - 1] = Complex64::new(1.0, 0.0);
        return Ok((w, 0.0));
    }
    let loewner = Mat::<Complex64>::from_fn(rows.len(), m, |i, k| {
        let (i, k) = (rows[i], cols[k]);
        (f[i] - f[k]) / (z[i] - z[k])
    });
    let svd = if rows.len() >= m {
        loewner.thin_svd()
    } else {
        loewner.svd()
    }
    .map_err(|e| Error::Linalg(format!("Loewner SVD did not converge: {e:?}")))?;
    let v = svd.V();
    let w: Vec<Complex64> = (0..m).map(|k| v[(k, m - 1)]).collect();
    let s = svd.S().column_vector();
    let smin = if rows.len() >= m { s[m - 1].re } else { 0.0 };
    Ok((w, smin))
}

fn max_error(r: &BarycentricRational, z: &[Complex64], f: &[Complex64]) -> f64 {
    z.iter()
        .zip(f)
        .map(|(&zi, &fi)| {
            let d = (fi - r.eval(zi)).norm();
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        })
        .fold(0.0, f64::max)
}

fn sup_norm(f: &[Complex64]) -> f64 {
    f.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Fits `F ≈ r(Z)` by AAA, then strips spurious poles.
///
/// Non-convergence within `max_degree` is reported through
/// [`FitReport::converged`]; the lowest-error iterate is returned in that case.
pub fn aaa_fit(z: &[Complex64], f: &[Complex64], cfg: &FitConfig) -> Result<(BarycentricRational, FitReport)> {
    cfg.validate()?;
    if cfg.mode == FitMode::SignReserved {
        log::warn!("fit mode `sign_reserved` is not implemented; fitting in standard mode");
    }
    let mut it = AaaIteration::new(z, f)?;
    let fscale = sup_norm(f);
    let target = cfg.rel_tol * fscale;

    let mut best: Option<(f64, BarycentricRational)> = None;
    loop {
        let err = it.step()?;
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, it.rational()));
        }
        if err <= target || it.degree() >= cfg.max_degree || !it.has_candidates() {
            break;
        }
    }
    let iterations = it.support_indices().len();
    let r = if it.max_residual() <= target {
        it.rational()
    } else {
        best.expect("at least one step ran").1
    };

    let (r, cleaned) = cleanup_spurious(&r, z, f, cfg);
    let err = max_error(&r, z, f);
    let final_rel_error = if fscale > 0.0 { err / fscale } else { err };
    let finite_poles = r.poles().map(|p| p.len()).unwrap_or(0);
    let report = FitReport {
        iterations,
        degree: r.degree(),
        finite_poles,
        final_rel_error,
        converged: final_rel_error <= cfg.rel_tol,
        cleaned_pole_count: cleaned,
    };
    Ok((r, report))
}

/// Removes poles with negligible residues (Froissart doublets): each such
/// pole costs its nearest support point, after which the weights are
/// re-solved by least squares over all non-support samples. Repeats until no
/// spurious pole remains; a removal that would push the sample error above
/// both the tolerance and the incoming error is rolled back.
///
/// Returns the cleaned rational and the number of support points removed.
pub fn cleanup_spurious(
    r: &BarycentricRational,
    z: &[Complex64],
    f: &[Complex64],
    cfg: &FitConfig,
) -> (BarycentricRational, usize) {
    if z.len() != f.len() || z.is_empty() {
        return (r.clone(), 0);
    }
    let fscale = sup_norm(f);
    let residue_floor = cfg.cleanup_residue_tol * fscale;
    let err_cap = (cfg.rel_tol * fscale).max(max_error(r, z, f));

    let mut current = r.clone();
    let mut removed = 0;
    for _ in 0..r.len() {
        let Ok(report) = current.poles() else { break };
        let spurious: Vec<Complex64> = report
            .poles
            .iter()
            .zip(&report.residues)
            .filter(|(_, res)| res.norm() < residue_floor || !res.is_finite())
            .map(|(p, _)| *p)
            .collect();
        if spurious.is_empty() {
            break;
        }

        let support = current.support();
        let mut drop = vec![false; support.len()];
        for p in &spurious {
            let nearest = (0..support.len())
                .filter(|&j| !drop[j])
                .min_by(|&a, &b| (support[a] - p).norm().total_cmp(&(support[b] - p).norm()));
            if let Some(j) = nearest {
                drop[j] = true;
            }
        }
        let ndrop = drop.iter().filter(|d| **d).count();
        if ndrop == 0 || ndrop >= support.len() {
            break;
        }

        let kept: Vec<usize> = (0..support.len()).filter(|&j| !drop[j]).collect();
        let Some(candidate) = resolve_weights(&current, &kept, z, f) else { break };
        if max_error(&candidate, z, f) > err_cap {
            break;
        }
        current = candidate;
        removed += ndrop;
    }
    (current, removed)
}

/// Refits weights for the supports `kept` of `r`, using every sample that is
/// not one of those supports as a Loewner row.
fn resolve_weights(
    r: &BarycentricRational,
    kept: &[usize],
    z: &[Complex64],
    f: &[Complex64],
) -> Option<BarycentricRational> {
    let sz: Vec<Complex64> = kept.iter().map(|&j| r.support()[j]).collect();
    let sf: Vec<Complex64> = kept.iter().map(|&j| r.values()[j]).collect();

    // Stack supports first so the Loewner builder can index them uniformly.
    let mut zz = sz.clone();
    let mut ff = sf.clone();
    for (&zi, &fi) in z.iter().zip(f) {
        if !sz.contains(&zi) {
            zz.push(zi);
            ff.push(fi);
        }
    }
    let cols: Vec<usize> = (0..sz.len()).collect();
    let rows: Vec<usize> = (sz.len()..zz.len()).collect();
    let (w, _) = min_singular_vector(&zz, &ff, &rows, &cols).ok()?;
    BarycentricRational::new(sz, sf, w).ok()
}

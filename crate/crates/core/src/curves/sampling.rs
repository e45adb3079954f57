use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Curve;
use crate::error::{Error, Result};

/// Default rate for root-exponential clustering toward corners.
pub const DEFAULT_CLUSTER_SIGMA: f64 = 1.6;

/// Parameter offsets below this (as a fraction of the piece) are dropped.
pub const MIN_OFFSET: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Clustering {
    Uniform,
    /// Offsets `exp(-sigma (√n - √k))` from each corner.
    RootExponential { sigma: f64 },
    /// Points read from a file.
    Explicit,
}

/// Boundary samples `Z` with targets `F` (`F = conj(Z)` for Schwarz fitting).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    pub curve: String,
    pub clustering: Clustering,
    #[serde(rename = "Z")]
    pub z: Vec<Complex64>,
    #[serde(rename = "F")]
    pub f: Vec<Complex64>,
    /// Points removed as duplicates or because their offset underflowed.
    #[serde(skip)]
    pub dropped: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSampleSet {
    #[serde(default)]
    curve: Option<String>,
    #[serde(default)]
    clustering: Option<Clustering>,
    #[serde(rename = "Z")]
    z: Vec<Complex64>,
    #[serde(rename = "F", default)]
    f: Option<Vec<Complex64>>,
}

impl SampleSet {
    /// Samples with `F = conj(Z)`.
    pub fn schwarz(curve: impl Into<String>, clustering: Clustering, z: Vec<Complex64>) -> Result<Self> {
        let f = z.iter().map(|c| c.conj()).collect();
        Self::new(curve, clustering, z, f)
    }

    pub fn new(curve: impl Into<String>, clustering: Clustering, z: Vec<Complex64>, f: Vec<Complex64>) -> Result<Self> {
        if z.len() != f.len() {
            return Err(Error::invalid(format!("{} points but {} values", z.len(), f.len())));
        }
        if z.iter().chain(&f).any(|c| !c.is_finite()) {
            return Err(Error::invalid("sample data must be finite"));
        }
        if let Some(k) = first_duplicate(&z) {
            return Err(Error::invalid(format!("sample point {} repeated", z[k])));
        }
        Ok(Self {
            curve: curve.into(),
            clustering,
            z,
            f,
            dropped: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Whether `F_k = conj(Z_k)` holds exactly for every sample.
    pub fn is_schwarz(&self) -> bool {
        self.z.iter().zip(&self.f).all(|(z, f)| z.conj() == *f)
    }

    /// Parses `{"curve": ..., "Z": [[re, im], ...], "F": [[re, im], ...]}`;
    /// `F` defaults to `conj(Z)` and `curve` to `"points"`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSampleSet = serde_json::from_str(text)?;
        let curve = raw.curve.unwrap_or_else(|| "points".to_string());
        let clustering = raw.clustering.unwrap_or(Clustering::Explicit);
        match raw.f {
            Some(f) => Self::new(curve, clustering, raw.z, f),
            None => Self::schwarz(curve, clustering, raw.z),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite data always serializes")
    }
}

/// Index of some point equal to an earlier one. Expects finite data.
pub(crate) fn first_duplicate(z: &[Complex64]) -> Option<usize> {
    let mut order: Vec<usize> = (0..z.len()).collect();
    // partial_cmp treats ±0 as equal, so equal values end up adjacent
    order.sort_by(|&a, &b| {
        z[a].re
            .partial_cmp(&z[b].re)
            .unwrap()
            .then(z[a].im.partial_cmp(&z[b].im).unwrap())
    });
    order.windows(2).filter(|w| z[w[0]] == z[w[1]]).map(|w| w[0].max(w[1])).min()
}

/// Removes repeated points (keeping the first), returning how many went.
fn dedup_in_order(z: &mut Vec<Complex64>) -> usize {
    let before = z.len();
    let mut seen = HashSet::with_capacity(z.len());
    // adding +0.0 maps -0.0 to +0.0 so equal values share a key
    z.retain(|c| seen.insert(((c.re + 0.0).to_bits(), (c.im + 0.0).to_bits())));
    before - z.len()
}

fn finish(curve: &Curve, clustering: Clustering, mut z: Vec<Complex64>, mut dropped: usize) -> Result<SampleSet> {
    let dups = dedup_in_order(&mut z);
    if dups > 0 {
        log::warn!("{}: removed {dups} duplicate sample points", curve.id());
    }
    dropped += dups;
    let mut set = SampleSet::schwarz(curve.id(), clustering, z)?;
    set.dropped = dropped;
    Ok(set)
}

/// `n_per_piece` equispaced parameter values on each piece. Junction
/// endpoints are never sampled; free ends of open arcs are.
pub fn sample_uniform(curve: &Curve, n_per_piece: usize) -> Result<SampleSet> {
    if n_per_piece < 2 {
        return Err(Error::invalid("uniform sampling needs at least 2 points per piece"));
    }
    let n = n_per_piece;
    let mut z = Vec::with_capacity(n * curve.pieces.len());
    for piece in &curve.pieces {
        let closed_single = curve.closed && curve.pieces.len() == 1;
        let ts: Vec<f64> = match (piece.junction_start, piece.junction_end) {
            _ if closed_single => (0..n).map(|k| k as f64 / n as f64).collect(),
            (true, true) => (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect(),
            (false, false) => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
            (false, true) => (0..n).map(|k| k as f64 / n as f64).collect(),
            (true, false) => (1..=n).map(|k| k as f64 / n as f64).collect(),
        };
        z.extend(ts.into_iter().map(|t| piece.point_at(t)));
    }
    finish(curve, Clustering::Uniform, z, 0)
}

/// Root-exponential offsets `exp(-sigma (√count - √k))`, `k = 1..=count`.
fn root_exponential(count: usize, sigma: f64) -> impl Iterator<Item = f64> {
    let root = (count as f64).sqrt();
    (1..=count).map(move |k| (-sigma * (root - (k as f64).sqrt())).exp())
}

/// Samples clustered root-exponentially toward corner endpoints.
///
/// A piece with one corner end takes offsets `exp(-sigma (√n - √k))`,
/// `k = 1..=n`, from that corner (the last one reaching the free far end).
/// A piece with corners at both ends gives each half `⌊n/2⌋` points with
/// offsets `exp(-sigma (√(h+1) - √k))`, `k = 1..=h`, measured in half-piece
/// units; an odd `n` adds the midpoint. Pieces without corners are sampled
/// uniformly. Offsets below [`MIN_OFFSET`] are dropped with a warning.
pub fn sample_clustered(curve: &Curve, n_per_piece: usize, sigma: f64) -> Result<SampleSet> {
    if n_per_piece < 4 {
        return Err(Error::invalid("clustered sampling needs at least 4 points per piece"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("clustering rate must be positive, got {sigma}")));
    }
    let n = n_per_piece;
    let mut z = Vec::with_capacity(n * curve.pieces.len());
    let mut underflow = 0;
    for piece in &curve.pieces {
        match (piece.corner_start, piece.corner_end) {
            (false, false) => {
                let uniform = sample_uniform(
                    &Curve {
                        pieces: vec![piece.clone()],
                        ..curve.clone()
                    },
                    n,
                )?;
                z.extend(uniform.z);
            }
            (true, false) | (false, true) => {
                for d in root_exponential(n, sigma) {
                    if d < MIN_OFFSET {
                        underflow += 1;
                        continue;
                    }
                    z.push(if piece.corner_start { piece.point_at(d) } else { piece.point_from_end(d) });
                }
            }
            (true, true) => {
                let h = n / 2;
                let offsets: Vec<f64> = root_exponential(h + 1, sigma).take(h).map(|d| 0.5 * d).collect();
                for &d in &offsets {
                    if d < MIN_OFFSET {
                        underflow += 1;
                    } else {
                        z.push(piece.point_at(d));
                    }
                }
                if n % 2 == 1 {
                    z.push(piece.point_at(0.5));
                }
                for &d in offsets.iter().rev() {
                    if d >= MIN_OFFSET {
                        z.push(piece.point_from_end(d));
                    }
                }
                underflow += offsets.iter().filter(|d| **d < MIN_OFFSET).count();
            }
        }
    }
    if underflow > 0 {
        log::warn!("{}: dropped {underflow} clustered points closer than {MIN_OFFSET:e} to a corner", curve.id());
    }
    finish(curve, Clustering::RootExponential { sigma }, z, underflow)
}

//! Helpers shared by the integration tests: an independent polynomial
//! root finder and set matching.

#![allow(dead_code)]

use schwarzfn::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Roots of `Σ_k a_k z^k` (ascending coefficients) by Durand–Kerner iteration.
pub fn polynomial_roots(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let lead = a[n];
    let monic: Vec<Complex64> = a.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, x| acc * z + x);
    let seed = c(0.4, 0.9);
    let bound = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..n).map(|k| bound * seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut change = 0.0_f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-15 {
            break;
        }
    }
    roots
}

/// Ascending coefficients of `Σ_j w_j Π_{k≠j} (z - z_k)`.
pub fn denominator_polynomial(z: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
    let m = z.len();
    let mut total = vec![Complex64::new(0.0, 0.0); m];
    for (j, &wj) in w.iter().enumerate() {
        let mut p = vec![Complex64::new(1.0, 0.0)];
        for (k, &zk) in z.iter().enumerate() {
            if k == j {
                continue;
            }
            let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
            for (i, &pi) in p.iter().enumerate() {
                next[i + 1] += pi;
                next[i] -= zk * pi;
            }
            p = next;
        }
        for (i, pi) in p.iter().enumerate() {
            total[i] += wj * pi;
        }
    }
    while total.len() > 1 && total.last().unwrap().norm() == 0.0 {
        total.pop();
    }
    total
}

pub fn matched_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    // small sets only: try every assignment
    fn best(a: &[Complex64], b: &mut Vec<Complex64>) -> f64 {
        if a.is_empty() {
            return 0.0;
        }
        let mut out = f64::INFINITY;
        for i in 0..b.len() {
            let q = b.remove(i);
            out = out.min((a[0] - q).norm().max(best(&a[1..], b)));
            b.insert(i, q);
        }
        out
    }
    best(a, &mut b.to_vec())
}


use proptest::prelude::*;
use schwarzfn::{aaa_fit, BarycentricRational, cleanup_spurious, sample_uniform, AaaIteration, Complex64, Curve, FitConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_circle(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)).collect()
}

fn sup(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Loewner matrix over the non-support rows, assembled directly from its definition.
fn loewner(z: &[Complex64], f: &[Complex64], support: &[usize]) -> Vec<Vec<Complex64>> {
    (0..z.len())
        .filter(|i| !support.contains(i))
        .map(|i| support.iter().map(|&j| (f[i] - f[j]) / (z[i] - z[j])).collect())
        .collect()
}

fn matvec(a: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn adjoint_matvec(a: &[Vec<Complex64>], y: &[Complex64]) -> Vec<Complex64> {
    let n = a[0].len();
    (0..n).map(|j| a.iter().zip(y).map(|(row, yi)| row[j].conj() * yi).sum()).collect()
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn weights_are_the_smallest_right_singular_vector() {
    let z: Vec<Complex64> = (0..60).map(|k| c(-1.0 + 2.0 * k as f64 / 59.0, 0.0)).collect();
    let f: Vec<Complex64> = z.iter().map(|x| (x * 3.0).exp() / (x - c(0.0, 0.3))).collect();
    let mut it = AaaIteration::new(&z, &f).unwrap();
    for _ in 0..6 {
        it.step().unwrap();
        let r = it.rational();
        let w = r.weights();
        assert!((norm2(w) - 1.0).abs() < 1e-12);
        let l = loewner(&z, &f, it.support_indices());
        let lw = matvec(&l, w);
        let sigma = it.sigma_min();
        let scale = l.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
        assert!((norm2(&lw) - sigma).abs() <= 1e-10 * sigma + 1e-13 * scale, "|Lw| {} vs sigma {sigma}", norm2(&lw));
        // L^H L w = sigma^2 w
        let g = adjoint_matvec(&l, &lw);
        let defect: Vec<Complex64> = g.iter().zip(w).map(|(g, w)| g - sigma * sigma * w).collect();
        assert!(norm2(&defect) <= 1e-9 * scale * scale, "eigen defect {}", norm2(&defect));
    }
}

#[test]
fn greedy_step_picks_the_worst_sample() {
    let z = unit_circle(40);
    let f: Vec<Complex64> = z.iter().map(|x| x.exp()).collect();
    let mut it = AaaIteration::new(&z, &f).unwrap();
    let mean: Complex64 = f.iter().sum::<Complex64>() / f.len() as f64;
    let worst = (0..z.len()).max_by(|&a, &b| (f[a] - mean).norm().total_cmp(&(f[b] - mean).norm()).then(b.cmp(&a))).unwrap();
    it.step().unwrap();
    assert_eq!(it.support_indices(), &[worst]);
    let r = it.rational();
    for i in 0..z.len() {
        if i != worst {
            let worst_now = (0..z.len())
                .filter(|&k| k != worst)
                .map(|k| (f[k] - r.eval(z[k])).norm())
                .fold(0.0, f64::max);
            assert!((f[i] - r.eval(z[i])).norm() <= worst_now);
        }
    }
}

#[test]
fn residual_history_reaches_tolerance() {
    let z = unit_circle(200);
    let f: Vec<Complex64> = z.iter().map(|x| 1.0 / (x - c(1.5, 0.0)) + x.exp()).collect();
    let (_, report) = aaa_fit(&z, &f, &FitConfig::default()).unwrap();
    assert!(report.converged);
    assert!(report.final_rel_error <= 1e-13);
    let mut it = AaaIteration::new(&z, &f).unwrap();
    while it.max_residual() > 1e-13 * sup(&f) {
        it.step().unwrap();
    }
    let h = it.history();
    assert!(h.last().unwrap() < &h[0]);
    assert!(h.len() <= 40);
}

#[test]
fn identity_data_is_fitted_at_degree_one() {
    let z = unit_circle(50);
    let (r, report) = aaa_fit(&z, &z, &FitConfig::default()).unwrap();
    assert!(report.converged);
    assert_eq!(report.degree, 1);
    assert_eq!(r.poles().unwrap().onscale_count(), 0);
    assert!((r.eval(c(7.0, -2.0)) - c(7.0, -2.0)).norm() < 1e-12);
}

#[test]
fn cleanup_removes_doublets_from_an_overfitted_identity() {
    let z = unit_circle(50);
    // Weights summing to zero reproduce z exactly, with one pole cancelled by a zero.
    let support = vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)];
    let polluted = BarycentricRational::new(support.clone(), support, vec![c(0.5, 0.0), c(-0.25, 0.0), c(-0.25, 0.0)]).unwrap();
    let doublet = polluted.poles().unwrap();
    assert_eq!(doublet.len(), 1);
    assert!(!doublet.offscale[0]);
    assert!(doublet.residues[0].norm() < 1e-13, "residue {}", doublet.residues[0]);
    let (clean, removed) = cleanup_spurious(&polluted, &z, &z, &FitConfig::default());
    assert!(removed >= 1);
    assert_eq!(clean.len(), 3 - removed);
    let err = z.iter().map(|x| (clean.eval(*x) - x).norm()).fold(0.0, f64::max);
    assert!(err <= 1e-13, "error after cleanup {err}");
}

#[test]
fn ellipse_fit_keeps_its_pole_band() {
    let samples = sample_uniform(&Curve::rho_ellipse(2.0).unwrap(), 100).unwrap();
    let (r, report) = aaa_fit(&samples.z, &samples.f, &FitConfig::default()).unwrap();
    assert!(report.converged);
    assert!(report.cleaned_pole_count <= 2, "cleaned {}", report.cleaned_pole_count);
    let poles = r.poles().unwrap();
    let band: Vec<Complex64> = poles.onscale().collect();
    assert!(band.len() >= 15);
    // greedy support order is not conjugation-symmetric, so the band sits up to ~0.015 off the axis
    for p in band {
        assert!(p.im.abs() < 0.02 && p.re.abs() < 1.0, "pole {p} off the segment [-1, 1]");
    }
}

#[test]
fn fitting_is_deterministic() {
    let samples = sample_uniform(&Curve::squiggle(), 120).unwrap();
    let cfg = FitConfig::default();
    let (a, ra) = aaa_fit(&samples.z, &samples.f, &cfg).unwrap();
    let (b, rb) = aaa_fit(&samples.z, &samples.f, &cfg).unwrap();
    assert_eq!(ra, rb);
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn max_degree_caps_the_fit() {
    let z = unit_circle(100);
    let f: Vec<Complex64> = z.iter().map(|x| (x - c(1.01, 0.0)).ln()).collect();
    let cfg = FitConfig { max_degree: 5, ..FitConfig::default() };
    let (r, report) = aaa_fit(&z, &f, &cfg).unwrap();
    assert!(!report.converged);
    assert!(r.degree() <= 5);
    assert!(report.final_rel_error.is_finite());
}

#[test]
fn invalid_inputs_are_rejected() {
    let z = unit_circle(4);
    assert!(aaa_fit(&z, &z[..3], &FitConfig::default()).is_err());
    assert!(aaa_fit(&[], &[], &FitConfig::default()).is_err());
    let dup = vec![z[0], z[1], z[0]];
    assert!(aaa_fit(&dup, &dup, &FitConfig::default()).is_err());
    let bad = vec![z[0], c(f64::NAN, 0.0)];
    assert!(aaa_fit(&bad, &bad, &FitConfig::default()).is_err());
    assert!(aaa_fit(&z, &z, &FitConfig { rel_tol: -1.0, ..FitConfig::default() }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn error_is_measured_against_the_data_norm(scale in 1e-6..1e6f64, shift in 1.2..3.0f64) {
        let z = unit_circle(80);
        let f: Vec<Complex64> = z.iter().map(|x| scale / (x - shift)).collect();
        let (r, report) = aaa_fit(&z, &f, &FitConfig::default()).unwrap();
        let err = z.iter().zip(&f).map(|(x, y)| (r.eval(*x) - y).norm()).fold(0.0, f64::max);
        prop_assert!((report.final_rel_error - err / sup(&f)).abs() <= 1e-15 + 1e-12 * report.final_rel_error);
        prop_assert!(report.converged);
        prop_assert_eq!(report.degree, 1);
    }

    #[test]
    fn fit_interpolates_at_its_supports(seed in 0u64..1000) {
        let n = 30 + (seed % 20) as usize;
        let z: Vec<Complex64> = (0..n).map(|k| c(k as f64 / n as f64, ((seed + k as u64) % 7) as f64 * 0.01)).collect();
        let f: Vec<Complex64> = z.iter().map(|x| (x * 2.0).sin()).collect();
        let (r, _) = aaa_fit(&z, &f, &FitConfig::default()).unwrap();
        for (s, v) in r.support().iter().zip(r.values()) {
            prop_assert_eq!(r.eval(*s), *v);
        }
    }
}

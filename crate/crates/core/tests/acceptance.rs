//! Acceptance suite. Runs without the libtest harness so that every criterion prints
//! exactly one PASS/FAIL line; the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use dirichlet_core::dynamics::{ergodicity_diagnostic, normalized_power_norm, OrbitVerdict};
use dirichlet_core::evaluation::{evaluate, evaluate_rule, select_truncation, seminorm, SeminormGrid};
use dirichlet_core::spectral::{
    bv_check, classify_point, reciprocal_spectrum_check, resolvent_apply, shifted_apply, spectral_gap, Space,
    Verdict,
};
use dirichlet_core::{
    abscissa, volterra_apply, volterra_identity_check, CoefficientRule, Complex64, DirichletPolynomial,
    HalfPlanePoint, Multiplier,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// `(id, name, check, runtime limit in seconds)`.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<f64>);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_index: u64, zero_constant: bool) -> DirichletPolynomial {
    let terms = rng.gen_range(1..=24);
    let lo = if zero_constant { 2 } else { 1 };
    let pairs: Vec<(u64, Complex64)> = (0..terms)
        .map(|_| {
            let n = rng.gen_range(lo..=max_index);
            (n, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    let p = DirichletPolynomial::from_terms(pairs).expect("valid terms");
    if p.is_zero() {
        DirichletPolynomial::monomial(max_index).unwrap()
    } else {
        p
    }
}

fn rel_close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm())
}

fn coefficientwise(a: &DirichletPolynomial, b: &DirichletPolynomial, rel: f64) -> bool {
    a.len() == b.len() && a.terms().zip(b.terms()).all(|((n, x), (m, y))| n == m && rel_close(x, y, rel))
}

fn c1_inverse_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = Multiplier::differentiation();
    let j = Multiplier::integration();
    for i in 0..200 {
        let f = random_poly(&mut rng, 512, true);
        let jd = j.apply(&d.apply(&f).unwrap()).map_err(|e| e.to_string())?;
        let dj = d.apply(&j.apply(&f).map_err(|e| e.to_string())?).unwrap();
        check(coefficientwise(&jd, &f, 1e-12), || format!("JD f != f for sample {i}"))?;
        check(coefficientwise(&dj, &f, 1e-12), || format!("DJ f != f for sample {i}"))?;
    }
    Ok("200 polynomials, JD = DJ = id within 1e-12 relative".into())
}

fn c2_point_spectrum() -> Outcome {
    for n in 2..=1000u64 {
        let lambda = Complex64::new(-(n as f64).ln(), 0.0);
        let class = classify_point(lambda, Space::ZeroSubspace);
        check(class.verdict == Verdict::Eigenvalue { n }, || {
            format!("classify(-log {n}) = {:?}", class.verdict)
        })?;
        let image = shifted_apply(lambda, &DirichletPolynomial::monomial(n).unwrap());
        check(image.is_zero(), || format!("(λI - D) n^-s != 0 for n = {n}"))?;
    }
    Ok("n = 2..1000 classified Eigenvalue{n}, monomials annihilated exactly".into())
}

fn c3_cesaro_growth() -> Outcome {
    let d = Multiplier::differentiation();
    let j = Multiplier::integration();
    let three = DirichletPolynomial::monomial(3).unwrap();
    let two = DirichletPolynomial::monomial(2).unwrap();
    let (l3, l2) = (3f64.ln(), 2f64.ln());
    let mut worst: f64 = 0.0;
    for eps in [0.1, 1.0] {
        for k in 1..=40u32 {
            let kf = f64::from(k);
            let cases = [
                (normalized_power_norm(&d, &three, eps, k), l3.powi(k as i32) / (kf * 3f64.powf(eps))),
                (normalized_power_norm(&j, &two, eps, k), 1.0 / (kf * l2.powi(k as i32) * 2f64.powf(eps))),
            ];
            for (got, want) in cases {
                let got = got.map_err(|e| e.to_string())?;
                let rel = (got - want).abs() / want;
                worst = worst.max(rel);
                check(rel <= 1e-9, || format!("eps {eps}, k {k}: {got} vs {want}"))?;
            }
        }
        for (m, f, name) in [(&d, &three, "D on 3^-s"), (&j, &two, "J on 2^-s")] {
            let report = ergodicity_diagnostic(m, f, eps, 40).map_err(|e| e.to_string())?;
            check(report.verdict == OrbitVerdict::Diverges, || {
                format!("{name} at eps {eps}: verdict {}", report.verdict)
            })?;
        }
    }
    Ok(format!("closed forms for k <= 40 (worst rel {worst:.1e}), four 'diverges' verdicts"))
}

fn c4_resolvent_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    while done < 50 {
        let lambda = Complex64::new(rng.gen_range(-8.0..3.0), rng.gen_range(-3.0..3.0));
        let mu = spectral_gap(lambda);
        if mu <= 0.05 {
            continue;
        }
        let f = random_poly(&mut rng, 256, false);
        let out = resolvent_apply(lambda, &f, Space::Full).map_err(|e| e.to_string())?;
        let back = shifted_apply(lambda, &out);
        let err = back.max_abs_diff(&f);
        check(err <= 1e-10, || format!("round trip error {err:e} at λ = {lambda}"))?;
        for (n, b) in f.terms() {
            let o = out.coeff(n).norm();
            check(o <= b.norm() / mu * (1.0 + 1e-12), || {
                format!("|out_{n}| = {o} exceeds |b_n|/μ = {}", b.norm() / mu)
            })?;
        }
        done += 1;
    }
    Ok("50 points with μ > 0.05, round trip within 1e-10, |out_n| <= |b_n|/μ".into())
}

fn c5_bounded_variation() -> Outcome {
    let lambda = Complex64::new(1.0, 0.0);
    let small = bv_check(lambda, 0.5, 5_000).map_err(|e| e.to_string())?;
    let large = bv_check(lambda, 0.5, 10_000).map_err(|e| e.to_string())?;
    let drift = (large.fitted_c - small.fitted_c).abs() / large.fitted_c;
    check(drift < 0.01, || format!("C drifts by {drift:.3e}"))?;
    // independent per-term check against the fitted constant
    let mu = large.gap;
    let gamma = |n: f64| 1.0 / ((n.ln() + lambda) * n.sqrt());
    for n in 2..=10_000u64 {
        let x = n as f64;
        let d = (gamma(x) - gamma(x + 1.0)).norm();
        let bound = large.fitted_c / (mu * mu * x.powf(1.25));
        check(d <= bound * (1.0 + 1e-12), || format!("term {n}: {d:e} > {bound:e}"))?;
    }
    Ok(format!("C = {:.6} (drift {drift:.1e}), all terms under the majorant", large.fitted_c))
}

fn c6_reciprocal_spectrum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut points: Vec<Complex64> = (2..=50u64).map(|n| Complex64::new(-(n as f64).ln(), 0.0)).collect();
    while points.len() < 200 {
        let z = Complex64::new(rng.gen_range(-6.0..2.0), rng.gen_range(-2.0..2.0));
        if z.norm() > 1e-9 {
            points.push(z);
        }
    }
    let mut bad = Vec::new();
    for mu in &points {
        let report = reciprocal_spectrum_check(*mu).map_err(|e| e.to_string())?;
        if !report.consistent {
            bad.push(*mu);
        }
    }
    check(bad.is_empty(), || format!("{} inconsistencies, first at {}", bad.len(), bad[0]))?;
    Ok("200 sweep points (49 eigenvalues), zero inconsistencies".into())
}

fn c7_volterra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let g = random_poly(&mut rng, 512, false);
        let id = volterra_identity_check(&g);
        check(id.matches && id.lhs == id.rhs, || {
            format!("V_g(1) != g - a_1 for sample {i}")
        })?;
        let f = random_poly(&mut rng, 64, false);
        let v = volterra_apply(&g, &f);
        check(v.first_coefficient() == Complex64::new(0.0, 0.0), || {
            format!("V_g(f) has a_1 != 0 for sample {i}")
        })?;
    }
    Ok("100 symbols, V_g(1) = g - a_1 and a_1(V_g f) = 0".into())
}

fn c8_convolution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let f = random_poly(&mut rng, 300, false);
        let g = random_poly(&mut rng, 300, false);
        let s = HalfPlanePoint::new(rng.gen_range(0.0..3.0), rng.gen_range(-100.0..100.0)).unwrap();
        let lhs = evaluate(&f.dirichlet_multiply(&g), s);
        let rhs = evaluate(&f, s) * evaluate(&g, s);
        let err = (lhs - rhs).norm();
        check(err <= 1e-10 * (1.0 + rhs.norm()), || format!("sample {i}: error {err:e}"))?;
    }
    Ok("100 random (f, g, s), eval(fg) = eval(f) eval(g) within 1e-10".into())
}

fn c9_abscissa_corpus() -> Outcome {
    let n = 100_000;
    let within = |got: f64, want: f64, tol: f64, what: &str| {
        check((got - want).abs() <= tol, || format!("{what} = {got}, want {want} ± {tol}"))
    };
    let ones = CoefficientRule::ones();
    within(abscissa::estimate_sigma_c(&ones, n).map_err(|e| e.to_string())?.value, 1.0, 0.02, "ones σ_c")?;
    within(abscissa::estimate_sigma_a(&ones, n).map_err(|e| e.to_string())?.value, 1.0, 0.02, "ones σ_a")?;
    let eta = CoefficientRule::eta();
    within(abscissa::estimate_sigma_c(&eta, n).map_err(|e| e.to_string())?.value, 0.0, 0.05, "eta σ_c")?;
    within(abscissa::estimate_sigma_a(&eta, n).map_err(|e| e.to_string())?.value, 1.0, 0.02, "eta σ_a")?;
    let z = abscissa::estimate_sigma_a(&CoefficientRule::zeta_shift(2), n).map_err(|e| e.to_string())?;
    within(z.value, -1.0, 0.05, "zeta_shift(2) σ_a")?;
    check(z.shift > 0, || "zeta_shift(2) estimate did not use the shift protocol".into())?;
    Ok(format!("N = 1e5, zeta_shift(2) σ_a = {:.4} after shift {}", z.value, z.shift))
}

fn c10_evaluation_oracle() -> Outcome {
    let rule = CoefficientRule::zeta_shift(2);
    // leave 10% of the error budget to roundoff in the streamed sum
    let tail = select_truncation(&rule, |_| 1.0, 0.0, 0.9e-8, 1 << 40).map_err(|e| e.to_string())?;
    let value = evaluate_rule(&rule, tail.m, HalfPlanePoint::real(0.0).unwrap());
    let err = (value.re - PI * PI / 6.0).abs();
    check(err <= 1e-8 && value.im == 0.0, || format!("N = {}: error {err:e}", tail.m))?;
    Ok(format!("N = {} ({:?} tail bound {:.2e}), error {err:.2e}", tail.m, tail.route, tail.bound))
}

fn c11_seminorm_sanity() -> Outcome {
    let two = DirichletPolynomial::monomial(2).unwrap();
    for eps in [0.0, 0.5, 1.0] {
        let est = seminorm(&two, eps, SeminormGrid::default_for(&two)).map_err(|e| e.to_string())?;
        let want = 2f64.powf(-eps);
        check(est.lower == est.upper && (est.upper - want).abs() <= 1e-15, || {
            format!("P_{eps}(2^-s) bracket [{}, {}] vs {want}", est.lower, est.upper)
        })?;
    }
    let f = &DirichletPolynomial::one() - &two;
    let est = seminorm(&f, 0.0, SeminormGrid::default_for(&f)).map_err(|e| e.to_string())?;
    check((est.lower - 2.0).abs() <= 1e-3, || format!("P_0(1 - 2^-s) lower = {}", est.lower))?;
    Ok(format!("P_0(1 - 2^-s) lower = {:.8}", est.lower))
}

fn c12_spectral_gap_oracle() -> Outcome {
    const N: usize = 1_000_000;
    let logs: Vec<f64> = (1..=N).map(|n| (n as f64).ln()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let lambda = Complex64::new(rng.gen_range(-13.5..2.0), rng.gen_range(-1.0..1.0));
        let brute = logs.iter().fold(lambda.norm(), |acc, l| acc.min((lambda + l).norm()));
        let fast = spectral_gap(lambda);
        let diff = (brute - fast).abs();
        worst = worst.max(diff);
        check(diff <= 1e-12, || format!("λ = {lambda}: window {fast} vs brute {brute}"))?;
    }
    Ok(format!("100 points against n <= 1e6, worst difference {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "inverse identities", c1_inverse_identities, Some(1.0)),
        (2, "point spectrum", c2_point_spectrum, Some(1.0)),
        (3, "Cesaro growth", c3_cesaro_growth, None),
        (4, "resolvent round trip", c4_resolvent_round_trip, None),
        (5, "bounded variation", c5_bounded_variation, None),
        (6, "reciprocal spectrum", c6_reciprocal_spectrum, None),
        (7, "Volterra identity", c7_volterra, None),
        (8, "convolution vs product", c8_convolution, None),
        (9, "abscissa corpus", c9_abscissa_corpus, Some(5.0)),
        (10, "evaluation oracle", c10_evaluation_oracle, Some(1.0)),
        (11, "seminorm sanity", c11_seminorm_sanity, None),
        (12, "spectral gap oracle", c12_spectral_gap_oracle, None),
    ];
    let mut failures = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, limit) {
            (Ok(msg), Some(l)) if secs > l => Err(format!("{msg}; took {secs:.2} s, limit {l} s")),
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("acceptance {id:>2} {name:<24} PASS ({secs:.3} s) {msg}"),
            Err(msg) => {
                failures += 1;
                println!("acceptance {id:>2} {name:<24} FAIL ({secs:.3} s) {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

//! Spectrum and resolvent of `D` on the full space and on the subspace `a_1 = 0`.
//!
//! `D` is diagonal in the monomial basis with eigenvalues `-log n`, so the resolvent of
//! `λI - D` is the multiplier `1/(λ + log n)` (plus `b_1/λ` on the full space). Everything
//! here reduces to the distance from `λ` to `{-log n : n ≥ 2}`, which is computed from
//! the two integers around `exp(-Re λ)` because `n ↦ |log n + λ|` is unimodal.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::DirichletPolynomial;

/// Absolute tolerance for `λ = -log n`.
pub const SPECTRUM_TOL: f64 = 1e-12;
/// Points closer than this to the spectrum carry a near-spectrum warning.
pub const NEAR_SPECTRUM_TOL: f64 = 1e-6;

/// Which space `D` acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// All series.
    Full,
    /// Series with `a_1 = 0`.
    ZeroSubspace,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Full => "full",
            Space::ZeroSubspace => "zero_subspace",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    /// `λ = -log n`; the eigenvector is `n^{-s}`.
    Eigenvalue { n: u64 },
    /// `λ = 0` on the full space: constants span the kernel and `D` is not onto.
    EigenvalueConstant,
    /// `λI - D` is invertible; `gap` bounds the resolvent symbol by `1/gap`.
    ResolventPoint { gap: f64 },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Eigenvalue { n } => write!(f, "eigenvalue -log {n}"),
            Verdict::EigenvalueConstant => f.write_str("eigenvalue 0 with constant eigenvector"),
            Verdict::ResolventPoint { gap } => write!(f, "resolvent point, gap {gap}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumClassification {
    pub lambda: Complex64,
    pub space: Space,
    pub verdict: Verdict,
    /// Set for resolvent points within [`NEAR_SPECTRUM_TOL`] of the spectrum.
    pub near_spectrum: bool,
}

impl SpectrumClassification {
    pub fn is_resolvent_point(&self) -> bool {
        matches!(self.verdict, Verdict::ResolventPoint { .. })
    }

    /// The eigenvector, when `λ` is an eigenvalue.
    pub fn eigenvector(&self) -> Option<DirichletPolynomial> {
        match self.verdict {
            Verdict::Eigenvalue { n } => DirichletPolynomial::monomial(n).ok(),
            Verdict::EigenvalueConstant => Some(DirichletPolynomial::one()),
            Verdict::ResolventPoint { .. } => None,
        }
    }
}

/// Integers `n ≥ 2` next to the minimizer of a unimodal function of `log n` whose
/// minimum sits at `log n = x`.
fn candidates_around_log(x: f64) -> [f64; 2] {
    if x <= std::f64::consts::LN_2 {
        return [2.0, 2.0];
    }
    let n_star = x.exp();
    [n_star.floor().max(2.0), n_star.ceil().max(2.0)]
}

/// `(inf_{n≥2} |log n + λ|, argmin n)`.
fn log_distance(lambda: Complex64) -> (f64, f64) {
    let x = -lambda.re;
    if x.exp().is_infinite() {
        // ln n is dense at this scale
        return (lambda.im.abs(), f64::INFINITY);
    }
    candidates_around_log(x)
        .into_iter()
        .map(|n| ((lambda + n.ln()).norm(), n))
        .fold((f64::INFINITY, 2.0), |best, c| if c.0 < best.0 { c } else { best })
}

/// `μ = min(|λ|, inf_{n≥2} |log n + λ|)`; zero exactly on `{0} ∪ {-log n}`.
pub fn spectral_gap(lambda: Complex64) -> f64 {
    lambda.norm().min(log_distance(lambda).0)
}

/// Classifies `λ` for `D` on the given space.
///
/// On the subspace `a_1 = 0`, `λ = 0` is a resolvent point (the inverse is `J`) whose gap
/// is `log 2`, the distance from 0 to the eigenvalues. Other resolvent points report the
/// gap `min(|λ|, inf |log n + λ|)` on both spaces.
pub fn classify_point(lambda: Complex64, space: Space) -> SpectrumClassification {
    let make = |verdict, near_spectrum| SpectrumClassification { lambda, space, verdict, near_spectrum };
    if lambda.norm() <= SPECTRUM_TOL {
        return match space {
            Space::Full => make(Verdict::EigenvalueConstant, false),
            Space::ZeroSubspace => make(Verdict::ResolventPoint { gap: log_distance(lambda).0 }, false),
        };
    }
    let (dist, n) = log_distance(lambda);
    if dist <= SPECTRUM_TOL && n.is_finite() {
        return make(Verdict::Eigenvalue { n: n as u64 }, false);
    }
    let gap = lambda.norm().min(dist);
    make(Verdict::ResolventPoint { gap }, gap <= NEAR_SPECTRUM_TOL)
}

/// `(λI - D) f`, coefficient-wise `(λ + log n) a_n`.
pub fn shifted_apply(lambda: Complex64, f: &DirichletPolynomial) -> DirichletPolynomial {
    f.map_coefficients(|n, a| (lambda + (n as f64).ln()) * a)
}

/// The resolvent `(λI - D)^{-1} f`: `b_n ↦ b_n / (log n + λ)` for `n ≥ 2` and, on the
/// full space, `b_1 ↦ b_1 / λ`.
pub fn resolvent_apply(lambda: Complex64, f: &DirichletPolynomial, space: Space) -> Result<DirichletPolynomial> {
    let class = classify_point(lambda, space);
    if !class.is_resolvent_point() {
        return Err(Error::Spectral(Box::new(class)));
    }
    if space == Space::ZeroSubspace && f.first_coefficient() != Complex64::new(0.0, 0.0) {
        return Err(Error::domain(format!(
            "resolvent on the zero subspace requires b_1 = 0, got b_1 = {}",
            f.first_coefficient()
        )));
    }
    Ok(f.map_coefficients(|n, b| {
        if n == 1 {
            b / lambda
        } else {
            b / ((n as f64).ln() + lambda)
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BvVerdict {
    Bounded,
    Violated,
}

impl fmt::Display for BvVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BvVerdict::Bounded => "bounded",
            BvVerdict::Violated => "violated",
        })
    }
}

/// Result of [`bv_check`] for `γ_n = 1 / ((log n + λ) n^δ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BvReport {
    pub lambda: Complex64,
    pub delta: f64,
    pub n_max: u64,
    pub gap: f64,
    /// `V_k = Σ_{n=2}^k |γ_n - γ_{n+1}|` for `k = 2..=N`.
    pub partial_sums: Vec<f64>,
    /// Smallest `C` with `|γ_n - γ_{n+1}| ≤ C / (μ² n^{1+δ/2})` for all `2 ≤ n ≤ N`.
    pub fitted_c: f64,
    /// Same fit restricted to `n ≤ N/2`.
    pub fitted_c_half: f64,
    /// `V_N` divided by the majorant sum `Σ_{n=2}^N C / (μ² n^{1+δ/2})`; at most 1.
    pub majorant_ratio: f64,
    /// `V_N - V_{N/2}`.
    pub late_variation: f64,
    /// Integral bound on `Σ_{n > N/2} C / (μ² n^{1+δ/2})`.
    pub tail_majorant: f64,
    pub verdict: BvVerdict,
}

impl BvReport {
    pub fn total_variation(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    /// `|C_N - C_{N/2}| / C_N`.
    pub fn fit_drift(&self) -> f64 {
        (self.fitted_c - self.fitted_c_half).abs() / self.fitted_c
    }
}

/// Relative drift of the fitted constant allowed for a `bounded` verdict.
pub const BV_STABILITY: f64 = 0.01;

/// Checks the bounded variation `Σ |γ_n - γ_{n+1}| < ∞` of the resolvent weights
/// `γ_n = 1 / ((log n + λ) n^δ)` against the majorant `C / (μ² n^{1+δ/2})`.
pub fn bv_check(lambda: Complex64, delta: f64, n_max: u64) -> Result<BvReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if n_max < 1000 {
        return Err(Error::domain(format!("N must be >= 1000, got {n_max}")));
    }
    let class = classify_point(lambda, Space::Full);
    let gap = spectral_gap(lambda);
    if gap == 0.0 || !class.is_resolvent_point() {
        return Err(Error::Spectral(Box::new(class)));
    }
    let weight = |n: u64| {
        let x = n as f64;
        1.0 / ((x.ln() + lambda) * x.powf(delta))
    };
    let p = 1.0 + delta / 2.0;
    let half = n_max / 2;
    let mut partial_sums = Vec::with_capacity((n_max - 1) as usize);
    let mut v = 0.0;
    let mut fitted_c: f64 = 0.0;
    let mut fitted_c_half: f64 = 0.0;
    let mut v_half = 0.0;
    let mut majorant_unit = 0.0;
    let mut current = weight(2);
    for n in 2..=n_max {
        let next = weight(n + 1);
        let d = (current - next).norm();
        v += d;
        partial_sums.push(v);
        let x = n as f64;
        let c = d * gap * gap * x.powf(p);
        fitted_c = fitted_c.max(c);
        if n <= half {
            fitted_c_half = fitted_c_half.max(c);
            v_half = v;
        }
        majorant_unit += x.powf(-p);
        current = next;
    }
    let scale = fitted_c / (gap * gap);
    let tail_majorant = scale * (half as f64).powf(1.0 - p) / (p - 1.0);
    let drift = (fitted_c - fitted_c_half).abs() / fitted_c;
    Ok(BvReport {
        lambda,
        delta,
        n_max,
        gap,
        partial_sums,
        fitted_c,
        fitted_c_half,
        majorant_ratio: v / (scale * majorant_unit),
        late_variation: v - v_half,
        tail_majorant,
        verdict: if drift < BV_STABILITY {
            BvVerdict::Bounded
        } else {
            BvVerdict::Violated
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReciprocalReport {
    pub mu: Complex64,
    /// `μ ∈ ρ(D)` on the zero subspace.
    pub in_rho_d: bool,
    /// `1/μ ∈ ρ(J)` on the zero subspace.
    pub in_rho_j_reciprocal: bool,
    pub consistent: bool,
    /// `inf_{n≥2} |-1/log n - 1/μ|`.
    pub j_gap: f64,
}

/// `inf_{n≥2} |1/log n + ν|`. As a function of `u = 1/log n ∈ (0, 1/log 2]` this is
/// unimodal with minimum at `u = -Re ν`, and it tends to `|ν|` as `n → ∞`.
fn reciprocal_log_distance(nu: Complex64) -> f64 {
    let at = |n: f64| (nu + 1.0 / n.ln()).norm();
    let u_star = -nu.re;
    if u_star <= 0.0 {
        return nu.norm().min(at(2.0));
    }
    let x = 1.0 / u_star;
    if x.exp().is_infinite() {
        return nu.im.abs();
    }
    candidates_around_log(x).into_iter().map(at).fold(nu.norm(), f64::min)
}

/// Compares `μ ∈ ρ(D)` with `1/μ ∈ ρ(J)` on the zero subspace; the two must agree.
pub fn reciprocal_spectrum_check(mu: Complex64) -> Result<ReciprocalReport> {
    if mu.norm() == 0.0 {
        return Err(Error::domain("mu must be non-zero"));
    }
    let in_rho_d = classify_point(mu, Space::ZeroSubspace).is_resolvent_point();
    let nu = mu.inv();
    let j_gap = reciprocal_log_distance(nu);
    let in_rho_j_reciprocal = j_gap > SPECTRUM_TOL * nu.norm();
    Ok(ReciprocalReport {
        mu,
        in_rho_d,
        in_rho_j_reciprocal,
        consistent: in_rho_d == in_rho_j_reciprocal,
        j_gap,
    })
}

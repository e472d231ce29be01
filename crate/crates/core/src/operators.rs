//! Diagonal multiplier operators `Σ a_n n^{-s} ↦ Σ γ_n a_n n^{-s}`, with differentiation
//! `D` (`γ_n = -log n`) and its inverse `J` (`γ_n = -1/log n`, `n ≥ 2`) as the main
//! instances.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::DirichletPolynomial;

type Symbol = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;

/// A diagonal operator given by its symbol `n ↦ γ_n`.
#[derive(Clone)]
pub struct Multiplier {
    symbol: Symbol,
    label: String,
    /// First index where the symbol is defined (1 or 2).
    start: u64,
    /// Set when the operator only acts on series with `a_1 = 0`.
    requires_zero_constant: bool,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("label", &self.label)
            .field("start", &self.start)
            .field("requires_zero_constant", &self.requires_zero_constant)
            .finish()
    }
}

impl Multiplier {
    /// Multiplier defined on `n ≥ 1`.
    pub fn new<F>(label: impl Into<String>, symbol: F) -> Self
    where
        F: Fn(u64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            symbol: Arc::new(symbol),
            label: label.into(),
            start: 1,
            requires_zero_constant: false,
        }
    }

    /// Multiplier defined on `n ≥ 2`; it only acts on series with vanishing constant term.
    pub fn on_zero_subspace<F>(label: impl Into<String>, symbol: F) -> Self
    where
        F: Fn(u64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            symbol: Arc::new(symbol),
            label: label.into(),
            start: 2,
            requires_zero_constant: true,
        }
    }

    pub fn identity() -> Self {
        Self::new("I", |_| Complex64::new(1.0, 0.0))
    }

    /// `D`, with `γ_1 = 0` so that it is total on the full space.
    pub fn differentiation() -> Self {
        Self::new("D", |n| Complex64::new(-(n as f64).ln(), 0.0))
    }

    /// `J`, the inverse of `D` on the subspace `a_1 = 0`.
    pub fn integration() -> Self {
        Self::on_zero_subspace("J", |n| Complex64::new(-1.0 / (n as f64).ln(), 0.0))
    }

    /// `λI - D`, i.e. `γ_n = λ + log n`.
    pub fn shifted_differentiation(lambda: Complex64) -> Self {
        Self::new(format!("({lambda})I - D"), move |n| lambda + (n as f64).ln())
    }

    /// `γ_n = n^p` (real `p`), handy for growth checks.
    pub fn power(p: f64) -> Self {
        Self::new(format!("n^{p}"), move |n| Complex64::new((n as f64).powf(p), 0.0))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn requires_zero_constant(&self) -> bool {
        self.requires_zero_constant
    }

    /// `γ_n`. Indices below [`start`](Self::start) are outside the domain and return 0.
    pub fn symbol(&self, n: u64) -> Complex64 {
        if n < self.start {
            return Complex64::new(0.0, 0.0);
        }
        (self.symbol)(n)
    }

    pub(crate) fn check_domain(&self, f: &DirichletPolynomial) -> Result<()> {
        if self.requires_zero_constant && f.first_coefficient() != Complex64::new(0.0, 0.0) {
            return Err(Error::domain(format!(
                "operator {} requires a_1 = 0, got a_1 = {}",
                self.label,
                f.first_coefficient()
            )));
        }
        Ok(())
    }

    /// `Σ a_n n^{-s} ↦ Σ γ_n a_n n^{-s}`.
    pub fn apply(&self, f: &DirichletPolynomial) -> Result<DirichletPolynomial> {
        self.check_domain(f)?;
        Ok(f.map_coefficients(|n, a| self.symbol(n) * a))
    }

    /// Symbol-wise product; the domain is the intersection of both domains.
    pub fn compose(&self, other: &Multiplier) -> Multiplier {
        let (a, b) = (self.clone(), other.clone());
        Multiplier {
            label: format!("{}∘{}", self.label, other.label),
            start: self.start.max(other.start),
            requires_zero_constant: self.requires_zero_constant || other.requires_zero_constant,
            symbol: Arc::new(move |n| a.symbol(n) * b.symbol(n)),
        }
    }
}

/// `D(f) = f' = -Σ a_n log n · n^{-s}`. The image always has `a_1 = 0`.
pub fn differentiate(f: &DirichletPolynomial) -> DirichletPolynomial {
    f.map_coefficients(|n, a| a * -(n as f64).ln())
}

/// `J(f) = -Σ_{n≥2} a_n / (log n · n^s)`; requires `a_1 = 0`.
pub fn integrate(f: &DirichletPolynomial) -> Result<DirichletPolynomial> {
    Multiplier::integration().apply(f)
}

/// Outcome of [`check_growth`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    Admissible,
    Inadmissible,
    Inconclusive,
}

impl fmt::Display for GrowthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthVerdict::Admissible => "admissible",
            GrowthVerdict::Inadmissible => "inadmissible",
            GrowthVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// One sample of the growth ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthSample {
    pub n: u64,
    /// `log|γ_n| / log n`.
    pub ratio: f64,
    /// Slope of `log|γ|` against `log n` between this sample and the previous one.
    pub local_slope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub verdict: GrowthVerdict,
    pub samples: Vec<GrowthSample>,
}

/// Threshold separating "near zero" from "bounded away from zero" growth exponents.
pub const GROWTH_THRESHOLD: f64 = 0.05;

/// Checks `lim log|γ_n| / log n = 0` on a geometric sample of `n` up to `n_max`.
///
/// The limit equals the limit of the local slope `Δ log|γ| / Δ log n`, which converges
/// much faster for symbols like `log n`, so the verdict reads the slopes:
/// admissible when the last slope is below the threshold and the slopes are
/// non-increasing in size over the tail; inadmissible when both the ratio and the slope
/// stay above the threshold on the tail and the slope has stopped falling.
pub fn check_growth(m: &Multiplier, n_max: u64) -> Result<GrowthReport> {
    if n_max < 1000 {
        return Err(Error::domain(format!("n_max must be >= 1000, got {n_max}")));
    }
    let first = m.start().max(2);
    let mut points: Vec<u64> = Vec::new();
    let mut x = first as f64;
    let top = n_max as f64;
    while x < top {
        let n = x.round() as u64;
        if points.last() != Some(&n) {
            points.push(n);
        }
        x *= 10f64.powf(0.25);
    }
    if points.last() != Some(&n_max) {
        points.push(n_max);
    }

    let mut samples = Vec::with_capacity(points.len());
    let mut prev: Option<(f64, f64)> = None;
    for &n in &points {
        let g = m.symbol(n);
        if g.norm() == 0.0 {
            return Err(Error::domain(format!(
                "symbol of {} vanishes at n = {n}; growth needs non-zero γ_n",
                m.label()
            )));
        }
        let log_n = (n as f64).ln();
        let log_g = g.norm().ln();
        let local_slope = match prev {
            Some((pl, pg)) => (log_g - pg) / (log_n - pl),
            None => log_g / log_n,
        };
        samples.push(GrowthSample { n, ratio: log_g / log_n, local_slope });
        prev = Some((log_n, log_g));
    }

    let tail = &samples[samples.len() - (samples.len() / 3).max(2)..];
    let slopes: Vec<f64> = tail.iter().map(|s| s.local_slope.abs()).collect();
    let last = *slopes.last().expect("tail is non-empty");
    let non_increasing = slopes.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let settled = slopes[0] - last <= 0.1 * slopes[0];
    let verdict = if last < GROWTH_THRESHOLD && non_increasing {
        GrowthVerdict::Admissible
    } else if tail
        .iter()
        .all(|s| s.ratio.abs() >= GROWTH_THRESHOLD && s.local_slope.abs() >= GROWTH_THRESHOLD)
        && settled
    {
        GrowthVerdict::Inadmissible
    } else {
        GrowthVerdict::Inconclusive
    };
    Ok(GrowthReport { verdict, samples })
}

//! Estimates of the abscissas of convergence (`σ_c`) and absolute convergence (`σ_a`)
//! from the first `N` coefficients, and a bracket `[σ_c, σ_a]` for the abscissa of
//! uniform convergence `σ_u`, which has no direct estimator here.
//!
//! For `σ ≥ 0` the abscissa is the growth exponent of the partial sums
//! `A_M = Σ_{n≤M} a_n`. The exponent is read off as `log_2` of the ratio between the
//! maxima of `|A_M|` over two consecutive dyadic blocks, sampled at several `M` in the
//! window `[N/2, N]`. The ratio form cancels constant factors (`A_M ~ M²/2` gives 2, not
//! `2 - log 2 / log M`). When the exponent is below [`DIVERGENCE_MARGIN`], as happens for
//! bounded or slowly growing partial sums, the coefficients are multiplied by
//! `n^k` for `k = 1, 2, ...`, which shifts every abscissa by exactly `k`, until the
//! partial sums clearly diverge; the estimate is then corrected by `-k`.

use crate::error::{Error, Result};
use crate::evaluation::{seminorm, SeminormGrid};
use crate::series::CoefficientRule;

/// Growth exponent below which the estimator shifts the coefficients.
pub const DIVERGENCE_MARGIN: f64 = 0.5;
/// Largest shift tried before reporting `-∞`.
pub const MAX_SHIFT: u32 = 8;
/// Floor of the reported uncertainty radius.
pub const MIN_UNCERTAINTY: f64 = 0.01;

const WINDOW_SAMPLES: u32 = 9;

/// One abscissa estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    /// `-∞` when all partial sums vanish on the window or no shift up to
    /// [`MAX_SHIFT`] produced divergence.
    pub value: f64,
    /// Spread of the window samples, floored at [`MIN_UNCERTAINTY`]. Heuristic.
    pub uncertainty: f64,
    /// Number of `n^1` factors applied before estimating.
    pub shift: u32,
}

impl Estimate {
    fn neg_infinity(shift: u32) -> Self {
        Self { value: f64::NEG_INFINITY, uncertainty: MIN_UNCERTAINTY, shift }
    }
}

/// Sup of `|Σ_{n≤N} a_n n^{-ε-it}|` on a t-grid, reported as evidence of boundedness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundednessProbe {
    pub epsilon: f64,
    pub sup_abs: f64,
    /// Same sup with only the first `N/2` coefficients.
    pub sup_abs_half: f64,
}

impl BoundednessProbe {
    /// Doubling the truncation moved the sup by less than 25%.
    pub fn looks_bounded(&self) -> bool {
        self.sup_abs <= 1.25 * self.sup_abs_half
    }
}

pub const SIGMA_U_NOTE: &str = "sigma_u is not estimated directly: the bracket [sigma_c, sigma_a] \
     always contains it, and the probes are boundedness evidence only";

#[derive(Clone, Debug, PartialEq)]
pub struct AbscissaEstimate {
    pub sigma_c: Estimate,
    pub sigma_a: Estimate,
    /// `[σ_c estimate, max(σ_c, σ_a) estimate]`.
    pub sigma_u_bracket: (f64, f64),
    pub n_max: u64,
    pub probes: Vec<BoundednessProbe>,
}

/// Growth exponent of `|A_M|` from dyadic block maxima at sampled `M ∈ [N/2, N]`.
/// `None` when the partial sums vanish on `[N/4, N]`.
fn growth_exponent(abs_partial: &[f64]) -> Option<(f64, f64)> {
    let n = abs_partial.len();
    // abs_partial[i] = |A_{i+1}|
    let block_max = |lo: usize, hi: usize| abs_partial[lo - 1..hi].iter().copied().fold(0.0, f64::max);
    if block_max(n / 4 + 1, n) == 0.0 {
        return None;
    }
    let mut values = Vec::with_capacity(WINDOW_SAMPLES as usize);
    for j in 0..WINDOW_SAMPLES {
        let frac = 2f64.powf(f64::from(j) / f64::from(WINDOW_SAMPLES - 1));
        let m = (((n as f64 / 2.0) * frac) as usize / 4 * 4).clamp(4, n);
        let upper = block_max(m / 2 + 1, m);
        let lower = block_max(m / 4 + 1, m / 2);
        let v = if upper == 0.0 {
            f64::NEG_INFINITY
        } else if lower == 0.0 {
            f64::INFINITY
        } else {
            (upper / lower).log2()
        };
        values.push(v);
    }
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if hi.is_finite() && lo.is_finite() { hi - lo } else { f64::INFINITY };
    Some((hi, spread.max(MIN_UNCERTAINTY)))
}

fn estimate_with_shift(rule: &CoefficientRule, n_max: u64, absolute: bool) -> Result<Estimate> {
    if n_max < 100 {
        return Err(Error::domain(format!("truncation N must be >= 100, got {n_max}")));
    }
    let coeffs = rule.coefficients(1, n_max);
    for k in 0..=MAX_SHIFT {
        let mut acc = crate::evaluation::CompensatedSum::default();
        let abs_partial: Vec<f64> = coeffs
            .iter()
            .zip(1u64..)
            .map(|(a, n)| {
                let a = if absolute { num_complex::Complex64::new(a.norm(), 0.0) } else { *a };
                acc.add(a * (n as f64).powi(k as i32));
                acc.value().norm()
            })
            .collect();
        let Some((growth, radius)) = growth_exponent(&abs_partial) else {
            return Ok(Estimate::neg_infinity(k));
        };
        if growth >= DIVERGENCE_MARGIN {
            return Ok(Estimate {
                value: growth - f64::from(k),
                uncertainty: radius,
                shift: k,
            });
        }
    }
    Ok(Estimate::neg_infinity(MAX_SHIFT))
}

/// Abscissa of convergence from the partial sums of `a_n`, `n ≤ N`.
pub fn estimate_sigma_c(rule: &CoefficientRule, n_max: u64) -> Result<Estimate> {
    estimate_with_shift(rule, n_max, false)
}

/// Abscissa of absolute convergence from the partial sums of `|a_n|`, `n ≤ N`.
pub fn estimate_sigma_a(rule: &CoefficientRule, n_max: u64) -> Result<Estimate> {
    estimate_with_shift(rule, n_max, true)
}

/// Grid for the boundedness probes: `t ∈ [0, t_max]` (or `[-t_max, t_max]` for complex
/// coefficients) with step `step`.
pub fn default_probe_grid() -> SeminormGrid {
    SeminormGrid { t_max: 50.0, step: 1.0 }
}

/// Brackets `σ_u` between the `σ_c` and `σ_a` estimates and probes boundedness of the
/// truncation on the lines `Re s = ε` for each probe `ε`.
pub fn bracket_sigma_u(
    rule: &CoefficientRule,
    n_max: u64,
    probe_eps: &[f64],
    grid: SeminormGrid,
) -> Result<AbscissaEstimate> {
    if probe_eps.is_empty() {
        return Err(Error::domain("at least one probe epsilon is required"));
    }
    if let Some(bad) = probe_eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::domain(format!("probe epsilons must be positive, got {bad}")));
    }
    let sigma_c = estimate_sigma_c(rule, n_max)?;
    let sigma_a = estimate_sigma_a(rule, n_max)?;
    let full = rule.truncate(n_max)?;
    let half = rule.truncate(n_max / 2)?;
    let probes = probe_eps
        .iter()
        .map(|&eps| {
            Ok(BoundednessProbe {
                epsilon: eps,
                sup_abs: seminorm(&full, eps, grid)?.lower,
                sup_abs_half: seminorm(&half, eps, grid)?.lower,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AbscissaEstimate {
        sigma_c,
        sigma_a,
        sigma_u_bracket: (sigma_c.value, sigma_c.value.max(sigma_a.value)),
        n_max,
        probes,
    })
}

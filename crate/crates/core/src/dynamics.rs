//! Iterates `T^k`, Cesàro means `T_[k] = (1/k) Σ_{m=1}^k T^m` and orbit diagnostics for
//! diagonal multipliers.
//!
//! Power-bounded and mean-ergodic operators satisfy `(1/k) T^k f → 0` for every `f`, so a
//! single orbit along which `P_ε((1/k) T^k f)` is unbounded disproves both properties.
//! A decaying orbit is only evidence.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::Multiplier;
use crate::series::DirichletPolynomial;

fn check_power(k: u32) -> Result<i32> {
    if k == 0 {
        return Err(Error::domain("iteration count k must be >= 1"));
    }
    i32::try_from(k).map_err(|_| Error::domain(format!("iteration count {k} is too large")))
}

/// `T^k f`, with each coefficient multiplied by `γ_n^k` in one step.
pub fn power_apply(m: &Multiplier, k: u32, f: &DirichletPolynomial) -> Result<DirichletPolynomial> {
    let k = check_power(k)?;
    m.check_domain(f)?;
    Ok(f.map_coefficients(|n, a| m.symbol(n).powi(k) * a))
}

/// `(1/k) Σ_{j=1}^k γ^j`, by the geometric closed form away from `γ = 1`.
fn cesaro_factor(gamma: Complex64, k: u32) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let kf = f64::from(k);
    if gamma == one {
        return one;
    }
    if (gamma - one).norm() < 1e-4 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = one;
        for _ in 0..k {
            p *= gamma;
            acc += p;
        }
        return acc / kf;
    }
    gamma * (one - gamma.powi(k as i32)) / ((one - gamma) * kf)
}

/// The Cesàro mean `T_[k] f`.
pub fn cesaro_mean(m: &Multiplier, k: u32, f: &DirichletPolynomial) -> Result<DirichletPolynomial> {
    check_power(k)?;
    m.check_domain(f)?;
    Ok(f.map_coefficients(|n, a| cesaro_factor(m.symbol(n), k) * a))
}

/// `log` of `Σ |γ_n|^k |a_n| n^{-ε} / k`, evaluated in log space.
pub fn log_normalized_power_norm(m: &Multiplier, f: &DirichletPolynomial, epsilon: f64, k: u32) -> Result<f64> {
    check_power(k)?;
    m.check_domain(f)?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::domain(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    let kf = f64::from(k);
    let logs: Vec<f64> = f
        .terms()
        .map(|(n, a)| kf * m.symbol(n).norm().ln() + a.norm().ln() - epsilon * (n as f64).ln())
        .filter(|l| *l > f64::NEG_INFINITY)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    Ok(top + sum.ln() - kf.ln())
}

/// `Σ |γ_n^k a_n| n^{-ε} / k`, the ℓ¹ bound on `P_ε((1/k) T^k f)`; exact for monomials.
pub fn normalized_power_norm(m: &Multiplier, f: &DirichletPolynomial, epsilon: f64, k: u32) -> Result<f64> {
    log_normalized_power_norm(m, f, epsilon, k).map(f64::exp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    /// Unbounded orbit: a witness against power boundedness and mean ergodicity.
    Diverges,
    /// Decays below `1e-6` of the first sample; evidence only.
    Converges,
    Inconclusive,
}

impl fmt::Display for OrbitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitVerdict::Diverges => "diverges",
            OrbitVerdict::Converges => "converges",
            OrbitVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsReport {
    /// `(k, P_ε-upper of (1/k) T^k f)` for `k = 1..=k_max`; may hold `inf` past overflow.
    pub samples: Vec<(u32, f64)>,
    /// Natural logs of the sample values, always finite or `-inf`.
    pub log_samples: Vec<f64>,
    pub verdict: OrbitVerdict,
    /// Least-squares slope of `log(k · value)` against `k` over the second half of the
    /// samples; approaches `log max |γ_n|` over the support of `f` from below.
    pub fitted_rate: f64,
}

pub const GROWTH_FACTOR: f64 = 1e3;
pub const DECAY_FACTOR: f64 = 1e-6;

/// Samples `P_ε((1/k) T^k f)` (ℓ¹ bound) for `k = 1..=k_max` and classifies the orbit.
///
/// `diverges` needs the last three samples strictly increasing and either growth above
/// `10^3` times the first sample or a positive fitted rate. `k ↦ log Σ c_n |γ_n|^k` is
/// convex, so any positive tail slope certifies `max |γ_n| > 1` and hence an unbounded
/// orbit. `converges` needs the last sample below `10^{-6}` times the first.
pub fn ergodicity_diagnostic(
    m: &Multiplier,
    f: &DirichletPolynomial,
    epsilon: f64,
    k_max: u32,
) -> Result<DynamicsReport> {
    if k_max < 10 {
        return Err(Error::domain(format!("k_max must be >= 10, got {k_max}")));
    }
    let log_samples = (1..=k_max)
        .map(|k| log_normalized_power_norm(m, f, epsilon, k))
        .collect::<Result<Vec<f64>>>()?;
    let samples = (1..=k_max).zip(log_samples.iter().map(|l| l.exp())).collect();

    let start = (k_max / 2) as usize;
    let pts: Vec<(f64, f64)> = log_samples[start..]
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let k = (start + i + 1) as f64;
            (k, l + k.ln())
        })
        .collect();
    let fitted_rate = least_squares_slope(&pts);

    let n = log_samples.len();
    let first = log_samples[0];
    let last = log_samples[n - 1];
    let rising = log_samples[n - 3] < log_samples[n - 2] && log_samples[n - 2] < last;
    let verdict = if first == f64::NEG_INFINITY {
        OrbitVerdict::Inconclusive
    } else if rising && (last > first + GROWTH_FACTOR.ln() || fitted_rate > 1e-9) {
        OrbitVerdict::Diverges
    } else if last < first + DECAY_FACTOR.ln() {
        OrbitVerdict::Converges
    } else {
        OrbitVerdict::Inconclusive
    };
    Ok(DynamicsReport { samples, log_samples, verdict, fitted_rate })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let finite: Vec<_> = pts.iter().filter(|(_, y)| y.is_finite()).collect();
    let n = finite.len() as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    let mx = finite.iter().map(|p| p.0).sum::<f64>() / n;
    let my = finite.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = finite.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = finite.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

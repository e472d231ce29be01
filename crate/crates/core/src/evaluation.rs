//! Evaluation of polynomials and truncated rules with their tail bounds, plus bracketed
//! estimates of the seminorms `P_ε(f) = sup_{Re s > ε} |f(s)|`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{CoefficientRule, DirichletPolynomial, HalfPlanePoint, RuleKind};

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: Complex64) {
        self.sum.re = neumaier_step(self.sum.re, x.re, &mut self.comp.re);
        if x.im != 0.0 {
            self.sum.im = neumaier_step(self.sum.im, x.im, &mut self.comp.im);
        }
    }

    pub(crate) fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier_step(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// `n^{-s} = exp(-s log n)`.
pub fn dirichlet_term(n: u64, s: Complex64) -> Complex64 {
    if n == 1 {
        return Complex64::new(1.0, 0.0);
    }
    (-s * (n as f64).ln()).exp()
}

/// The finite sum `Σ a_n n^{-s}`.
pub fn evaluate(f: &DirichletPolynomial, s: HalfPlanePoint) -> Complex64 {
    let s = s.as_complex();
    f.terms().map(|(n, a)| a * dirichlet_term(n, s)).sum()
}

const CHUNK: u64 = 1 << 16;
const BLOCK: u64 = 256;

/// `Σ_{n ≤ N} a_n n^{-s}` for a rule, streamed from the top index down (in sieved blocks
/// for the Möbius rule) so that the truncation never has to be materialized. Agrees with
/// `evaluate(&rule.truncate(N)?, s)` up to roundoff.
pub fn evaluate_rule(rule: &CoefficientRule, n_max: u64, s: HalfPlanePoint) -> Complex64 {
    let term = |a: Complex64, n: u64| {
        if s.t != 0.0 {
            a * dirichlet_term(n, s.as_complex())
        } else if s.sigma == 0.0 {
            a
        } else {
            a * (-s.sigma * (n as f64).ln()).exp()
        }
    };
    let mut acc = CompensatedSum::default();
    if !matches!(rule.kind(), RuleKind::Moebius) {
        // Short blocks are summed plainly over four lanes, block sums are compensated.
        let mut hi = n_max;
        while hi >= 1 {
            let lo = hi.saturating_sub(BLOCK - 1).max(1);
            let mut lanes = [Complex64::new(0.0, 0.0); 4];
            for (i, n) in (lo..=hi).rev().enumerate() {
                lanes[i & 3] += term(rule.coefficient(n), n);
            }
            acc.add((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
            hi = lo - 1;
        }
        return acc.value();
    }
    let mut hi = n_max;
    while hi >= 1 {
        let lo = hi.saturating_sub(CHUNK - 1).max(1);
        let block = rule.coefficients(lo, hi);
        for (i, a) in block.into_iter().enumerate().rev() {
            acc.add(term(a, lo + i as u64));
        }
        hi = lo - 1;
    }
    acc.value()
}

/// `Σ_{n=1}^N x_n y_n` computed through Abel's rearrangement
/// `X_N y_N - Σ_{n=1}^{N-1} X_n (y_{n+1} - y_n)` with `X_n = x_1 + ... + x_n`.
pub fn summation_by_parts(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "sequence lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::domain("sequences must be non-empty"));
    }
    let mut partial = CompensatedSum::default();
    let mut acc = CompensatedSum::default();
    for n in 0..x.len() - 1 {
        partial.add(x[n]);
        acc.add(-(partial.value() * (y[n + 1] - y[n])));
    }
    partial.add(x[x.len() - 1]);
    acc.add(partial.value() * y[y.len() - 1]);
    Ok(acc.value())
}

/// How a [`TailBound`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailRoute {
    /// The weight vanishes on the checked window.
    ZeroWeight,
    /// Absolute majorant `Σ |a_n y_n| n^{-ε}`: the window sum plus a power-law
    /// extrapolation of the envelope (needs decay faster than `1/n`). Valid on all of `C_ε`.
    Absolute,
    /// Abel estimate from bounded partial sums of `a_n` times the monotone factor
    /// `y_n n^{-σ}`. Valid for real `s = σ ≥ ε`; the partial sums of `a_n n^{-it}` for
    /// `t ≠ 0` are not controlled.
    Abel,
}

/// Bound for the discarded tail `|Σ_{n > M} a_n y_n n^{-s}|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub m: u64,
    pub bound: f64,
    pub route: TailRoute,
}

/// Length of the window `[M+1, M+L]` scanned by [`tail_bound_monotone`].
pub const TAIL_WINDOW: u64 = 1 << 16;

/// Uniform bound on the tail `Σ_{n > M} a_n y_n n^{-s}` for `Re s ≥ ε`, where `a_n`
/// comes from `rule` and `y_n` is a real weight that is monotone for `n > M`.
///
/// The sup of the partial sums `|Σ_{n=M+1}^{M+k} a_n|` and the weight's monotonicity
/// are checked on a window of [`TAIL_WINDOW`] indices. Returns a diagnostic error if the
/// weight is not monotone there, or if neither an absolutely convergent envelope nor
/// bounded partial sums can be detected.
pub fn tail_bound_monotone<W>(rule: &CoefficientRule, weight: W, m: u64, epsilon: f64) -> Result<TailBound>
where
    W: Fn(u64) -> f64,
{
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::domain(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    let len = TAIL_WINDOW as usize;
    let start = m + 1;
    let end = m + TAIL_WINDOW;
    let ys: Vec<f64> = (start..=end).map(&weight).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::diagnostic(format!("weight is not finite on [{start}, {end}]")));
    }
    let non_increasing = ys.windows(2).all(|w| w[1] <= w[0]);
    let non_decreasing = ys.windows(2).all(|w| w[1] >= w[0]);
    if !(non_increasing || non_decreasing) {
        return Err(Error::diagnostic(format!(
            "weight is not monotone on the checked window [{start}, {end}]"
        )));
    }
    if ys.iter().all(|&y| y == 0.0) {
        return Ok(TailBound { m, bound: 0.0, route: TailRoute::ZeroWeight });
    }

    let coeffs = rule.coefficients(start, end);
    let half = len / 2;
    let mid = start + half as u64;

    // absolute route
    let envelope: Vec<f64> = coeffs
        .iter()
        .zip(&ys)
        .zip(start..)
        .map(|((a, y), n)| a.norm() * y.abs() * (-epsilon * (n as f64).ln()).exp())
        .collect();
    let e_first = envelope[..half].iter().copied().fold(0.0, f64::max);
    let e_second = envelope[half..].iter().copied().fold(0.0, f64::max);
    if e_second == 0.0 {
        let bound = envelope.iter().sum();
        return Ok(TailBound { m, bound, route: TailRoute::Absolute });
    }
    let decay = (e_first / e_second).ln() / ((mid as f64) / (start as f64)).ln();
    if decay > 1.0 + 1e-6 {
        let window_sum: f64 = envelope.iter().rev().sum();
        // envelope beyond the window assumed to follow e_second (mid / n)^decay
        let n_end = end as f64;
        let rest = e_second * (mid as f64).powf(decay) * n_end.powf(1.0 - decay) / (decay - 1.0);
        return Ok(TailBound { m, bound: window_sum + rest, route: TailRoute::Absolute });
    }

    // Abel route
    let mut partial = CompensatedSum::default();
    let mut sup_first: f64 = 0.0;
    let mut sup_second: f64 = 0.0;
    for (k, a) in coeffs.iter().enumerate() {
        partial.add(*a);
        let v = partial.value().norm();
        if k < half {
            sup_first = sup_first.max(v);
        } else {
            sup_second = sup_second.max(v);
        }
    }
    if sup_second > sup_first * (1.0 + 1e-12) {
        return Err(Error::diagnostic(format!(
            "partial sums of the coefficients beyond {m} keep growing on the checked window \
             and their envelope decays too slowly for an absolute bound; no Cauchy bound available"
        )));
    }
    let sup_partial = sup_first.max(sup_second);
    let (y_first, y_last) = (ys[0], ys[len - 1]);
    let factor = if non_increasing && y_last >= 0.0 {
        y_first
    } else {
        2.0 * y_first.abs().max(y_last.abs()) + (y_first - y_last).abs()
    };
    let bound = sup_partial * (-epsilon * (start as f64).ln()).exp() * factor;
    Ok(TailBound { m, bound, route: TailRoute::Abel })
}

/// Smallest truncation index `M` (found by doubling, then bisection) whose tail bound is
/// at most `tolerance`.
pub fn select_truncation<W>(
    rule: &CoefficientRule,
    weight: W,
    epsilon: f64,
    tolerance: f64,
    max_index: u64,
) -> Result<TailBound>
where
    W: Fn(u64) -> f64,
{
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    let mut hi = 16u64;
    let mut best = tail_bound_monotone(rule, &weight, hi, epsilon)?;
    while best.bound > tolerance {
        if hi >= max_index {
            return Err(Error::diagnostic(format!(
                "no truncation up to {max_index} reaches tail bound {tolerance}"
            )));
        }
        hi = (hi * 2).min(max_index);
        best = tail_bound_monotone(rule, &weight, hi, epsilon)?;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let cand = tail_bound_monotone(rule, &weight, mid, epsilon)?;
        if cand.bound <= tolerance {
            hi = mid;
            best = cand;
        } else {
            lo = mid;
        }
    }
    Ok(best)
}

/// Sampling grid on the line `Re s = ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeminormGrid {
    /// Half-length `T` of the sampled t-range.
    pub t_max: f64,
    /// Step `h`.
    pub step: f64,
}

impl SeminormGrid {
    pub fn new(t_max: f64, step: f64) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::domain(format!("grid range T must be positive, got {t_max}")));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::domain(format!("grid step h must be positive, got {step}")));
        }
        Ok(Self { t_max, step })
    }

    /// `T = 2π/log 2 · max_index(f)` capped at 1000, `h = 0.01`.
    pub fn default_for(f: &DirichletPolynomial) -> Self {
        let scale = f.max_index().max(1) as f64;
        Self {
            t_max: (2.0 * PI / LN_2 * scale).min(1000.0),
            step: 1e-2,
        }
    }
}

/// Bracket `lower ≤ P_ε(f) ≤ upper`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeminormEstimate {
    pub epsilon: f64,
    /// Largest sampled `|f(ε + it)|`.
    pub lower: f64,
    /// `Σ |a_n| n^{-ε}`.
    pub upper: f64,
    /// Grid point where `lower` was attained.
    pub argmax_t: f64,
    pub grid: SeminormGrid,
}

impl SeminormEstimate {
    /// The bracket is tight when lower and upper agree to roundoff.
    pub fn is_exact(&self) -> bool {
        self.upper - self.lower <= 1e-12 * self.upper.max(1.0)
    }
}

/// `Σ |a_n| n^{-ε}`, the triangle-inequality bound for `P_ε(f)`.
pub fn l1_upper(f: &DirichletPolynomial, epsilon: f64) -> f64 {
    f.terms()
        .map(|(n, a)| a.norm() * dirichlet_term(n, Complex64::new(epsilon, 0.0)).re)
        .sum()
}

/// Estimates `P_ε(f)` on the boundary line `Re s = ε`.
///
/// Samples `t ∈ [0, T]` for real coefficients (where `|f(ε+it)| = |f(ε-it)|`) and
/// `t ∈ [-T, T]` otherwise.
pub fn seminorm(f: &DirichletPolynomial, epsilon: f64, grid: SeminormGrid) -> Result<SeminormEstimate> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::domain(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    let upper = l1_upper(f, epsilon);
    let terms: Vec<(f64, Complex64)> = f
        .terms()
        .map(|(n, a)| {
            let ln = (n as f64).ln();
            (ln, a * (-epsilon * ln).exp())
        })
        .collect();
    let steps = (grid.t_max / grid.step).floor() as i64;
    let first = if f.has_real_coefficients() { 0 } else { -steps };

    let mut lower: f64 = 0.0;
    let mut argmax_t = 0.0;
    for i in first..=steps {
        let t = i as f64 * grid.step;
        let value: Complex64 = terms
            .iter()
            .map(|&(ln, b)| b * Complex64::from_polar(1.0, -t * ln))
            .sum();
        let v = value.norm();
        if v > lower {
            lower = v;
            argmax_t = t;
        }
    }
    Ok(SeminormEstimate {
        epsilon,
        lower: lower.min(upper),
        upper,
        argmax_t,
        grid,
    })
}

//! Dirichlet polynomials and the coefficient rules of infinite Dirichlet series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A finite Dirichlet series `Σ a_n n^{-s}` stored as a sparse map `n -> a_n`.
///
/// The map is kept in normal form: every stored index is at least 1 and no
/// stored coefficient is exactly zero. Absent indices have coefficient 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DirichletPolynomial {
    coeffs: BTreeMap<u64, Complex64>,
}

impl DirichletPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant function 1, i.e. `monomial(1)`.
    pub fn one() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, ONE);
        Self { coeffs }
    }

    /// The Dirichlet monomial `e_n(s) = n^{-s}`.
    pub fn monomial(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("monomial index must be >= 1, got 0"));
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(n, ONE);
        Ok(Self { coeffs })
    }

    /// Builds a polynomial from `(n, a_n)` pairs. Repeated indices are summed.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (n, a) in terms {
            if n == 0 {
                return Err(Error::domain("coefficient index must be >= 1, got 0"));
            }
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::domain(format!("coefficient a_{n} is not finite")));
            }
            *coeffs.entry(n).or_insert(ZERO) += a;
        }
        Ok(Self::normalized(coeffs))
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        Self::from_terms(terms.into_iter().map(|(n, a)| (n, Complex64::new(a, 0.0))))
    }

    pub(crate) fn from_map_unchecked(coeffs: BTreeMap<u64, Complex64>) -> Self {
        Self::normalized(coeffs)
    }

    fn normalized(mut coeffs: BTreeMap<u64, Complex64>) -> Self {
        coeffs.retain(|_, a| *a != ZERO);
        Self { coeffs }
    }

    /// Coefficient `a_n`, zero when `n` is not stored.
    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(ZERO)
    }

    /// The constant term `a_1`.
    pub fn first_coefficient(&self) -> Complex64 {
        self.coeff(1)
    }

    /// Largest stored index, 0 for the zero polynomial.
    pub fn max_index(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored (non-zero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every stored coefficient has zero imaginary part.
    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.values().all(|a| a.im == 0.0)
    }

    /// Stored terms in increasing index order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &a)| (n, a))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::normalized(self.coeffs.iter().map(|(&n, &a)| (n, a * c)).collect())
    }

    /// Applies `a_n -> g(n, a_n)` to every stored coefficient and renormalizes.
    pub fn map_coefficients<F>(&self, mut g: F) -> Self
    where
        F: FnMut(u64, Complex64) -> Complex64,
    {
        Self::normalized(self.coeffs.iter().map(|(&n, &a)| (n, g(n, a))).collect())
    }

    /// Copy of `self` with the constant term removed.
    pub fn without_constant(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(&1);
        Self { coeffs }
    }

    /// Dirichlet convolution `c_n = Σ_{d | n} a_d b_{n/d}`, the coefficient map of the
    /// pointwise product.
    ///
    /// Computed over stored index pairs `(n1, n2) -> n1 n2`, which is cheap for the
    /// sparse inputs this crate mostly handles.
    pub fn dirichlet_multiply(&self, other: &Self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&n1, &a) in &self.coeffs {
            for (&n2, &b) in &other.coeffs {
                let n = n1.checked_mul(n2).expect("product index overflows u64");
                *coeffs.entry(n).or_insert(ZERO) += a * b;
            }
        }
        Self::normalized(coeffs)
    }

    /// Largest absolute difference between coefficients of `self` and `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (&n, &a) in &self.coeffs {
            worst = worst.max((a - other.coeff(n)).norm());
        }
        for (&n, &b) in &other.coeffs {
            if !self.coeffs.contains_key(&n) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    /// Coefficient-wise comparison with a relative tolerance per index:
    /// `|a_n - b_n| <= rel * max(|a_n|, |b_n|)`.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        let within = |a: Complex64, b: Complex64| (a - b).norm() <= rel * a.norm().max(b.norm());
        self.coeffs.iter().all(|(&n, &a)| within(a, other.coeff(n)))
            && other.coeffs.iter().all(|(&n, &b)| within(self.coeff(n), b))
    }
}

impl Add for &DirichletPolynomial {
    type Output = DirichletPolynomial;

    fn add(self, rhs: Self) -> DirichletPolynomial {
        let mut coeffs = self.coeffs.clone();
        for (&n, &b) in &rhs.coeffs {
            *coeffs.entry(n).or_insert(ZERO) += b;
        }
        DirichletPolynomial::normalized(coeffs)
    }
}

impl Sub for &DirichletPolynomial {
    type Output = DirichletPolynomial;

    fn sub(self, rhs: Self) -> DirichletPolynomial {
        let mut coeffs = self.coeffs.clone();
        for (&n, &b) in &rhs.coeffs {
            *coeffs.entry(n).or_insert(ZERO) -= b;
        }
        DirichletPolynomial::normalized(coeffs)
    }
}

impl Neg for &DirichletPolynomial {
    type Output = DirichletPolynomial;

    fn neg(self) -> DirichletPolynomial {
        self.scale(-ONE)
    }
}

impl Mul for &DirichletPolynomial {
    type Output = DirichletPolynomial;

    fn mul(self, rhs: Self) -> DirichletPolynomial {
        self.dirichlet_multiply(rhs)
    }
}

/// Exact abscissas of a test rule. Only the test suites read these.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KnownAbscissas {
    pub sigma_c: Option<f64>,
    pub sigma_u: Option<f64>,
    pub sigma_a: Option<f64>,
}

/// Identifies the generator behind a [`CoefficientRule`].
#[derive(Clone)]
pub enum RuleKind {
    /// `a_n = 1`, the Riemann zeta series.
    Ones,
    /// `a_n = (-1)^{n+1}`, the alternating (eta) series.
    Eta,
    /// `a_n = n^{-k}`, zeta shifted by `k`.
    ZetaShift(i32),
    /// `a_n = μ(n)`.
    Moebius,
    /// Finite table `a_1, a_2, ...`; indices past the end are 0.
    Table(Arc<[Complex64]>),
    /// Arbitrary deterministic generator.
    Custom {
        label: String,
        generator: Arc<dyn Fn(u64) -> Complex64 + Send + Sync>,
    },
}

impl fmt::Debug for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleKind::Ones => write!(f, "Ones"),
            RuleKind::Eta => write!(f, "Eta"),
            RuleKind::ZetaShift(k) => write!(f, "ZetaShift({k})"),
            RuleKind::Moebius => write!(f, "Moebius"),
            RuleKind::Table(t) => write!(f, "Table(len={})", t.len()),
            RuleKind::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

/// A deterministic coefficient generator `n -> a_n` for an infinite Dirichlet series.
#[derive(Clone, Debug)]
pub struct CoefficientRule {
    kind: RuleKind,
    known: Option<KnownAbscissas>,
}

impl CoefficientRule {
    pub fn ones() -> Self {
        Self {
            kind: RuleKind::Ones,
            known: Some(KnownAbscissas {
                sigma_c: Some(1.0),
                sigma_u: Some(1.0),
                sigma_a: Some(1.0),
            }),
        }
    }

    pub fn eta() -> Self {
        // ζ is unbounded on every vertical line Re s = σ ≤ 1, and so is η = (1 - 2^{1-s})ζ.
        Self {
            kind: RuleKind::Eta,
            known: Some(KnownAbscissas {
                sigma_c: Some(0.0),
                sigma_u: Some(1.0),
                sigma_a: Some(1.0),
            }),
        }
    }

    pub fn zeta_shift(k: i32) -> Self {
        let a = 1.0 - f64::from(k);
        Self {
            kind: RuleKind::ZetaShift(k),
            known: Some(KnownAbscissas {
                sigma_c: Some(a),
                sigma_u: Some(a),
                sigma_a: Some(a),
            }),
        }
    }

    pub fn moebius() -> Self {
        Self {
            kind: RuleKind::Moebius,
            known: Some(KnownAbscissas {
                sigma_c: None,
                sigma_u: None,
                sigma_a: Some(1.0),
            }),
        }
    }

    pub fn table(values: Vec<Complex64>) -> Self {
        Self {
            kind: RuleKind::Table(values.into()),
            known: None,
        }
    }

    pub fn custom<F>(label: impl Into<String>, generator: F) -> Self
    where
        F: Fn(u64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            kind: RuleKind::Custom {
                label: label.into(),
                generator: Arc::new(generator),
            },
            known: None,
        }
    }

    /// Attaches exact abscissas for use as a test oracle.
    pub fn with_known(mut self, known: KnownAbscissas) -> Self {
        self.known = Some(known);
        self
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    pub fn known(&self) -> Option<KnownAbscissas> {
        self.known
    }

    pub fn label(&self) -> String {
        match &self.kind {
            RuleKind::Ones => "ones".into(),
            RuleKind::Eta => "eta".into(),
            RuleKind::ZetaShift(k) => format!("zeta_shift({k})"),
            RuleKind::Moebius => "moebius".into(),
            RuleKind::Table(t) => format!("table[{}]", t.len()),
            RuleKind::Custom { label, .. } => label.clone(),
        }
    }

    /// The coefficient `a_n`; `n = 0` yields 0.
    pub fn coefficient(&self, n: u64) -> Complex64 {
        if n == 0 {
            return ZERO;
        }
        match &self.kind {
            RuleKind::Ones => ONE,
            RuleKind::Eta => {
                if n % 2 == 1 {
                    ONE
                } else {
                    -ONE
                }
            }
            RuleKind::ZetaShift(k) => {
                let x = n as f64;
                let v = match *k {
                    0 => 1.0,
                    1 => 1.0 / x,
                    2 => 1.0 / (x * x),
                    -1 => x,
                    _ => x.powi(-k),
                };
                Complex64::new(v, 0.0)
            }
            RuleKind::Moebius => Complex64::new(f64::from(moebius(n)), 0.0),
            RuleKind::Table(t) => t.get((n - 1) as usize).copied().unwrap_or(ZERO),
            RuleKind::Custom { generator, .. } => generator(n),
        }
    }

    /// Coefficients `a_start, ..., a_end` (inclusive), sieving where the rule allows it.
    pub fn coefficients(&self, start: u64, end: u64) -> Vec<Complex64> {
        let start = start.max(1);
        if end < start {
            return Vec::new();
        }
        match &self.kind {
            RuleKind::Moebius => moebius_range(start, end)
                .into_iter()
                .map(|m| Complex64::new(f64::from(m), 0.0))
                .collect(),
            _ => (start..=end).map(|n| self.coefficient(n)).collect(),
        }
    }

    /// The Dirichlet polynomial `Σ_{n ≤ N} a_n n^{-s}`.
    pub fn truncate(&self, n_max: u64) -> Result<DirichletPolynomial> {
        if n_max == 0 {
            return Err(Error::domain("truncation index must be >= 1"));
        }
        let coeffs = self
            .coefficients(1, n_max)
            .into_iter()
            .zip(1..)
            .map(|(a, n)| (n, a))
            .collect();
        Ok(DirichletPolynomial::from_map_unchecked(coeffs))
    }
}

/// Möbius function by trial division.
pub fn moebius(mut n: u64) -> i8 {
    if n == 0 {
        return 0;
    }
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Möbius values on `[start, end]` with a segmented sieve over primes up to `sqrt(end)`.
fn moebius_range(start: u64, end: u64) -> Vec<i8> {
    let len = (end - start + 1) as usize;
    let mut mu = vec![1i8; len];
    let mut rest: Vec<u64> = (start..=end).collect();
    let limit = (end as f64).sqrt() as u64 + 1;
    let mut composite = vec![false; limit as usize + 1];
    for p in 2..=limit {
        if composite[p as usize] {
            continue;
        }
        let mut q = p * p;
        while q <= limit {
            composite[q as usize] = true;
            q += p;
        }
        let first = start.div_ceil(p) * p;
        let mut m = first;
        while m <= end {
            let i = (m - start) as usize;
            if mu[i] != 0 {
                if (m / p) % p == 0 {
                    mu[i] = 0;
                } else {
                    mu[i] = -mu[i];
                    rest[i] /= p;
                }
            }
            m += p;
        }
    }
    for (i, r) in rest.iter().enumerate() {
        // at most one prime factor above sqrt(end) remains
        if mu[i] != 0 && *r > 1 {
            mu[i] = -mu[i];
        }
    }
    mu
}

/// A point `s = σ + it` of the complex plane, usually inside some half-plane `Re s > ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    pub sigma: f64,
    pub t: f64,
}

impl HalfPlanePoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma.is_finite() && t.is_finite()) {
            return Err(Error::domain(format!("point ({sigma}, {t}) is not finite")));
        }
        Ok(Self { sigma, t })
    }

    pub fn real(sigma: f64) -> Result<Self> {
        Self::new(sigma, 0.0)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

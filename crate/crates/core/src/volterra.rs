//! Volterra operators `V_g(f) = J(g' f)`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::series::DirichletPolynomial;

/// `V_g(f) = J(g' f)`. Always defined on polynomials, since `g'` and hence `g' f` have
/// no constant term. The result has `a_1 = 0`.
///
/// Coefficient-wise `c_n = Σ_{dm = n, d ≥ 2} (log d / log n) g_d f_m`, the two symbols
/// folded into one ratio, so that `V_g(1) = g - a_1` holds without rounding.
pub fn volterra_apply(g: &DirichletPolynomial, f: &DirichletPolynomial) -> DirichletPolynomial {
    let mut coeffs: BTreeMap<u64, Complex64> = BTreeMap::new();
    for (d, a) in g.terms().filter(|&(d, _)| d >= 2) {
        let ln_d = (d as f64).ln();
        for (m, b) in f.terms() {
            let n = d.checked_mul(m).expect("product index overflows u64");
            let weight = if m == 1 { 1.0 } else { ln_d / (n as f64).ln() };
            *coeffs.entry(n).or_default() += a * b * weight;
        }
    }
    DirichletPolynomial::from_map_unchecked(coeffs)
}

/// Both sides of `V_g(1) = J(g') = g - a_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct VolterraIdentity {
    pub lhs: DirichletPolynomial,
    pub rhs: DirichletPolynomial,
    pub matches: bool,
}

/// Relative tolerance per coefficient for [`volterra_identity_check`].
pub const IDENTITY_TOL: f64 = 1e-12;

/// Evaluates `V_g(1)` and `g - a_1` and compares them coefficient-wise.
///
/// Membership of `g` in the space of uniformly convergent series (which the identity
/// transfers to `V_g`) cannot be decided from finitely many coefficients; use the
/// abscissa probes for evidence on that side.
pub fn volterra_identity_check(g: &DirichletPolynomial) -> VolterraIdentity {
    let lhs = volterra_apply(g, &DirichletPolynomial::one());
    let rhs = g.without_constant();
    let matches = lhs.approx_eq(&rhs, IDENTITY_TOL);
    VolterraIdentity { lhs, rhs, matches }
}

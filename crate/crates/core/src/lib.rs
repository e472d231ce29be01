//! Numerics for Dirichlet series and the diagonal operators acting on them, chiefly
//! differentiation `D` and its inverse `J`.

pub mod abscissa;
pub mod dynamics;
pub mod error;
pub mod evaluation;
pub mod operators;
pub mod series;
pub mod spectral;
pub mod volterra;

pub use num_complex::Complex64;

pub use abscissa::{bracket_sigma_u, estimate_sigma_a, estimate_sigma_c, AbscissaEstimate, BoundednessProbe, Estimate};
pub use dynamics::{
    cesaro_mean, ergodicity_diagnostic, log_normalized_power_norm, normalized_power_norm, power_apply, DynamicsReport,
    OrbitVerdict,
};
pub use error::{Error, Result};
pub use evaluation::{
    evaluate, evaluate_rule, l1_upper, select_truncation, seminorm, summation_by_parts, tail_bound_monotone,
    SeminormEstimate, SeminormGrid, TailBound, TailRoute,
};
pub use operators::{check_growth, differentiate, integrate, GrowthReport, GrowthVerdict, Multiplier};
pub use series::{CoefficientRule, DirichletPolynomial, HalfPlanePoint, KnownAbscissas, RuleKind};
pub use spectral::{
    bv_check, classify_point, reciprocal_spectrum_check, resolvent_apply, shifted_apply, spectral_gap, BvReport,
    BvVerdict, ReciprocalReport, Space, SpectrumClassification, Verdict,
};
pub use volterra::{volterra_apply, volterra_identity_check, VolterraIdentity};

//! JSON series descriptors.
//!
//! ```json
//! {"kind":"poly","terms":[{"n":3,"re":1.0,"im":-0.5}]}
//! {"kind":"rule","name":"zeta_shift","k":2,"truncate":1000}
//! ```

use std::fs;

use dirichlet_core::{CoefficientRule, Complex64, DirichletPolynomial};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Descriptor {
    Poly { terms: Vec<TermDesc> },
    Rule { name: RuleName, k: Option<i32>, truncate: Option<u64> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDesc {
    n: u64,
    re: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    im: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RuleName {
    Ones,
    Eta,
    Moebius,
    ZetaShift,
}

/// A parsed descriptor: either an explicit polynomial or a coefficient rule with an
/// optional truncation index.
#[derive(Debug, Clone)]
pub enum SeriesInput {
    Poly(DirichletPolynomial),
    Rule { rule: CoefficientRule, truncate: Option<u64> },
}

impl SeriesInput {
    /// The polynomial itself, or the rule truncated at its `truncate` index.
    pub fn into_polynomial(self, field: &str) -> Result<DirichletPolynomial, CliError> {
        match self {
            SeriesInput::Poly(p) => Ok(p),
            SeriesInput::Rule { rule, truncate: Some(n) } => rule.truncate(n).map_err(CliError::from),
            SeriesInput::Rule { truncate: None, .. } => Err(CliError::Usage(format!(
                "{field}.truncate is required for rule descriptors in this command"
            ))),
        }
    }
}

/// Reads a flag value, following `@path` indirection.
pub fn read_argument(raw: &str, field: &str) -> Result<String, CliError> {
    match raw.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{field}: cannot read {path}: {e}"))),
        None => Ok(raw.to_owned()),
    }
}

pub fn parse_series(raw: &str, field: &str) -> Result<SeriesInput, CliError> {
    let text = read_argument(raw, field)?;
    let desc: Descriptor =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{field}: malformed descriptor: {e}")))?;
    match desc {
        Descriptor::Poly { terms } => {
            let mut pairs = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                if t.n == 0 {
                    return Err(CliError::Usage(format!("{field}.terms[{i}].n must be >= 1")));
                }
                if !(t.re.is_finite() && t.im.is_finite()) {
                    return Err(CliError::Usage(format!("{field}.terms[{i}] has a non-finite coefficient")));
                }
                pairs.push((t.n, Complex64::new(t.re, t.im)));
            }
            let poly = DirichletPolynomial::from_terms(pairs).map_err(CliError::from)?;
            Ok(SeriesInput::Poly(poly))
        }
        Descriptor::Rule { name, k, truncate } => {
            let rule = match (name, k) {
                (RuleName::ZetaShift, Some(k)) => CoefficientRule::zeta_shift(k),
                (RuleName::ZetaShift, None) => {
                    return Err(CliError::Usage(format!("{field}.k is required for rule zeta_shift")))
                }
                (_, Some(_)) => {
                    return Err(CliError::Usage(format!("{field}.k is only accepted by rule zeta_shift")))
                }
                (RuleName::Ones, None) => CoefficientRule::ones(),
                (RuleName::Eta, None) => CoefficientRule::eta(),
                (RuleName::Moebius, None) => CoefficientRule::moebius(),
            };
            if truncate == Some(0) {
                return Err(CliError::Usage(format!("{field}.truncate must be >= 1")));
            }
            Ok(SeriesInput::Rule { rule, truncate })
        }
    }
}

/// Serializes a polynomial as a `poly` descriptor; parsing the result gives back the same
/// coefficient map.
pub fn series_json(p: &DirichletPolynomial) -> Value {
    let terms: Vec<TermDesc> = p.terms().map(|(n, a)| TermDesc { n, re: a.re, im: a.im }).collect();
    serde_json::json!({ "kind": "poly", "terms": terms })
}

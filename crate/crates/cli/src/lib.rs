//! Command-line front end for `dirichlet-core`.
//!
//! [`run`] dispatches one subcommand and writes JSON (default) or CSV to the given writer.
//! Exit status is 0 on success and 1 on usage errors or malformed descriptors. Errors
//! returned by the library exit with 2.

mod descriptor;

use std::ffi::OsString;
use std::io::{IsTerminal, Write};

use clap::{Parser, Subcommand, ValueEnum};
use dirichlet_core::abscissa::{self, SIGMA_U_NOTE};
use dirichlet_core::evaluation::SeminormGrid;
use dirichlet_core::spectral::{Space, Verdict};
use dirichlet_core::{
    bv_check, classify_point, ergodicity_diagnostic, evaluate, evaluate_rule, integrate, reciprocal_spectrum_check,
    resolvent_apply, seminorm, volterra_apply, volterra_identity_check, CoefficientRule, Complex64,
    DirichletPolynomial, HalfPlanePoint, Multiplier,
};
use serde_json::{json, Map, Value};

pub use descriptor::{parse_series, series_json, SeriesInput};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or a malformed descriptor (exit 1).
    Usage(String),
    /// Rejected by the library (exit 2).
    Library(dirichlet_core::Error),
}

impl From<dirichlet_core::Error> for CliError {
    fn from(e: dirichlet_core::Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Library(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Full,
    #[value(alias = "zero_subspace")]
    Zero,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Full => Space::Full,
            SpaceArg::Zero => Space::ZeroSubspace,
        }
    }
}

fn parse_complex(raw: &str) -> Result<Complex64, String> {
    let parse = |part: &str| {
        let x: f64 = part.trim().parse().map_err(|_| format!("'{raw}' is not a complex number 're,im'"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("'{raw}' is not finite"))
        }
    };
    match raw.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(raw)?, 0.0)),
    }
}

fn parse_operator(raw: &str) -> Result<Multiplier, String> {
    match raw {
        "d" | "D" => Ok(Multiplier::differentiation()),
        "j" | "J" => Ok(Multiplier::integration()),
        "identity" | "I" => Ok(Multiplier::identity()),
        _ => match raw.strip_prefix("power:").map(str::parse::<f64>) {
            Some(Ok(p)) if p.is_finite() => Ok(Multiplier::power(p)),
            _ => Err(format!("unknown operator '{raw}' (expected d, j, identity or power:<p>)")),
        },
    }
}

#[derive(Debug, Parser)]
#[command(name = "dirichlet", version, about = "Dirichlet series, the operators D and J, and their spectra")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a polynomial (or a truncated rule) at s.
    Eval {
        /// Series descriptor (JSON or @file).
        #[arg(long)]
        series: String,
        /// Point s as "re,im".
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
    },
    /// Apply D (coefficient-wise multiplication by -log n).
    Diff {
        #[arg(long)]
        series: String,
    },
    /// Apply J (coefficient-wise multiplication by -1/log n); needs a_1 = 0.
    Integrate {
        #[arg(long)]
        series: String,
    },
    /// Dirichlet convolution of two series.
    Mul {
        #[arg(long)]
        series: String,
        #[arg(long)]
        other: String,
    },
    /// Bracket the seminorm sup over Re s > eps.
    Seminorm {
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Half-length of the sampled t-range (default depends on the series).
        #[arg(long)]
        t_max: Option<f64>,
        /// Grid step (default 0.01).
        #[arg(long)]
        step: Option<f64>,
    },
    /// Estimate sigma_c and sigma_a and bracket sigma_u.
    Abscissa {
        #[arg(long)]
        series: String,
        /// Number of coefficients (default: the descriptor's truncate, else 100000).
        #[arg(long)]
        n: Option<u64>,
        /// Epsilons of the boundedness probes.
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5")]
        probe_eps: Vec<f64>,
    },
    /// Apply the resolvent (lambda I - D)^{-1}.
    Resolvent {
        #[arg(long)]
        series: String,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long, value_enum, default_value_t = SpaceArg::Full)]
        space: SpaceArg,
    },
    /// Classify lambda for D as eigenvalue or resolvent point.
    Classify {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long, value_enum, default_value_t = SpaceArg::Full)]
        space: SpaceArg,
    },
    /// Bounded-variation check of the resolvent weights.
    BvCheck {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
    },
    /// Compare mu in the resolvent set of D with 1/mu in that of J.
    Reciprocal {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        mu: Complex64,
    },
    /// V_g(f) = J(g' f), or the identity V_g(1) = g - a_1 when --series is absent.
    Volterra {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        series: Option<String>,
    },
    /// Sample the normalized power norms of an operator orbit.
    Dynamics {
        /// d, j, identity or power:<p>.
        #[arg(long, value_parser = parse_operator)]
        operator: Multiplier,
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 40)]
        k_max: u32,
    },
}

/// Renders a float as a JSON number; `-0.0` prints as `0.0`, and non-finite values become
/// the strings `inf`, `-inf` and `nan`.
fn num(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| {
        Value::String(if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        })
    })
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Table {
    fn series(p: &DirichletPolynomial) -> Self {
        Table {
            header: vec!["n".into(), "re".into(), "im".into()],
            rows: p
                .terms()
                .map(|(n, a)| vec![n.to_string(), cell(&num(a.re)), cell(&num(a.im))])
                .collect(),
        }
    }

    /// One row holding the top-level fields; nested values are written as JSON.
    fn flat(v: &Value) -> Self {
        let obj = v.as_object().expect("reports are JSON objects");
        Table {
            header: obj.keys().cloned().collect(),
            rows: vec![obj.values().map(cell).collect()],
        }
    }
}

struct Report {
    json: Value,
    table: Table,
}

impl Report {
    fn series(p: &DirichletPolynomial) -> Self {
        Report { json: series_json(p), table: Table::series(p) }
    }

    fn object(json: Value) -> Self {
        let table = Table::flat(&json);
        Report { json, table }
    }
}

fn verdict_fields(verdict: Verdict, out: &mut Map<String, Value>) {
    match verdict {
        Verdict::Eigenvalue { n } => {
            out.insert("verdict".into(), json!("eigenvalue"));
            out.insert("n".into(), json!(n));
        }
        Verdict::EigenvalueConstant => {
            out.insert("verdict".into(), json!("eigenvalue_constant"));
        }
        Verdict::ResolventPoint { gap } => {
            out.insert("verdict".into(), json!("resolvent_point"));
            out.insert("gap".into(), num(gap));
        }
    }
}

fn estimate_json(e: &abscissa::Estimate) -> Value {
    json!({ "value": num(e.value), "uncertainty": num(e.uncertainty), "shift": e.shift })
}

fn rule_of(input: SeriesInput) -> (CoefficientRule, Option<u64>) {
    match input {
        SeriesInput::Rule { rule, truncate } => (rule, truncate),
        SeriesInput::Poly(p) => {
            let n = p.max_index();
            let table: Vec<Complex64> = (1..=n).map(|i| p.coeff(i)).collect();
            (CoefficientRule::table(table), Some(n))
        }
    }
}

fn execute(command: Command) -> Result<Report, CliError> {
    let poly = |raw: &str, field: &str| parse_series(raw, field)?.into_polynomial(field);
    match command {
        Command::Eval { series, s } => {
            let point = HalfPlanePoint::new(s.re, s.im)?;
            let value = match parse_series(&series, "series")? {
                SeriesInput::Rule { rule, truncate: Some(n) } => evaluate_rule(&rule, n, point),
                other => evaluate(&other.into_polynomial("series")?, point),
            };
            let json = complex_json(value);
            Ok(Report::object(json))
        }
        Command::Diff { series } => Ok(Report::series(&dirichlet_core::differentiate(&poly(&series, "series")?))),
        Command::Integrate { series } => Ok(Report::series(&integrate(&poly(&series, "series")?)?)),
        Command::Mul { series, other } => {
            let f = poly(&series, "series")?;
            let g = poly(&other, "other")?;
            Ok(Report::series(&f.dirichlet_multiply(&g)))
        }
        Command::Seminorm { series, eps, t_max, step } => {
            let f = poly(&series, "series")?;
            let default = SeminormGrid::default_for(&f);
            let grid = SeminormGrid::new(t_max.unwrap_or(default.t_max), step.unwrap_or(default.step))?;
            let e = seminorm(&f, eps, grid)?;
            Ok(Report::object(json!({
                "epsilon": num(e.epsilon),
                "lower": num(e.lower),
                "upper": num(e.upper),
                "argmax_t": num(e.argmax_t),
                "t_max": num(e.grid.t_max),
                "step": num(e.grid.step),
                "exact": e.is_exact(),
            })))
        }
        Command::Abscissa { series, n, probe_eps } => {
            let (rule, truncate) = rule_of(parse_series(&series, "series")?);
            let n_max = n.or(truncate).unwrap_or(100_000);
            let est = abscissa::bracket_sigma_u(&rule, n_max, &probe_eps, abscissa::default_probe_grid())?;
            let probes: Vec<Value> = est
                .probes
                .iter()
                .map(|p| {
                    json!({
                        "epsilon": num(p.epsilon),
                        "sup_abs": num(p.sup_abs),
                        "sup_abs_half": num(p.sup_abs_half),
                        "looks_bounded": p.looks_bounded(),
                    })
                })
                .collect();
            let mut out = json!({
                "rule": rule.label(),
                "n_max": est.n_max,
                "sigma_c": estimate_json(&est.sigma_c),
                "sigma_a": estimate_json(&est.sigma_a),
                "sigma_u_bracket": [num(est.sigma_u_bracket.0), num(est.sigma_u_bracket.1)],
                "probes": probes,
                "note": SIGMA_U_NOTE,
            });
            if let Some(k) = rule.known() {
                let opt = |x: Option<f64>| x.map(num).unwrap_or(Value::Null);
                out["known"] = json!({
                    "sigma_c": opt(k.sigma_c),
                    "sigma_u": opt(k.sigma_u),
                    "sigma_a": opt(k.sigma_a),
                });
            }
            Ok(Report::object(out))
        }
        Command::Resolvent { series, lambda, space } => {
            let f = poly(&series, "series")?;
            Ok(Report::series(&resolvent_apply(lambda, &f, space.into())?))
        }
        Command::Classify { lambda, space } => {
            let c = classify_point(lambda, space.into());
            let mut out = Map::new();
            out.insert("lambda".into(), complex_json(c.lambda));
            out.insert("space".into(), json!(c.space.to_string()));
            verdict_fields(c.verdict, &mut out);
            out.insert("near_spectrum".into(), json!(c.near_spectrum));
            Ok(Report::object(Value::Object(out)))
        }
        Command::BvCheck { lambda, delta, n } => {
            let r = bv_check(lambda, delta, n)?;
            Ok(Report::object(json!({
                "lambda": complex_json(r.lambda),
                "delta": num(r.delta),
                "n_max": r.n_max,
                "gap": num(r.gap),
                "fitted_c": num(r.fitted_c),
                "fitted_c_half": num(r.fitted_c_half),
                "fit_drift": num(r.fit_drift()),
                "total_variation": num(r.total_variation()),
                "majorant_ratio": num(r.majorant_ratio),
                "late_variation": num(r.late_variation),
                "tail_majorant": num(r.tail_majorant),
                "verdict": r.verdict.to_string(),
            })))
        }
        Command::Reciprocal { mu } => {
            let r = reciprocal_spectrum_check(mu)?;
            Ok(Report::object(json!({
                "mu": complex_json(r.mu),
                "in_rho_d": r.in_rho_d,
                "in_rho_j_reciprocal": r.in_rho_j_reciprocal,
                "consistent": r.consistent,
                "j_gap": num(r.j_gap),
            })))
        }
        Command::Volterra { symbol, series } => {
            let g = poly(&symbol, "symbol")?;
            match series {
                Some(raw) => Ok(Report::series(&volterra_apply(&g, &poly(&raw, "series")?))),
                None => {
                    let id = volterra_identity_check(&g);
                    Ok(Report::object(json!({
                        "lhs": series_json(&id.lhs),
                        "rhs": series_json(&id.rhs),
                        "matches": id.matches,
                    })))
                }
            }
        }
        Command::Dynamics { operator, series, eps, k_max } => {
            let f = poly(&series, "series")?;
            let r = ergodicity_diagnostic(&operator, &f, eps, k_max)?;
            let samples: Vec<Value> = r.samples.iter().map(|(k, v)| json!({ "k": k, "value": num(*v) })).collect();
            let table = Table {
                header: vec!["k".into(), "value".into()],
                rows: r.samples.iter().map(|(k, v)| vec![k.to_string(), cell(&num(*v))]).collect(),
            };
            let json = json!({
                "operator": operator.label(),
                "epsilon": num(eps),
                "samples": samples,
                "verdict": r.verdict.to_string(),
                "fitted_rate": num(r.fitted_rate),
            });
            Ok(Report { json, table })
        }
    }
}

fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", report.json),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.table.header)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            w.flush()
        }
    }
}

/// Whether diagnostics on standard error may use ANSI colors.
fn stderr_color() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stderr().is_terminal()
}

fn error_line(msg: &str, color: bool) -> String {
    if color {
        format!("\x1b[1;31merror:\x1b[0m {msg}")
    } else {
        format!("error: {msg}")
    }
}

/// Runs one invocation. `args` includes the program name. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = stderr_color();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let rendered = if color { e.render().ansi().to_string() } else { e.render().to_string() };
                    let _ = write!(err, "{rendered}");
                    1
                }
            };
        }
    };
    let format = cli.format;
    match execute(cli.command) {
        Ok(report) => match write_report(&report, format, out) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "{}", error_line(&format!("cannot write output: {e}"), color));
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "{}", error_line(&e.to_string(), color));
            e.exit_code()
        }
    }
}


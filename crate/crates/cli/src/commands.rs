use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ffk_core::bounds::{scan, BoundReport};
use ffk_core::check::CheckResult;
use ffk_core::divisor_calc::{identity_suite, summarize, v_relation_check};
use ffk_core::fermat_model::{build_config_capped, FermatFiber, FermatKind, FermatLabel, FermatParams};
use ffk_core::fiber_graph::{ConfigDocument, FiberConfig, DEFAULT_COMPONENT_CAP};
use ffk_core::numtheory::factor_odd_squarefree;
use ffk_core::polyarith::repeated_root_analysis;
use ffk_core::rational::format_rational;
use ffk_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::{csv_writer, float, float_text, q, Envelope};
use crate::suites;

pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CONTRACT: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parameter(_) | Error::UnknownComponent(_) => EXIT_PARAMETER,
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::ContractViolation { .. } | Error::NoSolution(_) | Error::Internal(_) => EXIT_CONTRACT,
        };
        Self::new(code, e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::new(EXIT_IO, format!("I/O error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::new(EXIT_IO, format!("CSV error: {e}"))
    }
}

pub type CliResult = Result<(), CliError>;

#[derive(Clone, Copy, Debug)]
pub enum Target {
    N(u64),
    Pm { p: u64, m: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Table {
    Components,
    Census,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Polynomial,
    Fiber,
    Divisor,
    Bounds,
}

fn component_cap() -> Result<usize, CliError> {
    match std::env::var("FFK_COMPONENT_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::new(EXIT_PARAMETER, format!("FFK_COMPONENT_CAP = {v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_COMPONENT_CAP),
    }
}

fn target_inputs(target: Target) -> Value {
    match target {
        Target::N(n) => json!({ "N": n }),
        Target::Pm { p, m } => json!({ "p": p, "m": m }),
    }
}

fn resolve(target: Target, s_override: Option<u64>) -> Result<Vec<FermatParams>, CliError> {
    match target {
        Target::N(n) => {
            if s_override.is_some() {
                return Err(CliError::new(EXIT_PARAMETER, "--s needs --p and --m, not --N"));
            }
            let primes = factor_odd_squarefree(n)?;
            Ok(primes
                .into_iter()
                .map(|p| FermatParams::derive(p, n / p))
                .collect::<Result<Vec<_>, _>>()?)
        }
        Target::Pm { p, m } => {
            let params = match s_override {
                Some(s) => FermatParams::new(p, m, s)?,
                None => FermatParams::derive(p, m)?,
            };
            Ok(vec![params])
        }
    }
}

fn build(params: FermatParams) -> Result<FermatFiber, CliError> {
    Ok(build_config_capped(params, component_cap()?)?)
}

fn params_value(params: &FermatParams) -> Value {
    json!({
        "p": params.p,
        "m": params.m,
        "s": params.s,
        "rho": params.rho(),
        "N": params.n(),
        "g": params.genus(),
    })
}

fn finish(env: &Envelope) -> CliResult {
    match env.first_failure() {
        None => Ok(()),
        Some(c) => Err(CliError::new(EXIT_CONTRACT, format!("contract violation: {}: {}", c.name, c.detail))),
    }
}

fn tag(params: &FermatParams, mut c: CheckResult) -> CheckResult {
    c.detail = format!("(p={}, m={}) {}", params.p, params.m, c.detail);
    c
}

pub fn rho(p: u64) -> CliResult {
    let r = repeated_root_analysis(p)?;
    let mut env = Envelope::new("rho", json!({ "p": p }));
    env.results = json!({
        "p": p,
        "s": r.s,
        "rho_over_m": r.s,
        "psi_degree": r.psi_degree,
        "double_roots": r.roots,
    });
    env.checks.push(CheckResult::pass(
        "double_root_structure",
        "every repeated factor of Psi mod p is rational, linear and exactly double",
    ));
    env.print();
    finish(&env)
}

struct ComponentRow {
    p: u64,
    label: FermatLabel,
    multiplicity: u64,
    genus: u64,
    self_intersection: i64,
    degree: usize,
}

fn component_rows(f: &FermatFiber) -> Vec<ComponentRow> {
    f.config
        .components()
        .iter()
        .map(|c| ComponentRow {
            p: f.params.p,
            label: c.label,
            multiplicity: c.multiplicity,
            genus: c.genus,
            self_intersection: c.self_intersection,
            degree: f.config.neighbors(c.id).len(),
        })
        .collect()
}

fn census_value(f: &FermatFiber) -> Value {
    let census = f.census();
    let mut map = serde_json::Map::new();
    for kind in FermatKind::ALL {
        map.insert(kind.name().to_string(), json!(census[&kind]));
    }
    Value::Object(map)
}

#[derive(Serialize, Deserialize)]
pub struct ConfigFile {
    pub params: ParamsFile,
    pub config: ConfigDocument<FermatLabel>,
}

#[derive(Serialize, Deserialize)]
pub struct ParamsFile {
    pub p: u64,
    pub m: u64,
    pub s: u64,
}

pub fn fiber(target: Target, s: Option<u64>, format: Format, table: Table, emit_config: Option<&Path>) -> CliResult {
    let all = resolve(target, s)?;
    let mut inputs = target_inputs(target);
    if let Some(s) = s {
        inputs["s"] = json!(s);
    }
    let mut env = Envelope::new("fiber", inputs);
    let fibers = all.into_iter().map(build).collect::<Result<Vec<_>, _>>()?;

    if let Some(path) = emit_config {
        let [f] = fibers.as_slice() else {
            return Err(CliError::new(EXIT_PARAMETER, "--emit-config needs a single fiber (--p, --m)"));
        };
        let doc = ConfigFile {
            params: ParamsFile { p: f.params.p, m: f.params.m, s: f.params.s },
            config: f.config.to_document(),
        };
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut w, &doc).map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
        w.flush()?;
    }

    let mut reports = Vec::new();
    for f in &fibers {
        env.checks.extend(f.full_validation().into_iter().map(|c| tag(&f.params, c)));
        let components: Vec<Value> = component_rows(f)
            .into_iter()
            .map(|r| {
                json!({
                    "kind": r.label.kind.name(),
                    "i": r.label.i,
                    "k": r.label.k,
                    "j": r.label.j,
                    "multiplicity": r.multiplicity,
                    "genus": r.genus,
                    "self_intersection": r.self_intersection,
                    "degree_in_graph": r.degree,
                })
            })
            .collect();
        let expected: BTreeMap<&str, u64> =
            FermatKind::ALL.iter().map(|&k| (k.name(), f.params.expected_count(k))).collect();
        reports.push(json!({
            "params": params_value(&f.params),
            "census": census_value(f),
            "expected_census": expected,
            "component_count": f.config.len(),
            "cusp_count": f.cusps().len(),
            "components": components,
        }));
    }
    env.results = json!({ "fibers": reports });

    match format {
        Format::Json => env.print(),
        Format::Csv => {
            let stdout = io::stdout();
            let mut w = csv_writer(stdout.lock());
            // A leading p column only when several fibers share one table.
            let tagged = fibers.len() > 1;
            let row = |p: u64, rest: Vec<String>| -> Vec<String> {
                if tagged {
                    std::iter::once(p.to_string()).chain(rest).collect()
                } else {
                    rest
                }
            };
            let header = |cols: &[&str]| row(0, cols.iter().map(|c| c.to_string()).collect()).into_iter().enumerate()
                .map(|(i, c)| if tagged && i == 0 { "p".to_string() } else { c })
                .collect::<Vec<_>>();
            match table {
                Table::Components => {
                    w.write_record(header(&[
                        "kind", "i", "k", "j", "multiplicity", "genus", "self_intersection", "degree_in_graph",
                    ]))?;
                    for f in &fibers {
                        for r in component_rows(f) {
                            w.write_record(row(
                                r.p,
                                vec![
                                    r.label.kind.name().to_string(),
                                    r.label.i.to_string(),
                                    r.label.k.to_string(),
                                    r.label.j.to_string(),
                                    r.multiplicity.to_string(),
                                    r.genus.to_string(),
                                    r.self_intersection.to_string(),
                                    r.degree.to_string(),
                                ],
                            ))?;
                        }
                    }
                }
                Table::Census => {
                    w.write_record(header(&["kind", "count"]))?;
                    for f in &fibers {
                        let census = f.census();
                        for kind in FermatKind::ALL {
                            w.write_record(row(f.params.p, vec![kind.name().to_string(), census[&kind].to_string()]))?;
                        }
                    }
                }
            }
            w.flush()?;
            for c in env.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: {}", c.name, c.detail);
            }
        }
    }
    finish(&env)
}

pub fn divisors(target: Target, cusp: (u64, u64)) -> CliResult {
    let all = resolve(target, None)?;
    let mut inputs = target_inputs(target);
    inputs["cusp"] = json!([cusp.0, cusp.1]);
    let mut env = Envelope::new("divisors", inputs);
    let mut reports = Vec::new();
    for params in all {
        let f = build(params)?;
        let section = f.cusp(cusp.0, cusp.1)?;
        env.checks.extend(identity_suite(&f, section)?.into_iter().map(|c| tag(&params, c)));
        let s = summarize(&f, section)?;
        let candidates: Vec<Value> = s
            .probe
            .iter()
            .map(|u| {
                json!({
                    "name": u.name,
                    "two_vs_plus_us_square": q(&u.square),
                    "canonical_u_s": q(&u.canonical),
                    "semipos_min": q(&u.semipos_min),
                    "beta_graph": q(&u.beta_graph),
                    "u_s_pair_ldelta": u.pair_with_ldelta.as_ref().map(q),
                })
            })
            .collect();
        reports.push(json!({
            "params": params_value(&params),
            "lambda": q(&s.lambda_nu.lambda),
            "nu": q(&s.lambda_nu.nu),
            "lambda_plus_nu": q(&s.lambda_nu.sum()),
            "v_s_square": q(&s.v_s_square),
            "g_s_square": q(&s.g_s_square),
            "beta_s": q(&s.beta_closed),
            "beta_s_graph": q(&s.beta_graph),
            "beta_sp_closed": q(&ffk_core::bounds::beta_sp_closed(params.n(), params.p)),
            "per_prime_geometric": q(&s.per_prime_geometric),
            "semipos_min": q(&s.semipos_min),
            "expected": {
                "two_vs_plus_us_square": q(&ffk_core::divisor_calc::expected_square(&params)),
                "canonical_u_s": q(&ffk_core::divisor_calc::expected_canonical(&params)),
            },
            "u_s_candidates": candidates,
        }));
    }
    env.results = json!({ "fibers": reports });
    env.print();
    finish(&env)
}

fn bound_report_value(r: &BoundReport) -> Value {
    let primes: Vec<Value> = r
        .primes
        .iter()
        .zip(&r.geometric.terms)
        .zip(&r.lower.terms)
        .map(|((x, (_, geo)), (_, low))| {
            json!({
                "p": x.p,
                "m": x.m,
                "s": x.s,
                "rho": x.rho,
                "Q": q(&x.q),
                "beta": q(&x.beta),
                "alpha": x.alpha.to_string(),
                "geometric_coefficient": q(geo),
                "lower_coefficient": q(low),
            })
        })
        .collect();
    json!({
        "N": r.n,
        "g": r.g,
        "phi": r.phi,
        "primes": primes,
        "geometric_contribution": float(r.geometric.value),
        "lower_bound": float(r.lower_bound),
        "simple_lower": float(r.simple_lower),
        "ratio": float(r.lower_bound / r.simple_lower),
        "mertens_diag": float(r.mertens_diag),
    })
}

pub fn bounds(n: u64, kappa1: Option<f64>, kappa2: Option<f64>, format: Format) -> CliResult {
    let kappa = match (kappa1, kappa2) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(CliError::new(EXIT_PARAMETER, "give both --kappa1 and --kappa2, or neither")),
    };
    let r = BoundReport::new(n, kappa)?;
    let mut inputs = json!({ "N": n });
    if let Some((a, b)) = kappa {
        inputs["kappa1"] = float(a);
        inputs["kappa2"] = float(b);
    }
    let mut env = Envelope::new("bounds", inputs);
    let mut results = bound_report_value(&r);
    results["upper_bound"] = match (r.upper_bound, kappa) {
        (Some(u), Some((a, b))) => json!({
            "value": float(u),
            "conditional": true,
            "conditional_on": { "kappa1": float(a), "kappa2": float(b) },
        }),
        _ => Value::Null,
    };
    env.results = results;
    env.checks.push(CheckResult::from_bool(
        "lower_bound_strict",
        r.strict_inequality_holds(),
        format!("{} > {}", r.lower_bound, r.simple_lower),
    ));
    env.checks.push(CheckResult::from_bool(
        "positivity",
        r.positivity_holds(),
        "Q, beta, alpha and geometric coefficients are positive",
    ));
    match format {
        Format::Json => env.print(),
        Format::Csv => {
            let stdout = io::stdout();
            let mut w = csv_writer(stdout.lock());
            w.write_record([
                "N", "g", "phi", "p", "m", "s", "rho", "Q", "beta", "alpha", "geometric_coefficient",
                "lower_coefficient", "geometric_contribution", "lower_bound", "simple_lower", "mertens_diag",
                "upper_bound",
            ])?;
            let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
            for ((x, (_, geo)), (_, low)) in r.primes.iter().zip(&r.geometric.terms).zip(&r.lower.terms) {
                w.write_record([
                    r.n.to_string(),
                    r.g.to_string(),
                    r.phi.to_string(),
                    x.p.to_string(),
                    x.m.to_string(),
                    opt(x.s),
                    opt(x.rho),
                    format_rational(&x.q),
                    format_rational(&x.beta),
                    x.alpha.to_string(),
                    format_rational(geo),
                    format_rational(low),
                    float_text(r.geometric.value),
                    float_text(r.lower_bound),
                    float_text(r.simple_lower),
                    float_text(r.mertens_diag),
                    r.upper_bound.map(float_text).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    finish(&env)
}

pub fn scan_cmd(max_n: u64, out: &Path) -> CliResult {
    let reports = scan(max_n)?;
    let file = File::create(out)?;
    let mut w = csv_writer(BufWriter::new(file));
    w.write_record(["N", "phi", "geometric_coefficients", "lower_bound", "simple_lower", "ratio"])?;
    for r in &reports {
        let coeffs: Vec<String> = r
            .geometric
            .terms
            .iter()
            .map(|(p, c)| format!("{p}:{}", format_rational(c)))
            .collect();
        w.write_record([
            r.n.to_string(),
            r.phi.to_string(),
            coeffs.join(";"),
            float_text(r.lower_bound),
            float_text(r.simple_lower),
            float_text(r.lower_bound / r.simple_lower),
        ])?;
    }
    w.flush()?;

    let mut env = Envelope::new("scan", json!({ "max_N": max_n, "out": out.display().to_string() }));
    let bad: Vec<u64> = reports.iter().filter(|r| !r.strict_inequality_holds()).map(|r| r.n).collect();
    let min_ratio = reports
        .iter()
        .map(|r| r.lower_bound / r.simple_lower)
        .fold(f64::INFINITY, f64::min);
    env.results = json!({
        "rows": reports.len(),
        "min_ratio": if reports.is_empty() { Value::Null } else { float(min_ratio) },
    });
    if reports.is_empty() {
        let warning = format!("no odd squarefree composite N <= {max_n}; the data section is empty");
        eprintln!("warning: {warning}");
        env.results["warning"] = json!(warning);
    }
    env.checks.push(CheckResult::from_bool(
        "lower_bound_strict",
        bad.is_empty(),
        format!("{} rows; violations {bad:?}", reports.len()),
    ));
    env.print();
    finish(&env)
}

pub fn verify(suite: Suite) -> CliResult {
    let mut env = Envelope::new("verify", json!({ "suite": format!("{suite:?}").to_lowercase() }));
    let run = |s: Suite| -> Result<Vec<CheckResult>, CliError> {
        Ok(match s {
            Suite::Polynomial => suites::polynomial()?,
            Suite::Fiber => suites::fiber()?,
            Suite::Divisor => suites::divisor()?,
            Suite::Bounds => suites::bounds()?,
            Suite::All => unreachable!(),
        })
    };
    let selected = match suite {
        Suite::All => vec![Suite::Polynomial, Suite::Fiber, Suite::Divisor, Suite::Bounds],
        s => vec![s],
    };
    let mut per_suite = serde_json::Map::new();
    for s in selected {
        let checks = run(s)?;
        let failed = checks.iter().filter(|c| !c.pass).count();
        per_suite.insert(
            format!("{s:?}").to_lowercase(),
            json!({ "checks": checks.len(), "failed": failed }),
        );
        env.checks.extend(checks);
    }
    env.results = Value::Object(per_suite);
    env.print();
    finish(&env)
}

pub fn validate(path: &Path) -> CliResult {
    let text = std::fs::read_to_string(path)?;
    let file: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| CliError::new(EXIT_PARAMETER, format!("malformed config {}: {e}", path.display())))?;
    let params = FermatParams::new(file.params.p, file.params.m, file.params.s)?;
    let config = FiberConfig::from_document(file.config)?;
    let fiber = FermatFiber::from_config(params, config)?;
    let mut env = Envelope::new("validate", json!({ "config": path.display().to_string() }));
    env.checks = fiber.full_validation();
    env.checks.push(v_relation_check(&fiber));
    env.results = json!({
        "params": params_value(&params),
        "component_count": fiber.config.len(),
        "census": census_value(&fiber),
    });
    env.print();
    finish(&env)
}

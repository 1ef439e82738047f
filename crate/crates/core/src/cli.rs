//! The `nctspin` command line front end.
//!
//! Exit status: `0` when every check passes, `1` when a verification fails
//! (the report is still written), `2` for an invalid configuration.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::nc_torus::{ThetaMatrix, TorusElement};
use crate::rational_oracle::{build_rep, frobenius_residual, RationalTheta};
use crate::spectral::{self, ModeOperator, ModeSpinor};
use crate::spin_cover::{
    describe_covering, deformed_cover, embed_cover, z2prime_fixed_check, SpinStructure,
};
use crate::{sample, splitting};

pub const SCHEMA: &str = "1";
pub const THREADS_ENV: &str = "NCTSPIN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "nctspin", version, about = "Theta-deformed tori with spin structure")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scalar deformation parameter θ_{21} (N = 2)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,

    /// JSON file holding the full skew-symmetric θ matrix
    #[arg(long, global = true)]
    pub theta_file: Option<PathBuf>,

    /// Spin structure bits j_1 ... j_N
    #[arg(long, global = true, num_args = 1.., allow_negative_numbers = true)]
    pub spin: Option<Vec<i64>>,

    /// Grade cutoff for enumerations
    #[arg(long, global = true, default_value_t = 4, allow_negative_numbers = true)]
    pub cutoff: i64,

    /// Eigenvalue cutoff Λ for `spectrum` (defaults to --cutoff)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    /// Residual tolerance (1e-10 for oracle-check, 1e-12 otherwise)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Numerator of θ = p/q for oracle-check
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    pub p: i64,

    /// Denominator of θ = p/q for oracle-check
    #[arg(long, global = true, default_value_t = 5, allow_negative_numbers = true)]
    pub q: i64,

    /// Number of random samples for property checks
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Eigenvalues of the Dirac operator up to Λ
    Spectrum,
    /// Spectral triple axioms for the deformed triple
    Verify,
    /// Covering algebra of a spin structure
    Cover,
    /// Product rule of the θ-deformation on random bigraded operators
    Deform,
    /// Splitting map, spinor bimodule and the θ/2 puzzle
    Split,
    /// Star product against clock-and-shift matrices
    OracleCheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Verify => "verify",
            Command::Cover => "cover",
            Command::Deform => "deform",
            Command::Split => "split",
            Command::OracleCheck => "oracle-check",
        }
    }

    fn needs_rank_two(self) -> bool {
        !matches!(self, Command::Cover | Command::OracleCheck)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A configuration rejected before any computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl ConfigError {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid --{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Validated configuration for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub theta: ThetaMatrix,
    pub spin: SpinStructure,
    pub cutoff: i64,
    pub lambda: f64,
    pub tol: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub rational: RationalTheta,
    pub trials: usize,
}

fn read_theta_file(path: &Path) -> Result<ThetaMatrix, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("theta-file", format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(&text).map_err(|e| ConfigError::new("theta-file", e.to_string()))?;
    ThetaMatrix::new(rows).map_err(|e| ConfigError::new("theta-file", e.to_string()))
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, ConfigError> {
        let theta = match (&cli.theta, &cli.theta_file) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new("theta", "give either --theta or --theta-file, not both"))
            }
            (Some(t), None) => {
                if !t.is_finite() {
                    return Err(ConfigError::new("theta", "must be finite"));
                }
                ThetaMatrix::from_scalar(*t)
            }
            (None, Some(path)) => read_theta_file(path)?,
            (None, None) => ThetaMatrix::zero(2),
        };
        let n = theta.dim();

        let bits = cli.spin.clone().unwrap_or_else(|| vec![0; n]);
        if bits.len() != n {
            return Err(ConfigError::new(
                "spin",
                format!("expected {n} bits to match theta, found {}", bits.len()),
            ));
        }
        let bits = bits
            .into_iter()
            .map(|b| match b {
                0 | 1 => Ok(b as u8),
                _ => Err(ConfigError::new("spin", format!("entries must be 0 or 1, found {b}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let spin = SpinStructure::new(bits).map_err(|e| ConfigError::new("spin", e.to_string()))?;
        if cli.command.needs_rank_two() && n != 2 {
            return Err(ConfigError::new(
                "spin",
                format!("{} requires N = 2, found N = {n}", cli.command.name()),
            ));
        }

        if cli.cutoff < 1 {
            return Err(ConfigError::new("cutoff", format!("must be at least 1, found {}", cli.cutoff)));
        }
        let lambda = cli.lambda.unwrap_or(cli.cutoff as f64);
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(ConfigError::new("lambda", format!("must be positive and finite, found {lambda}")));
        }
        let default_tol = if cli.command == Command::OracleCheck { 1e-10 } else { 1e-12 };
        let tol = cli.tol.unwrap_or(default_tol);
        if !tol.is_finite() || tol <= 0.0 {
            return Err(ConfigError::new("tol", format!("must be positive and finite, found {tol}")));
        }
        if cli.q <= 0 {
            return Err(ConfigError::new("q", format!("must be positive, found {}", cli.q)));
        }
        let rational =
            RationalTheta::new(cli.p, cli.q as u64).map_err(|e| ConfigError::new("q", e.to_string()))?;
        if cli.trials == 0 {
            return Err(ConfigError::new("trials", "must be at least 1"));
        }

        Ok(Self {
            command: cli.command,
            theta,
            spin,
            cutoff: cli.cutoff,
            lambda,
            tol,
            seed: cli.seed,
            output: cli.output.clone(),
            format: cli.format,
            rational,
            trials: cli.trials,
        })
    }

    fn scalar_theta(&self) -> f64 {
        self.theta.scalar().expect("rank two checked during validation")
    }
}

/// Report and verdict of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

fn header(config: &RunConfig) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(config.command.name()));
    map
}

fn finish(mut map: serde_json::Map<String, Value>, body: Value, passed: bool) -> Outcome {
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    map.insert("passed".into(), json!(passed));
    Outcome {
        report: Value::Object(map),
        passed,
    }
}

/// Dispatches to the requested computation.
pub fn run(config: &RunConfig) -> Result<Outcome, Error> {
    let head = header(config);
    match config.command {
        Command::Spectrum => run_spectrum(config, head),
        Command::Verify => run_verify(config, head),
        Command::Cover => run_cover(config, head),
        Command::Deform => run_deform(config, head),
        Command::Split => run_split(config, head),
        Command::OracleCheck => run_oracle(config, head),
    }
}

fn run_spectrum(config: &RunConfig, head: serde_json::Map<String, Value>) -> Result<Outcome, Error> {
    let spec = spectral::spectrum(&config.spin, config.lambda)?;
    let entries: Vec<Value> = spec
        .entries
        .iter()
        .map(|(ev, mult)| json!({"eigenvalue": ev, "multiplicity": mult}))
        .collect();
    let body = json!({
        "spin": config.spin.bits(),
        "lambda": config.lambda,
        "count": spec.total(),
        "kernel_dim": spec.kernel_dim(),
        "min_abs_eigenvalue": spec.min_abs(),
        "weyl_ratio": spec.weyl_ratio(),
        "eigenvalues": entries,
    });
    Ok(finish(head, body, true))
}

fn run_verify(config: &RunConfig, head: serde_json::Map<String, Value>) -> Result<Outcome, Error> {
    let report = spectral::axiom_suite_seeded(
        config.scalar_theta(),
        &config.spin,
        config.cutoff,
        config.tol,
        config.seed,
        config.trials.min(64),
    )?;
    let passed = report.passed;
    let mut body = serde_json::to_value(&report).expect("report serializes");
    if let Value::Object(m) = &mut body {
        m.remove("passed");
    }
    Ok(finish(head, body, passed))
}

fn run_cover(config: &RunConfig, head: serde_json::Map<String, Value>) -> Result<Outcome, Error> {
    let alg = deformed_cover(&config.theta, &config.spin)?;
    let x = config.spin.twist_set();
    let expected_group = if x.is_empty() { 1 } else { 1usize << (x.len() - 1) };

    let mut rng = sample::rng(config.seed);
    let mut hom_residual: f64 = 0.0;
    let mut in_subalgebra = true;
    for _ in 0..config.trials {
        let a = sample::element(&mut rng, &config.theta, 6, 4);
        let b = sample::element(&mut rng, &config.theta, 6, 4);
        let ea = embed_cover(&alg, &a)?;
        let eb = embed_cover(&alg, &b)?;
        let prod = embed_cover(&alg, &a.star_product(&b)?)?;
        hom_residual = hom_residual
            .max(prod.max_abs_diff(&ea.star_product(&eb)?)?)
            .max(embed_cover(&alg, &a.involution())?.max_abs_diff(&ea.involution())?);
        in_subalgebra &= alg.contains(&ea) && alg.contains(&prod);
    }
    let unit = embed_cover(&alg, &TorusElement::one(config.theta.clone()))?;
    hom_residual = hom_residual.max(unit.max_abs_diff(&alg.one())?);

    let fixed = if config.spin.dim() == 2 {
        Some(z2prime_fixed_check(&alg, config.cutoff)?)
    } else {
        None
    };
    let passed = hom_residual <= config.tol
        && in_subalgebra
        && alg.group().len() == expected_group
        && fixed.as_ref().is_none_or(|f| f.equal);
    let body = json!({
        "spin": config.spin.bits(),
        "theta": config.theta.rows(),
        "covering": describe_covering(&config.spin),
        "theta_tilde": alg.theta_tilde().rows(),
        "theta_tilde_scalar": alg.theta_tilde().scalar(),
        "group": alg.group(),
        "group_order": alg.group().len(),
        "kernel_action": alg.kernel_action(),
        "homomorphism_residual": hom_residual,
        "image_in_fixed_subalgebra": in_subalgebra,
        "fixed_point_check": fixed,
    });
    Ok(finish(head, body, passed))
}

fn run_deform(config: &RunConfig, head: serde_json::Map<String, Value>) -> Result<Outcome, Error> {
    let theta = config.scalar_theta();
    let mut rng = sample::rng(config.seed);
    let mut product_rule: f64 = 0.0;
    for _ in 0..config.trials {
        let k = ModeOperator::random(&mut rng, 3, 3);
        let k2 = ModeOperator::random(&mut rng, 3, 3);
        let psi = ModeSpinor::random(&mut rng, &config.spin, 6, config.cutoff)?;
        product_rule = product_rule.max(spectral::product_rule_residual(&k, &k2, theta, &psi));
    }
    let u1 = spectral::deformed_rep(&TorusElement::generator(config.theta.clone(), 0)?)?;
    let u2 = spectral::deformed_rep(&TorusElement::generator(config.theta.clone(), 1)?)?;
    let mut commutation: f64 = 0.0;
    for _ in 0..config.trials.min(20) {
        let psi = ModeSpinor::random(&mut rng, &config.spin, 6, config.cutoff)?;
        let lhs = u2.apply(&u1.apply(&psi));
        let rhs = u1.apply(&u2.apply(&psi)).scale(crate::nc_torus::turn_phase(theta));
        commutation = commutation.max(lhs.sub(&rhs).sup_norm());
    }
    let passed = product_rule <= config.tol && commutation <= config.tol;
    let body = json!({
        "spin": config.spin.bits(),
        "theta": theta,
        "trials": config.trials,
        "product_rule_residual": product_rule,
        "generator_commutation_residual": commutation,
    });
    Ok(finish(head, body, passed))
}

fn run_split(config: &RunConfig, head: serde_json::Map<String, Value>) -> Result<Outcome, Error> {
    let theta = config.scalar_theta();
    let mut rng = sample::rng(config.seed);
    let mut kappa_residual: f64 = 0.0;
    for _ in 0..config.trials {
        let a = sample::element(&mut rng, &config.theta, 6, 4);
        let b = sample::element(&mut rng, &config.theta, 6, 4);
        let lhs = splitting::kappa(&a.star_product(&b)?);
        let rhs = splitting::kappa(&a).product(&splitting::kappa(&b))?;
        kappa_residual = kappa_residual.max(lhs.max_abs_diff(&rhs)?);
    }
    let fixed = splitting::fixed_point_basis(2, config.cutoff);
    let side = (2 * config.cutoff + 1) as usize;
    let fixed_is_diagonal = fixed.len() == side * side && fixed.iter().all(|(a, b)| a == b);

    let basis = splitting::spinor_bimodule_basis(&config.spin, theta, config.cutoff)?;
    let lambda = config.lambda.min(config.cutoff as f64);
    let spectrum_matches = splitting::restricted_spectrum_matches(&config.spin, theta, lambda, config.tol)?;
    let puzzle = splitting::puzzle_report(theta)?;

    let r = &basis.report;
    let passed = kappa_residual <= config.tol
        && fixed_is_diagonal
        && r.partners_span
        && r.free_left
        && r.free_right
        && spectrum_matches;
    let body = json!({
        "spin": config.spin.bits(),
        "theta": theta,
        "cutoff": config.cutoff,
        "kappa_residual": kappa_residual,
        "fixed_point_basis_size": fixed.len(),
        "fixed_point_basis_is_diagonal": fixed_is_diagonal,
        "bimodule": r,
        "restricted_spectrum_lambda": lambda,
        "restricted_spectrum_matches": spectrum_matches,
        "puzzle": puzzle,
    });
    Ok(finish(head, body, passed))
}

fn run_oracle(config: &RunConfig, head: serde_json::Map<String, Value>) -> Result<Outcome, Error> {
    let rep = build_rep(config.rational);
    let theta = config.rational.theta();
    let mut rng = sample::rng(config.seed);
    let mut product: f64 = 0.0;
    let mut adjoint: f64 = 0.0;
    for _ in 0..config.trials {
        let a = sample::element(&mut rng, &theta, 20, 8);
        let b = sample::element(&mut rng, &theta, 20, 8);
        let ra = rep.represent(&a)?;
        let rb = rep.represent(&b)?;
        product = product.max(frobenius_residual(&rep.represent(&a.star_product(&b)?)?, &(&ra * &rb)));
        adjoint = adjoint.max(frobenius_residual(&rep.represent(&a.involution())?, &ra.adjoint()));
    }
    let passed = product <= config.tol && adjoint <= config.tol;
    let body = json!({
        "p": config.rational.p(),
        "q": config.rational.q(),
        "trials": config.trials,
        "product_residual": product,
        "adjoint_residual": adjoint,
        "max_residual": product.max(adjoint),
    });
    Ok(finish(head, body, passed))
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        other => out.push((prefix.to_string(), csv_field(other))),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a report. Spectrum reports become an `eigenvalue,multiplicity`
/// table; every other report is flattened into `key,value` rows.
pub fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            if let Some(rows) = outcome.report.get("eigenvalues").and_then(Value::as_array) {
                s.push_str("eigenvalue,multiplicity\n");
                for r in rows {
                    s.push_str(&format!("{},{}\n", r["eigenvalue"], r["multiplicity"]));
                }
            } else {
                let mut rows = Vec::new();
                flatten("", &outcome.report, &mut rows);
                s.push_str("key,value\n");
                for (k, v) in rows {
                    s.push_str(&format!("{},{}\n", quote(&k), quote(&v)));
                }
            }
            s
        }
    }
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError::new("NCTSPIN_THREADS", format!("must be a positive integer, found {raw:?}")))?;
    // A pool built earlier in the process is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Entry point shared by the binary: parses arguments, runs, writes the report.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let config = match configure_threads().and_then(|()| RunConfig::from_cli(&cli)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&render(&outcome, config.format), config.output.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

//! Command-line front end. Data goes to stdout (or `--output`), diagnostics
//! to stderr. Exit codes: 0 success, 1 invalid parameters, 2 a mathematical
//! or internal inconsistency.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{AlgebraError, Parity, SuperAlgebra};
use crate::cohomology::{full_derivation_dims, h1, psi1_report, psi_regime, verify_psi, CohomologyError, ORACLE_MAX_P};
use crate::enveloping::{Character, HighestWeight, VermaModule};
use crate::scan::{all_triples, run_scan, to_csv, valid_alphas, Method, ScanConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARAMS: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

/// Largest modulus accepted on the command line.
pub const MAX_P: u32 = 31;

#[derive(Debug, Parser)]
#[command(name = "d21", version, about = "H¹ of baby Verma modules for D(2,1;α) over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Algebra axioms, plus module axioms at one (λ, χ).
    Check(PointArgs),
    /// Weight decomposition of Z_χ(λ) as JSON.
    Verma(PointArgs),
    /// H¹ at a single point.
    H1(H1Args),
    /// H¹ over a parameter grid, as CSV.
    Scan(ScanArgs),
    /// Check that ψ_k is an outer derivation inside the computed H¹.
    VerifyPsi(PsiArgs),
    /// How the printed parameters of ψ₁ compare with dim H¹.
    Psi1Report(AlgebraArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Graded,
    Full,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Graded => Method::Graded,
            MethodArg::Full => Method::Full,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct AlgebraArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    lambda: String,
    #[arg(long = "chi-f", default_value = "0,0,0", allow_hyphen_values = true)]
    chi_f: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct H1Args {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_enum, default_value = "graded")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    p: u64,
    /// A residue, or `all` for every α ≠ 0, -1.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    alpha: String,
    /// A triple, or `all` for every λ ∈ F_p³.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    lambda: String,
    #[arg(long = "chi-f", default_value = "0,0,0", allow_hyphen_values = true)]
    chi_f: String,
    #[arg(long, value_enum, default_value = "graded")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads.
    #[arg(long, env = "H1_JOBS")]
    jobs: Option<usize>,
    /// Also run the coefficient lemma checks; violations exit 2.
    #[arg(long)]
    lemmas: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PsiArgs {
    #[arg(long)]
    which: u8,
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    /// Defaults to the weight the map is defined at.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long = "chi-f", default_value = "0,0,0", allow_hyphen_values = true)]
    chi_f: String,
    /// Comma-separated parameters; without it each parameter is set to 1 in turn.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn params(message: impl Into<String>) -> Self {
        Self { code: EXIT_PARAMS, message: message.into() }
    }

    fn inconsistent(message: impl Into<String>) -> Self {
        Self { code: EXIT_INCONSISTENT, message: message.into() }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Failure::params(e.to_string())
    }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        if e.is_parameter_error() {
            Failure::params(e.to_string())
        } else {
            Failure::inconsistent(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn algebra(p: u64, alpha: i64) -> Result<SuperAlgebra, Failure> {
    if p > MAX_P as u64 {
        return Err(Failure::params(format!("p = {p} exceeds the supported maximum {MAX_P}")));
    }
    Ok(SuperAlgebra::new(p, alpha)?)
}

fn parse_triple(s: &str, what: &str) -> Result<[i64; 3], Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::params(format!("{what} must be three comma-separated integers, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0i64; 3];
    for (o, part) in out.iter_mut().zip(parts) {
        *o = part.parse().map_err(|_| bad())?;
    }
    Ok(out)
}

fn module_at(alg: &SuperAlgebra, lambda: &str, chi_f: &str) -> Result<VermaModule, Failure> {
    let f = alg.field();
    let l = parse_triple(lambda, "--lambda")?;
    let c = parse_triple(chi_f, "--chi-f")?;
    Ok(VermaModule::new(alg, HighestWeight::new(l, f), Character::new(c, f)))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn cmd_check(a: &PointArgs, err: &mut dyn Write) -> Outcome {
    let alg = algebra(a.p, a.alpha)?;
    let module = module_at(&alg, &a.lambda, &a.chi_f)?;
    let report = alg.check_axioms();
    let module_report = module.check_axioms();
    for v in &report.violations {
        writeln!(err, "algebra: {v}").ok();
    }
    for v in &module_report {
        writeln!(err, "module: {v}").ok();
    }
    if !report.is_empty() || !module_report.is_empty() {
        return Err(Failure::inconsistent(format!(
            "{} algebra and {} module violations",
            report.violations.len(),
            module_report.len()
        )));
    }
    Ok(pretty(&json!({
        "p": alg.p(),
        "alpha": alg.alpha(),
        "lambda": module.lambda().0,
        "chi_f": module.chi().chi_f,
        "algebra_violations": 0,
        "module_violations": 0,
    })))
}

fn cmd_verma(a: &PointArgs) -> Outcome {
    let alg = algebra(a.p, a.alpha)?;
    let module = module_at(&alg, &a.lambda, &a.chi_f)?;
    Ok(pretty(&module.weight_decomposition_json()))
}

fn check_full_size(method: Method, p: u32) -> Result<(), Failure> {
    if method != Method::Graded && p > ORACLE_MAX_P {
        return Err(Failure::params(format!("--method full requires p ≤ {ORACLE_MAX_P}")));
    }
    Ok(())
}

fn cmd_h1(a: &H1Args) -> Outcome {
    let alg = algebra(a.point.p, a.point.alpha)?;
    let method = Method::from(a.method);
    check_full_size(method, alg.p())?;
    let module = module_at(&alg, &a.point.lambda, &a.point.chi_f)?;
    let mut out = Value::Null;
    let mut sdim = None;
    if method != Method::Full {
        let r = h1(&module)?;
        sdim = Some(r.sdim());
        out = r.to_json();
    }
    if method != Method::Graded {
        let even = full_derivation_dims(&module, Parity::Even)?;
        let odd = full_derivation_dims(&module, Parity::Odd)?;
        let full = (even.h1(), odd.h1());
        if let Some(g) = sdim {
            if g != full {
                return Err(Failure::inconsistent(format!("graded {g:?} differs from full {full:?}")));
            }
        }
        if out.is_null() {
            out = json!({
                "p": alg.p(),
                "alpha": alg.alpha(),
                "lambda": module.lambda().0,
                "chi_f": module.chi().chi_f,
                "h1": {"even": full.0, "odd": full.1},
            });
        }
        out["full"] = json!({"even": even, "odd": odd});
        sdim = Some(full);
    }
    match a.format {
        Format::Json => Ok(pretty(&out)),
        Format::Csv => {
            let (e, o) = sdim.unwrap();
            let [l1, l2, l3] = module.lambda().0;
            let [c1, c2, c3] = module.chi().chi_f;
            Ok(format!(
                "{}\n{},{},{l1},{l2},{l3},{c1},{c2},{c3},{e},{o}\n",
                crate::scan::CSV_HEADER,
                alg.p(),
                alg.alpha()
            ))
        }
    }
}

fn cmd_scan(a: &ScanArgs, err: &mut dyn Write) -> Outcome {
    if a.p > MAX_P as u64 {
        return Err(Failure::params(format!("p = {} exceeds the supported maximum {MAX_P}", a.p)));
    }
    let field = crate::field::PrimeField::new(a.p).map_err(|e| Failure::params(e.to_string()))?;
    let p = field.modulus();
    let method = Method::from(a.method);
    check_full_size(method, p)?;
    let alphas = if a.alpha == "all" {
        valid_alphas(p)
    } else {
        let x: i64 = a.alpha.parse().map_err(|_| Failure::params(format!("bad --alpha {:?}", a.alpha)))?;
        // validates α ∉ {0, -1}
        vec![SuperAlgebra::new(a.p, x)?.alpha()]
    };
    let lambdas = if a.lambda == "all" {
        all_triples(p)
    } else {
        vec![parse_triple(&a.lambda, "--lambda")?.map(|x| field.reduce(x))]
    };
    let chis = vec![parse_triple(&a.chi_f, "--chi-f")?.map(|x| field.reduce(x))];
    let jobs = a.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let cfg = ScanConfig { p, alphas, lambdas, chis, method, lemmas: a.lemmas };
    let rows = run_scan(&cfg, jobs)?;
    let violations: usize = rows.iter().map(|r| r.lemma_violations.len()).sum();
    for r in &rows {
        for v in &r.lemma_violations {
            writeln!(err, "α={} λ={:?} χ={:?}: {v}", r.alpha, r.lambda, r.chi_f).ok();
        }
    }
    let body = match a.format {
        Format::Csv => to_csv(&rows),
        Format::Json => pretty(&json!({
            "rows": rows,
            "nonzero": rows.iter().filter(|r| r.is_nonzero()).count(),
        })),
    };
    if violations > 0 {
        return Err(Failure::inconsistent(format!("{violations} lemma violations")));
    }
    Ok(body)
}

fn cmd_verify_psi(a: &PsiArgs, err: &mut dyn Write) -> Outcome {
    let alg = algebra(a.p, a.alpha)?;
    let (regime, parity) = psi_regime(a.which, alg.p())?;
    let lambda = match &a.lambda {
        Some(s) => s.clone(),
        None => format!("{},{},{}", regime[0], regime[1], regime[2]),
    };
    let module = module_at(&alg, &lambda, &a.chi_f)?;
    let param_sets: Vec<Vec<u32>> = match &a.params {
        Some(s) => {
            let parsed: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
            let parsed = parsed.map_err(|_| Failure::params(format!("bad --params {s:?}")))?;
            vec![parsed.iter().map(|&x| alg.field().reduce(x)).collect()]
        }
        None => {
            let n = if a.which == 1 { 5 } else { 1 };
            (0..n)
                .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
                .collect()
        }
    };
    let mut results = Vec::new();
    let mut failed = false;
    for params in &param_sets {
        let v = verify_psi(a.which, params, &module)?;
        if !v.passed() {
            failed = true;
            writeln!(err, "ψ_{} with {params:?}: outer={}, in H¹ span={}", a.which, v.outer, v.in_h1_span).ok();
        }
        results.push(json!({
            "params": params,
            "completion": v.outcome.path,
            "outer": v.outer,
            "in_h1_span": v.in_h1_span,
            "passed": v.passed(),
        }));
    }
    let out = pretty(&json!({
        "which": a.which,
        "p": alg.p(),
        "alpha": alg.alpha(),
        "lambda": module.lambda().0,
        "parity": parity,
        "results": results,
    }));
    if failed {
        return Err(Failure::inconsistent(format!("ψ_{} failed verification\n{out}", a.which)));
    }
    Ok(out)
}

fn cmd_psi1_report(a: &AlgebraArgs) -> Outcome {
    let alg = algebra(a.p, a.alpha)?;
    let f = alg.field();
    let lambda = HighestWeight::new([2, -2, -2], f);
    let module = VermaModule::new(&alg, lambda, Character::ZERO);
    let report = psi1_report(&module)?;
    Ok(pretty(&json!({
        "p": alg.p(),
        "alpha": alg.alpha(),
        "lambda": lambda.0,
        "report": report,
    })))
}

fn emit(body: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::params(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(body.as_bytes()).map_err(|e| Failure::params(e.to_string())),
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMS } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                err.write_all(rendered.as_bytes()).ok();
            } else {
                out.write_all(rendered.as_bytes()).ok();
            }
            return code;
        }
    };
    let (result, path) = match &cli.command {
        Command::Check(a) => (cmd_check(a, err), a.output.as_ref()),
        Command::Verma(a) => (cmd_verma(a), a.output.as_ref()),
        Command::H1(a) => (cmd_h1(a), a.point.output.as_ref()),
        Command::Scan(a) => (cmd_scan(a, err), a.output.as_ref()),
        Command::VerifyPsi(a) => (cmd_verify_psi(a, err), a.output.as_ref()),
        Command::Psi1Report(a) => (cmd_psi1_report(a), a.output.as_ref()),
    };
    match result.and_then(|body| emit(&body, path, out)) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            writeln!(err, "error: {}", f.message).ok();
            f.code
        }
    }
}

//! Front end for `rees-core`. `run` parses arguments, executes one command
//! and writes structured output to `out` and a short summary to `log`.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use rees_core::adjoint::adjoint_report;
use rees_core::bipoly::{BiPoly, TPoly};
use rees_core::exactmath::{Field, Scalar};
use rees_core::mu2sing::VerySingularContext;
use rees_core::oracle::{default_box, mingen_table, MinGenTable};
use rees_core::report::{generate, verify_generators, Check, GeneratorReport};
use rees_core::sample::{sample_mild, sample_very_singular, seeded_rng};
use rees_core::syzygy::{
    check_inverse, classify, implicit_equation, inverse_map, mu_basis, Parametrization,
};
use rees_core::ReesError;

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "rees", version, about = "Rees algebra generators of rational plane curves")]
pub struct Cli {
    /// Coefficient field: `q` or `fp:<prime>`; overrides the input file.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub out: OutFormat,
    /// Largest T-degree of the oracle box.
    #[arg(long, global = true)]
    pub imax: Option<u32>,
    /// Largest X-degree of the oracle box.
    #[arg(long, global = true)]
    pub jmax: Option<u32>,
    /// Seed for the sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// mu-basis P, Q of the curve.
    Mubasis { input: PathBuf },
    /// Implicit equation and properness degree.
    Implicitize { input: PathBuf },
    /// Singularity class and normalising coordinate change.
    Classify { input: PathBuf },
    /// Birational inverse of a proper parametrisation.
    Inverse { input: PathBuf },
    /// Minimal generators of the kernel for mu = 2, with verification.
    Gens { input: PathBuf },
    /// Minimal generator counts by bidegree.
    OracleTable { input: PathBuf },
    /// dim K_{1,l}, dim Z_l and the bound, for a very singular curve.
    AdjointDims {
        input: PathBuf,
        /// Largest l (default d + 2).
        #[arg(long)]
        lmax: Option<u32>,
    },
    /// Re-checks a report written by `gens`.
    Verify { report: PathBuf },
    /// Random proper mu = 2 curve without a very singular point.
    SampleMild {
        #[arg(long)]
        degree: u32,
    },
    /// Random proper mu = 2 curve with a very singular point.
    SampleVerysingular {
        #[arg(long)]
        degree: u32,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Core(ReesError),
}

impl From<ReesError> for CliError {
    fn from(e: ReesError) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Input file layout: `{ "field": "q", "d": 5, "u0": [...], "u1": [...],
/// "u2": [...] }`, coefficient `a` of `u_k` multiplying `T0^(d-a) T1^a`.
/// Coefficients are JSON integers or strings such as `"-3/4"`.
#[derive(Deserialize, Debug)]
pub struct CurveInput {
    #[serde(default)]
    pub field: Option<String>,
    pub d: u32,
    pub u0: Vec<Value>,
    pub u1: Vec<Value>,
    pub u2: Vec<Value>,
}

fn coefficient_text(v: &Value) -> CliResult<String> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(CliError::Input(format!("coefficient {other} is not an integer or a string"))),
    }
}

impl CurveInput {
    pub fn to_parametrization(&self, field_override: Option<Field>) -> Result<Parametrization, String> {
        self.build(field_override).map_err(|e| match e {
            CliError::Input(s) => s,
            CliError::Core(e) => e.to_string(),
        })
    }

    fn build(&self, field_override: Option<Field>) -> CliResult<Parametrization> {
        let field = match field_override {
            Some(f) => f,
            None => match &self.field {
                Some(s) => s.parse()?,
                None => Field::Rational,
            },
        };
        let mut comps = Vec::with_capacity(3);
        for (k, list) in [&self.u0, &self.u1, &self.u2].into_iter().enumerate() {
            if list.len() != self.d as usize + 1 {
                return Err(CliError::Input(format!(
                    "u{k} has {} coefficients, expected d + 1 = {}",
                    list.len(),
                    self.d + 1
                )));
            }
            let coeffs = list
                .iter()
                .map(|v| Ok(field.parse_scalar(&coefficient_text(v)?)?))
                .collect::<CliResult<Vec<Scalar>>>()?;
            comps.push(TPoly::new(field, coeffs)?);
        }
        let [a, b, c]: [TPoly; 3] = comps.try_into().unwrap();
        Ok(Parametrization::new([a, b, c])?)
    }
}

fn curve_json(par: &Parametrization) -> Value {
    let list = |t: &TPoly| t.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let u = par.components();
    json!({
        "field": par.field().to_string(),
        "d": par.degree(),
        "u0": list(&u[0]),
        "u1": list(&u[1]),
        "u2": list(&u[2]),
    })
}

fn read_source(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_field(s: &Option<String>) -> CliResult<Option<Field>> {
    Ok(match s {
        Some(s) => Some(s.parse()?),
        None => None,
    })
}

fn load_curve(path: &PathBuf, field: Option<Field>) -> CliResult<Parametrization> {
    let text = read_source(path)?;
    let input: CurveInput =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("curve input: {e}")))?;
    input.build(field)
}

fn poly(g: &BiPoly) -> String {
    g.to_canonical_string()
}

fn table_json(t: &MinGenTable) -> Value {
    let counts: Vec<Value> = t
        .counts
        .iter()
        .map(|(&(i, j), &n)| json!({ "i": i, "j": j, "count": n }))
        .collect();
    json!({
        "imax": t.i_max,
        "jmax": t.j_max,
        "counts": counts,
        "bidegrees": t.bidegrees(),
        "total": t.total(),
    })
}

fn checks_json(checks: &[Check]) -> Vec<Value> {
    checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect()
}

/// JSON form of a generator report; `elapsed_ms` is the only
/// nondeterministic field.
pub fn report_json(par: &Parametrization, rep: &GeneratorReport) -> Value {
    let gens: Vec<Value> = rep
        .generators
        .iter()
        .map(|g| {
            let (i, j) = g.bidegree();
            json!({
                "label": g.label,
                "bidegree": [i, j],
                "poly": poly(&g.poly),
                "in_kernel": g.in_kernel,
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "gens",
        "input": curve_json(par),
        "curve": {
            "d": rep.summary.d,
            "mu": rep.summary.mu,
            "properness_degree": rep.summary.properness_degree,
            "class": rep.summary.kind.as_str(),
        },
        "implicit_equation": poly(&rep.equation),
        "generators": gens,
        "predicted_bidegrees": rep.predicted,
        "table": table_json(&rep.table),
        "checks": checks_json(&rep.checks),
        "warnings": rep.warnings,
        "all_pass": rep.all_pass(),
        "elapsed_ms": rep.elapsed_ms as u64,
    })
}

fn report_text(rep: &GeneratorReport) -> String {
    let mut s = format!(
        "d = {}, mu = {}, class {}\nE = {}\n",
        rep.summary.d,
        rep.summary.mu,
        rep.summary.kind.as_str(),
        rep.equation
    );
    for g in &rep.generators {
        let (i, j) = g.bidegree();
        s += &format!("{:<12} ({i},{j})  {}\n", g.label, g.poly);
    }
    s += &format!("{}", rep.table);
    for c in &rep.checks {
        s += &format!("[{}] {} {}\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    for w in &rep.warnings {
        s += &format!("warning: {w}\n");
    }
    s
}

struct Output {
    value: Value,
    text: String,
    summary: String,
    code: i32,
}

impl Output {
    fn ok(value: Value, text: String, summary: String) -> Self {
        Output {
            value,
            text,
            summary,
            code: EXIT_OK,
        }
    }
}

fn bbox(cli: &Cli, d: u32, mu: u32) -> (u32, u32) {
    let (i, j) = default_box(d, mu);
    (cli.imax.unwrap_or(i), cli.jmax.unwrap_or(j))
}

fn execute(cli: &Cli) -> CliResult<Output> {
    let field = parse_field(&cli.field)?;
    match &cli.command {
        Command::Mubasis { input } => {
            let par = load_curve(input, field)?;
            let mb = mu_basis(&par)?;
            let l = mb.hilbert_burch_constant(&par)?;
            Ok(Output::ok(
                json!({
                    "schema": SCHEMA, "command": "mubasis", "input": curve_json(&par),
                    "mu": mb.mu, "p": poly(&mb.p), "q": poly(&mb.q),
                    "hilbert_burch_constant": l.to_string(),
                }),
                format!("mu = {}\nP = {}\nQ = {}\n", mb.mu, mb.p, mb.q),
                format!("mu = {}", mb.mu),
            ))
        }
        Command::Implicitize { input } => {
            let par = load_curve(input, field)?;
            let mb = mu_basis(&par)?;
            let imp = implicit_equation(&par, &mb)?;
            Ok(Output::ok(
                json!({
                    "schema": SCHEMA, "command": "implicitize", "input": curve_json(&par),
                    "equation": poly(&imp.equation), "resultant": poly(&imp.resultant),
                    "properness_degree": imp.properness_degree,
                }),
                format!("E = {}\nproperness degree {}\n", imp.equation, imp.properness_degree),
                format!("properness degree {}", imp.properness_degree),
            ))
        }
        Command::Classify { input } => {
            let par = load_curve(input, field)?;
            let mb = mu_basis(&par)?;
            let cls = classify(&mb, par.degree())?;
            let change = cls.change.as_ref().map(|m| {
                (0..3)
                    .map(|r| m.row(r).iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            let axial = cls.axial.as_ref().map(|(a, b)| vec![a.to_string(), b.to_string()]);
            Ok(Output::ok(
                json!({
                    "schema": SCHEMA, "command": "classify", "input": curve_json(&par),
                    "mu": mb.mu, "class": cls.kind.as_str(), "change": change,
                    "axial": axial, "note": cls.note,
                }),
                format!("mu = {}, class {}\n", mb.mu, cls.kind.as_str()),
                cls.kind.as_str().to_string(),
            ))
        }
        Command::Inverse { input } => {
            let par = load_curve(input, field)?;
            let mb = mu_basis(&par)?;
            let imp = implicit_equation(&par, &mb)?;
            if !imp.is_proper() {
                return Err(ReesError::precondition(
                    "proper parametrization",
                    format!("properness degree {}", imp.properness_degree),
                )
                .into());
            }
            let inv = inverse_map(&par, &imp.equation)?;
            let ok = check_inverse(&inv, &mb, &imp.equation)?;
            let mut out = Output::ok(
                json!({
                    "schema": SCHEMA, "command": "inverse", "input": curve_json(&par),
                    "a": poly(&inv.a), "b": poly(&inv.b), "g": poly(&inv.g), "verified": ok,
                }),
                format!("T0 : T1 = {} : {}\n", inv.a, inv.b),
                format!("inverse of degree {}", inv.degree()),
            );
            if !ok {
                out.code = EXIT_VERIFICATION;
            }
            Ok(out)
        }
        Command::Gens { input } => {
            let par = load_curve(input, field)?;
            let b = bbox(cli, par.degree(), 2);
            let rep = generate(&par, Some(b))?;
            let pass = rep.all_pass();
            Ok(Output {
                value: report_json(&par, &rep),
                text: report_text(&rep),
                summary: format!(
                    "{} generators, {}",
                    rep.generators.len(),
                    if pass { "all checks pass" } else { "verification FAILED" }
                ),
                code: if pass { EXIT_OK } else { EXIT_VERIFICATION },
            })
        }
        Command::OracleTable { input } => {
            let par = load_curve(input, field)?;
            let mu = mu_basis(&par)?.mu;
            let (i, j) = bbox(cli, par.degree(), mu);
            let t = mingen_table(&par, i, j)?;
            Ok(Output::ok(
                json!({
                    "schema": SCHEMA, "command": "oracle-table", "input": curve_json(&par),
                    "table": table_json(&t),
                }),
                format!("{t}bidegrees {:?}\n", t.bidegrees()),
                format!("{} generators in box ({i}, {j})", t.total()),
            ))
        }
        Command::AdjointDims { input, lmax } => {
            let par = load_curve(input, field)?;
            let ctx = VerySingularContext::new(&par)?;
            let rep = adjoint_report(&ctx, 0..=lmax.unwrap_or(ctx.d + 2))?;
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "l": r.l, "k1_formula": r.k1_formula, "k1_oracle": r.k1_oracle,
                        "z_dim": r.z_dim, "bound": r.bound, "bound_attained": r.bound_attained(),
                    })
                })
                .collect();
            let mut text = String::from("   l  K1(formula)  K1(oracle)  dim Z  bound\n");
            for r in &rep.rows {
                text += &format!(
                    "{:>4} {:>12} {:>11} {:>6} {:>6}\n",
                    r.l, r.k1_formula, r.k1_oracle, r.z_dim, r.bound
                );
            }
            let agree = rep.rows.iter().all(|r| r.formula_matches());
            let mut out = Output::ok(
                json!({
                    "schema": SCHEMA, "command": "adjoint-dims", "input": curve_json(&par),
                    "d": rep.d, "rows": rows, "formula_matches": agree,
                }),
                text,
                format!(
                    "dim K_(1,l) {} the closed form",
                    if agree { "matches" } else { "DIFFERS from" }
                ),
            );
            if !agree {
                out.code = EXIT_VERIFICATION;
            }
            Ok(out)
        }
        Command::Verify { report } => verify(&read_source(report)?, field),
        Command::SampleMild { degree } | Command::SampleVerysingular { degree } => {
            let f = field.unwrap_or_else(Field::default_prime);
            let mut rng = seeded_rng(cli.seed);
            let par = if matches!(cli.command, Command::SampleMild { .. }) {
                sample_mild(*degree, f, &mut rng)?
            } else {
                sample_very_singular(*degree, f, &mut rng)?
            };
            let v = curve_json(&par);
            let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
            Ok(Output::ok(v, text, format!("sampled degree {degree} curve over {f}")))
        }
    }
}

fn verify(text: &str, field: Option<Field>) -> CliResult<Output> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("report: {e}")))?;
    if v["schema"] != json!(SCHEMA) {
        return Err(CliError::Input(format!("unsupported report schema {}", v["schema"])));
    }
    let input: CurveInput = serde_json::from_value(v["input"].clone())
        .map_err(|e| CliError::Input(format!("report input: {e}")))?;
    let par = input.build(field)?;
    let f = par.field();
    let mut gens = Vec::new();
    for g in v["generators"].as_array().ok_or_else(|| CliError::Input("missing generators".into()))? {
        let s = g["poly"].as_str().ok_or_else(|| CliError::Input("generator without poly".into()))?;
        gens.push(BiPoly::parse(f, s, (0, 0))?);
    }
    let dim = |k: &str| v["table"][k].as_u64().map(|x| x as u32);
    let b = match (dim("imax"), dim("jmax")) {
        (Some(i), Some(j)) => Some((i, j)),
        _ => None,
    };
    let mut checks = verify_generators(&par, &gens, b)?;
    let mb = mu_basis(&par)?;
    let e = implicit_equation(&par, &mb)?.equation;
    let saved = v["implicit_equation"].as_str().map(|s| BiPoly::parse(f, s, (0, 0)));
    let same = matches!(saved, Some(Ok(ref s)) if s.ratio(&e).is_some());
    checks.push(Check {
        name: "implicit equation".into(),
        passed: same,
        detail: String::new(),
    });
    let pass = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &checks {
        text += &format!("[{}] {} {}\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(Output {
        value: json!({
            "schema": SCHEMA, "command": "verify", "checks": checks_json(&checks), "all_pass": pass,
        }),
        text,
        summary: format!("verify: {}", if pass { "pass" } else { "FAILED" }),
        code: if pass { EXIT_OK } else { EXIT_VERIFICATION },
    })
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Input(_) => EXIT_PRECONDITION,
        CliError::Core(ReesError::Verification(_)) => EXIT_VERIFICATION,
        CliError::Core(_) => EXIT_PRECONDITION,
    }
}

/// Runs one command; returns the process exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, log: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(log, "{e}");
            return if e.use_stderr() { EXIT_PRECONDITION } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let written = match cli.out {
                OutFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.value).unwrap()),
                OutFormat::Text => write!(out, "{}", o.text),
            };
            if written.is_err() {
                return EXIT_INTERNAL;
            }
            let _ = writeln!(log, "{}", o.summary);
            o.code
        }
        Err(e) => {
            let msg = match &e {
                CliError::Input(s) => s.clone(),
                CliError::Core(e) => e.to_string(),
            };
            let _ = writeln!(log, "error: {msg}");
            exit_code(&e)
        }
    }
}

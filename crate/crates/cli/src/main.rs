use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use constacyclic::codes::{self, ConstacyclicCode, Family};
use constacyclic::equivalence;
use constacyclic::factorizer::{self, oracle, Factorization, Params};
use constacyclic::verify::{self, VerifyOptions};
use constacyclic::{Elem, Error};

const EXIT_VALIDATION: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "consta", version, about = "Constacyclic codes of length 2ℓ^m p^n over F_q")]
struct Cli {
    /// Emit newline-delimited JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the randomized oracle.
    #[arg(long, global = true, env = "CONSTA_SEED", default_value_t = oracle::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Characteristic of the field.
    #[arg(long)]
    p: u64,
    /// The field is F_{p^a}.
    #[arg(long, default_value_t = 1)]
    a: u32,
    /// Odd prime ℓ != p.
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
}

#[derive(Args, Clone)]
struct LambdaArgs {
    /// λ = ξ^{j p^n} for class index j.
    #[arg(long = "class", alias = "lambda-class", default_value_t = 0, conflicts_with = "lambda_raw")]
    class: u64,
    /// λ given as a field element (integer encoding of its coordinates).
    #[arg(long)]
    lambda_raw: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cyclic,
    Negacyclic,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor X^N - λ into monic irreducibles.
    Factor {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        lambda: LambdaArgs,
        /// Cross-check against the generic factoring oracle.
        #[arg(long)]
        verify: bool,
    },
    /// List the λ-classes and their representatives.
    Classes {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Dual of the code with the given generator exponents.
    Dual {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u64>,
    },
    /// Enumerate LCD cyclic or negacyclic codes.
    Lcd {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Maximum number of records.
        #[arg(long, default_value_t = 100_000)]
        cap: u64,
    },
    /// Enumerate self-dual negacyclic codes.
    Selfdual {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 100_000)]
        cap: u64,
    },
    /// Minimum distance by exhaustive enumeration.
    Mindist {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u64>,
        /// Largest number of codewords to enumerate.
        #[arg(long, default_value_t = codes::DEFAULT_DISTANCE_BUDGET)]
        budget: u64,
    },
    /// Run all checks over a parameter grid.
    VerifyGrid {
        /// JSON array of {"p","a","ell","m","n"}; defaults to the built-in grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        duality_samples: usize,
        #[arg(long, hide = true)]
        corrupt_first_factor: bool,
    },
}

enum Failure {
    Lib(Error),
    Mismatch(String),
    Validation(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = run(&cli, &mut out);
    let _ = out.flush();
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Lib(e @ Error::BudgetExceeded(_)) => (EXIT_BUDGET, e.to_string()),
                Failure::Lib(e @ Error::Internal(_)) => (EXIT_MISMATCH, e.to_string()),
                Failure::Lib(e) => (EXIT_VALIDATION, e.to_string()),
                Failure::Mismatch(m) => (EXIT_MISMATCH, m),
                Failure::Validation(m) => (EXIT_VALIDATION, m),
                Failure::Io(e) if e.kind() == io::ErrorKind::BrokenPipe => return ExitCode::SUCCESS,
                Failure::Io(e) => (1, e.to_string()),
            };
            eprintln!("consta: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Factor { params, lambda, verify } => cmd_factor(cli, out, params, lambda, *verify),
        Cmd::Classes { params } => cmd_classes(cli, out, params),
        Cmd::Dual { params, lambda, exponents } => cmd_dual(cli, out, params, lambda, exponents),
        Cmd::Lcd { params, family, cap } => {
            let family = match family {
                FamilyArg::Cyclic => Family::LcdCyclic,
                FamilyArg::Negacyclic => Family::LcdNegacyclic,
            };
            cmd_enumerate(cli, out, params, family, *cap)
        }
        Cmd::Selfdual { params, cap } => cmd_enumerate(cli, out, params, Family::SelfDualNegacyclic, *cap),
        Cmd::Mindist { params, lambda, exponents, budget } => {
            cmd_mindist(cli, out, params, lambda, exponents, *budget)
        }
        Cmd::VerifyGrid { grid, duality_samples, corrupt_first_factor } => {
            cmd_verify_grid(cli, out, grid.as_ref(), *duality_samples, *corrupt_first_factor)
        }
    }
}

fn params_of(a: &ParamArgs) -> Result<Params, Failure> {
    Ok(Params::new(a.p, a.a, a.ell, a.m, a.n)?)
}

fn factorization_for(params: &Params, lambda: &LambdaArgs) -> Result<Factorization, Failure> {
    match lambda.lambda_raw {
        Some(raw) => {
            let field = params.field()?;
            if raw == 0 || !field.contains(Elem(raw)) {
                return Err(Failure::Validation(format!(
                    "--lambda-raw must encode a nonzero element of F_{} (1..{})",
                    field.order(),
                    field.order() - 1
                )));
            }
            Ok(factorizer::factor_constacyclic(params, Elem(raw))?)
        }
        None => {
            let g = params.class_count();
            if lambda.class >= g {
                return Err(Failure::Validation(format!(
                    "class {} out of range; gcd({}, {}) = {g} classes, valid indices 0..={}",
                    lambda.class,
                    params.length(),
                    params.q() - 1,
                    g - 1
                )));
            }
            Ok(factorizer::factor_class(params, lambda.class)?)
        }
    }
}

fn emit(out: &mut Out, v: &Value) -> io::Result<()> {
    writeln!(out, "{v}")
}

fn cmd_factor(cli: &Cli, out: &mut Out, pa: &ParamArgs, la: &LambdaArgs, verify: bool) -> Result<(), Failure> {
    let params = params_of(pa)?;
    let fact = factorization_for(&params, la)?;
    let field = fact.field();
    let agree = if verify {
        fact.verify_product()?;
        let reference = oracle::oracle_factor(&fact.target(), cli.seed)?;
        let ours: Vec<_> = fact.factors().iter().map(|f| (f.clone(), fact.multiplicity())).collect();
        let irreducible = fact.factors().iter().map(oracle::oracle_is_irreducible).collect::<Result<Vec<_>, _>>()?;
        Some(ours == reference && irreducible.iter().all(|&b| b))
    } else {
        None
    };
    if cli.json {
        let mut v = fact.to_json();
        if let Some(ok) = agree {
            v["verified"] = Value::from(ok);
        }
        emit(out, &v)?;
    } else {
        writeln!(
            out,
            "X^{} - {} over F_{}: class {}, case {}, {} distinct factors, multiplicity {}",
            fact.length(),
            field.fmt_elem(fact.lambda()),
            field.order(),
            fact.class_index(),
            fact.case(),
            fact.factors().len(),
            fact.multiplicity()
        )?;
        for f in fact.factors() {
            writeln!(out, "  {f}")?;
        }
        if let Some(ok) = agree {
            writeln!(out, "oracle check: {}", if ok { "agree" } else { "MISMATCH" })?;
        }
    }
    match agree {
        Some(false) => Err(Failure::Mismatch("construction disagrees with the oracle".into())),
        _ => Ok(()),
    }
}

fn cmd_classes(cli: &Cli, out: &mut Out, pa: &ParamArgs) -> Result<(), Failure> {
    let params = params_of(pa)?;
    let field = params.field()?;
    for c in equivalence::transversal(&params)? {
        if cli.json {
            emit(out, &c.to_json())?;
        } else {
            writeln!(out, "class {}: {}", c.index, field.fmt_elem(c.rep))?;
        }
    }
    Ok(())
}

fn code_for(params: &Params, la: &LambdaArgs, exps: &[u64]) -> Result<ConstacyclicCode, Failure> {
    let fact = Arc::new(factorization_for(params, la)?);
    Ok(ConstacyclicCode::new(fact, exps.to_vec())?)
}

fn write_code(cli: &Cli, out: &mut Out, label: &str, c: &ConstacyclicCode) -> io::Result<()> {
    if cli.json {
        let mut v = c.to_json();
        v["role"] = Value::from(label);
        emit(out, &v)
    } else {
        let field = c.field();
        writeln!(
            out,
            "{label}: λ = {}, exponents {:?}, dim {}, g = {}",
            field.fmt_elem(c.lambda()),
            c.exponents(),
            c.dim(),
            c.generator()
        )
    }
}

fn cmd_dual(cli: &Cli, out: &mut Out, pa: &ParamArgs, la: &LambdaArgs, exps: &[u64]) -> Result<(), Failure> {
    let params = params_of(pa)?;
    let c = code_for(&params, la, exps)?;
    let d = c.dual()?;
    write_code(cli, out, "code", &c)?;
    write_code(cli, out, "dual", &d)?;
    Ok(())
}

fn cmd_enumerate(cli: &Cli, out: &mut Out, pa: &ParamArgs, family: Family, cap: u64) -> Result<(), Failure> {
    let params = params_of(pa)?;
    let fact = codes::family_factorization(&params, family)?;
    let (formula, case) = codes::family_formula(&params, family)?;
    let mut count = 0u64;
    let mut truncated = false;
    let mut io_err = None;
    codes::for_each_in_family(&fact, family, |c| {
        if count >= cap {
            truncated = true;
            return false;
        }
        count += 1;
        let r = if cli.json {
            emit(out, &c.to_json())
        } else {
            writeln!(out, "exponents {:?} dim {}", c.exponents(), c.dim())
        };
        if let Err(e) = r {
            io_err = Some(e);
            return false;
        }
        true
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let summary = json!({
        "summary": true,
        "family": family.name(),
        "count": count,
        "formula": formula.to_string(),
        "case": case,
        "truncated": truncated,
    });
    if cli.json {
        emit(out, &summary)?;
    } else {
        writeln!(out, "{} {}: {count} codes; formula {formula} ({case}){}", family.name(), params, if truncated { "; TRUNCATED" } else { "" })?;
    }
    if truncated {
        return Err(Failure::Lib(Error::BudgetExceeded(format!("more than {cap} codes; output truncated"))));
    }
    if count as u128 != formula {
        return Err(Failure::Mismatch(format!("{count} codes, formula gives {formula}")));
    }
    Ok(())
}

fn cmd_mindist(
    cli: &Cli,
    out: &mut Out,
    pa: &ParamArgs,
    la: &LambdaArgs,
    exps: &[u64],
    budget: u64,
) -> Result<(), Failure> {
    let params = params_of(pa)?;
    let c = code_for(&params, la, exps)?;
    let d = codes::min_distance_exhaustive(&c, budget)?;
    if cli.json {
        let mut v = c.to_json();
        v["min_distance"] = Value::from(d);
        emit(out, &v)?;
    } else {
        writeln!(out, "[{}, {}, {d}] code", c.length(), c.dim())?;
    }
    Ok(())
}

fn cmd_verify_grid(
    cli: &Cli,
    out: &mut Out,
    grid: Option<&PathBuf>,
    duality_samples: usize,
    corrupt: bool,
) -> Result<(), Failure> {
    let points = match grid {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
            verify::parse_grid(&text)?
        }
        None => verify::default_grid(),
    };
    let opts = VerifyOptions { seed: cli.seed, duality_samples, corrupt_first_factor: corrupt };
    let report = verify::verify_grid(&points, &opts);
    if cli.json {
        for c in &report.checks {
            emit(out, &c.to_json())?;
        }
        emit(out, &report.summary_json())?;
    } else {
        for c in report.failures() {
            writeln!(out, "FAIL {} class {:?} {}: {}", c.params, c.class, c.name, c.detail)?;
        }
        writeln!(
            out,
            "{} points, {} checks, {} failed",
            report.points(),
            report.total(),
            report.failures().count()
        )?;
    }
    match report.first_failure() {
        Some(c) => Err(Failure::Mismatch(format!("first counterexample: {}", c.to_json()))),
        None => Ok(()),
    }
}

//! The `zreduce` command line.
//!
//! Exit codes: 0 success or `true`; 1 a negative answer (`false`, `NONE`,
//! `IRRATIONAL`, no admissible `t`); 2 usage or precondition errors;
//! 3 budget exceeded; 4 internal invariant violations and failed suites.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use zreduce_core::gadgets::integrality::thm12_value;
use zreduce_core::gadgets::{conj_value, relation_decode, relation_f};
use zreduce_core::pell::pell_iter;
use zreduce_core::pipeline::{
    plan_lift, reduce, search, skolem_flatten, verify_bundle, Encoding, PipelineError, ReductionConfig,
    WitnessBundle, PARAMETER,
};
use zreduce_core::{FieldD, SparsePoly};

use crate::formats::{
    emit_bundle, emit_circuit, parse_bundle, parse_circuit, parse_poly, parse_quad, parse_quad_list, CircuitFile,
};
use crate::suites::{run_suite, SuiteName, SuiteParams, DEFAULT_BUDGET, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "zreduce", version, about = "Reduction compiler from integer equations to Gaussian-integer equations")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for suites and witness searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Step limit for each Pell search stage.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Repaired,
    Paper,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Repaired => Encoding::Repaired,
            EncodingArg::Paper => Encoding::Paper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CombineOp {
    Lemma31,
    Lemma32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile P(z0, z1..zn) into one equation F over the Gaussian integers.
    Reduce {
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Fix the parameter a (z0) to this value; otherwise it stays symbolic.
        #[arg(long, allow_hyphen_values = true)]
        param: Option<BigInt>,
        #[arg(long, value_enum, default_value_t = EncodingArg::Repaired)]
        encoding: EncodingArg,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lift an integer solution of P to a verified solution of F.
    Lift {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        param: BigInt,
        /// Comma-separated z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        witness: String,
        #[arg(long, value_enum, default_value_t = EncodingArg::Repaired)]
        encoding: EncodingArg,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a bundle against a circuit, or run a property suite.
    Verify(VerifyArgs),
    /// Is y + sum x_k / y^k rational, for y = 2 * prod(3x_k + 1)?
    CheckRational {
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Semicolon-separated literals.
        #[arg(allow_hyphen_values = true)]
        xs: String,
    },
    /// Square root of a quadratic integer, or NONE.
    IsSquare {
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Print the first pairs of X^2 - 3Y^2 = 1.
    Pell {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Evaluate a gadget: lemma31 takes A1 A2 S T m, lemma32 takes x y.
    Combine {
        #[arg(long, value_enum)]
        op: CombineOp,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(allow_hyphen_values = true, required = true)]
        args: Vec<String>,
    },
    /// Rewrite P = 0 as a system of equations of degree at most 2.
    Flatten {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Circuit file and bundle file.
    #[arg(num_args = 0..=2)]
    pub files: Vec<PathBuf>,
    #[arg(long, conflicts_with = "files")]
    pub suite: Option<SuiteName>,
    /// Comma-separated discriminants.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<u64>>,
    #[arg(long = "box")]
    pub box_bound: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Inclusive range `lo..hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub t: Option<(i64, i64)>,
    /// Largest |m| for lemma34, or the number of Pell pairs.
    #[arg(long)]
    pub limit: Option<u64>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            _ if e.is_budget() => EXIT_BUDGET,
            PipelineError::NoAdmissibleT(_) => EXIT_NEGATIVE,
            PipelineError::InvalidConfig(_)
            | PipelineError::Manifest { .. }
            | PipelineError::WitnessLength { .. }
            | PipelineError::LastVariableZero(_)
            | PipelineError::NotASolution(_)
            | PipelineError::BundleMismatch(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<SparsePoly, Failure> {
    parse_poly(&read(path)?).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}

fn field(d: u64) -> Result<FieldD, Failure> {
    FieldD::new(d).map_err(|e| Failure::usage(e.to_string()))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let result = dispatch(&cli, out, err);
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    };
    let _ = writeln!(err, "elapsed: {:.3} s", start.elapsed().as_secs_f64());
    code
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if cli.threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    if cli.budget == 0 {
        return Err(Failure::usage("--budget must be at least 1"));
    }
    match &cli.command {
        Command::Reduce {
            n,
            param,
            encoding,
            input,
            output,
        } => cmd_reduce(*n, param.as_ref(), (*encoding).into(), input, output.as_deref(), out, err),
        Command::Lift {
            n,
            param,
            witness,
            encoding,
            input,
            output,
        } => cmd_lift(cli, *n, param, witness, (*encoding).into(), input, output.as_deref(), out),
        Command::Verify(args) => cmd_verify(cli, args, out, err),
        Command::CheckRational { d, xs } => {
            let f = field(*d)?;
            let xs = parse_quad_list(f, xs).map_err(|e| Failure::usage(e.to_string()))?;
            if xs.is_empty() {
                return Err(Failure::usage("need at least one literal"));
            }
            let value = thm12_value(f, &xs).map_err(|e| Failure::usage(e.to_string()))?;
            let rational = value.is_rational();
            let _ = writeln!(out, "{} {value}", if rational { "RATIONAL" } else { "IRRATIONAL" });
            Ok(if rational { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::IsSquare { d, literal } => {
            let x = parse_quad(field(*d)?, literal).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(match x.sqrt() {
                Some(r) => {
                    let _ = writeln!(out, "{r}");
                    EXIT_OK
                }
                None => {
                    let _ = writeln!(out, "NONE");
                    EXIT_NEGATIVE
                }
            })
        }
        Command::Pell { count } => {
            for p in pell_iter().take(*count) {
                let _ = writeln!(out, "{} {} {}", p.index, p.x, p.y);
            }
            Ok(EXIT_OK)
        }
        Command::Combine { op, d, args } => cmd_combine(*op, *d, args, out),
        Command::Flatten { input, output } => {
            let p = read_poly(input)?;
            let flat = skolem_flatten(&p);
            let names: Vec<&str> = flat.vars().iter().map(|v| v.as_str()).collect();
            let mut text = format!("vars: {}\n", names.join(", "));
            for eq in flat.system() {
                text.push_str(&format!("{eq}\n"));
            }
            let _ = writeln!(
                err,
                "{} equation(s), {} fresh variable(s)",
                flat.system().len(),
                flat.fresh_vars().len()
            );
            write_output(output.as_deref(), &text, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_reduce(
    n: usize,
    param: Option<&BigInt>,
    encoding: Encoding,
    input: &Path,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let p = read_poly(input)?;
    let cfg = ReductionConfig::new(n, encoding)?;
    let red = reduce(&p, cfg)?;
    let manifest: Vec<&str> = red.unknowns().iter().map(|v| v.as_str()).collect();
    let (circuit, parameter, variables) = match param {
        Some(a) => (red.instantiate(a), format!("{PARAMETER} = {a}"), red.unknowns().len()),
        None => (red.circuit().clone(), PARAMETER.to_string(), red.variable_count()),
    };
    let degree = circuit.degree_bound();
    let file = CircuitFile::new(circuit)
        .with_header("encoding", encoding)
        .with_header("n", n)
        .with_header("unknowns", red.unknowns().len())
        .with_header("manifest", manifest.join(", "))
        .with_header("parameter", &parameter)
        .with_header("variables", variables)
        .with_header("degree_bound", degree);
    write_output(output, &emit_circuit(&file), out)?;
    let _ = writeln!(
        err,
        "F: {} unknowns + parameter {parameter}, in {} variables; degree bound {degree}",
        red.unknowns().len(),
        red.variable_count()
    );
    Ok(EXIT_OK)
}

fn parse_witness(text: &str) -> Result<Vec<BigInt>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Failure::usage(format!("bad witness value {s:?}")))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_lift(
    cli: &Cli,
    n: usize,
    a: &BigInt,
    witness: &str,
    encoding: Encoding,
    input: &Path,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let p = read_poly(input)?;
    let zs = parse_witness(witness)?;
    let cfg = ReductionConfig::new(n, encoding)?;
    let plan = plan_lift(&p, a, &zs, cfg)?;
    let budget = cli.budget;
    let (w0, w1) = if cli.threads >= 2 {
        std::thread::scope(|s| {
            let h0 = s.spawn(|| search("t", &plan.t, budget));
            let h1 = s.spawn(|| search("tau", &plan.tau, budget));
            (
                h0.join().expect("search thread panicked"),
                h1.join().expect("search thread panicked"),
            )
        })
    } else {
        (search("t", &plan.t, budget), search("tau", &plan.tau, budget))
    };
    let bundle = plan.complete(&w0?, &w1?)?;
    write_output(output, &emit_bundle(&bundle), out)?;
    Ok(EXIT_OK)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if let Some(name) = args.suite {
        let params = SuiteParams {
            ds: args.d.clone(),
            box_bound: args.box_bound,
            n: args.n,
            t_range: args.t,
            limit: args.limit,
            budget: cli.budget,
            seed: cli.seed,
            threads: cli.threads,
        };
        let report = run_suite(name, &params).map_err(|e| Failure::usage(e.to_string()))?;
        let _ = write!(out, "{report}");
        let _ = writeln!(err, "suite {name}: {:.3} s", report.elapsed.as_secs_f64());
        return Ok(if report.passed() { EXIT_OK } else { EXIT_INTERNAL });
    }
    if args.d.is_some() || args.box_bound.is_some() || args.n.is_some() || args.t.is_some() || args.limit.is_some() {
        return Err(Failure::usage("--d, --box, --n, --t and --limit apply to --suite only"));
    }
    let [circ_path, bundle_path] = args.files.as_slice() else {
        return Err(Failure::usage("verify needs a circuit file and a bundle file, or --suite NAME"));
    };
    let file = parse_circuit(&read(circ_path)?)
        .map_err(|e| Failure::usage(format!("{}:{e}", circ_path.display())))?;
    let bundle = parse_bundle(&read(bundle_path)?)
        .map_err(|e| Failure::usage(format!("{}:{e}", bundle_path.display())))?;
    let verdict = verify_files(&file, &bundle)?;
    match &verdict {
        Ok(()) => {
            let _ = writeln!(out, "true");
            Ok(EXIT_OK)
        }
        Err(reason) => {
            let _ = writeln!(out, "false");
            let _ = writeln!(err, "{reason}");
            Ok(EXIT_NEGATIVE)
        }
    }
}

/// `Ok(Ok(()))` when the bundle satisfies the circuit, `Ok(Err(reason))`
/// when it does not.
pub fn verify_files(file: &CircuitFile, bundle: &WitnessBundle) -> Result<Result<(), String>, Failure> {
    if let Some(fixed) = file
        .header_value("parameter")
        .and_then(|v| v.split_once('=').map(|(_, a)| a.trim().to_string()))
    {
        if fixed != bundle.a.to_string() {
            return Ok(Err(format!(
                "the circuit fixes {PARAMETER} = {fixed} but the bundle has {PARAMETER} = {}",
                bundle.a
            )));
        }
    }
    let derived = bundle.rederive()?;
    if derived != bundle.derived {
        return Ok(Err("the derived section disagrees with the values".into()));
    }
    if verify_bundle(&file.circuit, bundle)? {
        Ok(Ok(()))
    } else {
        Ok(Err("F does not vanish at the bundle, or A1, A2 are not separated mod 3".into()))
    }
}

fn cmd_combine(op: CombineOp, d: u64, args: &[String], out: &mut dyn Write) -> Outcome {
    let f = field(d)?;
    let vals = args
        .iter()
        .map(|a| parse_quad(f, a))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(e.to_string()))?;
    match op {
        CombineOp::Lemma31 => {
            let [a1, a2, s, t, m] = vals.as_slice() else {
                return Err(Failure::usage("lemma31 takes A1 A2 S T m"));
            };
            let value = relation_f(a1, a2, s, t, m);
            let _ = writeln!(out, "f = {value}");
            if value.is_zero() && a1 != a2 && !s.is_zero() {
                let dec = relation_decode(a1, a2, s, t, m).map_err(|e| Failure {
                    code: EXIT_INTERNAL,
                    message: e.to_string(),
                })?;
                let _ = writeln!(out, "roots {}, {}; T/S = {}", dec.root1, dec.root2, dec.quotient);
            }
            Ok(if value.is_zero() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        CombineOp::Lemma32 => {
            let [x, y] = vals.as_slice() else {
                return Err(Failure::usage("lemma32 takes x y"));
            };
            let value = conj_value(x, y);
            let _ = writeln!(out, "x^2 + 2y^2 = {value}");
            Ok(if value.is_zero() { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

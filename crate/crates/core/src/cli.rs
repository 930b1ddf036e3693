//! Command-line front end.
//!
//! Exit statuses: 0 success, 1 residual above tolerance / truncated closure
//! / no root, 2 unparsable input, 3 singular or precondition failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{
    express_matrix_with_cap, realization_rank, spanning_basis_with_cap, AlgebraElement,
};
use crate::closure::{generate_closure, pairwise_products, standard_generators, three_cycles};
use crate::error::Error;
use crate::factorize::{factor_gl, factor_sl2_rbt, factor_so, verify, DEFAULT_TOLERANCE};
use crate::generators::GeneratorWord;
use crate::matrix::{FloatMatrix, RationalMatrix};
use crate::perm::{random_element, SignedPermutation, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Parser)]
#[command(
    name = "arrowperm",
    version,
    about = "Signed permutations, their group algebra, and generator-word factorization"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Relative residual tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE, value_parser = positive_f64)]
    pub tol: f64,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Element budget for closures; degree cap for enumeration-based commands.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,

    /// Matrix input format (inferred from a `.csv` extension otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor an invertible matrix into a generator word.
    Factorize(MatrixArg),
    /// Factor an orthogonal matrix into adjacent rotations.
    SoFactorize(MatrixArg),
    /// Split a determinant-one 2×2 matrix into rotation, boost and scaling.
    Sl2Rbt(MatrixArg),
    /// BFS closure of signed permutation generators.
    Closure(ClosureArgs),
    /// Operations on signed permutation literals such as "[2,-1,3]".
    #[command(subcommand)]
    Perm(PermCommand),
    /// Spanning permutations of the matrix algebra, optionally expressing a matrix.
    Span(SpanArgs),
    /// Group algebra operations on JSON elements.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Relative residual of a generator word against a matrix.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MatrixArg {
    /// Matrix file, or an inline JSON literal.
    pub matrix: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Adjacent transpositions and one elementary inversion.
    Standard,
    /// Ordered pairwise products of the standard generators.
    Even,
    /// All unsigned 3-cycles.
    ThreeCycles,
}

#[derive(Debug, Args)]
pub struct ClosureArgs {
    /// Generator literals.
    pub generators: Vec<String>,
    /// Degree; required with --preset or when no generators are given.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Emit the Cayley graph in DOT form instead of the JSON table.
    #[arg(long)]
    pub dot: bool,
}

#[derive(Debug, Subcommand)]
pub enum PermCommand {
    Parity {
        perm: String,
    },
    Compose {
        left: String,
        right: String,
    },
    Cycles {
        perm: String,
    },
    Inverse {
        perm: String,
    },
    Word {
        perm: String,
    },
    /// Uniform random element (uses --seed).
    Random {
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Debug, Args)]
pub struct SpanArgs {
    #[arg(long)]
    pub degree: usize,
    /// Matrix (file or inline JSON) to express in the spanning basis.
    #[arg(long)]
    pub matrix: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCommand {
    Mul { left: String, right: String },
    ToMatrix { element: String },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub word: String,
    pub matrix: String,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not a positive number"))
    }
}

/// Result of one invocation: exit status plus the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidPermutation(_)
            | Error::InvalidGenerator(_)
            | Error::DimensionMismatch { .. }
            | Error::NonFinite { .. }
            | Error::DegenerateDegree
            | Error::IndexOutOfRange { .. }
            | Error::MixedDegrees
            | Error::ZeroCap => 2,
            Error::NotInvertible { .. }
            | Error::NotOrthogonal { .. }
            | Error::DeterminantNotOne { .. }
            | Error::NotSignedPermutationMatrix(_)
            | Error::NonPositiveEntry { .. }
            | Error::ProductNotOne { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(config: &CliConfig) -> Outcome {
    let (code, body) = match dispatch(config) {
        Ok(pair) => pair,
        Err(f) => {
            return Outcome {
                code: f.code,
                stdout: String::new(),
                stderr: format!("error: {}\n", f.message),
            }
        }
    };
    let mut text = body;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &config.out {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn dispatch(config: &CliConfig) -> Result<(u8, String), Failure> {
    let tol = config.tol;
    match &config.command {
        Command::Factorize(arg) => {
            let a = read_float_matrix(&arg.matrix, config.format)?;
            let word = factor_gl(&a, tol)?;
            let residual = verify(&word, &a)?;
            let code = if residual <= tol { 0 } else { 1 };
            Ok((code, with_residual(word.to_json(), residual)))
        }
        Command::SoFactorize(arg) => {
            let q = read_float_matrix(&arg.matrix, config.format)?;
            let word = factor_so(&q, tol)?;
            let residual = verify(&word, &q)?;
            let code = if residual <= tol * (q.n() as f64).sqrt() {
                0
            } else {
                1
            };
            Ok((code, with_residual(word.to_json(), residual)))
        }
        Command::Sl2Rbt(arg) => {
            let m = read_float_matrix(&arg.matrix, config.format)?;
            let f = factor_sl2_rbt(&m, tol)?;
            let out = json!({
                "theta": f.theta,
                "x": f.rapidity,
                "y": f.log_scale,
                "residual": f.residual,
            });
            Ok((0, out.to_string()))
        }
        Command::Closure(args) => closure_command(config, args),
        Command::Perm(cmd) => perm_command(config, cmd),
        Command::Span(args) => span_command(config, args),
        Command::Algebra(cmd) => {
            let text = match cmd {
                AlgebraCommand::Mul { left, right } => {
                    let x = AlgebraElement::parse_json(&read_input(left)?)?;
                    let y = AlgebraElement::parse_json(&read_input(right)?)?;
                    x.mul(&y)?.to_json().to_string()
                }
                AlgebraCommand::ToMatrix { element } => {
                    AlgebraElement::parse_json(&read_input(element)?)?
                        .to_matrix()
                        .to_json()
                        .to_string()
                }
            };
            Ok((0, text))
        }
        Command::Verify(args) => {
            let word = GeneratorWord::parse_json(&read_input(&args.word)?)?;
            let a = read_float_matrix(&args.matrix, config.format)?;
            let residual = verify(&word, &a)?;
            let code = if residual <= tol { 0 } else { 1 };
            Ok((code, json!({ "residual": residual }).to_string()))
        }
    }
}

fn with_residual(mut v: Value, residual: f64) -> String {
    v["residual"] = json!(residual);
    v.to_string()
}

fn closure_command(config: &CliConfig, args: &ClosureArgs) -> Result<(u8, String), Failure> {
    let mut gens = args
        .generators
        .iter()
        .map(|g| g.parse::<SignedPermutation>())
        .collect::<Result<Vec<_>, _>>()?;
    let degree = match (args.degree, gens.first()) {
        (Some(d), _) => d,
        (None, Some(g)) => g.degree(),
        (None, None) => {
            return Err(Failure {
                code: 2,
                message: "--degree is required without generators".into(),
            })
        }
    };
    if let Some(preset) = args.preset {
        let standard = standard_generators(degree)?;
        gens.extend(match preset {
            Preset::Standard => standard,
            Preset::Even => pairwise_products(&standard)?,
            Preset::ThreeCycles => three_cycles(degree)?,
        });
    }
    let cap = config
        .cap
        .map_or(crate::closure::DEFAULT_CAP, |c| c as usize);
    let table = generate_closure(degree, &gens, cap)?;
    let code = if table.is_truncated() { 1 } else { 0 };
    let text = if args.dot {
        table.to_dot().ok_or_else(|| Failure {
            code: 1,
            message: format!(
                "DOT output needs a complete table of at most {} elements",
                crate::closure::DOT_LIMIT
            ),
        })?
    } else {
        table.to_json().to_string()
    };
    Ok((code, text))
}

fn perm_command(config: &CliConfig, cmd: &PermCommand) -> Result<(u8, String), Failure> {
    let parse = |s: &String| s.parse::<SignedPermutation>();
    let text = match cmd {
        PermCommand::Parity { perm } => parse(perm)?.sign().to_string(),
        PermCommand::Compose { left, right } => parse(left)?.compose(&parse(right)?)?.to_string(),
        PermCommand::Cycles { perm } => {
            let cycles = parse(perm)?.cycle_decomposition();
            if cycles.is_empty() {
                "()".to_string()
            } else {
                cycles
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        }
        PermCommand::Inverse { perm } => parse(perm)?.inverse().to_string(),
        PermCommand::Word { perm } => {
            let word = parse(perm)?.to_word();
            serde_json::to_string(&word.letters).expect("letters serialize")
        }
        PermCommand::Random { degree } => {
            let p = random_element(*degree, config.seed)?;
            json!({ "seed": config.seed, "perm": p.images() }).to_string()
        }
    };
    Ok((0, text))
}

fn span_command(config: &CliConfig, args: &SpanArgs) -> Result<(u8, String), Failure> {
    let n = args.degree;
    let cap = config.cap.map_or(DEFAULT_ENUMERATION_CAP, |c| c as usize);
    let basis = spanning_basis_with_cap(n, cap)?;
    let rank = realization_rank(&basis);
    let mut out = json!({
        "n": n,
        "basis": basis.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "rank": format!("{rank}/{}", n * n),
    });
    let mut code = if rank == n * n { 0 } else { 1 };
    if let Some(m) = &args.matrix {
        let m = RationalMatrix::parse_json(&read_input(m)?)?;
        if m.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.n(),
            }
            .into());
        }
        let x = express_matrix_with_cap(&m, cap)?;
        let exact = x.to_matrix() == m;
        if !exact {
            code = 1;
        }
        out["expression"] = x.to_json();
        out["round_trip"] = json!(if exact { "exact" } else { "mismatch" });
    }
    Ok((code, out.to_string()))
}

/// File contents when `arg` names an existing file, else `arg` itself.
fn read_input(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| io_failure(path, e))
    } else {
        Ok(arg.to_string())
    }
}

fn read_float_matrix(arg: &str, format: Option<Format>) -> Result<FloatMatrix, Failure> {
    let text = read_input(arg)?;
    let csv = match format {
        Some(f) => f == Format::Csv,
        None => Path::new(arg)
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv")),
    };
    let m = if csv {
        FloatMatrix::parse_csv(&text)?
    } else {
        FloatMatrix::parse_json(&text)?
    };
    Ok(m)
}

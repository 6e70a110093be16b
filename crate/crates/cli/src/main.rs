//! `braidlab`: command-line access to braided-set tools over JSON.
//!
//! Exit status is 0 on success, 1 when a checking subcommand finds its
//! predicate false, and 2 on malformed input or any other error, in which
//! case `{"error": code, "detail": message}` is printed to stdout.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use braidlab_core::cocycle::WordCocycle;
use braidlab_core::enumerate::{enumerate_solutions, write_census, Filter};
use braidlab_core::injectivity::injectivity_report;
use braidlab_core::json::{solution_from_str, solution_to_string, LinearJson, SevenTupleJson, SolutionJson};
use braidlab_core::linear::{
    affine_extend, affine_relation_failures, hat_solution, is_injective_affine, is_injective_linear,
    linear_relation_failures, materialize, pqz_from_abd, s_of, LinearSolution, MatrixSolution,
};
use braidlab_core::quotients::report;
use braidlab_core::{BraidedMap, Caps, Error, Parallelism};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "braidlab", version, about = "Finite braided sets and the solutions of the braid relation")]
struct Cli {
    #[command(flatten)]
    io: IoArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input file; stdin when absent.
    #[arg(long = "in", global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long = "out", global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Worker threads for parallel loops (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Largest permutation group closure.
    #[arg(long, global = true)]
    cap_group: Option<usize>,
    /// Largest (Z_m)^k to materialize.
    #[arg(long, global = true)]
    cap_materialize: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Bijectivity, nondegeneracy, braid relation and symmetry of a table.
    Verify,
    /// The derived solution S'(x, y) = (phi(y, x), x).
    Derive,
    /// Rank, quotient orders and the rank classes.
    Rank,
    /// Injectivity of X into its structure group.
    Inject,
    /// Same report as `rank`.
    Quotient,
    /// Census of solutions on n points, one JSON record per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
    },
    /// Linear and affine solutions on (Z_m)^k.
    Linear {
        #[command(subcommand)]
        action: LinearAction,
    },
    /// Builds the solution of a bijective cocycle tuple.
    SevenTuple,
    /// Checks the word cocycle against the defining relations.
    CocycleCheck {
        /// Longest word checked.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum LinearAction {
    /// Braid identities (and the affine identities when vectors are given).
    Check,
    /// The quadruple (a, b, d, s).
    Quad,
    /// The triple (p, q, zauto).
    Pqz,
    /// The injective solution with d replaced by d - s.
    Hat,
    /// The table on (Z_m)^k.
    Materialize,
    /// Affine extension by `zvec` and a defect vector.
    Affine {
        /// Comma-separated entries; zero when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        kvec: Option<Vec<i64>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Symmetric,
    Injective,
}

impl From<FilterArg> for Filter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => Filter::All,
            FilterArg::Symmetric => Filter::Symmetric,
            FilterArg::Injective => Filter::Injective,
        }
    }
}

/// Result of a subcommand: text to emit and whether the checked predicate held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn value(v: Value, ok: bool) -> Self {
        Outcome { text: v.to_string(), ok }
    }
}

fn read_input(io: &IoArgs) -> Result<String, Error> {
    let mut s = String::new();
    match &io.input {
        Some(p) => {
            s = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
        }
        None => {
            io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    Ok(s)
}

fn caps(io: &IoArgs) -> Result<Caps, Error> {
    let mut caps = Caps::from_env()?;
    if let Some(g) = io.cap_group {
        caps.group = g;
    }
    if let Some(m) = io.cap_materialize {
        caps.materialize = m;
    }
    Ok(caps)
}

fn parse_linear(text: &str) -> Result<LinearJson, Error> {
    Ok(serde_json::from_str(text)?)
}

fn matrix_json(m: &braidlab_core::linear::ModMatrix) -> Value {
    json!(m.rows())
}

fn linear_of(sol: &MatrixSolution) -> &LinearSolution {
    match sol {
        MatrixSolution::Linear(l) => l,
        MatrixSolution::Affine(a) => &a.linear,
    }
}

fn run_linear(action: &LinearAction, io: &IoArgs, caps: &Caps) -> Result<Outcome, Error> {
    let j = parse_linear(&read_input(io)?)?;
    match action {
        LinearAction::Check => {
            let [a, b, c, d] = j.matrices()?;
            let mut failures = linear_relation_failures(&a, &b, &c, &d)?;
            let l = LinearSolution::unchecked(a, b, c, d)?;
            let affine = j.zvec.is_some() || j.tvec.is_some();
            if affine {
                let zero = vec![0; j.k];
                let z = j.zvec.clone().unwrap_or_else(|| zero.clone());
                let t = j.tvec.clone().unwrap_or(zero);
                failures.extend(affine_relation_failures(&l, &z, &t)?);
            }
            let valid = failures.is_empty();
            let mut out = json!({ "valid": valid, "failures": failures });
            if valid {
                match j.to_solution()? {
                    MatrixSolution::Linear(l) => out["injective"] = json!(is_injective_linear(&l)),
                    MatrixSolution::Affine(a) => {
                        out["injective"] = json!(is_injective_affine(&a));
                        out["kvec"] = json!(a.kvec());
                    }
                }
            }
            Ok(Outcome::value(out, valid))
        }
        LinearAction::Quad => {
            let [a, b, c, d] = j.matrices()?;
            let s = s_of(&a, &b, &c, &d)?;
            let out = json!({
                "m": j.m, "k": j.k,
                "a": matrix_json(&a), "b": matrix_json(&b), "d": matrix_json(&d), "s": matrix_json(&s),
            });
            Ok(Outcome::value(out, true))
        }
        LinearAction::Pqz => {
            let sol = j.to_solution()?;
            let l = linear_of(&sol);
            let t = pqz_from_abd(&l.a, &l.b, &l.d)?;
            let out = json!({
                "m": j.m, "k": j.k,
                "p": matrix_json(&t.p), "q": matrix_json(&t.q), "zauto": matrix_json(&t.zauto),
            });
            Ok(Outcome::value(out, true))
        }
        LinearAction::Hat => {
            let sol = j.to_solution()?;
            let h = hat_solution(linear_of(&sol));
            Ok(Outcome::value(serde_json::to_value(LinearJson::from_linear(&h))?, true))
        }
        LinearAction::Materialize => {
            let sol = j.to_solution()?;
            let m = materialize(&sol, caps.materialize)?;
            Ok(Outcome {
                text: solution_to_string(&m),
                ok: true,
            })
        }
        LinearAction::Affine { kvec } => {
            let sol = j.to_solution()?;
            let l = linear_of(&sol);
            let z = j
                .zvec
                .clone()
                .ok_or_else(|| Error::ConstraintViolation("`linear affine` needs zvec".into()))?;
            let k = kvec.clone().unwrap_or_else(|| vec![0; j.k]);
            let a = affine_extend(l, &z, &k)?;
            Ok(Outcome::value(serde_json::to_value(LinearJson::from_affine(&a))?, true))
        }
    }
}

fn read_solution(io: &IoArgs) -> Result<BraidedMap, Error> {
    solution_from_str(&read_input(io)?)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let io = &cli.io;
    let caps = caps(io)?;
    let mode = Parallelism::default();
    match &cli.command {
        Command::Verify => {
            let m = read_solution(io)?;
            let bijective = m.validate_bijection();
            let nondegenerate = m.check_nondegenerate();
            let braided = m.check_braided();
            let symmetric = braided && m.check_involutive();
            let out = json!({
                "bijective": bijective,
                "nondegenerate": nondegenerate,
                "braided": braided,
                "symmetric": symmetric,
            });
            Ok(Outcome::value(out, bijective && nondegenerate && braided))
        }
        Command::Derive => {
            let m = read_solution(io)?;
            Ok(Outcome {
                text: solution_to_string(&m.derived_solution()?),
                ok: true,
            })
        }
        Command::Rank | Command::Quotient => {
            let m = read_solution(io)?;
            Ok(Outcome::value(serde_json::to_value(report(&m, caps.group)?)?, true))
        }
        Command::Inject => {
            let m = read_solution(io)?;
            let r = injectivity_report(&m, &caps)?;
            Ok(Outcome::value(serde_json::to_value(r)?, r.injective))
        }
        Command::Enumerate { n, filter } => {
            let records = enumerate_solutions(*n, (*filter).into(), mode, io.workers, &caps)?;
            let mut buf = Vec::new();
            write_census(&records, &mut buf).map_err(|e| Error::Parse(e.to_string()))?;
            let mut text = String::from_utf8(buf).expect("utf-8");
            // `emit` appends the final newline.
            text.pop();
            Ok(Outcome { text, ok: true })
        }
        Command::Linear { action } => run_linear(action, io, &caps),
        Command::SevenTuple => {
            let j: SevenTupleJson = serde_json::from_str(&read_input(io)?)?;
            let m = j.to_tuple()?.to_solution()?;
            Ok(Outcome::value(serde_json::to_value(SolutionJson::from(&m))?, true))
        }
        Command::CocycleCheck { max_len } => {
            let m = read_solution(io)?;
            let wc = WordCocycle::new(&m, &caps)?;
            let (words, violations) = wc.check_relations(*max_len);
            let out = json!({
                "ok": violations == 0,
                "words_checked": words,
                "a0_order": wc.a0().group.order(),
            });
            Ok(Outcome::value(out, violations == 0))
        }
    }
}

fn emit(io: &IoArgs, text: &str) -> io::Result<()> {
    let body = if text.is_empty() { String::new() } else { format!("{text}\n") };
    match &io.output {
        Some(p) => fs::write(p, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.render().to_string();
            println!("{}", json!({ "error": "Usage", "detail": detail.trim_end() }));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.io, &outcome.text) {
                eprintln!("braidlab: {e}");
                return ExitCode::from(2);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("{}", json!({ "error": e.code(), "detail": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

//! Command-line frontend: validation, membership, transformations,
//! language sampling and comparison, brute-force oracles, and formula
//! evaluation.
//!
//! Exit codes: 0 for accept/equal/ok, 1 for reject/differs, 2 for usage,
//! parse, or validation errors.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nomaut::atom::DataWord;
use nomaut::format::{parse_spec, parse_word, print_spec, Artifact, WordArtifact};
use nomaut::logic::eval_sentence;
use nomaut::oracle;
use nomaut::semantics::{sample_language, Acceptor};
use nomaut::transforms;
use nomaut::{Nofa, Semantics};

/// The word-length bound for evaluating formulas with second-order
/// quantifiers outside `eval` (which has its own flag); subset enumeration
/// is exponential in the word length.
const DEFAULT_SO_LEN: usize = 6;

#[derive(Parser)]
#[command(name = "nomaut", version, about = "Automata and logic for data languages over an infinite alphabet")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and run its validator; exits 0 when well-formed.
    Validate { file: PathBuf },
    /// Decide membership of a word under the file's kind and semantics tag.
    Member {
        file: PathBuf,
        /// The input word, whitespace-separated atom tokens.
        #[arg(long)]
        word: String,
    },
    /// Apply a construction to a symbolic automaton and print the result.
    Transform {
        file: PathBuf,
        /// close, deguess, rigidify, fsuba (composes rigidify), regaut, mso.
        #[arg(long)]
        op: Op,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// List all accepted words over the given atoms up to a length bound,
    /// in length-lexicographic order.
    Sample {
        file: PathBuf,
        /// Atom tokens, e.g. "a b c".
        #[arg(long)]
        atoms: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Compare two languages on every word over the given atoms up to a
    /// length bound; exits 0 when equal, 1 with a counterexample otherwise.
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        atoms: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Brute-force membership by exhaustive run enumeration.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Number of fresh atoms available to runs (default: twice the
        /// register count).
        #[arg(long)]
        pool: Option<usize>,
    },
    /// Evaluate a formula file on a word.
    Eval {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Refuse second-order formulas on words longer than this.
        #[arg(long, default_value_t = DEFAULT_SO_LEN)]
        max_so_len: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Close,
    Deguess,
    Rigidify,
    Fsuba,
    Regaut,
    Mso,
}

struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn load(path: &Path) -> Result<Artifact, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

/// A borrowed view of any artifact as a language.
enum Language<'a> {
    Nofa(&'a nomaut::Nofa),
    Tracked(&'a nomaut::TrackedNofra),
    Fsuba(&'a nomaut::Fsuba),
    RegAut(&'a nomaut::RegisterAutomaton),
    Formula(&'a nomaut::MsoFormula),
}

impl Acceptor for Language<'_> {
    fn accepts(&self, word: &DataWord) -> bool {
        match self {
            Language::Nofa(aut) => aut.accepts(word),
            Language::Tracked(aut) => aut.accepts(word),
            Language::Fsuba(aut) => aut.accepts(word),
            Language::RegAut(aut) => aut.accepts(word),
            Language::Formula(f) => eval_sentence(f, word).expect("validated sentence"),
        }
    }
}

fn as_language<'a>(artifact: &'a Artifact, path: &Path) -> Result<Language<'a>, CliError> {
    match artifact {
        Artifact::Nofa(aut) => Ok(Language::Nofa(aut)),
        Artifact::Tracked(aut) => Ok(Language::Tracked(aut)),
        Artifact::Fsuba(aut) => Ok(Language::Fsuba(aut)),
        Artifact::RegAut(aut) => Ok(Language::RegAut(aut)),
        Artifact::Formula(f) => Ok(Language::Formula(f)),
        Artifact::Word(_) => Err(CliError(format!(
            "{}: a word file does not define a language",
            path.display()
        ))),
    }
}

/// Bails out when evaluating `language` on words up to `max_len` would
/// enumerate subsets of an overlong word.
fn check_so_bound(language: &Language, max_len: usize, bound: usize) -> Result<(), CliError> {
    if let Language::Formula(f) = language {
        if f.has_so_quantifier() && max_len > bound {
            return Err(CliError(format!(
                "formula has second-order quantifiers; refusing words longer than {bound} (got {max_len})"
            )));
        }
    }
    Ok(())
}

fn expect_nofa<'a>(artifact: &'a Artifact, path: &Path) -> Result<&'a Nofa, CliError> {
    match artifact {
        Artifact::Nofa(aut) => Ok(aut),
        other => Err(CliError(format!(
            "{}: expected kind nofa or nofra, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn expect_exact<'a>(aut: &'a Nofa, path: &Path, op: &str) -> Result<&'a Nofa, CliError> {
    match aut.semantics {
        Semantics::Exact => Ok(aut),
        Semantics::Consistency => Err(CliError(format!(
            "{}: `{op}` expects exact semantics (kind nofa), found kind nofra",
            path.display()
        ))),
    }
}

fn verdict(accepted: bool) -> ExitCode {
    if accepted {
        println!("accept");
        ExitCode::SUCCESS
    } else {
        println!("reject");
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Validate { file } => {
            load(&file)?;
            println!("ok");
            Ok(ExitCode::SUCCESS)
        }
        Command::Member { file, word } => {
            let artifact = load(&file)?;
            let language = as_language(&artifact, &file)?;
            let input = parse_word(&word);
            check_so_bound(&language, input.word.len(), DEFAULT_SO_LEN)?;
            Ok(verdict(language.accepts(&input.word)))
        }
        Command::Transform { file, op, out } => {
            let artifact = load(&file)?;
            let aut = expect_nofa(&artifact, &file)?;
            let result = match op {
                Op::Close => Artifact::Nofa(transforms::positive_closure(expect_exact(aut, &file, "close")?)),
                Op::Deguess => Artifact::Tracked(transforms::deguess(aut)),
                Op::Rigidify => {
                    warn_factorial(aut);
                    Artifact::Nofa(transforms::rigidify(expect_exact(aut, &file, "rigidify")?))
                }
                Op::Fsuba => {
                    warn_factorial(aut);
                    let rigid = transforms::rigidify(expect_exact(aut, &file, "fsuba")?);
                    Artifact::Fsuba(transforms::to_fsuba(&rigid).map_err(CliError::from)?)
                }
                Op::Regaut => Artifact::RegAut(transforms::to_positive_regaut(aut)),
                Op::Mso => Artifact::Formula(nomaut::logic::automaton_to_mso(aut)),
            };
            let text = print_spec(&result);
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| CliError(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { file, atoms, max_len } => {
            let artifact = load(&file)?;
            let language = as_language(&artifact, &file)?;
            check_so_bound(&language, max_len, DEFAULT_SO_LEN)?;
            let alphabet = parse_atoms(&atoms)?;
            for word in sample_language(&language, &alphabet.atoms(), max_len) {
                println!("{}", alphabet.render(&word));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { file1, file2, atoms, max_len } => {
            let left = load(&file1)?;
            let right = load(&file2)?;
            let left_language = as_language(&left, &file1)?;
            let right_language = as_language(&right, &file2)?;
            check_so_bound(&left_language, max_len, DEFAULT_SO_LEN)?;
            check_so_bound(&right_language, max_len, DEFAULT_SO_LEN)?;
            let alphabet = parse_atoms(&atoms)?;
            match oracle::bounded_equiv(&left_language, &right_language, &alphabet.atoms(), max_len) {
                None => {
                    println!("equal");
                    Ok(ExitCode::SUCCESS)
                }
                Some(word) => {
                    println!("differ on: {}", alphabet.render(&word));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Oracle { file, word, pool } => {
            let artifact = load(&file)?;
            let input = parse_word(&word);
            let accepted = match &artifact {
                Artifact::Nofa(aut) => {
                    oracle::nofa_runs_membership(aut, &input.word, pool.unwrap_or(2 * aut.registers))
                }
                Artifact::RegAut(aut) => {
                    oracle::regaut_runs_membership(aut, &input.word, pool.unwrap_or(2 * aut.registers))
                }
                Artifact::Fsuba(aut) => oracle::fsuba_runs_membership(aut, &input.word),
                Artifact::Tracked(aut) => oracle::tracked_runs_membership(aut, &input.word),
                other => {
                    return Err(CliError(format!(
                        "{}: oracle expects an automaton, found {}",
                        file.display(),
                        other.kind()
                    )))
                }
            };
            Ok(verdict(accepted))
        }
        Command::Eval { file, word, max_so_len } => {
            let artifact = load(&file)?;
            let Artifact::Formula(formula) = &artifact else {
                return Err(CliError(format!(
                    "{}: eval expects kind mso, found {}",
                    file.display(),
                    artifact.kind()
                )));
            };
            let input = parse_word(&word);
            if formula.has_so_quantifier() && input.word.len() > max_so_len {
                return Err(CliError(format!(
                    "formula has second-order quantifiers; refusing words longer than {max_so_len} (got {})",
                    input.word.len()
                )));
            }
            Ok(verdict(eval_sentence(formula, &input.word).map_err(CliError::from)?))
        }
    }
}

fn parse_atoms(text: &str) -> Result<WordArtifact, CliError> {
    let atoms = parse_word(text);
    if atoms.atom_names.is_empty() {
        return Err(CliError("--atoms needs at least one atom token".into()));
    }
    Ok(atoms)
}

fn warn_factorial(aut: &Nofa) {
    if aut.registers > 4 {
        eprintln!(
            "warning: rigidification multiplies the control by {}! = a large factor for {} registers",
            aut.registers, aut.registers
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

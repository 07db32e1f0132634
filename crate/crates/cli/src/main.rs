use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use symsep::families::{
    dicke, ghz, random_product, random_symmetric, seeded_rng, slater, translation_eigenstate,
    w_state,
};
use symsep::separability::ClassifyOptions;
use symsep::statefile::to_canonical_json;
use symsep::verify::{run_suite, Suite};
use symsep::{Error, LoadedState, StateFile};

mod report;

#[derive(Parser)]
#[command(name = "symsep", version, about = "Exchange symmetry and entanglement of n-partite states")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Relative Schmidt cutoff: singular values below tol * s_max count as zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit machine-readable JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Emit a human-readable summary (the default).
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a pure or product state file.
    Classify { file: PathBuf },
    /// Write a canonical state family as a state file.
    Generate {
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Excitation count (dicke) or momentum index (translation-eigenstate).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Symmetrize a product state file and check the result.
    Symmetrize {
        file: PathBuf,
        /// Also write the normalized symmetrized state here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run randomized property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Ghz,
    W,
    Dicke,
    RandomSymmetric,
    RandomProduct,
    Slater,
    TranslationEigenstate,
}

enum Failure {
    Suite,
    Input(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_guard() {
            Failure::Guard(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read_state(path: &Path) -> Result<LoadedState, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(StateFile::parse(&text)?.to_state()?)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(global: &Global, mut value: Value, started: Instant, text: impl FnOnce(&Value) -> String) {
    report::attach_timing(&mut value, started.elapsed());
    if global.json {
        print!("{}", to_canonical_json(&value));
    } else {
        print!("{}", text(&value));
    }
}

fn generate(family: Family, n: usize, d: usize, k: Option<usize>, seed: u64) -> symsep::Result<StateFile> {
    let mut rng = seeded_rng(seed);
    let need_k = |name: &str| {
        k.ok_or_else(|| Error::InvalidParameter(format!("{name} needs --k")))
    };
    let psi = match family {
        Family::Ghz => ghz(n, d)?,
        Family::W => {
            if d != 2 {
                return Err(Error::InvalidParameter("the W state is defined for d = 2".into()));
            }
            w_state(n)?
        }
        Family::Dicke => dicke(n, d, need_k("dicke")?)?,
        Family::RandomSymmetric => random_symmetric(n, d, &mut rng)?,
        Family::RandomProduct => return Ok(StateFile::from_product(&random_product(n, d, &mut rng)?)),
        Family::Slater => slater(n, d)?,
        Family::TranslationEigenstate => {
            translation_eigenstate(n, d, need_k("translation-eigenstate")?, &mut rng)?
        }
    };
    Ok(StateFile::from_pure(&psi))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if !(g.tol > 0.0 && g.tol < 1.0) {
        return Err(Failure::Input(format!("--tol must lie in (0, 1), got {}", g.tol)));
    }
    let opts = ClassifyOptions { rel_tol: g.tol };
    let started = Instant::now();
    match cli.command {
        Command::Classify { file } => {
            let state = read_state(&file)?;
            let value = report::classify(&file, &state, &opts, g.seed)?;
            emit(g, value, started, report::classify_text);
        }
        Command::Generate { family, n, d, k, out } => {
            let text = generate(family, n, d, k, g.seed)?.to_canonical_string();
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Symmetrize { file, out } => {
            let phi = match read_state(&file)? {
                LoadedState::Product(phi) => phi,
                other => {
                    return Err(Failure::Input(format!(
                        "symmetrize needs a product state file, got kind {}",
                        other.kind()
                    )))
                }
            };
            let (value, state) = report::symmetrize(&file, &phi, &opts, g.seed)?;
            if let Some(path) = out {
                write_text(&path, &state.to_canonical_string())?;
            }
            emit(g, value, started, report::symmetrize_text);
        }
        Command::Verify { suite, trials } => {
            let suite: Suite = suite.parse()?;
            let r = run_suite(suite, trials, g.seed);
            let passed = r.passed();
            emit(g, report::verify(&r), started, report::verify_text);
            if !passed {
                return Err(Failure::Suite);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

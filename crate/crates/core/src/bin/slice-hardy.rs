use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slice_hardy::scenario::{run_scenario, CheckName, ScenarioConfig};
use slice_hardy::Error;

/// Runs numerical checks for local Orlicz-slice Hardy spaces and writes CSV
/// reports.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// TOML scenario file; defaults apply to every missing key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated checks to run in addition to the subcommand.
    #[arg(long, global = true, value_delimiter = ',')]
    check: Vec<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Every check.
    All,
    /// Luxemburg, slice and superadditivity norm identities.
    Norms,
    /// Pointwise maximal chain and quasi-norm bands.
    MaximalEquivalence,
    /// Decomposition round trip and atomic quasi-norm.
    CzRoundtrip,
    /// Support, size and moment conditions of every atom.
    AtomValidation,
    /// Atom pairings against Campanato norms.
    Duality,
    /// Amalgam to Musielak–Orlicz inclusions.
    Embeddings,
    /// Ball-indicator norm band.
    Lemma888,
    /// Vector-valued maximal inequality.
    FeffermanStein,
    /// bmo norms of the constant function.
    BmoFacts,
}

impl Command {
    fn checks(self) -> Vec<CheckName> {
        match self {
            Command::All => CheckName::ALL.to_vec(),
            Command::Norms => vec![CheckName::Norms],
            Command::MaximalEquivalence => vec![CheckName::MaximalEquivalence],
            Command::CzRoundtrip => vec![CheckName::CzRoundtrip],
            Command::AtomValidation => vec![CheckName::AtomValidation],
            Command::Duality => vec![CheckName::Duality],
            Command::Embeddings => vec![CheckName::Embeddings],
            Command::Lemma888 => vec![CheckName::Lemma888],
            Command::FeffermanStein => vec![CheckName::FeffermanStein],
            Command::BmoFacts => vec![CheckName::BmoFacts],
        }
    }
}

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match &cli.config {
        Some(p) => match ScenarioConfig::load(p) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        },
        None => ScenarioConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    let out = cli.out.clone().or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let sc = match config.validate() {
        Ok(sc) => sc,
        Err(e) => return fail(&e),
    };
    let mut checks = match cli.command {
        Some(c) => c.checks(),
        None if cli.check.is_empty() => sc.checks.clone(),
        None => Vec::new(),
    };
    for name in &cli.check {
        match name.parse::<CheckName>() {
            Ok(c) => checks.push(c),
            Err(e) => return fail(&e),
        }
    }
    match run_scenario(&sc, &checks, &out) {
        Ok(summary) => {
            print!("{summary}");
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("slice-hardy: {e}");
    ExitCode::from(if matches!(e, Error::Config(_)) { EXIT_CONFIG } else { EXIT_ERROR })
}

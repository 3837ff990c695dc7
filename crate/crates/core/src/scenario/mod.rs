//! Scenario runner: configuration, seeded families, the named checks and
//! their CSV artifacts.

mod checks;
pub mod config;
pub mod family;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::atomic::io::write_decomposition;
use crate::atomic::Decomposition;
use crate::error::{Error, Result};
use crate::report::{Summary, SummaryLine, Table};

pub use config::{Scenario, ScenarioConfig};
pub use family::{generate_family, random_fields, Generator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckName {
    Norms,
    MaximalEquivalence,
    CzRoundtrip,
    AtomValidation,
    Duality,
    Embeddings,
    Lemma888,
    FeffermanStein,
    BmoFacts,
}

impl CheckName {
    pub const ALL: [CheckName; 9] = [
        CheckName::Norms,
        CheckName::MaximalEquivalence,
        CheckName::CzRoundtrip,
        CheckName::AtomValidation,
        CheckName::Duality,
        CheckName::Embeddings,
        CheckName::Lemma888,
        CheckName::FeffermanStein,
        CheckName::BmoFacts,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::Norms => "norms",
            CheckName::MaximalEquivalence => "maximal-equivalence",
            CheckName::CzRoundtrip => "cz-roundtrip",
            CheckName::AtomValidation => "atom-validation",
            CheckName::Duality => "duality",
            CheckName::Embeddings => "embeddings",
            CheckName::Lemma888 => "lemma888",
            CheckName::FeffermanStein => "fefferman-stein",
            CheckName::BmoFacts => "bmo-facts",
        }
    }
}

impl FromStr for CheckName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        CheckName::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown check '{s}'")))
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tables, summary lines and optional decomposition artifacts of one check.
#[derive(Debug, Clone, Default)]
pub struct CheckOutput {
    pub tables: Vec<(String, Table)>,
    pub lines: Vec<SummaryLine>,
    pub decompositions: Vec<(String, Decomposition)>,
}

/// Runs one check without touching the filesystem.
pub fn run_check(sc: &Scenario, check: CheckName) -> Result<CheckOutput> {
    match check {
        CheckName::Norms => checks::norms(sc),
        CheckName::MaximalEquivalence => checks::maximal_equivalence(sc),
        CheckName::CzRoundtrip => checks::cz_roundtrip(sc),
        CheckName::AtomValidation => checks::atom_validation(sc),
        CheckName::Duality => checks::duality(sc),
        CheckName::Embeddings => checks::embeddings(sc),
        CheckName::Lemma888 => checks::lemma888(sc),
        CheckName::FeffermanStein => checks::fefferman_stein(sc),
        CheckName::BmoFacts => checks::bmo_facts(sc),
    }
}

/// Runs `checks` (duplicates removed, in canonical order), writes
/// `<out>/<check>.csv` files and decomposition directories as each check
/// finishes, and `<out>/summary.csv` last.
pub fn run_scenario(sc: &Scenario, checks: &[CheckName], out: &Path) -> Result<Summary> {
    let mut list = checks.to_vec();
    list.sort();
    list.dedup();
    std::fs::create_dir_all(out)?;
    let results = list
        .par_iter()
        .map(|&c| {
            let res = run_check(sc, c)?;
            for (name, table) in &res.tables {
                table.write(out.join(format!("{name}.csv")))?;
            }
            for (name, dec) in &res.decompositions {
                write_decomposition(out.join(name), dec)?;
            }
            Ok(res.lines)
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = Summary { lines: results.into_iter().flatten().collect() };
    summary.table().write(out.join("summary.csv"))?;
    Ok(summary)
}

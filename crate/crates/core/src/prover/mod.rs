//! Provers: the built-in saturation prover `mini-e`, external systems from a
//! text database run under process-tree limits, and SZS status handling.

mod cputime;
mod external;
mod saturate;
mod sysdb;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use cputime::{process_tree_usage, thread_cpu_time, TreeUsage};
pub use external::{parse_used_axioms, run_external, ExternalSemaphore};
pub use saturate::{prove_formulas, saturate};
pub use sysdb::{load_system_db, parse_system_db, serialize_system_db, ProverKind, ProverSystem, SystemDbError, INTERNAL_SYSTEM};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SzsStatus {
    Theorem,
    CounterSatisfiable,
    ResourceOut,
    GaveUp,
    Error(String),
}

impl SzsStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SzsStatus::Theorem => "Theorem",
            SzsStatus::CounterSatisfiable => "CounterSatisfiable",
            SzsStatus::ResourceOut => "ResourceOut",
            SzsStatus::GaveUp => "GaveUp",
            SzsStatus::Error(_) => "Error",
        }
    }

    /// Whether the run settled the question either way.
    pub fn is_answer(&self) -> bool {
        matches!(self, SzsStatus::Theorem | SzsStatus::CounterSatisfiable)
    }
}

impl fmt::Display for SzsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SzsStatus::Error(msg) => write!(f, "Error ({msg})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for SzsStatus {
    type Err = String;

    /// Accepts the status names used in system-database patterns.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Theorem" => SzsStatus::Theorem,
            "CounterSatisfiable" => SzsStatus::CounterSatisfiable,
            "ResourceOut" => SzsStatus::ResourceOut,
            "GaveUp" => SzsStatus::GaveUp,
            "Error" => SzsStatus::Error(String::new()),
            other => return Err(format!("unknown SZS status `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub cpu_seconds: f64,
    pub wall_seconds: f64,
    pub memory_bytes: u64,
    /// Internal prover only.
    pub max_generated_clauses: usize,
    /// Internal prover only: heavier derived clauses are discarded.
    pub max_clause_weight: usize,
}

impl Default for Limits {
    /// User-initiated prover calls.
    fn default() -> Self {
        Limits {
            cpu_seconds: 10.0,
            wall_seconds: 15.0,
            memory_bytes: 1 << 30,
            max_generated_clauses: 200_000,
            max_clause_weight: 256,
        }
    }
}

impl Limits {
    /// Limits of the "obvious inference" checker.
    pub fn checker() -> Self {
        Limits {
            cpu_seconds: 2.0,
            wall_seconds: 4.0,
            memory_bytes: 1 << 30,
            max_generated_clauses: 10_000,
            max_clause_weight: 64,
        }
    }

    /// Overrides the CPU limit; the wall limit follows it so a stalled
    /// process is also cut off at the same point.
    pub fn with_cpu(mut self, seconds: f64) -> Self {
        self.cpu_seconds = seconds;
        self.wall_seconds = seconds;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub system: String,
    pub status: SzsStatus,
    pub cpu_millis: u64,
    pub wall_millis: u64,
    /// Present only for `Theorem`, when the proof names its premises.
    pub used_axioms: Option<Vec<String>>,
    pub raw_output_path: Option<PathBuf>,
    /// Prover output; written to `raw_output_path` by callers that keep it.
    #[serde(skip)]
    pub output: String,
}

/// Runs `primary`, then `fallback` unless the first run settled the
/// problem.
pub fn prove_with_fallback(
    mut run: impl FnMut(&ProverSystem) -> RunResult,
    primary: &ProverSystem,
    fallback: &ProverSystem,
) -> Vec<RunResult> {
    let first = run(primary);
    if first.status.is_answer() {
        return vec![first];
    }
    let second = run(fallback);
    vec![first, second]
}

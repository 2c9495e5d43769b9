//! The prover system database: one stanza of `key = value` lines per
//! system, stanzas separated by blank lines, `#` comments.
//!
//! ```text
//! name = eprover
//! command = eprover --auto --cpu-limit=%d %s
//! status Theorem = SZS status Theorem
//! status CounterSatisfiable = SZS status CounterSatisfiable
//! cpu = 10
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SzsStatus;

pub const INTERNAL_SYSTEM: &str = "mini-e";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProverKind {
    Internal,
    External,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProverSystem {
    pub name: String,
    pub kind: ProverKind,
    /// `%s` is the problem path, `%d` the CPU limit in whole seconds.
    pub command_template: String,
    /// Output substring and the status it signals, in database order.
    pub status_patterns: Vec<(String, SzsStatus)>,
    pub default_cpu: f64,
}

impl ProverSystem {
    pub fn internal() -> Self {
        ProverSystem {
            name: INTERNAL_SYSTEM.to_string(),
            kind: ProverKind::Internal,
            command_template: String::new(),
            status_patterns: [
                SzsStatus::Theorem,
                SzsStatus::CounterSatisfiable,
                SzsStatus::ResourceOut,
                SzsStatus::GaveUp,
            ]
            .into_iter()
            .map(|s| (format!("SZS status {}", s.name()), s))
            .collect(),
            default_cpu: 10.0,
        }
    }

    /// Status signalled by prover output, if any pattern occurs in it.
    pub fn classify(&self, output: &str) -> Option<SzsStatus> {
        self.status_patterns
            .iter()
            .find(|(pat, _)| output.contains(pat.as_str()))
            .map(|(_, s)| s.clone())
    }

    /// Command line for a run: the template split on whitespace, with
    /// placeholders substituted per argument.
    pub fn command_line(&self, problem: &Path, cpu_seconds: f64) -> Vec<String> {
        let path = problem.to_string_lossy();
        let secs = (cpu_seconds.ceil() as u64).max(1).to_string();
        self.command_template
            .split_whitespace()
            .map(|arg| arg.replace("%s", &path).replace("%d", &secs))
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum SystemDbError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate system `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn malformed(line: usize, message: impl Into<String>) -> SystemDbError {
    SystemDbError::Malformed {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct Stanza {
    start: usize,
    name: Option<String>,
    command: Option<String>,
    patterns: Vec<(String, SzsStatus)>,
    cpu: Option<f64>,
}

fn finish(st: Stanza, systems: &mut Vec<ProverSystem>) -> Result<(), SystemDbError> {
    let name = st.name.ok_or_else(|| malformed(st.start, "stanza has no `name`"))?;
    let command = st
        .command
        .ok_or_else(|| malformed(st.start, format!("system `{name}` has no `command`")))?;
    if command.matches("%s").count() != 1 {
        return Err(malformed(
            st.start,
            format!("command of `{name}` must contain `%s` exactly once"),
        ));
    }
    if st.patterns.is_empty() {
        return Err(malformed(st.start, format!("system `{name}` has no status patterns")));
    }
    for (i, (a, _)) in st.patterns.iter().enumerate() {
        for (j, (b, _)) in st.patterns.iter().enumerate() {
            if i != j && b.contains(a.as_str()) {
                return Err(malformed(
                    st.start,
                    format!("status pattern `{a}` of `{name}` overlaps `{b}`"),
                ));
            }
        }
    }
    if systems.iter().any(|s| s.name == name) {
        return Err(SystemDbError::Duplicate { line: st.start, name });
    }
    systems.push(ProverSystem {
        name,
        kind: ProverKind::External,
        command_template: command,
        status_patterns: st.patterns,
        default_cpu: st.cpu.unwrap_or(10.0),
    });
    Ok(())
}

/// Parses database text. The internal system comes first and is always
/// present.
pub fn parse_system_db(text: &str) -> Result<Vec<ProverSystem>, SystemDbError> {
    let mut systems = vec![ProverSystem::internal()];
    let mut current: Option<Stanza> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if let Some(st) = current.take() {
                finish(st, &mut systems)?;
            }
            continue;
        }
        let st = current.get_or_insert_with(|| Stanza {
            start: lineno,
            ..Stanza::default()
        });
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| malformed(lineno, "expected `key = value`"))?;
        if value.is_empty() {
            return Err(malformed(lineno, format!("empty value for `{key}`")));
        }
        match key {
            "name" => {
                if st.name.is_some() {
                    return Err(malformed(lineno, "second `name` in one stanza"));
                }
                st.name = Some(value.to_string());
            }
            "command" => st.command = Some(value.to_string()),
            "cpu" => {
                let v: f64 = value
                    .parse()
                    .ok()
                    .filter(|v: &f64| *v > 0.0 && v.is_finite())
                    .ok_or_else(|| malformed(lineno, format!("bad cpu value `{value}`")))?;
                st.cpu = Some(v);
            }
            _ => {
                let Some(status) = key.strip_prefix("status ") else {
                    return Err(malformed(lineno, format!("unknown key `{key}`")));
                };
                let status: SzsStatus = status.trim().parse().map_err(|e: String| malformed(lineno, e))?;
                st.patterns.push((value.to_string(), status));
            }
        }
    }
    if let Some(st) = current.take() {
        finish(st, &mut systems)?;
    }
    Ok(systems)
}

pub fn load_system_db(path: &Path) -> Result<Vec<ProverSystem>, SystemDbError> {
    let text = fs::read_to_string(path).map_err(|source| SystemDbError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_system_db(&text)
}

/// Database text for the external systems of `systems`.
pub fn serialize_system_db(systems: &[ProverSystem]) -> String {
    let mut stanzas = Vec::new();
    for s in systems.iter().filter(|s| s.kind == ProverKind::External) {
        let mut st = format!("name = {}\ncommand = {}\n", s.name, s.command_template);
        for (pat, status) in &s.status_patterns {
            st.push_str(&format!("status {} = {pat}\n", status.name()));
        }
        st.push_str(&format!("cpu = {}\n", s.default_cpu));
        stanzas.push(st);
    }
    stanzas.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPROVER: &str = "name = eprover\n\
        command = eprover --auto --cpu-limit=%d %s\n\
        status Theorem = SZS status Theorem\n\
        status CounterSatisfiable = SZS status CounterSatisfiable\n\
        status ResourceOut = SZS status ResourceOut\n";

    #[test]
    fn eprover_stanza() {
        let systems = parse_system_db(EPROVER).unwrap();
        assert_eq!(systems.len(), 2);
        assert_eq!(systems[0].name, INTERNAL_SYSTEM);
        let e = &systems[1];
        assert_eq!(e.name, "eprover");
        assert_eq!(e.kind, ProverKind::External);
        assert_eq!(e.classify("# SZS status Theorem for x"), Some(SzsStatus::Theorem));
        assert_eq!(
            e.command_line(Path::new("/p/x.p"), 2.5),
            vec!["eprover", "--auto", "--cpu-limit=3", "/p/x.p"]
        );
    }

    #[test]
    fn empty_file_has_internal_only() {
        let systems = parse_system_db("").unwrap();
        assert_eq!(systems.len(), 1);
        assert_eq!(systems[0].kind, ProverKind::Internal);
    }

    #[test]
    fn template_needs_problem_placeholder() {
        let err = parse_system_db("name = x\ncommand = x --cpu %d\nstatus Theorem = yes\n").unwrap_err();
        assert!(err.to_string().contains("%s"), "{err}");
    }

    #[test]
    fn duplicates_and_overlaps() {
        let dup = format!("{EPROVER}\n{EPROVER}");
        assert!(matches!(parse_system_db(&dup), Err(SystemDbError::Duplicate { line: 7, .. })));
        let internal = "name = mini-e\ncommand = x %s\nstatus Theorem = T\n";
        assert!(matches!(parse_system_db(internal), Err(SystemDbError::Duplicate { .. })));
        let overlap = "name = x\ncommand = x %s\nstatus Theorem = Theorem\nstatus GaveUp = no Theorem\n";
        assert!(parse_system_db(overlap).is_err());
    }

    #[test]
    fn malformed_line_number() {
        let err = parse_system_db("name = x\ncommand = x %s\nbogus line\n").unwrap_err();
        assert!(matches!(err, SystemDbError::Malformed { line: 3, .. }));
    }

    #[test]
    fn serialize_round_trip() {
        let systems = parse_system_db(&format!("{EPROVER}\nname = s\ncommand = s %s\nstatus GaveUp = gave up\ncpu = 3\n")).unwrap();
        let again = parse_system_db(&serialize_system_db(&systems)).unwrap();
        assert_eq!(again, systems);
    }
}

//! Fixed articles, expected outputs, prover databases and fake provers.

use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};

/// The sample article.
pub const MTEST1: &str = "article mtest1; reserve R for relation; reserve X for set;
func relincl(X) -> relation;
definition d1: for X holds wellorder(relincl(X));
theorem t1: for R holds R = R;
theorem t2: for X holds wellorder(relincl(X))
proof let X; assume a1: set(X); thus wellorder(relincl(X)) by d1; end;
";

/// Sample article whose only justification omits the definition.
pub const MTEST1_STRIPPED: &str = "article mtest1; reserve R for relation; reserve X for set;
func relincl(X) -> relation;
definition d1: for X holds wellorder(relincl(X));
theorem t1: for R holds R = R;
theorem t2: for X holds wellorder(relincl(X))
proof let X; assume a1: set(X); thus wellorder(relincl(X)) by a1; end;
";

/// Generated problem of the sample's obligation, without the timestamp.
pub const MTEST1_PROBLEM: &str = "% origin: t2:3
fof(d1_mtest1, axiom, ! [X] : (set(X) => wellorder(relincl(X)))).
fof(dt_c1_2__mtest1, axiom, set(c1)).
fof(dt_k1_mtest1, axiom, ! [X] : (set(X) => relation(relincl(X)))).
fof(e2_2__mtest1, conjecture, wellorder(relincl(c1))).
";

/// Obligation id of the sample.
pub const MTEST1_OBLIGATION: &str = "e2_2__mtest1";

/// Four cited definitions, one declared functor, one typed constant.
pub const SEVEN_NAMES: &str = "article mseven; reserve X for set; reserve R for relation;
func relincl(X) -> relation;
definition d1: for R holds (reflexive(R) & transitive(R) & antisymmetric(R) implies wellorder(R));
definition d2: for X holds reflexive(relincl(X));
definition d3: for X holds transitive(relincl(X));
definition d4: for X holds antisymmetric(relincl(X));
theorem t1: for X holds wellorder(relincl(X))
proof let X; assume a1: set(X); thus wellorder(relincl(X)) by d1, d2, d3, d4; end;
";

/// Database stanza for an E-style prover.
pub const EPROVER_DB: &str = "# E prover in auto mode
name = eprover
command = eprover --auto --tptp3-format --cpu-limit=%d %s
status Theorem = SZS status Theorem
status CounterSatisfiable = SZS status CounterSatisfiable
status ResourceOut = SZS status ResourceOut
status GaveUp = SZS status GaveUp
cpu = 10
";

/// Writes an executable shell script.
pub fn write_script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, format!("#!/bin/sh\n{body}")).unwrap();
    fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).unwrap();
    path
}

/// A prover that forks two CPU-burning children, records their pids in
/// the file named by its first argument, and burns CPU itself.
pub fn cpu_burner(dir: &Path) -> PathBuf {
    write_script(
        dir,
        "burner.sh",
        "( while :; do :; done ) &\necho $! >> \"$1\"\n( while :; do :; done ) &\necho $! >> \"$1\"\necho $$ >> \"$1\"\nwhile :; do :; done\n",
    )
}

/// A prover that always reports a proof citing `d1_mtest1`.
pub fn theorem_prover(dir: &Path) -> PathBuf {
    write_script(
        dir,
        "theorem.sh",
        "echo '% SZS status Theorem for problem'\necho \"cnf(c1, axiom, wellorder(X), file('$1', d1_mtest1)).\"\n",
    )
}

/// A prover that prints nothing recognisable.
pub fn silent_prover(dir: &Path) -> PathBuf {
    write_script(dir, "silent.sh", "echo hello\n")
}

/// True if `pid` is gone or a zombie.
pub fn process_dead(pid: i32) -> bool {
    match fs::read_to_string(format!("/proc/{pid}/stat")) {
        Err(_) => true,
        Ok(stat) => {
            let state = stat.rsplit_once(')').and_then(|(_, r)| r.trim_start().chars().next());
            matches!(state, Some('Z') | Some('X'))
        }
    }
}

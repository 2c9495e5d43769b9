//! Running external provers in their own process group under CPU, wall
//! clock and memory limits accounted over the whole process tree.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::os::unix::process::CommandExt;
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::{Condvar, Mutex, OnceLock};
use std::thread;
use std::time::{Duration, Instant};

use super::cputime::process_tree_usage;
use super::{Limits, ProverKind, ProverSystem, RunResult, SzsStatus};
use crate::formula::tptp::parse_tptp;

const POLL: Duration = Duration::from_millis(50);

/// Counting semaphore capping concurrent external prover runs.
pub struct ExternalSemaphore {
    free: Mutex<usize>,
    cv: Condvar,
}

pub struct Permit<'a>(&'a ExternalSemaphore);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

impl ExternalSemaphore {
    pub fn new(permits: usize) -> Self {
        ExternalSemaphore {
            free: Mutex::new(permits.max(1)),
            cv: Condvar::new(),
        }
    }

    /// Process-wide instance sized to the number of cores.
    pub fn global() -> &'static ExternalSemaphore {
        static GLOBAL: OnceLock<ExternalSemaphore> = OnceLock::new();
        GLOBAL.get_or_init(|| ExternalSemaphore::new(thread::available_parallelism().map_or(1, |n| n.get())))
    }

    pub fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        Permit(self)
    }
}

/// Axiom names cited as `file(<path>, <name>)` in prover output, restricted
/// to `known`, in order of first mention.
pub fn parse_used_axioms(output: &str, known: &BTreeSet<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut rest = output;
    while let Some(i) = rest.find("file(") {
        rest = &rest[i + 5..];
        let after_path = if let Some(quoted) = rest.strip_prefix('\'') {
            match quoted.find('\'') {
                Some(j) => &quoted[j + 1..],
                None => break,
            }
        } else {
            match rest.find(',') {
                Some(j) => &rest[j..],
                None => break,
            }
        };
        let Some(after_comma) = after_path.trim_start().strip_prefix(',') else {
            continue;
        };
        let name: String = after_comma
            .trim_start()
            .trim_start_matches('\'')
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        if known.contains(&name) && !out.contains(&name) {
            out.push(name);
        }
    }
    out
}

fn error_result(sys: &ProverSystem, message: String, wall: Duration) -> RunResult {
    RunResult {
        system: sys.name.clone(),
        status: SzsStatus::Error(message),
        cpu_millis: 0,
        wall_millis: wall.as_millis() as u64,
        used_axioms: None,
        raw_output_path: None,
        output: String::new(),
    }
}

fn alive(pid: i32) -> bool {
    match fs::read_to_string(format!("/proc/{pid}/stat")) {
        Err(_) => false,
        Ok(stat) => !matches!(
            stat.rsplit_once(')').and_then(|(_, r)| r.trim_start().chars().next()),
            Some('Z') | Some('X')
        ),
    }
}

/// Kills the group and `pids`, then waits (bounded) until none of them,
/// nor anything they forked meanwhile, is still running.
fn kill_tree(pgid: i32, pids: &BTreeSet<i32>) {
    let mut pending = pids.clone();
    for _ in 0..200 {
        // SAFETY: plain signal delivery; failures (already gone) are ignored.
        unsafe {
            libc::killpg(pgid, libc::SIGKILL);
            for &p in &pending {
                libc::kill(p, libc::SIGKILL);
            }
        }
        pending.extend(process_tree_usage(pgid).pids);
        pending.retain(|&p| alive(p));
        if pending.is_empty() {
            return;
        }
        thread::sleep(Duration::from_millis(2));
    }
}

fn timeval(tv: libc::timeval) -> Duration {
    Duration::from_secs(tv.tv_sec as u64) + Duration::from_micros(tv.tv_usec as u64)
}

/// Runs an external system on `problem`, writing its stdout and stderr to
/// `output_path`.
pub fn run_external(sys: &ProverSystem, problem: &Path, limits: &Limits, output_path: &Path) -> RunResult {
    let start = Instant::now();
    if sys.kind != ProverKind::External {
        return error_result(sys, format!("`{}` is not an external system", sys.name), start.elapsed());
    }
    let argv = sys.command_line(problem, limits.cpu_seconds);
    let Some((program, args)) = argv.split_first() else {
        return error_result(sys, "empty command".to_string(), start.elapsed());
    };
    let _permit = ExternalSemaphore::global().acquire();
    let start = Instant::now();
    let out = match File::create(output_path) {
        Ok(f) => f,
        Err(e) => return error_result(sys, format!("cannot create {}: {e}", output_path.display()), start.elapsed()),
    };
    let err = match out.try_clone() {
        Ok(f) => f,
        Err(e) => return error_result(sys, format!("cannot duplicate output handle: {e}"), start.elapsed()),
    };
    let child = Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(out)
        .stderr(err)
        .process_group(0)
        .spawn();
    let child = match child {
        Ok(c) => c,
        Err(e) => return error_result(sys, format!("failed to start `{program}`: {e}"), start.elapsed()),
    };
    let pid = child.id() as i32;
    let mut peak_cpu = Duration::ZERO;
    let mut breached = false;
    let mut rusage_cpu = Duration::ZERO;
    loop {
        let mut status = 0;
        // SAFETY: zeroed rusage is a valid out-parameter.
        let mut ru: libc::rusage = unsafe { std::mem::zeroed() };
        // SAFETY: `pid` is our own child; we never reap it through `child`.
        let r = unsafe { libc::wait4(pid, &mut status, libc::WNOHANG, &mut ru) };
        if r == pid || r < 0 {
            if r == pid {
                rusage_cpu = timeval(ru.ru_utime) + timeval(ru.ru_stime);
            }
            let rest = process_tree_usage(pid);
            kill_tree(pid, &rest.pids);
            break;
        }
        let usage = process_tree_usage(pid);
        peak_cpu = peak_cpu.max(usage.cpu);
        let wall = start.elapsed();
        if usage.cpu.as_secs_f64() > limits.cpu_seconds
            || wall.as_secs_f64() > limits.wall_seconds
            || usage.rss_bytes > limits.memory_bytes
        {
            breached = true;
            kill_tree(pid, &usage.pids);
            // SAFETY: as above; blocking reap of the killed leader.
            unsafe {
                libc::wait4(pid, &mut status, 0, &mut ru);
            }
            rusage_cpu = timeval(ru.ru_utime) + timeval(ru.ru_stime);
            let rest = process_tree_usage(pid);
            kill_tree(pid, &rest.pids);
            break;
        }
        thread::sleep(POLL);
    }
    drop(child);
    let wall_millis = start.elapsed().as_millis() as u64;
    let cpu_millis = peak_cpu.max(rusage_cpu).as_millis() as u64;
    let output = fs::read_to_string(output_path).unwrap_or_default();
    let status = if breached {
        SzsStatus::ResourceOut
    } else {
        sys.classify(&output).unwrap_or(SzsStatus::GaveUp)
    };
    let used_axioms = if status == SzsStatus::Theorem {
        fs::read_to_string(problem)
            .ok()
            .and_then(|text| parse_tptp(&text).ok())
            .map(|stmts| stmts.into_iter().map(|s| s.name).collect::<BTreeSet<_>>())
            .map(|known| parse_used_axioms(&output, &known))
            .filter(|used| !used.is_empty())
    } else {
        None
    };
    RunResult {
        system: sys.name.clone(),
        status,
        cpu_millis,
        wall_millis,
        used_axioms,
        raw_output_path: Some(output_path.to_path_buf()),
        output,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn used_axiom_annotations() {
        let out = "cnf(c1, axiom, p, file('/tmp/x.p', d1_mtest1)).\n\
                   fof(c2, axiom, q, file(x, dt_k1_mtest1)).\n\
                   cnf(c3, axiom, r, file('/tmp/x.p', unknown_name)).\n\
                   cnf(c4, plain, $false, inference(r, [], [c1])).";
        let known: BTreeSet<String> = ["d1_mtest1", "dt_k1_mtest1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_used_axioms(out, &known), vec!["d1_mtest1", "dt_k1_mtest1"]);
    }

    #[test]
    fn semaphore_counts() {
        let s = ExternalSemaphore::new(2);
        let a = s.acquire();
        let _b = s.acquire();
        assert_eq!(*s.free.lock().unwrap(), 0);
        drop(a);
        assert_eq!(*s.free.lock().unwrap(), 1);
    }
}

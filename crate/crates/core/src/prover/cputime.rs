use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::time::Duration;

/// CPU time consumed by the calling thread.
pub fn thread_cpu_time() -> Duration {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid out-pointer for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return Duration::ZERO;
    }
    Duration::new(ts.tv_sec as u64, ts.tv_nsec as u32)
}

/// Resource usage summed over a process tree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeUsage {
    pub pids: BTreeSet<i32>,
    /// utime + stime of live members plus the reaped children they waited for.
    pub cpu: Duration,
    pub rss_bytes: u64,
}

struct ProcStat {
    ppid: i32,
    pgrp: i32,
    ticks: u64,
    rss_pages: u64,
}

fn read_stat(pid: i32) -> Option<ProcStat> {
    let text = fs::read_to_string(format!("/proc/{pid}/stat")).ok()?;
    let rest = &text[text.rfind(')')? + 1..];
    let f: Vec<&str> = rest.split_whitespace().collect();
    // f[0] is field 3 (state) of proc(5).
    let num = |field: usize| -> Option<u64> { f.get(field - 3)?.parse().ok() };
    if f.first() == Some(&"Z") {
        return None;
    }
    Some(ProcStat {
        ppid: f.get(1)?.parse().ok()?,
        pgrp: f.get(2)?.parse().ok()?,
        ticks: num(14)? + num(15)? + num(16)? + num(17)?,
        rss_pages: num(24)?,
    })
}

/// Usage of `root`, its descendants, and every process in the process group
/// led by `root` (which catches orphans reparented away from the tree).
pub fn process_tree_usage(root: i32) -> TreeUsage {
    let mut stats = BTreeMap::new();
    if let Ok(dir) = fs::read_dir("/proc") {
        for e in dir.flatten() {
            if let Some(pid) = e.file_name().to_str().and_then(|s| s.parse::<i32>().ok()) {
                if let Some(st) = read_stat(pid) {
                    stats.insert(pid, st);
                }
            }
        }
    }
    let mut members: BTreeSet<i32> = stats
        .iter()
        .filter(|(pid, st)| **pid == root || st.pgrp == root)
        .map(|(pid, _)| *pid)
        .collect();
    loop {
        let before = members.len();
        for (pid, st) in &stats {
            if members.contains(&st.ppid) {
                members.insert(*pid);
            }
        }
        if members.len() == before {
            break;
        }
    }
    // SAFETY: sysconf has no memory-safety preconditions.
    let (hz, page) = unsafe { (libc::sysconf(libc::_SC_CLK_TCK), libc::sysconf(libc::_SC_PAGESIZE)) };
    let hz = if hz > 0 { hz as u64 } else { 100 };
    let page = if page > 0 { page as u64 } else { 4096 };
    let (mut ticks, mut pages) = (0u64, 0u64);
    for pid in &members {
        let st = &stats[pid];
        ticks += st.ticks;
        pages += st.rss_pages;
    }
    TreeUsage {
        pids: members,
        cpu: Duration::from_millis(ticks * 1000 / hz),
        rss_bytes: pages * page,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_time_advances() {
        let start = thread_cpu_time();
        let mut x = 0u64;
        for i in 0..5_000_000u64 {
            x = x.wrapping_mul(31).wrapping_add(i);
        }
        assert!(x != 1);
        assert!(thread_cpu_time() > start);
    }

    #[test]
    fn own_process_is_visible() {
        let me = std::process::id() as i32;
        let u = process_tree_usage(me);
        assert!(u.pids.contains(&me));
        assert!(u.rss_bytes > 0);
    }
}

//! `mini-e`: a given-clause saturation prover with ordered binary
//! resolution, factoring, forward subsumption and tautology deletion.
//!
//! Resolution only happens on literals that are maximal under a
//! Knuth-Bendix ordering (unit weights, precedence by first occurrence), so
//! type axioms such as `elem(X) => elem(f(X))` do not build ever deeper
//! terms and many satisfiable problems saturate.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet, VecDeque};
use std::fmt::Write;
use std::time::{Duration, Instant};

use super::cputime::thread_cpu_time;
use super::{Limits, RunResult, SzsStatus, INTERNAL_SYSTEM};
use crate::formula::cnf::{clausify, Atomic, ClausalForm};
use crate::formula::{NamedFormula, Term};

type Sym = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum T {
    V(u32),
    F(Sym, Vec<T>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Lit {
    pred: Sym,
    pos: bool,
    args: Vec<T>,
}

#[derive(Debug)]
struct Cl {
    lits: Vec<Lit>,
    nvars: u32,
    parents: Vec<usize>,
    rule: &'static str,
    source: Option<usize>,
}

struct Symbols {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Symbols {
    fn intern(&mut self, s: &str) -> Sym {
        if let Some(&i) = self.index.get(s) {
            return i;
        }
        let i = self.names.len() as Sym;
        self.names.push(s.to_string());
        self.index.insert(s.to_string(), i);
        i
    }
}

// ---- substitutions ---------------------------------------------------------

struct Subst {
    binding: Vec<Option<T>>,
    trail: Vec<u32>,
}

impl Subst {
    fn new(nvars: u32) -> Self {
        Subst {
            binding: vec![None; nvars as usize],
            trail: Vec::new(),
        }
    }

    fn reset(&mut self, nvars: u32) {
        self.binding.clear();
        self.binding.resize(nvars as usize, None);
        self.trail.clear();
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.binding[v as usize] = None;
        }
    }

    fn bind(&mut self, v: u32, t: T) {
        self.binding[v as usize] = Some(t);
        self.trail.push(v);
    }

    fn walk<'a>(&'a self, mut t: &'a T) -> &'a T {
        while let T::V(v) = t {
            match &self.binding[*v as usize] {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &T) -> bool {
        match self.walk(t) {
            T::V(w) => *w == v,
            T::F(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify(&mut self, a: &T, b: &T) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (T::V(x), T::V(y)) if x == y => true,
            (T::V(x), _) => {
                if self.occurs(*x, &b) {
                    return false;
                }
                self.bind(*x, b);
                true
            }
            (_, T::V(y)) => {
                if self.occurs(*y, &a) {
                    return false;
                }
                self.bind(*y, a);
                true
            }
            (T::F(f, xs), T::F(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    fn unify_args(&mut self, xs: &[T], ys: &[T]) -> bool {
        let mark = self.trail.len();
        let ok = xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y));
        if !ok {
            self.undo_to(mark);
        }
        ok
    }

    fn apply(&self, t: &T) -> T {
        match self.walk(t) {
            T::V(v) => T::V(*v),
            T::F(f, args) => T::F(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }
}

fn shift(t: &T, by: u32) -> T {
    match t {
        T::V(v) => T::V(v + by),
        T::F(f, args) => T::F(*f, args.iter().map(|a| shift(a, by)).collect()),
    }
}

fn term_weight(t: &T) -> usize {
    match t {
        T::V(_) => 1,
        T::F(_, args) => 1 + args.iter().map(term_weight).sum::<usize>(),
    }
}

fn rename_term(t: &T, map: &mut HashMap<u32, u32>) -> T {
    match t {
        T::V(v) => {
            let n = map.len() as u32;
            T::V(*map.entry(*v).or_insert(n))
        }
        T::F(f, args) => T::F(*f, args.iter().map(|a| rename_term(a, map)).collect()),
    }
}

/// Sorts, removes duplicates and renumbers variables from 0. Returns the
/// number of variables.
fn normalize(lits: &mut Vec<Lit>) -> u32 {
    lits.sort();
    lits.dedup();
    let mut map = HashMap::new();
    for l in lits.iter_mut() {
        l.args = l.args.iter().map(|a| rename_term(a, &mut map)).collect();
    }
    lits.sort();
    lits.dedup();
    map.len() as u32
}

// ---- term ordering ---------------------------------------------------------

fn count_vars(t: &T, sign: i64, counts: &mut HashMap<u32, i64>) -> i64 {
    match t {
        T::V(v) => {
            *counts.entry(*v).or_insert(0) += sign;
            1
        }
        T::F(_, args) => 1 + args.iter().map(|a| count_vars(a, sign, counts)).sum::<i64>(),
    }
}

/// Knuth-Bendix comparison; `None` when the terms are incomparable.
fn kbo(s: &T, t: &T) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering::*;
    if s == t {
        return Some(Equal);
    }
    let mut counts = HashMap::new();
    let ws = count_vars(s, 1, &mut counts);
    let wt = count_vars(t, -1, &mut counts);
    let s_covers = counts.values().all(|&c| c >= 0);
    let t_covers = counts.values().all(|&c| c <= 0);
    let greater = |ok: bool| if ok { Some(Greater) } else { None };
    let less = |ok: bool| if ok { Some(Less) } else { None };
    match ws.cmp(&wt) {
        Greater => greater(s_covers),
        Less => less(t_covers),
        Equal => match (s, t) {
            (T::V(_), _) | (_, T::V(_)) => None,
            (T::F(f, xs), T::F(g, ys)) => {
                let by_head = if f != g {
                    f.cmp(g)
                } else {
                    match xs.iter().zip(ys).find(|(x, y)| x != y) {
                        None => Equal,
                        Some((x, y)) => kbo(x, y)?,
                    }
                };
                match by_head {
                    Greater => greater(s_covers),
                    Less => less(t_covers),
                    Equal => None,
                }
            }
        },
    }
}

/// Literal order: atoms by `kbo`, a negative literal above the positive
/// literal with the same atom.
fn lit_cmp(a: &Lit, b: &Lit) -> Option<std::cmp::Ordering> {
    let ta = T::F(a.pred, a.args.clone());
    let tb = T::F(b.pred, b.args.clone());
    match kbo(&ta, &tb)? {
        std::cmp::Ordering::Equal => Some(b.pos.cmp(&a.pos)),
        o => Some(o),
    }
}

/// True if no other literal of `lits` is greater than `lits[i]`.
fn maximal(lits: &[Lit], i: usize) -> bool {
    lits.iter()
        .enumerate()
        .all(|(k, l)| k == i || lit_cmp(&lits[i], l) != Some(std::cmp::Ordering::Less))
}

fn instantiate(lits: &[Lit], s: &Subst, offset: u32) -> Vec<Lit> {
    lits.iter()
        .map(|l| Lit {
            pred: l.pred,
            pos: l.pos,
            args: l.args.iter().map(|t| s.apply(&shift(t, offset))).collect(),
        })
        .collect()
}

// ---- subsumption -----------------------------------------------------------

fn match_term(pat: &T, target: &T, binding: &mut Vec<Option<T>>, trail: &mut Vec<u32>) -> bool {
    match pat {
        T::V(v) => match &binding[*v as usize] {
            Some(bound) => bound == target,
            None => {
                binding[*v as usize] = Some(target.clone());
                trail.push(*v);
                true
            }
        },
        T::F(f, xs) => match target {
            T::F(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(x, y)| match_term(x, y, binding, trail))
            }
            _ => false,
        },
    }
}

fn subsumes_from(c: &[Lit], d: &[Lit], binding: &mut Vec<Option<T>>, trail: &mut Vec<u32>) -> bool {
    let Some((first, rest)) = c.split_first() else {
        return true;
    };
    for target in d {
        if target.pred != first.pred || target.pos != first.pos {
            continue;
        }
        let mark = trail.len();
        let ok = first
            .args
            .iter()
            .zip(&target.args)
            .all(|(p, t)| match_term(p, t, binding, trail));
        if ok && subsumes_from(rest, d, binding, trail) {
            return true;
        }
        while trail.len() > mark {
            let v = trail.pop().unwrap();
            binding[v as usize] = None;
        }
    }
    false
}

/// True if some instance of `c` is a sub-multiset-free subset of `d`.
fn subsumes(c: &Cl, d_lits: &[Lit]) -> bool {
    if c.lits.len() > d_lits.len() {
        return false;
    }
    let mut binding = vec![None; c.nvars as usize];
    let mut trail = Vec::new();
    subsumes_from(&c.lits, d_lits, &mut binding, &mut trail)
}

fn is_tautology(lits: &[Lit], eq: Option<Sym>) -> bool {
    for (i, a) in lits.iter().enumerate() {
        if a.pos && Some(a.pred) == eq && a.args.len() == 2 && a.args[0] == a.args[1] {
            return true;
        }
        for b in &lits[i + 1..] {
            if a.pred == b.pred && a.pos != b.pos && a.args == b.args {
                return true;
            }
        }
    }
    false
}

// ---- the prover ------------------------------------------------------------

enum Outcome {
    Refutation(usize),
    Saturated { complete: bool },
    ResourceOut,
}

struct Prover {
    syms: Symbols,
    eq: Option<Sym>,
    clauses: Vec<Cl>,
    active: Vec<usize>,
    by_age: VecDeque<usize>,
    by_weight: BinaryHeap<Reverse<(usize, usize)>>,
    selected: Vec<bool>,
    seen: HashSet<Vec<Lit>>,
    generated: usize,
    discarded_heavy: bool,
    limits: Limits,
    cpu_start: Duration,
    wall_start: Instant,
}

impl Prover {
    fn out_of_time(&self) -> bool {
        let cpu = thread_cpu_time().saturating_sub(self.cpu_start);
        cpu.as_secs_f64() > self.limits.cpu_seconds || self.wall_start.elapsed().as_secs_f64() > self.limits.wall_seconds
    }

    /// Adds a clause unless it is a tautology, a duplicate, too heavy or
    /// forward-subsumed. Returns its index when kept.
    fn add(&mut self, mut lits: Vec<Lit>, parents: Vec<usize>, rule: &'static str, source: Option<usize>) -> Option<usize> {
        let input = parents.is_empty();
        let nvars = normalize(&mut lits);
        if !input && is_tautology(&lits, self.eq) {
            return None;
        }
        let weight: usize = lits.iter().map(|l| 1 + l.args.iter().map(term_weight).sum::<usize>()).sum();
        if !input && weight > self.limits.max_clause_weight {
            self.discarded_heavy = true;
            return None;
        }
        if self.seen.contains(&lits) {
            return None;
        }
        if self.active.iter().any(|&a| subsumes(&self.clauses[a], &lits)) {
            return None;
        }
        self.seen.insert(lits.clone());
        let id = self.clauses.len();
        self.clauses.push(Cl {
            lits,
            nvars,
            parents,
            rule,
            source,
        });
        self.selected.push(false);
        self.by_age.push_back(id);
        self.by_weight.push(Reverse((weight, id)));
        Some(id)
    }

    fn pick(&mut self, round: usize) -> Option<usize> {
        let use_age = round % 5 == 0;
        loop {
            let next = if use_age {
                self.by_age.pop_front().or_else(|| self.by_weight.pop().map(|Reverse((_, i))| i))
            } else {
                self.by_weight.pop().map(|Reverse((_, i))| i).or_else(|| self.by_age.pop_front())
            }?;
            if !self.selected[next] {
                self.selected[next] = true;
                return Some(next);
            }
        }
    }

    /// Ordered resolvents of `g` with `a`.
    fn inferences(&self, g: usize, a: usize, out: &mut Vec<(Vec<Lit>, Vec<usize>, &'static str)>) {
        let gc = &self.clauses[g];
        let ac = &self.clauses[a];
        let offset = gc.nvars;
        let mut s = Subst::new(gc.nvars + ac.nvars);
        for (i, gl) in gc.lits.iter().enumerate() {
            if !maximal(&gc.lits, i) {
                continue;
            }
            for (j, al) in ac.lits.iter().enumerate() {
                if gl.pred != al.pred || gl.pos == al.pos || !maximal(&ac.lits, j) {
                    continue;
                }
                s.reset(gc.nvars + ac.nvars);
                let shifted: Vec<T> = al.args.iter().map(|t| shift(t, offset)).collect();
                if !s.unify_args(&gl.args, &shifted) {
                    continue;
                }
                let gi = instantiate(&gc.lits, &s, 0);
                let ai = instantiate(&ac.lits, &s, offset);
                if !maximal(&gi, i) || !maximal(&ai, j) {
                    continue;
                }
                let mut lits = Vec::with_capacity(gi.len() + ai.len() - 2);
                lits.extend(gi.into_iter().enumerate().filter(|(k, _)| *k != i).map(|(_, l)| l));
                lits.extend(ai.into_iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l));
                out.push((lits, vec![g, a], "resolution"));
            }
        }
    }

    fn factors(&self, g: usize, out: &mut Vec<(Vec<Lit>, Vec<usize>, &'static str)>) {
        let gc = &self.clauses[g];
        let mut s = Subst::new(gc.nvars);
        for i in 0..gc.lits.len() {
            for j in i + 1..gc.lits.len() {
                let (a, b) = (&gc.lits[i], &gc.lits[j]);
                if a.pred != b.pred || a.pos != b.pos {
                    continue;
                }
                s.reset(gc.nvars);
                if !s.unify_args(&a.args, &b.args) {
                    continue;
                }
                let lits = gc
                    .lits
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, l)| Lit {
                        pred: l.pred,
                        pos: l.pos,
                        args: l.args.iter().map(|t| s.apply(t)).collect(),
                    })
                    .collect();
                out.push((lits, vec![g], "factoring"));
            }
        }
    }

    fn run(&mut self) -> Outcome {
        if let Some(empty) = (0..self.clauses.len()).find(|&i| self.clauses[i].lits.is_empty()) {
            return Outcome::Refutation(empty);
        }
        let mut round = 0usize;
        let mut buf = Vec::new();
        while let Some(g) = self.pick(round) {
            round += 1;
            if self.out_of_time() {
                return Outcome::ResourceOut;
            }
            let glits = self.clauses[g].lits.clone();
            if self.active.iter().any(|&a| subsumes(&self.clauses[a], &glits)) {
                continue;
            }
            self.active.push(g);
            buf.clear();
            self.factors(g, &mut buf);
            for k in 0..self.active.len() {
                let a = self.active[k];
                self.inferences(g, a, &mut buf);
            }
            for (n, (lits, parents, rule)) in std::mem::take(&mut buf).into_iter().enumerate() {
                self.generated += 1;
                if self.generated > self.limits.max_generated_clauses {
                    return Outcome::ResourceOut;
                }
                if n % 256 == 255 && self.out_of_time() {
                    return Outcome::ResourceOut;
                }
                let empty = lits.is_empty();
                if let Some(id) = self.add(lits, parents, rule, None) {
                    if empty {
                        return Outcome::Refutation(id);
                    }
                }
            }
        }
        Outcome::Saturated {
            complete: !self.discarded_heavy,
        }
    }

    fn ancestors(&self, root: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                stack.extend(self.clauses[c].parents.iter().copied());
            }
        }
        seen
    }

    fn fmt_term(&self, t: &T, out: &mut String) {
        match t {
            T::V(v) => {
                let _ = write!(out, "X{v}");
            }
            T::F(f, args) => {
                out.push_str(&self.syms.names[*f as usize]);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        self.fmt_term(a, out);
                    }
                    out.push(')');
                }
            }
        }
    }

    fn fmt_clause(&self, c: &Cl) -> String {
        if c.lits.is_empty() {
            return "$false".to_string();
        }
        let mut out = String::new();
        for (i, l) in c.lits.iter().enumerate() {
            if i > 0 {
                out.push_str(" | ");
            }
            if Some(l.pred) == self.eq {
                if !l.pos {
                    out.push_str("~ ");
                }
                out.push('(');
                self.fmt_term(&l.args[0], &mut out);
                out.push_str(" = ");
                self.fmt_term(&l.args[1], &mut out);
                out.push(')');
            } else {
                if !l.pos {
                    out.push_str("~ ");
                }
                self.fmt_term(&T::F(l.pred, l.args.clone()), &mut out);
            }
        }
        out
    }
}

fn convert_term(t: &Term, syms: &mut Symbols, vars: &mut HashMap<String, u32>) -> T {
    match t {
        Term::Var(v) => {
            let n = vars.len() as u32;
            T::V(*vars.entry(v.clone()).or_insert(n))
        }
        Term::Const(c) => T::F(syms.intern(c), Vec::new()),
        Term::App(f, args) => {
            let f = syms.intern(f);
            T::F(f, args.iter().map(|a| convert_term(a, syms, vars)).collect())
        }
    }
}

/// Runs `mini-e` on a clause set.
pub fn saturate(form: &ClausalForm, limits: &Limits) -> RunResult {
    let wall_start = Instant::now();
    let cpu_start = thread_cpu_time();
    let mut prover = Prover {
        syms: Symbols {
            names: Vec::new(),
            index: HashMap::new(),
        },
        eq: None,
        clauses: Vec::new(),
        active: Vec::new(),
        by_age: VecDeque::new(),
        by_weight: BinaryHeap::new(),
        selected: Vec::new(),
        seen: HashSet::new(),
        generated: 0,
        discarded_heavy: false,
        limits: *limits,
        cpu_start,
        wall_start,
    };
    let mut source_names: Vec<String> = Vec::new();
    let mut source_index: BTreeMap<String, usize> = BTreeMap::new();
    for c in &form.clauses {
        let mut vars = HashMap::new();
        let lits = c
            .literals
            .iter()
            .map(|l| match &l.atom {
                Atomic::Pred(p, args) => Lit {
                    pred: prover.syms.intern(p),
                    pos: l.positive,
                    args: args.iter().map(|a| convert_term(a, &mut prover.syms, &mut vars)).collect(),
                },
                Atomic::Eq(a, b) => {
                    let eq = prover.syms.intern("=");
                    prover.eq = Some(eq);
                    Lit {
                        pred: eq,
                        pos: l.positive,
                        args: vec![
                            convert_term(a, &mut prover.syms, &mut vars),
                            convert_term(b, &mut prover.syms, &mut vars),
                        ],
                    }
                }
            })
            .collect();
        let source = c.source.as_ref().map(|name| {
            *source_index.entry(name.clone()).or_insert_with(|| {
                source_names.push(name.clone());
                source_names.len() - 1
            })
        });
        let rule = if source.is_some() { "input" } else { "equality_axiom" };
        prover.add(lits, Vec::new(), rule, source);
    }
    let outcome = prover.run();
    let cpu_millis = thread_cpu_time().saturating_sub(cpu_start).as_millis() as u64;
    let wall_millis = wall_start.elapsed().as_millis() as u64;

    let mut output = format!("% {INTERNAL_SYSTEM}: {} clauses generated\n", prover.generated);
    let (status, used_axioms) = match outcome {
        Outcome::Refutation(root) => {
            let anc = prover.ancestors(root);
            let mut used = BTreeSet::new();
            for &i in &anc {
                if let Some(s) = prover.clauses[i].source {
                    used.insert(source_names[s].clone());
                }
            }
            output.push_str("% SZS status Theorem\n% SZS output start CNFRefutation\n");
            for &i in &anc {
                let c = &prover.clauses[i];
                let annotation = match c.source {
                    Some(s) => format!("file('problem', {})", source_names[s]),
                    _ if c.parents.is_empty() => "theory(equality)".to_string(),
                    _ => {
                        let ps: Vec<String> = c.parents.iter().map(|p| format!("c{p}")).collect();
                        format!("inference({}, [status(thm)], [{}])", c.rule, ps.join(","))
                    }
                };
                let role = if c.parents.is_empty() { "axiom" } else { "plain" };
                let _ = writeln!(output, "cnf(c{i}, {role}, ({}), {annotation}).", prover.fmt_clause(c));
            }
            output.push_str("% SZS output end CNFRefutation\n");
            (SzsStatus::Theorem, Some(used.into_iter().collect()))
        }
        Outcome::Saturated { complete: true } => {
            output.push_str("% SZS status CounterSatisfiable\n");
            (SzsStatus::CounterSatisfiable, None)
        }
        Outcome::Saturated { complete: false } => {
            output.push_str("% SZS status GaveUp\n");
            (SzsStatus::GaveUp, None)
        }
        Outcome::ResourceOut => {
            output.push_str("% SZS status ResourceOut\n");
            (SzsStatus::ResourceOut, None)
        }
    };
    RunResult {
        system: INTERNAL_SYSTEM.to_string(),
        status,
        cpu_millis,
        wall_millis,
        used_axioms,
        raw_output_path: None,
        output,
    }
}

/// Clausifies `axioms ∪ {¬conjecture}` and runs `mini-e`.
pub fn prove_formulas(axioms: &[NamedFormula], conjecture: Option<&NamedFormula>, limits: &Limits) -> RunResult {
    saturate(&clausify(axioms, conjecture), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn nf(name: &str, f: Formula) -> NamedFormula {
        NamedFormula::new(name, f)
    }

    fn run(axioms: &[NamedFormula], goal: &NamedFormula) -> RunResult {
        prove_formulas(axioms, Some(goal), &Limits::checker())
    }

    #[test]
    fn complementary_units() {
        let r = run(&[nf("a", Formula::prop("p"))], &nf("g", Formula::prop("p")));
        assert_eq!(r.status, SzsStatus::Theorem);
        assert_eq!(r.used_axioms.unwrap(), vec!["a", "g"]);
    }

    #[test]
    fn unrelated_units_saturate() {
        let r = run(&[nf("a", Formula::prop("p"))], &nf("g", Formula::prop("q")));
        assert_eq!(r.status, SzsStatus::CounterSatisfiable);
        assert!(r.used_axioms.is_none());
    }

    #[test]
    fn ground_equality() {
        let a = Term::constant("a");
        let b = Term::constant("b");
        let r = run(
            &[
                nf("e", Formula::Eq(a.clone(), b.clone())),
                nf("pa", Formula::atom("p", vec![a])),
            ],
            &nf("g", Formula::atom("p", vec![b])),
        );
        assert_eq!(r.status, SzsStatus::Theorem);
        assert_eq!(r.used_axioms.unwrap(), vec!["e", "g", "pa"]);
    }

    #[test]
    fn first_order_chain() {
        // for X holds (set(X) implies wellorder(relincl(X))), set(c1) |- wellorder(relincl(c1))
        let x = Term::var("X");
        let d1 = Formula::forall(
            vec!["X".into()],
            Formula::implies(
                Formula::atom("set", vec![x.clone()]),
                Formula::atom("wellorder", vec![Term::app("relincl", vec![x])]),
            ),
        );
        let c1 = Term::constant("c1");
        let dt_c = Formula::atom("set", vec![c1.clone()]);
        let goal = Formula::atom("wellorder", vec![Term::app("relincl", vec![c1])]);
        let r = run(&[nf("d1", d1), nf("dt_c1", dt_c)], &nf("g", goal));
        assert_eq!(r.status, SzsStatus::Theorem);
        assert!(r.output.contains("file('problem', d1)"));
    }

    #[test]
    fn non_ground_factoring_needed() {
        // p(X) | p(Y) and ~p(a) | ~p(b)... requires factoring to stay small
        let x = Term::var("X");
        let y = Term::var("Y");
        let ax = Formula::forall(
            vec!["X".into(), "Y".into()],
            Formula::Or(vec![Formula::atom("p", vec![x]), Formula::atom("p", vec![y])]),
        );
        let goal = Formula::atom("p", vec![Term::constant("a")]);
        let r = run(&[nf("a", ax)], &nf("g", goal));
        assert_eq!(r.status, SzsStatus::Theorem);
    }

    fn chain() -> Vec<NamedFormula> {
        // a strict order without a largest element has only infinite models
        let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
        let lt = |a: &Term, b: &Term| Formula::atom("lt", vec![a.clone(), b.clone()]);
        vec![
            nf(
                "succ",
                Formula::forall(vec!["X".into()], Formula::exists(vec!["Y".into()], lt(&x, &y))),
            ),
            nf("irrefl", Formula::forall(vec!["X".into()], Formula::not(lt(&x, &x)))),
            nf(
                "trans",
                Formula::forall(
                    vec!["X".into(), "Y".into(), "Z".into()],
                    Formula::implies(Formula::and(vec![lt(&x, &y), lt(&y, &z)]), lt(&x, &z)),
                ),
            ),
        ]
    }

    #[test]
    fn infinite_search_hits_a_limit() {
        let mut limits = Limits::checker();
        limits.max_clause_weight = 1000;
        limits.max_generated_clauses = 500;
        let goal = nf("g", Formula::atom("q", vec![Term::constant("z")]));
        let r = prove_formulas(&chain(), Some(&goal), &limits);
        assert_eq!(r.status, SzsStatus::ResourceOut);
        let mut limits = Limits::checker();
        limits.max_clause_weight = 12;
        let r = prove_formulas(&chain(), Some(&goal), &limits);
        assert_eq!(r.status, SzsStatus::GaveUp, "weight cap makes the search incomplete");
    }

    #[test]
    fn ordering_saturates_type_chains() {
        // for X holds p(X) implies p(s(X)); p(z) |- q
        let x = Term::var("X");
        let step = Formula::forall(
            vec!["X".into()],
            Formula::implies(
                Formula::atom("p", vec![x.clone()]),
                Formula::atom("p", vec![Term::app("s", vec![x])]),
            ),
        );
        let r = prove_formulas(
            &[nf("s", step), nf("z", Formula::atom("p", vec![Term::constant("z")]))],
            Some(&nf("g", Formula::atom("q", vec![Term::constant("z")]))),
            &Limits::checker(),
        );
        assert_eq!(r.status, SzsStatus::CounterSatisfiable);
    }
}

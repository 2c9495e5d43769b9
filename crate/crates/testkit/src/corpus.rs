//! Generated article corpora.

use std::fmt::Write as _;

use proofdesk_core::article::{parse_article, Article};
use proofdesk_core::problem::{export_article, functor_type_axioms, generate_problem, LibraryStore, TptpProblem};
use proofdesk_core::verifier::{collect_obligations, verify_article, Obligation, VerificationReport};

/// Article `g<n>` of the golden corpus. From the second article on, it
/// cites the previous article's definitions, theorems and functors through
/// the library.
pub fn golden_article(n: usize) -> String {
    let a = format!("g{n:02}");
    let prev = n.checked_sub(1).filter(|p| *p >= 1);
    let mut s = String::new();
    let _ = writeln!(s, "article {a};");
    let _ = writeln!(s, "reserve X, Y for elem;");
    let _ = writeln!(s, "func f{n}(X) -> elem;");
    let _ = writeln!(s, "func h{n}(X, Y) -> elem;");
    let _ = writeln!(s, "func k{n}() -> elem;");
    let _ = writeln!(s, "definition d1: for X holds p{n}(f{n}(X));");
    let _ = writeln!(s, "definition d2: for X holds (p{n}(X) implies q{n}(X));");
    let _ = writeln!(s, "definition d3: p{n}(k{n});");
    let _ = writeln!(s, "definition d4: for X, Y holds r{n}(h{n}(X, Y), X);");
    let src = prev.unwrap_or(n);
    let _ = writeln!(s, "definition d5: for X holds (p{src}(X) implies s{n}(X));");
    let _ = writeln!(
        s,
        "theorem t1: for X holds q{n}(f{n}(X))
proof let X; assume a1: elem(X); a2: p{n}(f{n}(X)) by d1; thus q{n}(f{n}(X)) by a2, d2; end;"
    );
    let _ = writeln!(
        s,
        "theorem t2: q{n}(k{n})
proof a3: p{n}(k{n}) by d3; thus q{n}(k{n}) by a3, d2; end;"
    );
    let _ = writeln!(
        s,
        "theorem t3: for X, Y holds (r{n}(h{n}(X, Y), X) & p{n}(f{n}(X)))
proof let X, Y; assume a4: elem(X) & elem(Y); thus r{n}(h{n}(X, Y), X) by d4; thus p{n}(f{n}(X)) by d1; end;"
    );
    let d1_src = match prev {
        Some(p) => format!("d1_g{p:02}"),
        None => "d1".to_string(),
    };
    let _ = writeln!(
        s,
        "theorem t4: for X holds s{n}(f{src}(X))
proof let X; assume a5: elem(X); a6: p{src}(f{src}(X)) by {d1_src}; thus s{n}(f{src}(X)) by a6, d5; end;"
    );
    let _ = writeln!(
        s,
        "theorem t5: for X holds (q{n}(f{n}(X)) or s{n}(X))
proof let X; assume a7: elem(X);
  thus q{n}(f{n}(X)) or s{n}(X) proof a8: p{n}(f{n}(X)) by d1; thus q{n}(f{n}(X)) or s{n}(X) by a8, d2; end;
end;"
    );
    let _ = writeln!(
        s,
        "theorem t6: for X holds (q{n}(f{n}(X)) or p{n}(X))
proof let X; assume a9: elem(X); thus q{n}(f{n}(X)) or p{n}(X) by t1; end;"
    );
    let t1_src = match prev {
        Some(p) => format!("t1_g{p:02}"),
        None => "t1".to_string(),
    };
    let _ = writeln!(
        s,
        "theorem t7: for X holds (q{src}(f{src}(X)) or q{n}(X))
proof let X; assume a10: elem(X); thus q{src}(f{src}(X)) or q{n}(X) by {t1_src}; end;"
    );
    s
}

/// Obligations per golden article.
pub const GOLDEN_OBLIGATIONS_PER_ARTICLE: usize = 12;

/// Twenty articles, each to be installed before the next is processed.
pub fn golden_corpus() -> Vec<String> {
    (1..=20).map(golden_article).collect()
}

/// One article with 200 obligations; every tenth theorem cites the wrong
/// definition and is countersatisfiable.
pub fn parallel_corpus() -> String {
    let mut s = String::from("article par200;\nreserve X for elem;\nfunc f(X) -> elem;\n");
    let _ = writeln!(s, "definition d1: for X holds p(f(X));");
    for i in 1..=100 {
        let _ = writeln!(s, "definition d{}: for X holds (p(X) implies q{i}(X));", i + 1);
    }
    for i in 1..=100 {
        let cited = if i % 10 == 0 { i % 100 + 2 } else { i + 1 };
        let _ = writeln!(
            s,
            "theorem t{i}: for X holds q{i}(f(X))
proof let X; assume a{i}: elem(X); b{i}: p(f(X)) by d1; thus q{i}(f(X)) by b{i}, d{cited}; end;"
        );
    }
    s
}

/// An article processed against the library built from its predecessors.
pub struct Processed {
    pub article: Article,
    pub report: VerificationReport,
    pub obligations: Vec<Obligation>,
    pub problems: Vec<TptpProblem>,
}

/// Parses, verifies and generates problems for each source in order,
/// installing every article into the returned library.
pub fn process_corpus(sources: &[String], workers: usize) -> (LibraryStore, Vec<Processed>) {
    let mut lib = LibraryStore::new();
    let mut out = Vec::new();
    for src in sources {
        let article = parse_article(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
        let report = verify_article(&article, &lib, workers);
        let (obligations, _) = collect_obligations(&article, &lib);
        let local = functor_type_axioms(&article);
        let problems = obligations
            .iter()
            .map(|o| generate_problem(o, &lib, &local).unwrap_or_else(|e| panic!("{e}")))
            .collect();
        let items = export_article(&article, &report, true).expect("report matches article");
        lib.add_article(&article.name, items).expect("installable");
        out.push(Processed {
            article,
            report,
            obligations,
            problems,
        });
    }
    (lib, out)
}

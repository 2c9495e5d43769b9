//! Server-rendered article page for browsers that ask for HTML.

use std::fmt::Write as _;

use proofdesk_core::article::{RenderModel, SpanKind};

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn class(kind: SpanKind) -> &'static str {
    match kind {
        SpanKind::Article => "article",
        SpanKind::Variable => "var",
        SpanKind::TypePredicate => "type",
        SpanKind::Predicate => "pred",
        SpanKind::Functor => "func",
        SpanKind::ItemLabel => "item",
        SpanKind::StepLabel => "step",
        SpanKind::LocalReference => "ref",
        SpanKind::LibraryReference => "libref",
        SpanKind::By => "by",
    }
}

/// The article text with linked symbols; `by` keywords carry their
/// obligation id in `data-obligation`.
pub fn render_page(job: &str, m: &RenderModel) -> String {
    let mut body = String::new();
    let mut pos = 0;
    for s in &m.spans {
        if s.start < pos {
            continue;
        }
        body.push_str(&escape(&m.text[pos..s.start]));
        let text = escape(&m.text[s.start..s.end]);
        let cls = class(s.kind);
        let id = match (&s.anchor, s.declares) {
            (Some(a), true) if a.starts_with('#') => format!(" id=\"{}\"", escape(&a[1..])),
            _ => String::new(),
        };
        match (&s.obligation, &s.anchor) {
            (Some(o), _) => {
                let _ = write!(
                    body,
                    "<a class=\"{cls}\" href=\"/articles/{job}/obligations/{o}/problem\" data-obligation=\"{o}\">{text}</a>"
                );
            }
            (None, Some(a)) if !s.declares => {
                let _ = write!(body, "<a class=\"{cls}\"{id} href=\"{}\">{text}</a>", escape(a));
            }
            _ => {
                let _ = write!(body, "<span class=\"{cls}\"{id}>{text}</span>");
            }
        }
        pos = s.end;
    }
    body.push_str(&escape(&m.text[pos..]));
    format!(
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>{name}</title></head>\n<body><h1>{name}</h1>\n<pre class=\"article\">{body}</pre>\n</body></html>\n",
        name = escape(&m.article)
    )
}

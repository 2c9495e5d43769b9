use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::article::is_article_name;

/// Names of exported and generated formulas.
///
/// | form                      | meaning                                   |
/// |---------------------------|-------------------------------------------|
/// | `t<N>_<art>`              | theorem N                                 |
/// | `d<N>_<art>`              | definition N                              |
/// | `dt_k<N>_<art>`           | result type of functor N                  |
/// | `dt_c<N>_<item>__<art>`   | type of scope constant N in theorem item  |
/// | `e<K>_<item>__<art>`      | proof step K of theorem item              |
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MptpName {
    Theorem { ordinal: usize, article: String },
    Definition { ordinal: usize, article: String },
    FunctorType { ordinal: usize, article: String },
    ConstantType { ordinal: usize, item: usize, article: String },
    Step { ordinal: usize, item: usize, article: String },
}

impl MptpName {
    pub fn article(&self) -> &str {
        match self {
            MptpName::Theorem { article, .. }
            | MptpName::Definition { article, .. }
            | MptpName::FunctorType { article, .. }
            | MptpName::ConstantType { article, .. }
            | MptpName::Step { article, .. } => article,
        }
    }

    pub fn is_type_axiom(&self) -> bool {
        matches!(self, MptpName::FunctorType { .. } | MptpName::ConstantType { .. })
    }
}

impl fmt::Display for MptpName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MptpName::Theorem { ordinal, article } => write!(f, "t{ordinal}_{article}"),
            MptpName::Definition { ordinal, article } => write!(f, "d{ordinal}_{article}"),
            MptpName::FunctorType { ordinal, article } => write!(f, "dt_k{ordinal}_{article}"),
            MptpName::ConstantType { ordinal, item, article } => write!(f, "dt_c{ordinal}_{item}__{article}"),
            MptpName::Step { ordinal, item, article } => write!(f, "e{ordinal}_{item}__{article}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a valid item name")]
pub struct NameError(pub String);

fn number(s: &str) -> Option<(usize, &str)> {
    let n = s.chars().take_while(|c| c.is_ascii_digit()).count();
    if n == 0 || s.starts_with('0') {
        return None;
    }
    Some((s[..n].parse().ok()?, &s[n..]))
}

fn article_after(rest: &str, sep: &str) -> Option<String> {
    let art = rest.strip_prefix(sep)?;
    is_article_name(art).then(|| art.to_string())
}

impl FromStr for MptpName {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || NameError(s.to_string());
        let parsed = if let Some(rest) = s.strip_prefix("dt_k") {
            let (ordinal, rest) = number(rest).ok_or_else(err)?;
            article_after(rest, "_").map(|article| MptpName::FunctorType { ordinal, article })
        } else if let Some(rest) = s.strip_prefix("dt_c") {
            let (ordinal, rest) = number(rest).ok_or_else(err)?;
            let rest = rest.strip_prefix('_').ok_or_else(err)?;
            let (item, rest) = number(rest).ok_or_else(err)?;
            article_after(rest, "__").map(|article| MptpName::ConstantType { ordinal, item, article })
        } else if let Some(rest) = s.strip_prefix('e') {
            let (ordinal, rest) = number(rest).ok_or_else(err)?;
            let rest = rest.strip_prefix('_').ok_or_else(err)?;
            let (item, rest) = number(rest).ok_or_else(err)?;
            article_after(rest, "__").map(|article| MptpName::Step { ordinal, item, article })
        } else if let Some(rest) = s.strip_prefix('t') {
            let (ordinal, rest) = number(rest).ok_or_else(err)?;
            article_after(rest, "_").map(|article| MptpName::Theorem { ordinal, article })
        } else if let Some(rest) = s.strip_prefix('d') {
            let (ordinal, rest) = number(rest).ok_or_else(err)?;
            article_after(rest, "_").map(|article| MptpName::Definition { ordinal, article })
        } else {
            None
        };
        parsed.ok_or_else(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_shapes_round_trip() {
        for s in [
            "t2_mtest1",
            "t25_wellord2",
            "d1_wellord2",
            "dt_k1_wellord2",
            "dt_c2_9__mtest1",
            "e7_9__mtest1",
            "e8_9__mtest1",
        ] {
            let n: MptpName = s.parse().unwrap();
            assert_eq!(n.to_string(), s);
        }
    }

    #[test]
    fn components() {
        let n: MptpName = "e7_9__mtest1".parse().unwrap();
        assert_eq!(
            n,
            MptpName::Step {
                ordinal: 7,
                item: 9,
                article: "mtest1".into()
            }
        );
        assert_eq!(
            "t2_mtest1".parse::<MptpName>().unwrap(),
            MptpName::Theorem {
                ordinal: 2,
                article: "mtest1".into()
            }
        );
    }

    #[test]
    fn rejects_malformed() {
        for s in ["t_x", "t0_x", "t1", "dt_k1__x", "e1__x", "x1_y", "t1_X", "dt_c1_x"] {
            assert!(s.parse::<MptpName>().is_err(), "{s}");
        }
    }
}

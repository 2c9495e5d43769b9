use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportKind {
    Theorem,
    Definition,
    FunctorType,
    ConstantType,
    Step,
}

impl ExportKind {
    pub fn is_type_axiom(self) -> bool {
        matches!(self, ExportKind::FunctorType | ExportKind::ConstantType)
    }
}

/// One named formula of an article, as stored in the library or used as a
/// premise of a generated problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedItem {
    pub name: String,
    pub kind: ExportKind,
    pub article: String,
    /// Label in the source article, or the functor/constant being typed.
    pub source: String,
    pub formula: Formula,
    pub symbols: BTreeSet<String>,
    /// For type axioms: the symbol whose type the axiom states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub typed_symbol: Option<String>,
}

impl ExportedItem {
    pub fn new(name: String, kind: ExportKind, article: &str, source: &str, formula: Formula) -> Self {
        let symbols = formula.symbols();
        ExportedItem {
            name,
            kind,
            article: article.to_string(),
            source: source.to_string(),
            formula,
            symbols,
            typed_symbol: None,
        }
    }

    pub fn typing(mut self, symbol: &str) -> Self {
        self.typed_symbol = Some(symbol.to_string());
        self
    }

    /// Short human-readable description.
    pub fn title(&self) -> String {
        match self.kind {
            ExportKind::Theorem => format!("theorem {} of {}", self.source, self.article),
            ExportKind::Definition => format!("definition {} of {}", self.source, self.article),
            ExportKind::FunctorType => format!("type of functor {} ({})", self.source, self.article),
            ExportKind::ConstantType => format!("type of local constant {}", self.source),
            ExportKind::Step => format!("local proposition {}", self.source),
        }
    }
}

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("article `{0}` is already in the library")]
    DuplicateArticle(String),
    #[error("item `{0}` is already in the library")]
    DuplicateItem(String),
    #[error("functor `{symbol}` already has a type axiom (`{existing}`)")]
    FunctorRedeclared { symbol: String, existing: String },
    #[error("stored symbols of `{0}` do not match its formula")]
    SymbolMismatch(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: serde_json::Error },
}

/// Exported items of installed articles, with an index from functor symbol
/// to its `dt_k` axiom.
#[derive(Clone, Debug, Default)]
pub struct LibraryStore {
    articles: BTreeMap<String, Vec<ExportedItem>>,
    by_name: BTreeMap<String, (String, usize)>,
    functor_types: BTreeMap<String, String>,
}

impl LibraryStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_article(&mut self, article: &str, items: Vec<ExportedItem>) -> Result<(), LibraryError> {
        if self.articles.contains_key(article) {
            return Err(LibraryError::DuplicateArticle(article.to_string()));
        }
        let mut seen = BTreeSet::new();
        for it in &items {
            if it.symbols != it.formula.symbols() {
                return Err(LibraryError::SymbolMismatch(it.name.clone()));
            }
            if self.by_name.contains_key(&it.name) || !seen.insert(it.name.clone()) {
                return Err(LibraryError::DuplicateItem(it.name.clone()));
            }
            if let (ExportKind::FunctorType, Some(sym)) = (it.kind, &it.typed_symbol) {
                if let Some(existing) = self.functor_types.get(sym) {
                    return Err(LibraryError::FunctorRedeclared {
                        symbol: sym.clone(),
                        existing: existing.clone(),
                    });
                }
            }
        }
        for (i, it) in items.iter().enumerate() {
            self.by_name.insert(it.name.clone(), (article.to_string(), i));
            if let (ExportKind::FunctorType, Some(sym)) = (it.kind, &it.typed_symbol) {
                self.functor_types.insert(sym.clone(), it.name.clone());
            }
        }
        self.articles.insert(article.to_string(), items);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&ExportedItem> {
        let (art, i) = self.by_name.get(name)?;
        self.articles.get(art).map(|items| &items[*i])
    }

    pub fn contains_article(&self, article: &str) -> bool {
        self.articles.contains_key(article)
    }

    pub fn article_names(&self) -> impl Iterator<Item = &str> {
        self.articles.keys().map(String::as_str)
    }

    pub fn article_items(&self, article: &str) -> &[ExportedItem] {
        self.articles.get(article).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn items(&self) -> impl Iterator<Item = &ExportedItem> {
        self.articles.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_name.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_name.is_empty()
    }

    /// Name of the `dt_k` axiom typing `functor`, if any.
    pub fn functor_type(&self, functor: &str) -> Option<&ExportedItem> {
        self.functor_types.get(functor).and_then(|n| self.get(n))
    }

    /// Every symbol occurring in some library formula.
    pub fn symbols(&self) -> BTreeSet<String> {
        self.items().flat_map(|i| i.symbols.iter().cloned()).collect()
    }

    /// Writes `<dir>/<article>.json` for every article.
    pub fn save_dir(&self, dir: &Path) -> Result<(), LibraryError> {
        fs::create_dir_all(dir).map_err(|source| LibraryError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for art in self.articles.keys() {
            self.save_article(dir, art)?;
        }
        Ok(())
    }

    pub fn save_article(&self, dir: &Path, article: &str) -> Result<(), LibraryError> {
        let path = dir.join(format!("{article}.json"));
        let text = serde_json::to_string_pretty(self.article_items(article)).map_err(|source| LibraryError::Format {
            path: path.clone(),
            source,
        })?;
        crate::write_atomic(&path, text.as_bytes()).map_err(|source| LibraryError::Io { path, source })
    }

    /// Loads every `*.json` file of `dir`, checking stored symbol sets.
    pub fn load_dir(dir: &Path) -> Result<LibraryStore, LibraryError> {
        let mut store = LibraryStore::new();
        if !dir.exists() {
            return Ok(store);
        }
        let io_err = |source| LibraryError::Io {
            path: dir.to_path_buf(),
            source,
        };
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(io_err)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let text = fs::read_to_string(&path).map_err(|source| LibraryError::Io {
                path: path.clone(),
                source,
            })?;
            let items: Vec<ExportedItem> = serde_json::from_str(&text).map_err(|source| LibraryError::Format {
                path: path.clone(),
                source,
            })?;
            let article = path.file_stem().unwrap().to_string_lossy().to_string();
            store.add_article(&article, items)?;
        }
        Ok(store)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Term;

    fn dt(name: &str, sym: &str) -> ExportedItem {
        let f = Formula::atom("set", vec![Term::constant(sym)]);
        ExportedItem::new(name.into(), ExportKind::FunctorType, "a", sym, f).typing(sym)
    }

    #[test]
    fn index_and_lookup() {
        let mut lib = LibraryStore::new();
        lib.add_article("a", vec![dt("dt_k1_a", "e")]).unwrap();
        assert_eq!(lib.functor_type("e").unwrap().name, "dt_k1_a");
        assert!(lib.get("dt_k1_a").is_some());
        assert!(matches!(lib.add_article("a", vec![]), Err(LibraryError::DuplicateArticle(_))));
        assert!(matches!(
            lib.add_article("b", vec![dt("dt_k1_b", "e")]),
            Err(LibraryError::FunctorRedeclared { .. })
        ));
    }

    #[test]
    fn load_checks_symbols() {
        let dir = tempfile::tempdir().unwrap();
        let mut item = dt("dt_k1_a", "e");
        item.symbols.insert("bogus".into());
        fs::write(dir.path().join("a.json"), serde_json::to_string(&vec![item]).unwrap()).unwrap();
        assert!(matches!(LibraryStore::load_dir(dir.path()), Err(LibraryError::SymbolMismatch(_))));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut lib = LibraryStore::new();
        lib.add_article("a", vec![dt("dt_k1_a", "e")]).unwrap();
        lib.save_dir(dir.path()).unwrap();
        let back = LibraryStore::load_dir(dir.path()).unwrap();
        assert_eq!(back.article_items("a"), lib.article_items("a"));
    }
}

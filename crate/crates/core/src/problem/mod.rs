//! ATP problem generation: MPTP-style names, the library store, export of
//! verified articles, and self-contained problems closed over type axioms.

mod export;
mod generate;
mod library;
mod names;

pub use export::{export_article, export_items, functor_type_axioms, item_name, ExportError};
pub use generate::{
    generate_all, generate_problem, scope_type_axioms, timestamp, DirSink, GenerationError, GenerationLog, ProblemSink,
    TptpProblem,
};
pub use library::{ExportKind, ExportedItem, LibraryError, LibraryStore};
pub use names::{MptpName, NameError};

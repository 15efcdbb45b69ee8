//! Radical-tree label modelling for Chinese text recognition.
//!
//! Characters decompose into ordered trees of structure symbols (ideographic
//! description characters) and radicals. On top of that representation this
//! crate provides hierarchical node weights and the TreeSim similarity,
//! training targets and weights for an auxiliary radical branch, and
//! structure-aware evaluation of recognition output.
//!
//! ```
//! use radtree::{ArityTable, RadicalTree, tree_sim};
//!
//! let arities = ArityTable::default();
//! let a = RadicalTree::parse("⿰ 女 子", &arities).unwrap();
//! let b = RadicalTree::parse("⿰ 女 也", &arities).unwrap();
//! assert!((tree_sim(&a, &b).value() - 2.0 / 3.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod corpus;
pub mod loss;
pub mod metrics;
pub mod radical_tree;
pub mod stats;
pub mod table;
pub mod targets;
pub mod treesim;

pub use metrics::{
    align, evaluate, levenshtein, one_minus_ned, BucketSpec, EvalOptions, EvalReport,
};
pub use radical_tree::{ArityTable, ParseError, RadicalTree, SymbolKind, SymbolToken};
pub use stats::{count_occurrences, rssl_distribution, FrequencyMap};
pub use table::DecompositionTable;
pub use targets::{
    build_vocab, export_targets, radical_weights, RadicalVocab, TargetRecord, WeightMode,
};
pub use treesim::{char_sim, tree_sim, tree_weights, SimScore, WeightVector};

use thiserror::Error;

/// Every failure the command-line surface can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("arity table: {0}")]
    Arity(#[from] radical_tree::ArityError),
    #[error("decomposition table: {0}")]
    Table(#[from] table::TableError),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("corpus: {0}")]
    Corpus(#[from] corpus::CorpusError),
    #[error("{0}")]
    Eval(#[from] metrics::EvalError),
    #[error("{0}")]
    Stats(#[from] stats::StatsError),
    #[error("{0}")]
    Target(#[from] targets::TargetError),
    #[error("{0}")]
    Loss(#[from] loss::LossError),
    #[error("{0}")]
    Bucket(#[from] metrics::BucketError),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// 3 for I/O failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        let io = matches!(
            self,
            Error::Io(_)
                | Error::Arity(radical_tree::ArityError::Io(_))
                | Error::Table(table::TableError::Io(_))
                | Error::Corpus(corpus::CorpusError::Io(_))
        );
        if io {
            3
        } else {
            2
        }
    }
}

//! Character → radical tree table.
//!
//! File format, one entry per line:
//!
//! ```text
//! # comment
//! 好<TAB>⿰ 女 子
//! ```
//!
//! The character and its preorder sequence are separated by a tab; sequence
//! tokens are separated by spaces so a radical may be named by more than one
//! codepoint.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::Path;

use thiserror::Error;

use crate::radical_tree::{ArityTable, ParseError, RadicalTree, SymbolToken};

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: &'static str },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: duplicate entry for `{ch}`")]
    DuplicateEntry { line: usize, ch: char },
}

#[derive(Debug, Clone)]
pub struct DecompositionTable {
    entries: BTreeMap<char, RadicalTree>,
    arities: ArityTable,
}

impl DecompositionTable {
    pub fn new(arities: ArityTable) -> Self {
        DecompositionTable {
            entries: BTreeMap::new(),
            arities,
        }
    }

    pub fn from_reader<R: BufRead>(reader: R, arities: ArityTable) -> Result<Self, TableError> {
        let mut table = Self::new(arities);
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(key), Some(seq), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(TableError::MalformedLine {
                    line: lineno,
                    reason: "expected `<char>\\t<token> <token> ...`",
                });
            };
            let mut key_chars = key.chars();
            let (Some(ch), None) = (key_chars.next(), key_chars.next()) else {
                return Err(TableError::MalformedLine {
                    line: lineno,
                    reason: "first field must be a single character",
                });
            };
            let tree =
                RadicalTree::parse(seq, &table.arities).map_err(|source| TableError::Parse {
                    line: lineno,
                    source,
                })?;
            if table.entries.insert(ch, tree).is_some() {
                return Err(TableError::DuplicateEntry { line: lineno, ch });
            }
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>, arities: ArityTable) -> Result<Self, TableError> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file), arities)
    }

    /// Writes the table in the file format `load` reads, ordered by character.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (ch, tree) in &self.entries {
            writeln!(out, "{ch}\t{tree}")?;
        }
        Ok(())
    }

    /// Adds an entry. The tree is re-validated against this table's arities.
    pub fn insert(&mut self, ch: char, tree: &RadicalTree) -> Result<(), TableError> {
        let tree = RadicalTree::from_preorder(&tree.to_preorder(), &self.arities)
            .map_err(|source| TableError::Parse { line: 0, source })?;
        if self.entries.contains_key(&ch) {
            return Err(TableError::DuplicateEntry { line: 0, ch });
        }
        self.entries.insert(ch, tree);
        Ok(())
    }

    pub fn arities(&self) -> &ArityTable {
        &self.arities
    }

    pub fn get(&self, ch: char) -> Option<&RadicalTree> {
        self.entries.get(&ch)
    }

    /// The stored tree, or a single leaf of the character itself.
    pub fn lookup(&self, ch: char) -> Cow<'_, RadicalTree> {
        match self.entries.get(&ch) {
            Some(tree) => Cow::Borrowed(tree),
            None => Cow::Owned(RadicalTree::fallback_leaf(ch)),
        }
    }

    pub fn rssl(&self, ch: char) -> usize {
        self.entries.get(&ch).map_or(1, RadicalTree::rssl)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, &RadicalTree)> {
        self.entries.iter().map(|(&c, t)| (c, t))
    }

    /// Every distinct structure and radical token used by any stored tree.
    pub fn radical_inventory(&self) -> BTreeSet<SymbolToken> {
        self.entries
            .values()
            .flat_map(|t| t.preorder().map(|n| n.symbol().clone()))
            .collect()
    }
}

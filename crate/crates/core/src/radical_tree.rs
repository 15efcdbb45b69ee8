//! Radical trees: ordered trees whose leaves are radicals and whose internal
//! nodes are structure symbols of fixed arity.
//!
//! A tree is written as its preorder token sequence. Because every structure
//! symbol has a fixed arity, the preorder sequence determines the tree
//! uniquely, so no brackets are needed.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

/// The twelve ideographic description characters U+2FF0..=U+2FFB.
/// `⿲` and `⿳` take three components, the rest take two.
pub const DEFAULT_IDCS: [(char, usize); 12] = [
    ('\u{2FF0}', 2), // ⿰ left to right
    ('\u{2FF1}', 2), // ⿱ above to below
    ('\u{2FF2}', 3), // ⿲ left to middle and right
    ('\u{2FF3}', 3), // ⿳ above to middle and below
    ('\u{2FF4}', 2), // ⿴ full surround
    ('\u{2FF5}', 2), // ⿵ surround from above
    ('\u{2FF6}', 2), // ⿶ surround from below
    ('\u{2FF7}', 2), // ⿷ surround from left
    ('\u{2FF8}', 2), // ⿸ surround from upper left
    ('\u{2FF9}', 2), // ⿹ surround from upper right
    ('\u{2FFA}', 2), // ⿺ surround from lower left
    ('\u{2FFB}', 2), // ⿻ overlaid
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Structure,
    Radical,
}

/// One node label. Its kind is fixed by arity-table membership.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolToken {
    text: String,
    kind: SymbolKind,
}

impl SymbolToken {
    /// Classifies `text` against `arities`. Returns `None` for empty text.
    pub fn classify(text: &str, arities: &ArityTable) -> Option<Self> {
        if text.is_empty() {
            return None;
        }
        let kind = if arities.contains(text) {
            SymbolKind::Structure
        } else {
            SymbolKind::Radical
        };
        Some(SymbolToken {
            text: text.to_owned(),
            kind,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_structure(&self) -> bool {
        self.kind == SymbolKind::Structure
    }
}

impl fmt::Display for SymbolToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Error)]
pub enum ArityError {
    #[error("line {line}: expected `<token>\\t<arity>`")]
    MalformedLine { line: usize },
    #[error("line {line}: arity of `{token}` must be an integer >= 2")]
    InvalidArity { line: usize, token: String },
    #[error("line {line}: duplicate structure token `{token}`")]
    Duplicate { line: usize, token: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Structure symbol → number of children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityTable {
    entries: BTreeMap<String, usize>,
}

impl Default for ArityTable {
    fn default() -> Self {
        let entries = DEFAULT_IDCS
            .iter()
            .map(|&(c, n)| (c.to_string(), n))
            .collect();
        ArityTable { entries }
    }
}

impl ArityTable {
    pub fn empty() -> Self {
        ArityTable {
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces a structure symbol. Arity must be at least 2.
    pub fn insert(&mut self, token: impl Into<String>, arity: usize) -> Result<(), ArityError> {
        let token = token.into();
        if arity < 2 || token.is_empty() {
            return Err(ArityError::InvalidArity { line: 0, token });
        }
        self.entries.insert(token, arity);
        Ok(())
    }

    pub fn arity(&self, token: &str) -> Option<usize> {
        self.entries.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Reads `<token>\t<arity>` lines. `#` lines and blank lines are skipped.
    /// The result contains only the file's entries; it does not extend the
    /// default table.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self, ArityError> {
        let mut entries = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(token), Some(arity), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(ArityError::MalformedLine { line: lineno });
            };
            if token.is_empty() {
                return Err(ArityError::MalformedLine { line: lineno });
            }
            let arity = match arity.trim().parse::<usize>() {
                Ok(n) if n >= 2 => n,
                _ => {
                    return Err(ArityError::InvalidArity {
                        line: lineno,
                        token: token.to_owned(),
                    })
                }
            };
            if entries.insert(token.to_owned(), arity).is_some() {
                return Err(ArityError::Duplicate {
                    line: lineno,
                    token: token.to_owned(),
                });
            }
        }
        Ok(ArityTable { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ArityError> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty radical sequence")]
    Empty,
    #[error("empty token at position {position}")]
    EmptyToken { position: usize },
    #[error(
        "sequence ended at position {position} while {missing} more child node(s) were expected"
    )]
    Underflow { position: usize, missing: usize },
    #[error("{remaining} trailing token(s) starting at position {position}")]
    TrailingTokens { position: usize, remaining: usize },
}

/// An immutable radical tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadicalTree {
    symbol: SymbolToken,
    children: Vec<RadicalTree>,
}

impl RadicalTree {
    /// A single radical. Fails if `text` is empty or names a structure symbol.
    pub fn leaf(text: &str, arities: &ArityTable) -> Result<Self, ParseError> {
        Self::from_preorder(&[text], arities)
    }

    /// Builds a structure node, checking the child count against the table.
    pub fn node(
        text: &str,
        children: Vec<RadicalTree>,
        arities: &ArityTable,
    ) -> Result<Self, ParseError> {
        let symbol =
            SymbolToken::classify(text, arities).ok_or(ParseError::EmptyToken { position: 0 })?;
        let expected = arities.arity(text).unwrap_or(0);
        if children.len() < expected {
            return Err(ParseError::Underflow {
                position: children.len(),
                missing: expected - children.len(),
            });
        }
        if children.len() > expected {
            return Err(ParseError::TrailingTokens {
                position: expected,
                remaining: children.len() - expected,
            });
        }
        Ok(RadicalTree { symbol, children })
    }

    /// Leaf for a character missing from a decomposition table. The text is
    /// taken verbatim, so a character that is itself a structure symbol still
    /// becomes a radical leaf here.
    pub(crate) fn fallback_leaf(c: char) -> Self {
        RadicalTree {
            symbol: SymbolToken {
                text: c.to_string(),
                kind: SymbolKind::Radical,
            },
            children: Vec::new(),
        }
    }

    /// Rebuilds the unique tree whose preorder traversal is `tokens`.
    pub fn from_preorder<S: AsRef<str>>(
        tokens: &[S],
        arities: &ArityTable,
    ) -> Result<Self, ParseError> {
        if tokens.is_empty() {
            return Err(ParseError::Empty);
        }

        // Each frame is a structure node still collecting children.
        struct Frame {
            symbol: SymbolToken,
            arity: usize,
            children: Vec<RadicalTree>,
        }
        let mut stack: Vec<Frame> = Vec::new();

        for (pos, tok) in tokens.iter().enumerate() {
            let text = tok.as_ref();
            let symbol = SymbolToken::classify(text, arities)
                .ok_or(ParseError::EmptyToken { position: pos })?;
            let mut done = match arities.arity(text) {
                Some(arity) => {
                    stack.push(Frame {
                        symbol,
                        arity,
                        children: Vec::with_capacity(arity),
                    });
                    continue;
                }
                None => RadicalTree {
                    symbol,
                    children: Vec::new(),
                },
            };
            // Attach the completed subtree, closing every frame it fills.
            loop {
                match stack.last_mut() {
                    None => {
                        let rest = tokens.len() - pos - 1;
                        if rest > 0 {
                            return Err(ParseError::TrailingTokens {
                                position: pos + 1,
                                remaining: rest,
                            });
                        }
                        return Ok(done);
                    }
                    Some(frame) => {
                        frame.children.push(done);
                        if frame.children.len() < frame.arity {
                            break;
                        }
                        let frame = stack.pop().expect("frame present");
                        done = RadicalTree {
                            symbol: frame.symbol,
                            children: frame.children,
                        };
                    }
                }
            }
        }

        let missing = stack.iter().map(|f| f.arity - f.children.len()).sum();
        Err(ParseError::Underflow {
            position: tokens.len(),
            missing,
        })
    }

    /// Splits on ASCII/Unicode whitespace and parses the tokens.
    pub fn parse(sequence: &str, arities: &ArityTable) -> Result<Self, ParseError> {
        let tokens: Vec<&str> = sequence.split_whitespace().collect();
        Self::from_preorder(&tokens, arities)
    }

    pub fn symbol(&self) -> &SymbolToken {
        &self.symbol
    }

    pub fn children(&self) -> &[RadicalTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Preorder node iterator.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }

    pub fn to_preorder(&self) -> Vec<String> {
        self.preorder().map(|n| n.symbol.text.clone()).collect()
    }

    /// Radical structure sequence length: the number of nodes.
    pub fn rssl(&self) -> usize {
        1 + self.children.iter().map(RadicalTree::rssl).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(RadicalTree::depth)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for RadicalTree {
    /// Space-separated preorder sequence, the same form `parse` accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, node) in self.preorder().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&node.symbol.text)?;
        }
        Ok(())
    }
}

impl Serialize for RadicalTree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let len = if self.is_leaf() { 2 } else { 3 };
        let mut s = serializer.serialize_struct("RadicalTree", len)?;
        s.serialize_field("symbol", &self.symbol.text)?;
        s.serialize_field("kind", &self.symbol.kind)?;
        if !self.is_leaf() {
            s.serialize_field("children", &self.children)?;
        }
        s.end()
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a RadicalTree>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a RadicalTree;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

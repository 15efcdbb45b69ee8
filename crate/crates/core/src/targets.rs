//! Radical-branch training targets: vocabulary, per-node loss weights and
//! fixed-length padded records.
//!
//! Each character becomes its preorder token sequence followed by EOS and
//! padded with PAD up to a fixed length `R` (EOS counts towards `R`). Data
//! positions carry weight `1` in naive mode, or `1 + λ·w` in TreeSim mode
//! where `w` is the node's hierarchical weight. EOS always weighs 1 and PAD 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::table::DecompositionTable;
use crate::treesim::{ratio_to_f64, tree_weights_exact};

pub const PAD_TOKEN: &str = "<pad>";
pub const EOS_TOKEN: &str = "<eos>";
pub const PAD_INDEX: u32 = 0;
pub const EOS_INDEX: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TargetError {
    #[error("`{ch}` needs {required} positions including EOS but the target length is {max_len}")]
    SequenceTooLong {
        ch: char,
        required: usize,
        max_len: usize,
    },
    #[error("lambda must be finite and >= 0, got {0}")]
    InvalidLambda(f64),
    #[error("token `{token}` of `{ch}` is not in the vocabulary")]
    UnknownToken { ch: char, token: String },
    #[error("unknown weighting mode `{0}` (expected `naive` or `treesim`)")]
    UnknownMode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    #[default]
    Naive,
    TreeSim,
}

impl FromStr for WeightMode {
    type Err = TargetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(WeightMode::Naive),
            "treesim" => Ok(WeightMode::TreeSim),
            _ => Err(TargetError::UnknownMode(s.to_owned())),
        }
    }
}

/// Radical class indices. 0 and 1 are PAD and EOS; data tokens follow in
/// sorted order starting at 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalVocab {
    tokens: Vec<String>,
    index: BTreeMap<String, u32>,
}

impl RadicalVocab {
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let sorted: BTreeSet<String> = tokens.into_iter().map(Into::into).collect();
        let index = sorted
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32 + 2))
            .collect();
        RadicalVocab {
            tokens: sorted.into_iter().collect(),
            index,
        }
    }

    /// Number of classes including PAD and EOS.
    pub fn len(&self) -> usize {
        self.tokens.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of a data token. Reserved tokens are not looked up by name.
    pub fn index(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, index: u32) -> Option<&str> {
        match index {
            PAD_INDEX => Some(PAD_TOKEN),
            EOS_INDEX => Some(EOS_TOKEN),
            i => self.tokens.get(i as usize - 2).map(String::as_str),
        }
    }

    /// `<token>\t<index>` lines, reserved entries first.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{PAD_TOKEN}\t{PAD_INDEX}")?;
        writeln!(out, "{EOS_TOKEN}\t{EOS_INDEX}")?;
        for (i, t) in self.tokens.iter().enumerate() {
            writeln!(out, "{t}\t{}", i + 2)?;
        }
        Ok(())
    }
}

/// Vocabulary over the table's radical inventory.
pub fn build_vocab(table: &DecompositionTable) -> RadicalVocab {
    RadicalVocab::from_tokens(
        table
            .radical_inventory()
            .into_iter()
            .map(|s| s.text().to_owned()),
    )
}

/// Vocabulary over the table's inventory plus the single-leaf fallbacks of
/// any `charset` characters the table does not cover.
pub fn build_vocab_for(table: &DecompositionTable, charset: &[char]) -> RadicalVocab {
    let mut tokens: BTreeSet<String> = table
        .radical_inventory()
        .into_iter()
        .map(|s| s.text().to_owned())
        .collect();
    tokens.extend(
        charset
            .iter()
            .filter(|&&c| table.get(c).is_none())
            .map(|c| c.to_string()),
    );
    RadicalVocab::from_tokens(tokens)
}

fn lambda_exact(lambda: f64) -> Result<BigRational, TargetError> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(TargetError::InvalidLambda(lambda));
    }
    Ok(BigRational::from_float(lambda).expect("finite"))
}

/// Exact per-node loss weights in preorder (no EOS or PAD).
pub fn radical_weights_exact(
    ch: char,
    table: &DecompositionTable,
    mode: WeightMode,
    lambda: f64,
) -> Result<Vec<BigRational>, TargetError> {
    let lambda = lambda_exact(lambda)?;
    let tree = table.lookup(ch);
    Ok(match mode {
        WeightMode::Naive => vec![BigRational::one(); tree.rssl()],
        WeightMode::TreeSim => tree_weights_exact(&tree)
            .into_iter()
            .map(|w| BigRational::one() + &lambda * w)
            .collect(),
    })
}

pub fn radical_weights(
    ch: char,
    table: &DecompositionTable,
    mode: WeightMode,
    lambda: f64,
) -> Result<Vec<f64>, TargetError> {
    Ok(radical_weights_exact(ch, table, mode, lambda)?
        .iter()
        .map(ratio_to_f64)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetRecord {
    pub ch: char,
    /// Token names, EOS-terminated and PAD-padded.
    pub tokens: Vec<String>,
    pub indices: Vec<u32>,
    pub weights: Vec<f64>,
}

impl TargetRecord {
    /// Number of non-PAD positions, i.e. RSSL + 1.
    pub fn unpadded_len(&self) -> usize {
        self.indices.iter().take_while(|&&i| i != PAD_INDEX).count()
    }

    /// One JSON object with weights written to 17 significant digits.
    pub fn to_json_line(&self) -> String {
        let mut s = String::from("{\"char\":");
        s.push_str(&serde_json::to_string(&self.ch.to_string()).expect("string"));
        s.push_str(",\"tokens\":");
        s.push_str(&serde_json::to_string(&self.tokens).expect("strings"));
        s.push_str(",\"indices\":");
        s.push_str(&serde_json::to_string(&self.indices).expect("ints"));
        s.push_str(",\"weights\":[");
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format_sig17(*w));
        }
        s.push_str("]}");
        s
    }
}

/// Builds one padded record per character, in `charset` order.
pub fn export_targets(
    charset: &[char],
    table: &DecompositionTable,
    vocab: &RadicalVocab,
    max_len: usize,
    mode: WeightMode,
    lambda: f64,
) -> Result<Vec<TargetRecord>, TargetError> {
    lambda_exact(lambda)?;
    charset
        .iter()
        .map(|&ch| {
            let tree = table.lookup(ch);
            let required = tree.rssl() + 1;
            if required > max_len {
                return Err(TargetError::SequenceTooLong {
                    ch,
                    required,
                    max_len,
                });
            }
            let mut tokens = Vec::with_capacity(max_len);
            let mut indices = Vec::with_capacity(max_len);
            for node in tree.preorder() {
                let text = node.symbol().text();
                let idx = vocab.index(text).ok_or_else(|| TargetError::UnknownToken {
                    ch,
                    token: text.to_owned(),
                })?;
                tokens.push(text.to_owned());
                indices.push(idx);
            }
            let mut weights = radical_weights(ch, table, mode, lambda)?;
            tokens.push(EOS_TOKEN.to_owned());
            indices.push(EOS_INDEX);
            weights.push(1.0);
            tokens.resize(max_len, PAD_TOKEN.to_owned());
            indices.resize(max_len, PAD_INDEX);
            weights.resize(max_len, 0.0);
            Ok(TargetRecord {
                ch,
                tokens,
                indices,
                weights,
            })
        })
        .collect()
}

/// Positional decimal with 17 significant digits, e.g. `1.3333333333333333`.
/// Enough digits to round-trip any `f64` and independent of float printing
/// heuristics.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 {
        return "0.0000000000000000".to_owned();
    }
    let sci = format!("{:.16e}", v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let mut s = String::new();
    if v < 0.0 {
        s.push('-');
    }
    if exp < 0 {
        s.push_str("0.");
        for _ in 0..(-exp - 1) {
            s.push('0');
        }
        s.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            s.push_str(&digits);
            for _ in digits.len()..int_len {
                s.push('0');
            }
        } else {
            let _ = write!(s, "{}.{}", &digits[..int_len], &digits[int_len..]);
        }
    }
    s
}

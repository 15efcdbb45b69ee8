//! Label files: `<id>\t<text>` TSV, or one label per line.

use std::collections::BTreeMap;
use std::io::BufRead;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected `<id>\\t<text>`")]
    MalformedLine { line: usize },
    #[error("line {line}: duplicate sample id `{id}`")]
    DuplicateId { line: usize, id: String },
}

/// Reads `<id>\t<text>` lines into an id-ordered map. The text is everything
/// after the first tab and may be empty. Blank lines are skipped.
pub fn read_tsv<R: BufRead>(reader: R) -> Result<BTreeMap<String, String>, CorpusError> {
    let mut out = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        let Some((id, text)) = line.split_once('\t') else {
            return Err(CorpusError::MalformedLine { line: idx + 1 });
        };
        if out.insert(id.to_owned(), text.to_owned()).is_some() {
            return Err(CorpusError::DuplicateId {
                line: idx + 1,
                id: id.to_owned(),
            });
        }
    }
    Ok(out)
}

/// Reads one label per line, keeping blank lines out.
pub fn read_plain<R: BufRead>(reader: R) -> Result<Vec<String>, CorpusError> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if !line.is_empty() {
            out.push(line.to_owned());
        }
    }
    Ok(out)
}

/// Label texts from either format.
pub fn read_labels<R: BufRead>(reader: R, plain: bool) -> Result<Vec<String>, CorpusError> {
    if plain {
        read_plain(reader)
    } else {
        Ok(read_tsv(reader)?.into_values().collect())
    }
}

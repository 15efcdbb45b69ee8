//! Corpus statistics: per-character occurrence counts (OccN) and the RSSL
//! profile of a character set.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::metrics::{BucketSpec, OccnBucket, RsslBucket};
use crate::table::DecompositionTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("character set is empty")]
    EmptyCharset,
    #[error("corpus contains no characters")]
    EmptyCorpus,
}

/// Character → occurrence count. Only characters seen at least once are keys.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FrequencyMap {
    counts: BTreeMap<char, u64>,
    total: u64,
}

impl FrequencyMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_text(&mut self, text: &str, exclude: &BTreeSet<char>) {
        for c in text.chars().filter(|c| !exclude.contains(c)) {
            *self.counts.entry(c).or_insert(0) += 1;
            self.total += 1;
        }
    }

    pub fn merge(&mut self, other: FrequencyMap) {
        for (c, n) in other.counts {
            *self.counts.entry(c).or_insert(0) += n;
        }
        self.total += other.total;
    }

    /// OccN of `c`; zero when unseen.
    pub fn get(&self, c: char) -> u64 {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, u64)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    pub fn chars(&self) -> BTreeSet<char> {
        self.counts.keys().copied().collect()
    }
}

pub fn count_occurrences<I, S>(lines: I) -> FrequencyMap
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    count_occurrences_excluding(lines, &BTreeSet::new())
}

pub fn count_occurrences_excluding<I, S>(lines: I, exclude: &BTreeSet<char>) -> FrequencyMap
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut map = FrequencyMap::new();
    for line in lines {
        map.add_text(line.as_ref(), exclude);
    }
    map
}

/// Sharded counting; the merge is commutative so the result equals
/// sequential counting.
pub fn count_occurrences_par<S>(lines: &[S], exclude: &BTreeSet<char>) -> FrequencyMap
where
    S: AsRef<str> + Sync,
{
    lines
        .par_iter()
        .fold(FrequencyMap::new, |mut acc, line| {
            acc.add_text(line.as_ref(), exclude);
            acc
        })
        .reduce(FrequencyMap::new, |mut a, b| {
            a.merge(b);
            a
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub bucket: &'static str,
    pub range: String,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub total: usize,
    pub bins: Vec<HistogramBin>,
}

fn histogram(total: usize, bins: impl Iterator<Item = (&'static str, String, usize)>) -> Histogram {
    let bins = bins
        .map(|(bucket, range, count)| HistogramBin {
            bucket,
            range,
            count,
            fraction: count as f64 / total as f64,
        })
        .collect();
    Histogram { total, bins }
}

/// Character classes per RSSL bucket, by `rssl(lookup(c))`.
pub fn rssl_distribution(
    chars: &BTreeSet<char>,
    table: &DecompositionTable,
    buckets: &BucketSpec,
) -> Result<Histogram, StatsError> {
    if chars.is_empty() {
        return Err(StatsError::EmptyCharset);
    }
    let mut counts = [0usize; 3];
    for &c in chars {
        counts[buckets.rssl(table.rssl(c)).index()] += 1;
    }
    Ok(histogram(
        chars.len(),
        RsslBucket::ALL
            .iter()
            .map(|&b| (b.name(), buckets.rssl_range(b), counts[b.index()])),
    ))
}

/// Character classes per OccN bucket.
pub fn occn_distribution(
    chars: &BTreeSet<char>,
    freq: &FrequencyMap,
    buckets: &BucketSpec,
) -> Result<Histogram, StatsError> {
    if chars.is_empty() {
        return Err(StatsError::EmptyCharset);
    }
    let mut counts = [0usize; 4];
    for &c in chars {
        counts[buckets.occn(freq.get(c)).index()] += 1;
    }
    Ok(histogram(
        chars.len(),
        OccnBucket::ALL
            .iter()
            .map(|&b| (b.name(), buckets.occn_range(b), counts[b.index()])),
    ))
}

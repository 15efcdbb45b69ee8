//! Corpus evaluation: line accuracy, 1-NED and per-character breakdowns by
//! complexity and training frequency.
//!
//! Ground-truth and predicted characters are paired with [`align`]. A
//! ground-truth character is correct when its aligned step is a match. Its
//! TreeSim contribution is the similarity to the aligned predicted character,
//! or 0 when it was deleted. Insertions only affect line-level metrics.
//!
//! [`align`]: super::align

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::buckets::{BucketSpec, OccnBucket, RsslBucket};
use super::edit::{align_chars, ned_chars, AlignOp};
use crate::stats::FrequencyMap;
use crate::table::DecompositionTable;
use crate::treesim::char_sim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no prediction for sample id `{0}`")]
    MissingId(String),
    #[error("ground truth contains no samples")]
    EmptyCorpus,
}

/// Denominator for bucket-average TreeSim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimDenominator {
    /// Every ground-truth character; deletions contribute 0.
    #[default]
    AllGt,
    /// Only characters aligned to a predicted character.
    Aligned,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    /// Fail on a ground-truth id with no prediction instead of scoring it
    /// against the empty string.
    pub strict: bool,
    pub denominator: SimDenominator,
    pub buckets: BucketSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharSummary {
    pub total: usize,
    pub correct: usize,
    pub aligned: usize,
    pub accuracy: Option<f64>,
    pub avg_treesim: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketStats {
    pub bucket: &'static str,
    pub range: String,
    /// Ground-truth character occurrences in this bucket.
    pub count: usize,
    /// `count` over all ground-truth character occurrences.
    pub share: f64,
    /// Distinct ground-truth characters in this bucket.
    pub classes: usize,
    pub correct: usize,
    pub aligned: usize,
    pub accuracy: Option<f64>,
    pub avg_treesim: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub lines: usize,
    pub exact_matches: usize,
    pub accuracy: f64,
    pub mean_one_minus_ned: f64,
    pub missing_predictions: Vec<String>,
    pub extra_predictions: usize,
    pub treesim_denominator: SimDenominator,
    pub characters: CharSummary,
    pub rssl_buckets: Vec<BucketStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub occn_buckets: Option<Vec<BucketStats>>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    count: usize,
    correct: usize,
    aligned: usize,
    sim_sum: f64,
}

impl Tally {
    fn add(&mut self, o: &CharOutcome) {
        self.count += 1;
        self.correct += usize::from(o.correct);
        if let Some(sim) = o.sim {
            self.aligned += 1;
            self.sim_sum += sim;
        }
    }

    fn accuracy(&self) -> Option<f64> {
        (self.count > 0).then(|| self.correct as f64 / self.count as f64)
    }

    fn avg_sim(&self, denom: SimDenominator) -> Option<f64> {
        let n = match denom {
            SimDenominator::AllGt => self.count,
            SimDenominator::Aligned => self.aligned,
        };
        (n > 0).then(|| self.sim_sum / n as f64)
    }
}

struct CharOutcome {
    ch: char,
    correct: bool,
    /// `None` for a deleted character.
    sim: Option<f64>,
}

struct LineOutcome {
    exact: bool,
    ned: f64,
    chars: Vec<CharOutcome>,
}

fn score_line(gt: &str, pred: &str, table: &DecompositionTable) -> LineOutcome {
    let g: Vec<char> = gt.chars().collect();
    let p: Vec<char> = pred.chars().collect();
    let alignment = align_chars(&g, &p);
    let mut chars = Vec::with_capacity(g.len());
    for op in alignment.ops {
        match op {
            AlignOp::Match { gt, .. } => chars.push(CharOutcome {
                ch: g[gt],
                correct: true,
                sim: Some(1.0),
            }),
            AlignOp::Substitute { gt, pred } => chars.push(CharOutcome {
                ch: g[gt],
                correct: false,
                sim: Some(char_sim(g[gt], p[pred], table).value()),
            }),
            AlignOp::Delete { gt } => chars.push(CharOutcome {
                ch: g[gt],
                correct: false,
                sim: None,
            }),
            AlignOp::Insert { .. } => {}
        }
    }
    LineOutcome {
        exact: g == p,
        ned: ned_chars(&g, &p),
        chars,
    }
}

/// Scores `pred` against `gt`, both keyed by sample id.
///
/// Lines are scored in parallel and reduced in id order, so the report does
/// not depend on scheduling.
pub fn evaluate(
    gt: &BTreeMap<String, String>,
    pred: &BTreeMap<String, String>,
    table: &DecompositionTable,
    occn: Option<&FrequencyMap>,
    opts: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    if gt.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut missing = Vec::new();
    let mut pairs = Vec::with_capacity(gt.len());
    for (id, text) in gt {
        match pred.get(id) {
            Some(p) => pairs.push((text.as_str(), p.as_str())),
            None if opts.strict => return Err(EvalError::MissingId(id.clone())),
            None => {
                missing.push(id.clone());
                pairs.push((text.as_str(), ""));
            }
        }
    }
    let extra = pred.keys().filter(|id| !gt.contains_key(*id)).count();

    let outcomes: Vec<LineOutcome> = pairs
        .par_iter()
        .map(|&(g, p)| score_line(g, p, table))
        .collect();

    let buckets = &opts.buckets;
    let mut exact = 0usize;
    let mut ned_sum = 0.0f64;
    let mut overall = Tally::default();
    let mut by_rssl = [Tally::default(); 3];
    let mut by_occn = [Tally::default(); 4];
    let mut rssl_classes: [BTreeSet<char>; 3] = Default::default();
    let mut occn_classes: [BTreeSet<char>; 4] = Default::default();

    for line in &outcomes {
        exact += usize::from(line.exact);
        ned_sum += 1.0 - line.ned;
        for o in &line.chars {
            overall.add(o);
            let rb = buckets.rssl(table.rssl(o.ch)).index();
            by_rssl[rb].add(o);
            rssl_classes[rb].insert(o.ch);
            if let Some(freq) = occn {
                let ob = buckets.occn(freq.get(o.ch)).index();
                by_occn[ob].add(o);
                occn_classes[ob].insert(o.ch);
            }
        }
    }

    let denom = opts.denominator;
    let total_chars = overall.count;
    let bucket_stats = |name, range, t: &Tally, classes: &BTreeSet<char>| BucketStats {
        bucket: name,
        range,
        count: t.count,
        share: if total_chars > 0 {
            t.count as f64 / total_chars as f64
        } else {
            0.0
        },
        classes: classes.len(),
        correct: t.correct,
        aligned: t.aligned,
        accuracy: t.accuracy(),
        avg_treesim: t.avg_sim(denom),
    };

    let rssl_buckets = RsslBucket::ALL
        .iter()
        .map(|&b| {
            bucket_stats(
                b.name(),
                buckets.rssl_range(b),
                &by_rssl[b.index()],
                &rssl_classes[b.index()],
            )
        })
        .collect();
    let occn_buckets = occn.map(|_| {
        OccnBucket::ALL
            .iter()
            .map(|&b| {
                bucket_stats(
                    b.name(),
                    buckets.occn_range(b),
                    &by_occn[b.index()],
                    &occn_classes[b.index()],
                )
            })
            .collect()
    });

    let lines = outcomes.len();
    Ok(EvalReport {
        lines,
        exact_matches: exact,
        accuracy: exact as f64 / lines as f64,
        mean_one_minus_ned: ned_sum / lines as f64,
        missing_predictions: missing,
        extra_predictions: extra,
        treesim_denominator: denom,
        characters: CharSummary {
            total: overall.count,
            correct: overall.correct,
            aligned: overall.aligned,
            accuracy: overall.accuracy(),
            avg_treesim: overall.avg_sim(denom),
        },
        rssl_buckets,
        occn_buckets,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |x| format!("{x:.4}"))
}

impl EvalReport {
    /// Plain-text summary for terminals.
    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "lines            {}", self.lines);
        let _ = writeln!(s, "accuracy         {:.4}", self.accuracy);
        let _ = writeln!(s, "1-NED            {:.4}", self.mean_one_minus_ned);
        let _ = writeln!(s, "char accuracy    {}", opt(self.characters.accuracy));
        let _ = writeln!(s, "char TreeSim     {}", opt(self.characters.avg_treesim));
        if !self.missing_predictions.is_empty() {
            let _ = writeln!(s, "missing preds    {}", self.missing_predictions.len());
        }
        let mut section = |title: &str, rows: &[BucketStats]| {
            let _ = writeln!(s);
            let _ = writeln!(
                s,
                "{:<16} {:>8} {:>7} {:>9} {:>9}",
                title, "count", "share", "accuracy", "TreeSim"
            );
            for r in rows {
                let _ = writeln!(
                    s,
                    "{:<16} {:>8} {:>7.3} {:>9} {:>9}",
                    r.range,
                    r.count,
                    r.share,
                    opt(r.accuracy),
                    opt(r.avg_treesim)
                );
            }
        };
        section("RSSL", &self.rssl_buckets);
        if let Some(rows) = &self.occn_buckets {
            section("OccN", rows);
        }
        s
    }
}

//! Unit-cost edit distance over Unicode scalar values and its alignment.

use serde::Serialize;

/// Levenshtein distance with unit insert, delete and substitute costs.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

pub(crate) fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Normalized edit distance `d / max(|gt|, |pred|)`, 0 for two empty strings.
pub fn ned(gt: &str, pred: &str) -> f64 {
    let gt: Vec<char> = gt.chars().collect();
    let pred: Vec<char> = pred.chars().collect();
    ned_chars(&gt, &pred)
}

pub(crate) fn ned_chars(gt: &[char], pred: &[char]) -> f64 {
    let denom = gt.len().max(pred.len());
    if denom == 0 {
        return 0.0;
    }
    levenshtein_chars(gt, pred) as f64 / denom as f64
}

pub fn one_minus_ned(gt: &str, pred: &str) -> f64 {
    1.0 - ned(gt, pred)
}

/// Line-level outcome: exact match flag and normalized edit distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineScore {
    pub exact: bool,
    pub ned: f64,
}

impl LineScore {
    pub fn score(gt: &str, pred: &str) -> Self {
        LineScore {
            exact: gt == pred,
            ned: ned(gt, pred),
        }
    }

    pub fn one_minus_ned(&self) -> f64 {
        1.0 - self.ned
    }
}

/// One alignment step. `gt` indexes the ground truth, `pred` the prediction,
/// both in Unicode scalar values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum AlignOp {
    Match { gt: usize, pred: usize },
    Substitute { gt: usize, pred: usize },
    Delete { gt: usize },
    Insert { pred: usize },
}

impl AlignOp {
    pub fn is_edit(&self) -> bool {
        !matches!(self, AlignOp::Match { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Alignment {
    pub ops: Vec<AlignOp>,
}

impl Alignment {
    pub fn cost(&self) -> usize {
        self.ops.iter().filter(|op| op.is_edit()).count()
    }
}

/// One minimum-cost alignment of `pred` against `gt`.
///
/// The traceback runs from the end of both strings. At equal cost it prefers
/// a diagonal step (match or substitute), then a deletion, then an insertion.
pub fn align(gt: &str, pred: &str) -> Alignment {
    let gt: Vec<char> = gt.chars().collect();
    let pred: Vec<char> = pred.chars().collect();
    align_chars(&gt, &pred)
}

pub(crate) fn align_chars(gt: &[char], pred: &[char]) -> Alignment {
    let (n, m) = (gt.len(), pred.len());
    let width = m + 1;
    let mut dp = vec![0usize; (n + 1) * width];
    for (j, cell) in dp.iter_mut().take(width).enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        dp[i * width] = i;
        for j in 1..=m {
            let sub = dp[(i - 1) * width + j - 1] + usize::from(gt[i - 1] != pred[j - 1]);
            let del = dp[(i - 1) * width + j] + 1;
            let ins = dp[i * width + j - 1] + 1;
            dp[i * width + j] = sub.min(del).min(ins);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i * width + j];
        if i > 0 && j > 0 {
            let same = gt[i - 1] == pred[j - 1];
            if dp[(i - 1) * width + j - 1] + usize::from(!same) == here {
                ops.push(if same {
                    AlignOp::Match {
                        gt: i - 1,
                        pred: j - 1,
                    }
                } else {
                    AlignOp::Substitute {
                        gt: i - 1,
                        pred: j - 1,
                    }
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && dp[(i - 1) * width + j] + 1 == here {
            ops.push(AlignOp::Delete { gt: i - 1 });
            i -= 1;
        } else {
            ops.push(AlignOp::Insert { pred: j - 1 });
            j -= 1;
        }
    }
    ops.reverse();
    Alignment { ops }
}

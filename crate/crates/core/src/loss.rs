//! Reference weighted cross-entropy for the radical branch.
//!
//! The loss of one character is `Σ_i w_i · (−ln p_i[t_i])`, the negative
//! log-likelihood form, so it is non-negative and zero at one-hot correct
//! predictions. Positions with weight 0 (padding) contribute nothing, even
//! when their target probability is 0.

use thiserror::Error;

/// Row sums must be within this distance of 1.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LossError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("row {row} is not a probability distribution (sum {sum})")]
    InvalidDistribution { row: usize, sum: f64 },
    #[error("weight at position {0} is negative or not finite")]
    InvalidWeight(usize),
}

/// How per-character losses combine into one sample loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Total over every radical position of every character in the sample.
    #[default]
    Sum,
    /// Mean of the per-character losses.
    Mean,
}

pub fn weighted_ce<R: AsRef<[f64]>>(
    prob_rows: &[R],
    targets: &[usize],
    weights: &[f64],
) -> Result<f64, LossError> {
    if prob_rows.len() != targets.len() || targets.len() != weights.len() {
        return Err(LossError::ShapeMismatch(format!(
            "{} rows, {} targets, {} weights",
            prob_rows.len(),
            targets.len(),
            weights.len()
        )));
    }
    let mut loss = 0.0;
    for (i, ((row, &t), &w)) in prob_rows.iter().zip(targets).zip(weights).enumerate() {
        let row = row.as_ref();
        if t >= row.len() {
            return Err(LossError::ShapeMismatch(format!(
                "target {t} at position {i} outside a row of {} classes",
                row.len()
            )));
        }
        let sum: f64 = row.iter().sum();
        if row.iter().any(|p| !(0.0..=1.0).contains(p))
            || (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE
        {
            return Err(LossError::InvalidDistribution { row: i, sum });
        }
        if !w.is_finite() || w < 0.0 {
            return Err(LossError::InvalidWeight(i));
        }
        if w > 0.0 {
            loss += -w * row[t].ln();
        }
    }
    Ok(loss)
}

/// One character's predicted rows with its exported targets and weights.
#[derive(Debug, Clone, Copy)]
pub struct CharLossInput<'a, R> {
    pub prob_rows: &'a [R],
    pub targets: &'a [usize],
    pub weights: &'a [f64],
}

/// Sample-level loss over the characters of one text line.
pub fn sample_loss<R: AsRef<[f64]>>(
    chars: &[CharLossInput<'_, R>],
    reduction: Reduction,
) -> Result<f64, LossError> {
    let mut total = 0.0;
    for c in chars {
        total += weighted_ce(c.prob_rows, c.targets, c.weights)?;
    }
    Ok(match reduction {
        Reduction::Sum => total,
        Reduction::Mean if chars.is_empty() => 0.0,
        Reduction::Mean => total / chars.len() as f64,
    })
}

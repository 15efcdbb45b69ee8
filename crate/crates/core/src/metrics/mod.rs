//! Recognition metrics.

mod buckets;
mod edit;
mod eval;

pub use buckets::{bucket_occn, bucket_rssl, BucketError, BucketSpec, OccnBucket, RsslBucket};
pub use edit::{align, levenshtein, ned, one_minus_ned, AlignOp, Alignment, LineScore};
pub use eval::{
    evaluate, BucketStats, CharSummary, EvalError, EvalOptions, EvalReport, SimDenominator,
};

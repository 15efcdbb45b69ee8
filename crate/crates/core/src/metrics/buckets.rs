//! Complexity (RSSL) and frequency (OccN) buckets for per-character breakdowns.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RsslBucket {
    Simple,
    SubComplex,
    Complex,
}

impl RsslBucket {
    pub const ALL: [RsslBucket; 3] = [
        RsslBucket::Simple,
        RsslBucket::SubComplex,
        RsslBucket::Complex,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            RsslBucket::Simple => "simple",
            RsslBucket::SubComplex => "sub_complex",
            RsslBucket::Complex => "complex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OccnBucket {
    Head,
    Mid,
    Low,
    Tail,
}

impl OccnBucket {
    pub const ALL: [OccnBucket; 4] = [
        OccnBucket::Head,
        OccnBucket::Mid,
        OccnBucket::Low,
        OccnBucket::Tail,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            OccnBucket::Head => "head",
            OccnBucket::Mid => "mid",
            OccnBucket::Low => "low",
            OccnBucket::Tail => "tail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BucketError {
    #[error("RSSL bounds must satisfy 1 <= simple_max < sub_complex_max (got {0}, {1})")]
    Rssl(usize, usize),
    #[error("OccN bounds must satisfy head_min > mid_min > low_min > 0 (got {0}, {1}, {2})")]
    Occn(u64, u64, u64),
}

/// Bucket boundaries.
///
/// RSSL: `Simple` is `..=simple_max`, `SubComplex` is up to `sub_complex_max`,
/// `Complex` is the rest. OccN: `Head` is `head_min..`, `Mid` is
/// `mid_min..head_min`, `Low` is `low_min..mid_min`, `Tail` is `0..low_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BucketSpec {
    pub simple_max: usize,
    pub sub_complex_max: usize,
    pub head_min: u64,
    pub mid_min: u64,
    pub low_min: u64,
}

impl Default for BucketSpec {
    fn default() -> Self {
        BucketSpec {
            simple_max: 4,
            sub_complex_max: 6,
            head_min: 100,
            mid_min: 50,
            low_min: 20,
        }
    }
}

impl BucketSpec {
    pub fn with_rssl(
        mut self,
        simple_max: usize,
        sub_complex_max: usize,
    ) -> Result<Self, BucketError> {
        if simple_max < 1 || sub_complex_max <= simple_max {
            return Err(BucketError::Rssl(simple_max, sub_complex_max));
        }
        self.simple_max = simple_max;
        self.sub_complex_max = sub_complex_max;
        Ok(self)
    }

    pub fn with_occn(
        mut self,
        head_min: u64,
        mid_min: u64,
        low_min: u64,
    ) -> Result<Self, BucketError> {
        if !(head_min > mid_min && mid_min > low_min && low_min > 0) {
            return Err(BucketError::Occn(head_min, mid_min, low_min));
        }
        self.head_min = head_min;
        self.mid_min = mid_min;
        self.low_min = low_min;
        Ok(self)
    }

    pub fn rssl(&self, len: usize) -> RsslBucket {
        if len <= self.simple_max {
            RsslBucket::Simple
        } else if len <= self.sub_complex_max {
            RsslBucket::SubComplex
        } else {
            RsslBucket::Complex
        }
    }

    pub fn occn(&self, n: u64) -> OccnBucket {
        if n >= self.head_min {
            OccnBucket::Head
        } else if n >= self.mid_min {
            OccnBucket::Mid
        } else if n >= self.low_min {
            OccnBucket::Low
        } else {
            OccnBucket::Tail
        }
    }

    /// Human-readable range, e.g. `5<=RSSL<=6`.
    pub fn rssl_range(&self, bucket: RsslBucket) -> String {
        match bucket {
            RsslBucket::Simple => format!("RSSL<={}", self.simple_max),
            RsslBucket::SubComplex if self.sub_complex_max == self.simple_max + 1 => {
                format!("RSSL={}", self.sub_complex_max)
            }
            RsslBucket::SubComplex => {
                format!("{}<=RSSL<={}", self.simple_max + 1, self.sub_complex_max)
            }
            RsslBucket::Complex => format!("RSSL>={}", self.sub_complex_max + 1),
        }
    }

    pub fn occn_range(&self, bucket: OccnBucket) -> String {
        match bucket {
            OccnBucket::Head => format!("OccN>={}", self.head_min),
            OccnBucket::Mid => format!("{}>OccN>={}", self.head_min, self.mid_min),
            OccnBucket::Low => format!("{}>OccN>={}", self.mid_min, self.low_min),
            OccnBucket::Tail => format!("{}>OccN>=0", self.low_min),
        }
    }
}

impl fmt::Display for RsslBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for OccnBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// RSSL bucket under the default boundaries.
pub fn bucket_rssl(len: usize) -> RsslBucket {
    BucketSpec::default().rssl(len)
}

/// OccN bucket under the default boundaries.
pub fn bucket_occn(n: u64) -> OccnBucket {
    BucketSpec::default().occn(n)
}

use std::cmp::Ordering;
use std::fmt;

use super::ModelError;

/// Received power metric in dB, in the detector's own units.
///
/// Always finite, so ordering is total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerMetric(f64);

impl PowerMetric {
    pub const ZERO: PowerMetric = PowerMetric(0.0);

    pub fn new(db: f64) -> Result<Self, ModelError> {
        if db.is_finite() {
            // -0.0 folds into 0.0 so that `Ord` agrees with `PartialEq`.
            Ok(PowerMetric(db + 0.0))
        } else {
            Err(ModelError::NonFinite(db))
        }
    }

    #[inline]
    pub fn db(self) -> f64 {
        self.0
    }

    pub fn max(self, other: PowerMetric) -> PowerMetric {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Eq for PowerMetric {}

impl Ord for PowerMetric {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for PowerMetric {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<f64> for PowerMetric {
    type Error = ModelError;

    fn try_from(db: f64) -> Result<Self, Self::Error> {
        PowerMetric::new(db)
    }
}

impl fmt::Display for PowerMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = f.precision() {
            write!(f, "{:.*}", p, self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

use serde::Serialize;

use crate::{Error, Result};

/// z-score of the two-sided 95% normal interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregateReport {
    pub n: usize,
    pub mean: f64,
    /// Sample (n - 1) standard deviation.
    pub stddev: f64,
    pub ci95_half_width: f64,
    pub min: f64,
    pub max: f64,
    /// Set when n = 1 and the spread is undefined.
    pub degenerate: bool,
}

pub fn aggregate(samples: &[f64]) -> Result<AggregateReport> {
    if samples.is_empty() {
        return Err(Error::Domain("cannot aggregate an empty sample set".into()));
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = mean.clamp(min, max);
    let (stddev, degenerate) = if n == 1 {
        (0.0, true)
    } else {
        let ss = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
        ((ss / (n - 1) as f64).sqrt(), false)
    };
    Ok(AggregateReport {
        n,
        mean,
        stddev,
        ci95_half_width: Z_95 * stddev / (n as f64).sqrt(),
        min,
        max,
        degenerate,
    })
}

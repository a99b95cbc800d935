//! Summary statistics for experiment reports.

use serde::{Deserialize, Serialize};

/// Order statistics of a sample; all zero for an empty sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
        Self { count: n, min: v[0], max: v[n - 1], mean: v.iter().sum::<f64>() / n as f64, median }
    }
}

/// Counts over the buckets `(-∞, e_0), [e_0, e_1), …, [e_last, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    /// `counts.len() == edges.len() + 1`.
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(edges: Vec<f64>, values: &[f64]) -> Self {
        let mut counts = vec![0; edges.len() + 1];
        for &v in values {
            counts[edges.partition_point(|&e| e <= v)] += 1;
        }
        Self { edges, counts }
    }

    /// Decade buckets `10^lo, …, 10^hi`.
    pub fn decades(lo: i32, hi: i32, values: &[f64]) -> Self {
        Self::new((lo..=hi).map(|k| 10f64.powi(k)).collect(), values)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_and_histogram() {
        let s = Summary::of(&[3.0, 1.0, 2.0, 10.0]);
        assert_eq!((s.min, s.max, s.median, s.mean), (1.0, 10.0, 2.5, 4.0));
        assert_eq!(Summary::of(&[]), Summary::default());
        let h = Histogram::decades(-2, 0, &[1e-3, 0.01, 0.05, 0.5, 1.0, 7.0]);
        assert_eq!(h.counts, vec![1, 2, 1, 2]);
        assert_eq!(h.total(), 6);
    }
}

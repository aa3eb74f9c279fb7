//! Order-independent accumulators. Observables are integers, so sums in `f64` are exact
//! and merged results do not depend on the order of realizations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanAccumulator {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl MeanAccumulator {
    pub fn add(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &MeanAccumulator) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }

    /// Standard error of the mean from the unbiased sample variance; zero for fewer
    /// than two samples.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// One accumulator per time step.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesAccumulator {
    pub steps: Vec<MeanAccumulator>,
}

impl SeriesAccumulator {
    pub fn add(&mut self, t: usize, x: f64) {
        if self.steps.len() <= t {
            self.steps.resize(t + 1, MeanAccumulator::default());
        }
        self.steps[t].add(x);
    }

    pub fn merge(&mut self, other: &SeriesAccumulator) {
        for (t, acc) in other.steps.iter().enumerate() {
            if self.steps.len() <= t {
                self.steps.resize(t + 1, MeanAccumulator::default());
            }
            self.steps[t].merge(acc);
        }
    }

    /// `(t, mean)` for every step with data.
    pub fn means(&self) -> Vec<(f64, f64)> {
        self.steps
            .iter()
            .enumerate()
            .filter_map(|(t, a)| a.mean().map(|m| (t as f64, m)))
            .collect()
    }
}

/// Integer-valued histograms, one per time step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramSeries {
    pub steps: Vec<BTreeMap<usize, u64>>,
}

impl HistogramSeries {
    pub fn add(&mut self, t: usize, value: usize) {
        if self.steps.len() <= t {
            self.steps.resize(t + 1, BTreeMap::new());
        }
        *self.steps[t].entry(value).or_default() += 1;
    }

    pub fn merge(&mut self, other: &HistogramSeries) {
        for (t, h) in other.steps.iter().enumerate() {
            for (&v, &c) in h {
                if self.steps.len() <= t {
                    self.steps.resize(t + 1, BTreeMap::new());
                }
                *self.steps[t].entry(v).or_default() += c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let mut a = MeanAccumulator::default();
        assert_eq!(a.mean(), None);
        for x in [1.0, 2.0, 3.0, 4.0] {
            a.add(x);
        }
        assert_eq!(a.mean(), Some(2.5));
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((a.stderr() - sd / 2.0).abs() < 1e-12);
    }

    #[test]
    fn merge_is_order_independent() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 37) % 23) as f64).collect();
        let mut fwd = SeriesAccumulator::default();
        let mut parts = vec![SeriesAccumulator::default(); 3];
        for (i, &x) in xs.iter().enumerate() {
            fwd.add(i % 5, x);
            parts[i % 3].add(i % 5, x);
        }
        let mut rev = SeriesAccumulator::default();
        for p in parts.iter().rev() {
            rev.merge(p);
        }
        assert_eq!(fwd, rev);
        assert_eq!(fwd.means().len(), 5);
    }

    #[test]
    fn histograms() {
        let mut h = HistogramSeries::default();
        h.add(2, 4);
        h.add(2, 4);
        h.add(0, 2);
        let mut g = HistogramSeries::default();
        g.add(3, 6);
        g.merge(&h);
        assert_eq!(g.steps[2][&4], 2);
        assert_eq!(g.steps.len(), 4);
    }
}

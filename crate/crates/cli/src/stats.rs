use serde::{Deserialize, Serialize};

/// Linear-interpolation quantile of sorted data (`q ∈ [0, 1]`), the usual
/// "type 7" definition.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(data: &[f64]) -> f64 {
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, 0.5)
}

/// Box-plot statistics. `min`/`max` are the whisker ends: the most extreme
/// samples within `whisker · IQR` of the quartiles, never inside the box.
/// Everything beyond the fences is listed in `outliers` (ascending).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub outliers: Vec<f64>,
}

impl BoxStats {
    pub fn of(data: &[f64], whisker: f64) -> Self {
        let mut v = data.to_vec();
        v.sort_by(f64::total_cmp);
        let q1 = quantile_sorted(&v, 0.25);
        let q3 = quantile_sorted(&v, 0.75);
        let iqr = q3 - q1;
        let (lo_fence, hi_fence) = (q1 - whisker * iqr, q3 + whisker * iqr);
        let inside: Vec<f64> = v.iter().copied().filter(|x| (lo_fence..=hi_fence).contains(x)).collect();
        let outliers = v.iter().copied().filter(|x| !(lo_fence..=hi_fence).contains(x)).collect();
        Self {
            count: v.len(),
            min: inside.first().copied().unwrap_or(q1).min(q1),
            q1,
            median: quantile_sorted(&v, 0.5),
            q3,
            max: inside.last().copied().unwrap_or(q3).max(q3),
            outliers,
        }
    }
}

/// Counts of integer outcomes `0..=max_bin`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn of_counts(values: &[usize], max_bin: usize) -> Self {
        let top = values.iter().copied().max().unwrap_or(0).max(max_bin);
        let mut counts = vec![0; top + 1];
        for &v in values {
            counts[v] += 1;
        }
        Self { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

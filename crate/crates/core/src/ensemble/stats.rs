use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

use super::study::ExhaustiveReport;

/// Kendall rank correlation with tie correction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KendallTau {
    pub tau: f64,
    /// Two-sided p-value from the tie-corrected normal approximation.
    pub p: f64,
}

/// Sum over tie groups of `t(t-1)/2`, `t(t-1)(t-2)` and `t(t-1)(2t+5)`, for
/// a slice already grouped so equal values are adjacent.
fn tie_terms<T: PartialEq>(sorted: &[T]) -> (f64, f64, f64) {
    let (mut pairs, mut v0, mut v1) = (0.0, 0.0, 0.0);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        pairs += t * (t - 1.0) / 2.0;
        v0 += t * (t - 1.0) * (t - 2.0);
        v1 += t * (t - 1.0) * (2.0 * t + 5.0);
        i = j;
    }
    (pairs, v0, v1)
}

/// Sorts `v` stably and returns the number of inversions removed.
fn merge_count(v: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid]) + merge_count(&mut v[mid..]);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            merged.push(v[j]);
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            merged.push(v[i]);
            i += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..n]);
    v.copy_from_slice(&merged);
    swaps
}

/// Tau-b in `O(n log n)`: sort by `(x, y)`, then count the exchanges a merge
/// sort needs to order the `y` values.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<KendallTau> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::BadSeries(x.len(), y.len()));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::Degenerate);
    }
    let n = x.len();
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let (x_ties, x0, x1) = tie_terms(&xs);
    let (joint_ties, _, _) = tie_terms(&pairs);
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let discordant = merge_count(&mut ys) as f64;
    let (y_ties, y0, y1) = tie_terms(&ys);

    let total = (n * (n - 1) / 2) as f64;
    if x_ties == total || y_ties == total {
        return Err(Error::Degenerate);
    }
    let s = total - x_ties - y_ties + joint_ties - 2.0 * discordant;
    let tau = (s / ((total - x_ties) * (total - y_ties)).sqrt()).clamp(-1.0, 1.0);

    let nf = n as f64;
    let m = nf * (nf - 1.0);
    let mut var = (m * (2.0 * nf + 5.0) - x1 - y1) / 18.0 + 2.0 * x_ties * y_ties / m;
    if n > 2 {
        var += x0 * y0 / (9.0 * m * (nf - 2.0));
    }
    let z = s / var.sqrt();
    let p = erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0);
    Ok(KendallTau { tau, p })
}

/// Paired values (one pair per projection) with the labels of the two
/// rankings being compared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSeries {
    pub x_label: String,
    pub y_label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl RankSeries {
    pub fn new(x_label: &str, y_label: &str, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::BadSeries(x.len(), y.len()));
        }
        Ok(RankSeries {
            x_label: x_label.into(),
            y_label: y_label.into(),
            x,
            y,
        })
    }

    pub fn kendall(&self) -> Result<KendallTau> {
        kendall_tau(&self.x, &self.y)
    }
}

/// One row of the rank-correlation table. A `None` statistic means tau is
/// undefined because one ranking is constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankCorrelationRow {
    pub m: usize,
    pub matrices: usize,
    pub clique_tau: Option<f64>,
    pub clique_p: Option<f64>,
    pub worst_case_tau: Option<f64>,
    pub worst_case_p: Option<f64>,
}

/// Ranks each `m`'s projections by total non-uniform twins against the
/// summed clique approximation and the worst-case tree size (the variant
/// without 2-cliques). Bounds are ranked as exact integers, so values beyond
/// `f64` range never tie spuriously.
pub fn rank_correlation_report(report: &ExhaustiveReport) -> Vec<RankCorrelationRow> {
    let mut out = Vec::new();
    for m in report.m_values() {
        let rows: Vec<_> = report.rows.iter().filter(|r| r.m == m).collect();
        if rows.len() < 2 {
            continue;
        }
        let twins: Vec<f64> = rows.iter().map(|r| r.nonuniform_twins as f64).collect();
        let clique = ranks(rows.iter().map(|r| &r.clique_approximation).collect());
        let worst = ranks(rows.iter().map(|r| &r.worst_case_bound_without_pairs).collect());
        let split = |s: &[f64]| match kendall_tau(&twins, s) {
            Ok(k) => (Some(k.tau), Some(k.p)),
            Err(_) => (None, None),
        };
        let (clique_tau, clique_p) = split(&clique);
        let (worst_case_tau, worst_case_p) = split(&worst);
        out.push(RankCorrelationRow {
            m,
            matrices: rows.len(),
            clique_tau,
            clique_p,
            worst_case_tau,
            worst_case_p,
        });
    }
    out
}

/// Dense ranks of arbitrary ordered values, as `f64` for [`kendall_tau`].
fn ranks<T: Ord>(values: Vec<&T>) -> Vec<f64> {
    let mut sorted = values.clone();
    sorted.sort();
    sorted.dedup();
    values
        .iter()
        .map(|v| sorted.binary_search_by(|s| s.cmp(v)).map_or(0.0, |i| i as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_rankings() {
        let k = kendall_tau(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(k.tau, 1.0);
        let k = kendall_tau(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(k.tau, -1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            kendall_tau(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::Degenerate)
        ));
        assert!(matches!(kendall_tau(&[1.0], &[1.0]), Err(Error::BadSeries(1, 1))));
        assert!(matches!(kendall_tau(&[1.0, 2.0], &[1.0]), Err(Error::BadSeries(2, 1))));
    }

    #[test]
    fn tied_three_point_p_value() {
        // tau = 1 with one tie in each ranking: s = 2, var = 2
        let k = kendall_tau(&[1.0, 2.0, 2.0], &[1.0, 2.0, 2.0]).unwrap();
        assert!((k.tau - 1.0).abs() < 1e-12);
        assert!((k.p - 0.157299).abs() < 1e-6);
    }

    #[test]
    fn ranks_preserve_order() {
        let vals = [5u32, 1, 5, 3];
        assert_eq!(ranks(vals.iter().collect()), vec![2.0, 0.0, 2.0, 1.0]);
    }
}

//! Correlation, ECDF, and divergence-ranking analytics for comparing
//! brokerage profiles produced by different methods.
//!
//! P-values use the usual t-transform `t = r * sqrt((n-2) / (1-r^2))`
//! against a Student-t reference with `n - 2` degrees of freedom, two-sided,
//! for both Pearson and Spearman. Constant vectors make a correlation
//! undefined; that is reported as a distinct error so callers can render a
//! dash instead of a fabricated zero.

use crate::brokerage::{BrokerageProfile, Role};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {needed} samples (got {got})")]
    TooFewSamples { needed: usize, got: usize },
    #[error("correlation undefined: {side} vector is constant")]
    ConstantVector { side: &'static str },
    #[error("values must be finite")]
    NonFiniteValue,
    #[error("input is empty")]
    EmptyInput,
    #[error("top-k must be at least 1")]
    InvalidTopK,
    #[error("profiles cover different node sets (first difference: {node})")]
    NodeSetMismatch { node: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationKind {
    Pearson,
    Spearman,
}

impl CorrelationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationKind::Pearson => "pearson",
            CorrelationKind::Spearman => "spearman",
        }
    }
}

/// A correlation coefficient with its two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub kind: CorrelationKind,
    pub coefficient: f64,
    pub p_value: f64,
    pub n: usize,
}

impl Correlation {
    /// The asymptotic p-value is a poor guide below ten-ish samples.
    pub fn low_sample(&self) -> bool {
        self.n < 10
    }
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(StatsError::TooFewSamples {
            needed: 3,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFiniteValue);
    }
    Ok(())
}

/// Sample Pearson correlation between two equal-length vectors.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    check_lengths(x, y)?;
    let r = pearson_coefficient(x, y)?;
    Ok(Correlation {
        kind: CorrelationKind::Pearson,
        coefficient: r,
        p_value: t_test_p_value(r, x.len()),
        n: x.len(),
    })
}

fn pearson_coefficient(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sum_xy = 0.0;
    let mut sum_xx = 0.0;
    let mut sum_yy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        sum_xy += dx * dy;
        sum_xx += dx * dx;
        sum_yy += dy * dy;
    }
    if sum_xx == 0.0 {
        return Err(StatsError::ConstantVector { side: "first" });
    }
    if sum_yy == 0.0 {
        return Err(StatsError::ConstantVector { side: "second" });
    }
    Ok((sum_xy / (sum_xx * sum_yy).sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided p-value for the t-transform of a correlation on `n` samples.
fn t_test_p_value(r: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let denom = 1.0 - r * r;
    if denom <= 0.0 {
        return 0.0;
    }
    let t = r.abs() * (df / denom).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    (2.0 * (1.0 - dist.cdf(t))).clamp(0.0, 1.0)
}

/// Spearman rank correlation: Pearson over average ranks, ties receiving the
/// mean of the rank positions they span.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    check_lengths(x, y)?;
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let r = pearson_coefficient(&rx, &ry)?;
    Ok(Correlation {
        kind: CorrelationKind::Spearman,
        coefficient: r,
        p_value: t_test_p_value(r, x.len()),
        n: x.len(),
    })
}

/// 1-based ranks; each run of equal values gets the average of its positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Right-continuous ECDF step points: one `(value, cumulative fraction)` per
/// distinct value, ending at exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfCurve {
    pub points: Vec<EcdfPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcdfPoint {
    pub value: f64,
    pub fraction: f64,
}

pub fn ecdf(values: &[f64]) -> Result<EcdfCurve, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFiniteValue);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points = Vec::new();
    let mut seen = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        seen += j - i + 1;
        points.push(EcdfPoint {
            value: sorted[i],
            fraction: seen as f64 / n,
        });
        i = j + 1;
    }
    Ok(EcdfCurve { points })
}

/// One node's divergence between two profiles on one role.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffEntry {
    pub node: String,
    pub score_a: f64,
    pub score_b: f64,
    pub abs_diff: f64,
}

/// Per-role comparison: both correlations over normalized scores (None when
/// a constant vector makes one undefined) and the top-k divergent nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RoleComparison {
    pub role: Role,
    pub pearson: Option<Correlation>,
    pub spearman: Option<Correlation>,
    pub top_diff: Vec<DiffEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub node_count: usize,
    pub roles: Vec<RoleComparison>,
}

/// Correlates two profiles role by role over their normalized scores and
/// ranks nodes by absolute score difference (descending, ties broken by node
/// label). Both profiles must cover the same node set.
pub fn compare_profiles(
    a: &BrokerageProfile,
    b: &BrokerageProfile,
    top_k: usize,
) -> Result<ComparisonReport, StatsError> {
    if top_k == 0 {
        return Err(StatsError::InvalidTopK);
    }
    let nodes_a: Vec<&str> = a.node_labels().collect();
    let nodes_b: Vec<&str> = b.node_labels().collect();
    if nodes_a != nodes_b {
        let node = nodes_a
            .iter()
            .zip(&nodes_b)
            .find(|(x, y)| x != y)
            .map(|(x, _)| x.to_string())
            .unwrap_or_else(|| {
                if nodes_a.len() > nodes_b.len() {
                    nodes_a[nodes_b.len()].to_string()
                } else {
                    nodes_b[nodes_a.len()].to_string()
                }
            });
        return Err(StatsError::NodeSetMismatch { node });
    }

    let allow_undefined = |res: Result<Correlation, StatsError>| match res {
        Ok(c) => Ok(Some(c)),
        Err(StatsError::ConstantVector { .. }) => Ok(None),
        Err(e) => Err(e),
    };

    let mut roles = Vec::with_capacity(Role::ALL.len());
    for role in Role::ALL {
        let xs = a.role_scores(role);
        let ys = b.role_scores(role);
        let mut diffs: Vec<DiffEntry> = nodes_a
            .iter()
            .zip(xs.iter().zip(&ys))
            .map(|(node, (&sa, &sb))| DiffEntry {
                node: node.to_string(),
                score_a: sa,
                score_b: sb,
                abs_diff: (sa - sb).abs(),
            })
            .collect();
        diffs.sort_by(|l, r| {
            r.abs_diff
                .total_cmp(&l.abs_diff)
                .then_with(|| l.node.cmp(&r.node))
        });
        diffs.truncate(top_k);
        roles.push(RoleComparison {
            role,
            pearson: allow_undefined(pearson(&xs, &ys))?,
            spearman: allow_undefined(spearman(&xs, &ys))?,
            top_diff: diffs,
        });
    }
    Ok(ComparisonReport {
        node_count: nodes_a.len(),
        roles,
    })
}

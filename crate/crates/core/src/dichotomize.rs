//! Turns weighted graphs into binary ones, either by cutting a fixed
//! fraction of the lowest-weight edges or by keeping the disparity-filter
//! backbone (Serrano, Boguna & Vespignani's multiscale filter).
//!
//! Both cuts preserve the node set (isolated nodes stay in the graph) and
//! re-weight survivors to 1.0; [`retention_report`] summarizes whether any
//! node lost all incident edges, which is the usual criterion for picking a
//! cutoff.

use crate::graph::WeightedDigraph;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DichotomizeError {
    #[error("fraction must be in [0, 1) (got {0})")]
    FractionOutOfRange(f64),
    #[error("alpha must be in (0, 1] (got {0})")]
    AlphaOutOfRange(f64),
    #[error("normalized weight p must be in (0, 1] (got {0})")]
    InvalidP(f64),
    #[error("degree k must be at least 1 (got {0})")]
    InvalidDegree(usize),
}

/// Which dichotomizer to run, with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DichotomizeMethod {
    /// Remove the bottom `fraction` of edges by weight.
    Threshold { fraction: f64 },
    /// Keep edges significant under the disparity filter at level `alpha`.
    Backbone { alpha: f64 },
}

impl DichotomizeMethod {
    pub fn apply(self, g: &WeightedDigraph) -> Result<WeightedDigraph, DichotomizeError> {
        match self {
            DichotomizeMethod::Threshold { fraction } => threshold_cut(g, fraction),
            DichotomizeMethod::Backbone { alpha } => backbone(g, alpha),
        }
    }
}

/// Node and edge retention before/after a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetentionReport {
    pub nodes_before: usize,
    /// Nodes with at least one incident edge after the cut.
    pub nodes_retained: usize,
    pub edges_before: usize,
    pub edges_after: usize,
    pub all_nodes_retained: bool,
}

impl fmt::Display for RetentionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes {} -> {} with edges, edges {} -> {}, all nodes retained: {}",
            self.nodes_before,
            self.nodes_retained,
            self.edges_before,
            self.edges_after,
            self.all_nodes_retained
        )
    }
}

/// Removes exactly `floor(fraction * edge_count)` edges, smallest first under
/// the total order (weight, source label, target label), and re-weights the
/// survivors to 1.0.
pub fn threshold_cut(
    g: &WeightedDigraph,
    fraction: f64,
) -> Result<WeightedDigraph, DichotomizeError> {
    threshold_cut_with(g, fraction, false)
}

/// [`threshold_cut`] with the option of keeping original weights on
/// survivors (diagnostic use; the plain call binarizes).
pub fn threshold_cut_with(
    g: &WeightedDigraph,
    fraction: f64,
    keep_weights: bool,
) -> Result<WeightedDigraph, DichotomizeError> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(DichotomizeError::FractionOutOfRange(fraction));
    }
    let mut edges: Vec<(usize, usize, f64)> = g.edges().collect();
    // Node indices are in label order, so (weight, source, target) index
    // order is the stated label tie-break.
    edges.sort_unstable_by(|a, b| {
        a.2.total_cmp(&b.2)
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });
    let remove = (fraction * g.edge_count() as f64).floor() as usize;
    let survivors = edges.split_off(remove);
    Ok(rebuild(g, survivors, keep_weights))
}

/// Tail probability of one edge under the disparity filter's null model: a
/// node of degree `k` whose neighbors' normalized weights are uniform on the
/// simplex. An edge carrying a fraction `p` of its endpoint's strength gets
/// `(1 - p)^(k - 1)`; it is significant at level `alpha` when that value is
/// strictly below `alpha`.
pub fn disparity_significance(p: f64, k: usize) -> Result<f64, DichotomizeError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(DichotomizeError::InvalidP(p));
    }
    if k < 1 {
        return Err(DichotomizeError::InvalidDegree(k));
    }
    Ok((1.0 - p).powi((k - 1) as i32))
}

/// Extracts the disparity-filter backbone at level `alpha`, evaluating each
/// edge in the out-direction at its source and the in-direction at its
/// target and retaining it if either test passes. An endpoint of degree 1 in
/// the tested direction retains the edge outright (its significance is
/// identically 1 and the null model says nothing), which keeps pendant nodes
/// attached. Survivors are re-weighted to 1.0.
pub fn backbone(g: &WeightedDigraph, alpha: f64) -> Result<WeightedDigraph, DichotomizeError> {
    backbone_with(g, alpha, false)
}

/// [`backbone`] with the option of keeping original weights on survivors.
pub fn backbone_with(
    g: &WeightedDigraph,
    alpha: f64,
    keep_weights: bool,
) -> Result<WeightedDigraph, DichotomizeError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(DichotomizeError::AlphaOutOfRange(alpha));
    }
    let n = g.node_count();
    let mut out_strength = vec![0.0f64; n];
    let mut in_strength = vec![0.0f64; n];
    for (q, s, w) in g.edges() {
        out_strength[q] += w;
        in_strength[s] += w;
    }

    let passes = |w: f64, strength: f64, k: usize| -> bool {
        if k == 1 {
            return true;
        }
        let p = (w / strength).min(1.0);
        disparity_significance(p, k).expect("p in (0,1] by construction") < alpha
    };

    let survivors: Vec<(usize, usize, f64)> = g
        .edges()
        .filter(|&(q, s, w)| {
            passes(w, out_strength[q], g.out_degree(q))
                || passes(w, in_strength[s], g.in_degree(s))
        })
        .collect();
    Ok(rebuild(g, survivors, keep_weights))
}

fn rebuild(
    g: &WeightedDigraph,
    survivors: Vec<(usize, usize, f64)>,
    keep_weights: bool,
) -> WeightedDigraph {
    let edges = survivors
        .into_iter()
        .map(|(q, s, w)| (q, s, if keep_weights { w } else { 1.0 }))
        .collect();
    WeightedDigraph::from_parts(g.nodes().to_vec(), edges)
        .expect("survivor edges are a subset of a valid graph")
}

/// Compares node and edge retention between a graph and its reduced version.
pub fn retention_report(original: &WeightedDigraph, reduced: &WeightedDigraph) -> RetentionReport {
    let nodes_before = original.node_count();
    let nodes_retained = (0..reduced.node_count())
        .filter(|&i| reduced.in_degree(i) + reduced.out_degree(i) > 0)
        .count();
    RetentionReport {
        nodes_before,
        nodes_retained,
        edges_before: original.edge_count(),
        edges_after: reduced.edge_count(),
        all_nodes_retained: nodes_retained == nodes_before,
    }
}

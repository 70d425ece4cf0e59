//! Immutable weighted directed graph with text node labels, plus group
//! partitions and the size accounting the role denominators depend on.
//!
//! Invariants enforced at construction:
//! - every weight is finite and strictly positive (absence of an edge is
//!   represented by absence, never by weight 0),
//! - no self-loops,
//! - at most one edge per ordered `(source, target)` pair,
//! - nodes are indexed in lexicographic (byte-wise) label order, so the same
//!   records produce the same graph regardless of input order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge {from_node}->{to_node}: weight must be finite (got {weight})")]
    NonFiniteWeight {
        from_node: String,
        to_node: String,
        weight: f64,
    },
    #[error("edge {from_node}->{to_node}: weight must be strictly positive (got {weight})")]
    NonPositiveWeight {
        from_node: String,
        to_node: String,
        weight: f64,
    },
    #[error("duplicate edge {from_node}->{to_node}")]
    DuplicateEdge { from_node: String, to_node: String },
    #[error("self-loop on node {node} (pass drop_self_loops to discard self-loops)")]
    SelfLoop { node: String },
    #[error("no nodes: edge record list is empty after filtering")]
    EmptyNodeSet,
    #[error("unknown node label {label}")]
    UnknownNode { label: String },
    #[error("partition is missing graph nodes: {}", nodes.join(", "))]
    PartitionMissingNodes { nodes: Vec<String> },
    #[error("partition assigns nodes absent from the graph: {}", nodes.join(", "))]
    PartitionExtraNodes { nodes: Vec<String> },
    #[error("empty label: node and group labels must be non-empty")]
    EmptyLabel,
    #[error("duplicate partition entry for node {node}")]
    DuplicatePartitionEntry { node: String },
}

/// One `source -> target` flow record, as read from an edge list or an
/// adjacency matrix. Validation happens in [`build_graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

impl EdgeRecord {
    pub fn new(source: impl Into<String>, target: impl Into<String>, weight: f64) -> Self {
        EdgeRecord {
            source: source.into(),
            target: target.into(),
            weight,
        }
    }
}

/// Weighted directed graph. Immutable after construction; node indices are
/// assigned by sorting labels, and adjacency lists are kept sorted by
/// neighbor index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
    weights: HashMap<(usize, usize), f64>,
    edge_count: usize,
}

/// Builds a graph from edge records.
///
/// Self-loop records are silently discarded when `drop_self_loops` is set and
/// rejected otherwise. The node set is the set of endpoint labels of the
/// retained records; duplicate `(source, target)` pairs are an error rather
/// than being summed (an intentional-aggregation path exists in the matrix
/// reader).
pub fn build_graph<I>(records: I, drop_self_loops: bool) -> Result<WeightedDigraph, GraphError>
where
    I: IntoIterator<Item = EdgeRecord>,
{
    let mut kept = Vec::new();
    for rec in records {
        if !rec.weight.is_finite() {
            return Err(GraphError::NonFiniteWeight {
                from_node: rec.source,
                to_node: rec.target,
                weight: rec.weight,
            });
        }
        if rec.weight <= 0.0 {
            return Err(GraphError::NonPositiveWeight {
                from_node: rec.source,
                to_node: rec.target,
                weight: rec.weight,
            });
        }
        if rec.source == rec.target {
            if drop_self_loops {
                continue;
            }
            return Err(GraphError::SelfLoop { node: rec.source });
        }
        kept.push(rec);
    }
    if kept.is_empty() {
        return Err(GraphError::EmptyNodeSet);
    }

    let labels: BTreeSet<&str> = kept
        .iter()
        .flat_map(|r| [r.source.as_str(), r.target.as_str()])
        .collect();
    let nodes: Vec<String> = labels.into_iter().map(String::from).collect();
    let index: HashMap<String, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect();

    let mut edges = Vec::with_capacity(kept.len());
    for rec in &kept {
        edges.push((index[&rec.source], index[&rec.target], rec.weight));
    }
    WeightedDigraph::from_parts(nodes, edges)
}

impl WeightedDigraph {
    /// Assembles a graph from an explicit node list and index-based edges.
    /// The node list must already be sorted and deduplicated; callers inside
    /// the crate use this to preserve the node set across edge removal.
    pub(crate) fn from_parts(
        nodes: Vec<String>,
        edges: Vec<(usize, usize, f64)>,
    ) -> Result<Self, GraphError> {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let n = nodes.len();
        let index: HashMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut weights = HashMap::with_capacity(edges.len());
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(q, s, w) in &edges {
            debug_assert!(q != s && w > 0.0);
            if weights.insert((q, s), w).is_some() {
                return Err(GraphError::DuplicateEdge {
                    from_node: nodes[q].clone(),
                    to_node: nodes[s].clone(),
                });
            }
            out_adj[q].push((s, w));
            in_adj[s].push((q, w));
        }
        for adj in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            adj.sort_unstable_by_key(|&(i, _)| i);
        }
        let edge_count = edges.len();
        Ok(WeightedDigraph {
            nodes,
            index,
            out_adj,
            in_adj,
            weights,
            edge_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Node labels in index order (lexicographic).
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.nodes[idx]
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Edge weight by node index, or 0 when the edge is absent. O(1).
    pub fn weight_at(&self, q: usize, s: usize) -> f64 {
        self.weights.get(&(q, s)).copied().unwrap_or(0.0)
    }

    pub fn has_edge(&self, q: usize, s: usize) -> bool {
        self.weights.contains_key(&(q, s))
    }

    /// Edge weight by label, or 0 when the edge is absent. Unknown labels are
    /// an error (absence of an *edge* is 0; absence of a *node* is not).
    pub fn weight_between(&self, q: &str, s: &str) -> Result<f64, GraphError> {
        let qi = self.require(q)?;
        let si = self.require(s)?;
        Ok(self.weight_at(qi, si))
    }

    fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.node_index(label).ok_or_else(|| GraphError::UnknownNode {
            label: label.to_string(),
        })
    }

    /// `(source, weight)` pairs of edges into `node`, sorted by source index.
    pub fn in_neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.in_adj[node]
    }

    /// `(target, weight)` pairs of edges out of `node`, sorted by target index.
    pub fn out_neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.out_adj[node]
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_adj[node].len()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_adj[node].len()
    }

    /// All edges as `(source, target, weight)`, ordered by source then target
    /// index (equivalently by label, since indexing is lexicographic).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(q, adj)| adj.iter().map(move |&(s, w)| (q, s, w)))
    }
}

/// Total assignment of node labels to group labels.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPartition {
    assignment: BTreeMap<String, String>,
}

impl GroupPartition {
    /// Builds a partition from `(node, group)` pairs. Duplicate nodes and
    /// empty labels are rejected.
    pub fn from_pairs<I, S, T>(pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut assignment = BTreeMap::new();
        for (node, group) in pairs {
            let node = node.into();
            let group = group.into();
            if node.is_empty() || group.is_empty() {
                return Err(GraphError::EmptyLabel);
            }
            if assignment.insert(node.clone(), group).is_some() {
                return Err(GraphError::DuplicatePartitionEntry { node });
            }
        }
        Ok(GroupPartition { assignment })
    }

    pub fn group_of(&self, node: &str) -> Option<&str> {
        self.assignment.get(node).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.assignment.iter().map(|(n, g)| (n.as_str(), g.as_str()))
    }
}

/// A graph combined with a total group partition. Group labels are interned
/// to dense ids (in lexicographic label order) so that role classification is
/// an integer comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedGraph {
    graph: WeightedDigraph,
    group_ids: Vec<usize>,
    group_labels: Vec<String>,
    group_sizes: Vec<usize>,
}

/// Attaches a partition to a graph. The partition domain must equal the node
/// set exactly; both missing and extra nodes are reported by label.
pub fn attach_partition(
    graph: WeightedDigraph,
    partition: &GroupPartition,
) -> Result<PartitionedGraph, GraphError> {
    let missing: Vec<String> = graph
        .nodes()
        .iter()
        .filter(|n| partition.group_of(n).is_none())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(GraphError::PartitionMissingNodes { nodes: missing });
    }
    let extra: Vec<String> = partition
        .iter()
        .filter(|(n, _)| graph.node_index(n).is_none())
        .map(|(n, _)| n.to_string())
        .collect();
    if !extra.is_empty() {
        return Err(GraphError::PartitionExtraNodes { nodes: extra });
    }

    let group_labels: Vec<String> = partition
        .iter()
        .map(|(_, g)| g.to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let label_to_id: HashMap<&str, usize> = group_labels
        .iter()
        .enumerate()
        .map(|(i, g)| (g.as_str(), i))
        .collect();
    let group_ids: Vec<usize> = graph
        .nodes()
        .iter()
        .map(|n| label_to_id[partition.group_of(n).unwrap()])
        .collect();
    let mut group_sizes = vec![0usize; group_labels.len()];
    for &gid in &group_ids {
        group_sizes[gid] += 1;
    }
    Ok(PartitionedGraph {
        graph,
        group_ids,
        group_labels,
        group_sizes,
    })
}

impl PartitionedGraph {
    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    /// Group label of a node, by label.
    pub fn group(&self, node: &str) -> Result<&str, GraphError> {
        let idx = self
            .graph
            .node_index(node)
            .ok_or_else(|| GraphError::UnknownNode {
                label: node.to_string(),
            })?;
        Ok(&self.group_labels[self.group_ids[idx]])
    }

    /// Dense group id of a node index; ids follow lexicographic group-label order.
    pub fn group_id(&self, node: usize) -> usize {
        self.group_ids[node]
    }

    pub fn group_label(&self, group_id: usize) -> &str {
        &self.group_labels[group_id]
    }

    pub fn group_labels(&self) -> &[String] {
        &self.group_labels
    }

    /// Group sizes by dense group id.
    pub fn sizes_by_id(&self) -> &[usize] {
        &self.group_sizes
    }

    /// Map of group label to member count; sizes sum to the node count.
    pub fn group_sizes(&self) -> BTreeMap<String, usize> {
        self.group_labels
            .iter()
            .cloned()
            .zip(self.group_sizes.iter().copied())
            .collect()
    }
}

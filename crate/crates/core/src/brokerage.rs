//! Brokerage detection, role classification, counting, and normalization.
//!
//! A node `r` sits on a two-path `q -> r -> s` (`q`, `r`, `s` pairwise
//! distinct, both edges present). In binary mode it brokers the pair exactly
//! when the direct edge `q -> s` is absent. In weighted mode it brokers when
//! routing through `r` has less total resistance than the direct edge:
//!
//! ```text
//! 1/w(q,r) + 1/w(r,s) < 1/w(q,s)      (1/0 = +inf, strict inequality)
//! ```
//!
//! On a uniform-weight graph both sides reduce to the classical open-triad
//! rule, and the condition is invariant under rescaling all weights by a
//! positive constant.
//!
//! Each brokered triad is classified by the groups of `(q, r, s)` into one of
//! five roles, counted per broker node, and normalized by the theoretical
//! maximum number of ordered `(q, s)` pairs whose group pattern matches the
//! role for a node of `r`'s group.

use crate::graph::PartitionedGraph;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BrokerageError {
    #[error("two-path weight must be strictly positive (got {0})")]
    NonPositivePathWeight(f64),
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("node {node}, {role} role: count {count} exceeds denominator {denominator}")]
    CountExceedsDenominator {
        node: String,
        role: Role,
        count: u64,
        denominator: u64,
    },
    #[error("graph has {nodes} nodes; brute-force counting is capped at {bound}")]
    OracleBoundExceeded { nodes: usize, bound: usize },
}

/// The five Gould-Fernandez roles. Order matters: it is the column order of
/// every serialized artifact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Coordinator,
    Gatekeeper,
    Representative,
    Itinerant,
    Liaison,
}

impl Role {
    pub const ALL: [Role; 5] = [
        Role::Coordinator,
        Role::Gatekeeper,
        Role::Representative,
        Role::Itinerant,
        Role::Liaison,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Coordinator => "coordinator",
            Role::Gatekeeper => "gatekeeper",
            Role::Representative => "representative",
            Role::Itinerant => "itinerant",
            Role::Liaison => "liaison",
        }
    }

    pub fn from_str(s: &str) -> Option<Role> {
        Role::ALL.iter().copied().find(|r| r.as_str() == s)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Selects the weighted rule (WNGF) or classical binary GF over edge presence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrokerageMode {
    Weighted,
    Binary,
}

/// Weighted broker condition for a two-path `q -> r -> s` with direct flow
/// `z_qs` (0 when the direct edge is absent, making the right side infinite).
/// Equality does not broker.
pub fn is_weighted_broker(z_qr: f64, z_rs: f64, z_qs: f64) -> Result<bool, BrokerageError> {
    if !(z_qr > 0.0) {
        return Err(BrokerageError::NonPositivePathWeight(z_qr));
    }
    if !(z_rs > 0.0) {
        return Err(BrokerageError::NonPositivePathWeight(z_rs));
    }
    Ok(weighted_condition(z_qr, z_rs, z_qs))
}

#[inline]
fn weighted_condition(z_qr: f64, z_rs: f64, z_qs: f64) -> bool {
    z_qr.recip() + z_rs.recip() < z_qs.recip()
}

/// Classical binary broker condition: the two-path exists and the direct edge
/// does not.
pub fn is_binary_broker(edge_qr: bool, edge_rs: bool, edge_qs: bool) -> bool {
    edge_qr && edge_rs && !edge_qs
}

/// Role of broker `r` on a two-path from `q` to `s`, by group membership.
/// Every input matches exactly one arm: the five roles are the five ways to
/// partition three group slots.
pub fn classify_role<G: PartialEq>(g_q: G, g_r: G, g_s: G) -> Role {
    if g_q == g_r {
        if g_r == g_s {
            Role::Coordinator
        } else {
            Role::Representative
        }
    } else if g_r == g_s {
        Role::Gatekeeper
    } else if g_q == g_s {
        Role::Itinerant
    } else {
        Role::Liaison
    }
}

/// Per-node brokerage tallies, indexed by graph node index and [`Role`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleCounts {
    counts: Vec<[u64; 5]>,
}

impl RoleCounts {
    #[cfg(test)]
    pub(crate) fn from_raw(counts: Vec<[u64; 5]>) -> Self {
        RoleCounts { counts }
    }

    pub fn node_count(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, node: usize, role: Role) -> u64 {
        self.counts[node][role.index()]
    }

    pub fn node_total(&self, node: usize) -> u64 {
        self.counts[node].iter().sum()
    }

    pub fn per_node(&self) -> &[[u64; 5]] {
        &self.counts
    }
}

/// Counts brokered triads per node and role.
///
/// Enumerates, for each broker `r`, the ordered pairs of in-neighbor `q` and
/// out-neighbor `s` (never all `n^3` triples), with an O(1) lookup for the
/// direct edge. Work is split across broker nodes; each node's tally is
/// independent, so the result is identical for any worker count.
pub fn count_roles(pg: &PartitionedGraph, mode: BrokerageMode) -> RoleCounts {
    let g = pg.graph();
    let counts: Vec<[u64; 5]> = (0..g.node_count())
        .into_par_iter()
        .map(|r| {
            let g_r = pg.group_id(r);
            let mut tally = [0u64; 5];
            for &(q, z_qr) in g.in_neighbors(r) {
                for &(s, z_rs) in g.out_neighbors(r) {
                    if q == s {
                        continue;
                    }
                    let z_qs = g.weight_at(q, s);
                    let brokered = match mode {
                        BrokerageMode::Weighted => weighted_condition(z_qr, z_rs, z_qs),
                        BrokerageMode::Binary => z_qs == 0.0,
                    };
                    if brokered {
                        let role = classify_role(pg.group_id(q), g_r, pg.group_id(s));
                        tally[role.index()] += 1;
                    }
                }
            }
            tally
        })
        .collect();
    RoleCounts { counts }
}

/// Node-count cap for [`brute_force_counts`].
pub const ORACLE_BOUND: usize = 64;

/// Literal O(n^3) reference count over every ordered node triple. Kept
/// deliberately independent of the adjacency-driven path in [`count_roles`]
/// (its own classification match, reciprocal comparison written out) so the
/// two can check each other.
pub fn brute_force_counts(
    pg: &PartitionedGraph,
    mode: BrokerageMode,
) -> Result<RoleCounts, BrokerageError> {
    let g = pg.graph();
    let n = g.node_count();
    if n > ORACLE_BOUND {
        return Err(BrokerageError::OracleBoundExceeded {
            nodes: n,
            bound: ORACLE_BOUND,
        });
    }
    let mut counts = vec![[0u64; 5]; n];
    for q in 0..n {
        for r in 0..n {
            for s in 0..n {
                if q == r || r == s || q == s {
                    continue;
                }
                let z_qr = g.weight_at(q, r);
                let z_rs = g.weight_at(r, s);
                if z_qr == 0.0 || z_rs == 0.0 {
                    continue;
                }
                let z_qs = g.weight_at(q, s);
                let brokered = match mode {
                    BrokerageMode::Weighted => 1.0 / z_qr + 1.0 / z_rs < 1.0 / z_qs,
                    BrokerageMode::Binary => z_qs == 0.0,
                };
                if !brokered {
                    continue;
                }
                let (gq, gr, gs) = (pg.group_id(q), pg.group_id(r), pg.group_id(s));
                let role = if gq == gr && gr == gs {
                    Role::Coordinator
                } else if gq != gr && gr == gs {
                    Role::Gatekeeper
                } else if gq == gr && gr != gs {
                    Role::Representative
                } else if gq == gs && gq != gr {
                    Role::Itinerant
                } else {
                    Role::Liaison
                };
                counts[r][role.index()] += 1;
            }
        }
    }
    Ok(RoleCounts { counts })
}

/// Theoretical maximum number of times a node of `own_group` can fill `role`,
/// given the group sizes. Depends only on the sizes, not on which edges
/// exist. With `m` the node's own group size and `m_j` the other sizes:
///
/// - coordinator: `(m - 1)(m - 2)`
/// - gatekeeper / representative: `sum_j m_j (m - 1)`
/// - itinerant: `sum_j m_j (m_j - 1)`
/// - liaison: ordered pairs of distinct other groups, `sum_{j != k} m_j m_k`
pub fn role_denominator(
    role: Role,
    own_group: &str,
    sizes: &BTreeMap<String, usize>,
) -> Result<u64, BrokerageError> {
    let own = *sizes
        .get(own_group)
        .ok_or_else(|| BrokerageError::UnknownGroup(own_group.to_string()))?;
    let others: Vec<u64> = sizes
        .iter()
        .filter(|(g, _)| g.as_str() != own_group)
        .map(|(_, &m)| m as u64)
        .collect();
    Ok(denominator_from_sizes(role, own as u64, &others))
}

fn denominator_from_sizes(role: Role, own: u64, others: &[u64]) -> u64 {
    match role {
        Role::Coordinator => own.saturating_sub(1) * own.saturating_sub(2),
        Role::Gatekeeper | Role::Representative => {
            others.iter().sum::<u64>() * own.saturating_sub(1)
        }
        Role::Itinerant => others.iter().map(|&m| m * (m - 1)).sum(),
        Role::Liaison => {
            let total: u64 = others.iter().sum();
            let squares: u64 = others.iter().map(|&m| m * m).sum();
            total * total - squares
        }
    }
}

/// Per-node raw counts, denominators, and normalized scores, in node-label
/// order. Scores are `count / denominator`, or 0 when the denominator is 0,
/// so every score lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrokerageProfile {
    pub entries: Vec<ProfileEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEntry {
    pub node: String,
    pub group: String,
    /// Raw counts, indexed in [`Role::ALL`] order.
    pub counts: [u64; 5],
    /// Role denominators for this node's group, same indexing.
    pub denominators: [u64; 5],
    /// Normalized scores in `[0, 1]`, same indexing.
    pub normalized: [f64; 5],
}

impl BrokerageProfile {
    pub fn node_labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.node.as_str())
    }

    /// Normalized scores for one role across all nodes, in node-label order.
    pub fn role_scores(&self, role: Role) -> Vec<f64> {
        let i = role as usize;
        self.entries.iter().map(|e| e.normalized[i]).collect()
    }

    pub fn entry(&self, node: &str) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.node == node)
    }
}

/// Normalizes raw counts into a [`BrokerageProfile`]. A count exceeding its
/// denominator means the counter and the denominator disagree about what a
/// triad is, and is reported as an error rather than clamped.
pub fn normalize(
    counts: &RoleCounts,
    pg: &PartitionedGraph,
) -> Result<BrokerageProfile, BrokerageError> {
    let g = pg.graph();
    assert_eq!(counts.node_count(), g.node_count());
    let sizes = pg.sizes_by_id();
    // Denominators only depend on the group, so compute each group's row once.
    let mut per_group: Vec<[u64; 5]> = Vec::with_capacity(sizes.len());
    for gid in 0..sizes.len() {
        let own = sizes[gid] as u64;
        let others: Vec<u64> = sizes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != gid)
            .map(|(_, &m)| m as u64)
            .collect();
        let mut row = [0u64; 5];
        for role in Role::ALL {
            row[role.index()] = denominator_from_sizes(role, own, &others);
        }
        per_group.push(row);
    }

    let mut entries = Vec::with_capacity(g.node_count());
    for node in 0..g.node_count() {
        let gid = pg.group_id(node);
        let denominators = per_group[gid];
        let row = counts.per_node()[node];
        let mut normalized = [0.0f64; 5];
        for role in Role::ALL {
            let i = role.index();
            let (c, d) = (row[i], denominators[i]);
            if c > d {
                return Err(BrokerageError::CountExceedsDenominator {
                    node: g.label(node).to_string(),
                    role,
                    count: c,
                    denominator: d,
                });
            }
            normalized[i] = if d > 0 { c as f64 / d as f64 } else { 0.0 };
        }
        entries.push(ProfileEntry {
            node: g.label(node).to_string(),
            group: pg.group_label(gid).to_string(),
            counts: row,
            denominators,
            normalized,
        });
    }
    Ok(BrokerageProfile { entries })
}

//! Gould-Fernandez brokerage analysis for weighted, directed,
//! group-partitioned graphs.
//!
//! The classical GF measure counts, for every node `r`, the open two-paths
//! `q -> r -> s` it sits on, and classifies each by the group memberships of
//! `q`, `r`, and `s` into one of five roles (coordinator, gatekeeper,
//! representative, itinerant, liaison). This crate adds the weighted variant
//! (WNGF): `r` brokers `q -> s` whenever
//!
//! ```text
//! 1/w(q,r) + 1/w(r,s) < 1/w(q,s)
//! ```
//!
//! with a missing direct edge treated as infinite resistance, so on a binary
//! graph the rule reduces to the classical open-triad condition. Raw counts
//! are normalized by the theoretical maximum number of times a node of its
//! group could fill each role, giving scores in `[0, 1]`.
//!
//! Alongside the measure itself the crate ships the two dichotomizers the
//! weighted variant is usually compared against (bottom-fraction threshold
//! cut and the Serrano-Boguna-Vespignani disparity-filter backbone), the
//! correlation / ECDF / divergence-ranking analytics used for that
//! comparison, and CSV ingestion for edge lists, adjacency matrices, and
//! group partitions.

pub mod brokerage;
pub mod dichotomize;
pub mod graph;
pub mod io;
pub mod stats;

pub use brokerage::{
    brute_force_counts, classify_role, count_roles, is_binary_broker, is_weighted_broker,
    normalize, role_denominator, BrokerageError, BrokerageMode, BrokerageProfile, ProfileEntry,
    Role, RoleCounts,
};
pub use dichotomize::{
    backbone, disparity_significance, retention_report, threshold_cut, DichotomizeError,
    DichotomizeMethod, RetentionReport,
};
pub use graph::{
    attach_partition, build_graph, EdgeRecord, GraphError, GroupPartition, PartitionedGraph,
    WeightedDigraph,
};
pub use stats::{
    compare_profiles, ecdf, pearson, spearman, ComparisonReport, Correlation, CorrelationKind,
    DiffEntry, EcdfCurve, EcdfPoint, RoleComparison, StatsError,
};

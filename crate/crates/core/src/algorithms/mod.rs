//! Sequence-to-matrix conversion, common matrices, Hasse clustering and
//! relevance scoring.

mod cluster;
mod occurrence;
mod relevance;

pub use cluster::{hasse_cluster, hasse_cluster_in, Cluster, ClusterMode, ClusterOutput, HasseParams, Threshold};
pub use occurrence::{common_matrix, seq_to_matrix, OccurrenceIndex};
pub use relevance::{relevance_scores, Relevance, RelevanceRow, RelevanceTable};

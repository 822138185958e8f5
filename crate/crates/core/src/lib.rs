//! Topic modeling and human-preference analytics over pairwise LLM
//! comparison logs.
//!
//! The pipeline runs in stages, each usable on its own:
//!
//! - [`corpus`]: parse comparison logs (JSONL), filter to English, and
//!   normalize prompts into documents.
//! - [`embed`]: load precomputed document vectors (EMB1 format) or produce
//!   deterministic feature-hashed vectors.
//! - [`umap`]: smooth-kNN fuzzy graph and stochastic layout into a small
//!   number of dimensions.
//! - [`hdbscan`]: mutual-reachability MST, condensed tree and
//!   excess-of-mass cluster extraction; outliers get label `-1`.
//! - [`topicrep`]: class-based TF-IDF keywords per topic.
//! - [`hierarchy`]: average-linkage dendrogram over topic centroids.
//! - [`analytics`]: win/tie splits, length preference, topic x model win
//!   matrices, balanced win rates, coverage and per-topic rankings.
//! - [`report`]: deterministic SVG figures.
//! - [`pipeline`] and [`cli`]: the stage-file orchestration behind the
//!   `convo-topics` binary.
//!
//! See the crate's `examples/` directory for one runnable program per stage.

pub mod analytics;
pub mod cli;
pub mod corpus;
pub mod embed;
pub mod hdbscan;
pub mod hierarchy;
pub mod pipeline;
pub mod report;
pub mod stopwords;
pub mod synthetic;
pub mod topicrep;
pub mod umap;

pub use analytics::{EdaSummary, WinMatrix};
pub use corpus::{ConversationRecord, Document, Winner};
pub use embed::EmbeddingMatrix;
pub use hdbscan::{CondensedTree, TopicAssignment};
pub use hierarchy::Dendrogram;
pub use topicrep::{TokenCounts, TopicModel};
pub use umap::{LayoutResult, NeighborGraph};

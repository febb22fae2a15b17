//! Ordered-tree edit distance with full edit scripts, subtree-level
//! operation grouping, and an entailment pipeline for dependency-tree
//! pairs.
//!
//! The flow is: build [`tree::OrderedTree`]s (from CoNLL or bracket
//! notation via [`conll`] / [`bracket`], or directly), compute a
//! minimum-cost node script with [`ted::ted`], optionally collapse runs
//! of identical operations over subtrees with [`grouping::ted_st`], and
//! price everything through a pluggable [`cost::CostModel`]. The
//! [`entail`] module turns matching costs into yes/no (or
//! yes/unknown/no) decisions and aggregates precision, recall, F-score
//! and accuracy. [`oracle`] holds an independent brute-force distance
//! used to cross-check the dynamic program on small trees.

pub mod bracket;
pub mod cli;
pub mod conll;
pub mod cost;
pub mod entail;
pub mod grouping;
pub mod oracle;
pub mod ted;
pub mod tree;

pub use cost::{CostConfig, CostModel, EditKind, Lexicon, LexiconBuilder, ModelKind};
pub use grouping::{ted_st, Granularity, GroupedOp, GroupedScript};
pub use ted::{build_alignment, ted, Alignment, EditOp, EditScript};
pub use tree::{NodeLabel, OrderedTree};

//! Entity-relationship and business-process models from dependency-parsed
//! software requirements.
//!
//! The input is a document whose sentences already carry tokens and typed
//! dependencies (see [`depgraph`]). [`pipeline::run`] resolves pronouns,
//! extracts entities, attributes, relationships and cardinalities, sorts
//! attributes into inputs and outputs, and builds the process model.
//! [`eval`] scores a result against a gold annotation.

pub mod anaphora;
pub mod bp;
pub mod cli;
pub mod corpus;
pub mod dataflow;
pub mod depgraph;
pub mod emit;
pub mod er;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod lexicon;
pub mod pipeline;

pub use error::{Error, Result};

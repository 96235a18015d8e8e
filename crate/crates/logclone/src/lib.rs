//! Suggest logging statements for Java methods from their code clones.
//!
//! The pipeline: ingest a source tree into a method corpus, detect
//! method-level clones with log-aware token bags, predict whether a method
//! needs a logging statement from its clones, and suggest the statement's
//! description (clone text blended with an n-gram model over descriptions),
//! verbosity level, and variables. An evaluation harness scores location
//! prediction (precision/recall/F1/balanced accuracy) and description
//! quality (BLEU, ROUGE).

pub mod cli;
pub mod clone;
pub mod corpus;
pub mod error;
pub mod ingest;
pub mod level;
pub mod level_var;
pub mod lm;
pub mod location;
pub mod lps;
pub mod metrics;
pub mod pipeline;
pub mod split;
pub mod suggest;
pub mod token;

pub use corpus::{Corpus, LogPrintStatement, MethodDefinition, Mode};
pub use error::{Error, Result};
pub use level::Level;

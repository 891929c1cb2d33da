//! Interpretable extractive summarization.
//!
//! Sentences are described by six linguistic features, scored by a binary
//! additive classifier (boosted trees, staged neural subnetworks or a
//! logistic baseline) and selected under a length budget. Every trained
//! model reduces to an [`gam::AdditiveModel`], so each prediction can be
//! decomposed exactly into per-feature and per-pair contributions.
//!
//! The pipeline, end to end:
//!
//! 1. [`corpus`] loads documents and splits them.
//! 2. [`preprocess`] segments, tokenizes, tags and stems.
//! 3. [`features`] computes the per-sentence feature matrix.
//! 4. [`oracle`] derives extractive labels from abstractive references.
//! 5. [`ebm`], [`gaminet`] or [`gam::logistic`] train a classifier.
//! 6. [`summarizer`] ranks and selects sentences, [`eval`] scores them.

pub mod corpus;
pub mod dataset;
pub mod ebm;
pub mod error;
pub mod eval;
pub mod features;
pub mod gam;
pub mod gaminet;
pub mod oracle;
pub mod pipeline;
pub mod preprocess;
pub mod rouge;
pub mod seed;
pub mod summarizer;
pub mod synthetic;

pub use error::{Error, Result};

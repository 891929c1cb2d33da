//! Additive models under a logistic link.
//!
//! Both trainers export into [`AdditiveModel`]: an intercept, main shapes
//! over quantile bins and pair shapes over a 2-D bin grid. The logistic
//! baseline uses exact linear shapes on the same container.

mod binner;
mod export;
mod importance;
pub mod logistic;
mod model;

pub use binner::{quantile_cuts, Binner};
pub use export::{export_shape_tables, shape_tables_json, shape_tables_tsv, ShapeTable};
pub use importance::{importance_ratios, importance_tsv, ImportanceStatistic, TermImportance};
pub use model::{
    logistic, AdditiveModel, Decomposition, MainShape, PairShape, ShapeValues, Term,
    TermContribution,
};

//! Volumetric spanners and minimum-volume-ellipsoid coresets by one-swap
//! local search over determinants.
//!
//! The pipeline is: [`points::preprocess`] reduces the input to a full-rank
//! working space, [`engine::local_search`] runs the swap search over a
//! [`selection::SelectionState`], and [`spanner`] / [`mvee`] turn the result
//! into verified certificates.

// `!(x <= tol)` style checks are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod mvee;
pub mod points;
pub mod selection;
pub mod spanner;

pub use engine::{local_search, EngineConfig, EngineReport, Pivot, SearchMode};
pub use error::{Error, Result};
pub use mvee::{khachiyan_mvee, mvee_coreset, verify_coreset, CoresetResult, EllipsoidResult};
pub use points::{preprocess, PointSet};
pub use selection::SelectionState;
pub use spanner::{build_spanner, SpannerCertificate};

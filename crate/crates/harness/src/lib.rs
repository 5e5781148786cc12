//! Experiment orchestration for the cooperation simulator: sweep runners
//! for the outage-probability and outage-capacity figures, calibrated
//! analytic overlays, the tail-validation suite, and self-describing result
//! tables (CSV with a JSON metadata header, or plain JSON).
//!
//! Every table embeds the full [`config::ExperimentSpec`] that produced it,
//! so any row can be reproduced bit-exactly from the file alone.

pub mod capacity;
pub mod config;
pub mod error;
pub mod experiment;
pub mod report;
pub mod tails;

pub use capacity::{outage_capacity, run_fig4, CapacityPoint, CapacityRow, CapacityTable};
pub use config::ExperimentSpec;
pub use error::{Error, Result};
pub use experiment::{
    bound_curves, calibrate_overlay, run_fig3, BoundSide, OverlayCurve, ResultRow, ResultTable,
    TableMetadata,
};
pub use tails::{validate_tails, TailCheck, TailOptions, TailReport};

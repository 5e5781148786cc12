//! Engine for studying downlink outage in cellular networks where the base
//! stations inside a hexagonal cluster cooperate to null their interference
//! toward a tagged mobile.
//!
//! The crate is organized in layers:
//!
//! * [`geometry`]: Poisson point processes on a disk, hexagonal clusters,
//!   ring partitions, and sampled network realizations.
//! * [`channel`]: fading/antenna gain models (sparse and rich scattering),
//!   serving-distance sampling, channel-inversion power control, and a
//!   zero-forcing beamforming oracle used to validate the gain laws.
//! * [`simcore`]: Monte Carlo outage trials, interference accumulation,
//!   compound-Poisson interference surrogates, and ring-based sandwich
//!   bounds, all reproducible from a seed.
//! * [`analytics`]: closed-form distribution laws, tail formulas and
//!   asymptotes, and outage-probability-exponent bounds.
//! * [`stats`]: the small statistical toolkit (Kolmogorov-Smirnov, Wilson
//!   intervals, least squares, chi-square goodness of fit) used by the
//!   validation suites.
//!
//! Every sampler takes an explicit RNG; simulation entry points derive one
//! independent ChaCha8 stream per trial from `(seed, trial_index)`, so results
//! are bit-identical across runs and thread counts.

pub mod analytics;
pub mod channel;
pub mod error;
pub mod geometry;
mod quad;
pub mod simcore;
pub mod stats;

pub use error::{Error, Result};

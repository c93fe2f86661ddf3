//! Partial maxima of multivariate heavy-tailed stationary series.
//!
//! The crate simulates jointly regularly varying processes ([`models`]),
//! turns them into scaled partial-maxima step processes ([`maxima`]),
//! measures those processes in the Skorohod M1 and weak M1 metrics
//! ([`metrics`]), simulates the limiting extremal processes ([`extremal`]),
//! and runs the Monte Carlo experiments of [`lab`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cadlag;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod inference;
pub mod io;
pub mod lab;
pub mod maxima;
pub mod mc;
pub mod metrics;
pub mod models;

pub use cadlag::{GraphChain, GraphMode, SignedStep, StepFunction};
pub use error::{Error, Result};
pub use extremal::PointMeasure;
pub use inference::TailEnsemble;
pub use lab::ExperimentReport;
pub use metrics::MetricResult;
pub use models::{ModelSpec, TimeSeries};

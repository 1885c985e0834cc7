//! Coding for strand breaks in composite DNA.
//!
//! - [`composite`]: composite symbols, their enumeration and ranking, and
//!   quantization of base frequencies.
//! - [`rll`]: composite run-length-limited counting and redundancy bounds.
//! - [`marker`]: the marker/breaker code, its redundancy and the optimal
//!   marker length.
//! - [`channel`]: the strand-break channel simulator and decoder.
//!
//! The data-parallel loops run on rayon when the `parallel` feature is on
//! (the default); [`Execution::Sequential`] selects the plain loop. Results
//! are identical either way.

pub mod channel;
pub mod composite;
mod exec;
pub mod marker;
pub mod numeric;
pub mod rll;

pub use channel::{
    run_experiment, run_experiment_with, BreakModel, ChannelConfig, ChannelError, ExperimentReport,
    Fragment, Strand,
};
pub use composite::{AlphabetParams, CompositeError, CompositeMatrix, CompositeSymbol};
pub use exec::Execution;
pub use marker::{FragmentClass, MarkerCodeParams, MarkerError, Message};
pub use rll::{BoundReport, RllError, RllParams};

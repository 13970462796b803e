//! Farrow-structure resamplers built from cubic Lagrange and Hermite-spline
//! (3rd, 5th and 7th order) interpolation, with wideband FIR
//! differentiators supplying the derivative estimates.
//!
//! The crate is organized bottom-up:
//!
//! * [`spline`]: per-segment polynomial coefficients and Horner evaluation
//! * [`diff`]: linear-phase FIR differentiator design and filtering
//! * [`engine`]: the streaming resampler (fractional delay and P/Q conversion)
//! * [`analysis`]: impulse, frequency and group-delay measurements
//! * [`signal_io`] and [`cli`]: file formats and the command-line front end

pub mod analysis;
pub mod cli;
pub mod diff;
pub mod engine;
pub mod error;
pub mod signal_io;
pub mod spline;

pub use diff::{DifferentiatorFilter, DifferentiatorSpec};
pub use engine::{Conversion, Output, Ratio, Resampler, ResamplerConfig};
pub use error::{Error, Result};
pub use spline::{InterpolatorKind, SampleWindow, SplineCoefficients};

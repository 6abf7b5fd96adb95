//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the toolkit's domain operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A three-velocity with |β| ≥ 1 or non-finite components was requested.
    #[error("tetrad: velocity out of range, |beta| must be < 1 (got |beta| = {speed})")]
    VelocityOutOfRange { speed: f64 },

    /// A scalar-mass that is not strictly positive.
    #[error("mass_states: scalar-mass must be > 0 (got {m})")]
    NonpositiveMass { m: f64 },

    /// Non-finite input where a finite value is required.
    #[error("{context}: non-finite input")]
    NonFinite { context: &'static str },

    /// The declared causal class of a direction disagrees with its norm.
    #[error("mass_states: direction class mismatch, declared {declared} but direction.direction = {norm}")]
    DirectionClassMismatch { declared: &'static str, norm: f64 },

    /// Time-ordered displacement required: Δτ must be > 0.
    #[error("propagation: time ordering requires dtau > 0 (got {dtau})")]
    TimeOrdering { dtau: f64 },

    /// The transition kernel diverges on the light cone.
    #[error("propagation: lightlike displacement, 1/|proper time| diverges; no finite kernel value")]
    LightlikeSingularity,

    /// A quadrature grid too coarse for the structure it must resolve.
    #[error("{context}: grid resolution too coarse ({detail})")]
    GridResolution {
        context: &'static str,
        detail: String,
    },

    /// bra and ket velocities must match for a spatial inner product.
    #[error("propagation: velocity mismatch between bra and ket states")]
    VelocityMismatch,

    /// Occupancy is capped at a single particle.
    #[error("propagation: occupancy overflow, cannot create beyond n = 1")]
    OccupancyOverflow,

    /// A worldline segment that is not timelike.
    #[error("path_integral: segment{} is not timelike (|dxi| >= dtau)", segment_label(*.index))]
    SpacelikeSegment { index: Option<usize> },

    /// Endpoints admit no timelike path.
    #[error("path_integral: endpoints are not timelike-separated, no timelike path exists")]
    NoTimelikePath,

    /// A structurally invalid argument (empty grids, unordered times, ...).
    #[error("{context}: invalid argument ({detail})")]
    InvalidArgument {
        context: &'static str,
        detail: String,
    },
}

fn segment_label(index: Option<usize>) -> String {
    match index {
        Some(i) => format!(" {i}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

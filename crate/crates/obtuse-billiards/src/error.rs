//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by orbit construction and the supporting calculators.
#[derive(Debug, Error)]
pub enum BilliardError {
    /// The direction pair must be nonnegative, not both zero, and coprime.
    #[error("invalid direction pair ({x}, {y}): {reason}")]
    InvalidPair { x: u64, y: u64, reason: String },

    /// Launch offsets must lie in the open interval the shape admits.
    #[error("offset {offset} outside the admissible interval {interval}")]
    InvalidOffset { offset: String, interval: String },

    /// A zero vector was supplied where a direction is required.
    #[error("zero direction")]
    ZeroDirection,

    /// The ray runs along a mirror line of the tessellation, so crossing
    /// counts are not defined.
    #[error("ray lies along a {class}° mirror line (offset {offset})")]
    GrazingAlongIncline { class: u32, offset: String },

    /// A folding start point that is not on the boundary of the fundamental
    /// polygon (and the shape expects a boundary start).
    #[error("start point {point} is not on the boundary")]
    StartOffBoundary { point: String },

    /// Crossing queries require an origin that is not a tessellation vertex.
    #[error("ray origin {point} is a tessellation vertex")]
    OriginIsVertex { point: String },

    /// A folding start direction that points out of the polygon.
    #[error("direction {dir} points out of the polygon at {point}")]
    OutwardDirection { dir: String, point: String },

    /// A search that is contractually bounded ran past its bound.
    #[error(
        "period search exceeded its horizontal bound of {bound} (pair ({x}, {y}), offset {offset})"
    )]
    SearchBoundExceeded {
        x: u64,
        y: u64,
        offset: String,
        bound: String,
    },

    /// The closed-form prediction and the folding simulation disagreed.
    /// This is a bug signal, never a data condition.
    #[error("engine disagreement: {0}")]
    EngineDisagreement(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, BilliardError>;

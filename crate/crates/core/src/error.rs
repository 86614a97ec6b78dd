//! Error type shared by all core modules.

use alloc::string::String;

/// Errors produced by the core pipeline.
///
/// Variants are grouped the way the CLI maps them to exit codes: bad
/// configuration, protocol violations (data that breaks an operation's
/// contract), and training divergence.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    /// A parameter or configuration value is out of range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// An input value (not a config knob) is out of its documented range.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two values that must agree in shape do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Data violates the adaptation or evaluation protocol.
    #[error("protocol violation: {0}")]
    Protocol(String),

    /// The input is degenerate for this operation (e.g. all pixels void);
    /// callers typically skip the sample.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// No class had a nonzero union, so no IoU is defined.
    #[error("no evaluable class: every class has zero union")]
    NoEvaluableClass,

    /// A non-finite loss was encountered during training.
    #[error("training diverged at sample {sample_index}: non-finite loss")]
    TrainingDiverged { sample_index: usize },

    /// A serialized artifact could not be decoded.
    #[error("malformed data: {0}")]
    Malformed(String),
}

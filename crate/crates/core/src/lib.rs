//! Core algorithms for staged self-training of a pixelwise segmentation
//! model across an ordered illumination corridor.
//!
//! The crate is organized around the pipeline it implements:
//!
//! - [`corridor`] synthesizes labeled road-scene analogs and darkens them
//!   through five illumination stages (day, three twilights, night).
//! - [`segnet`] is a small from-scratch linear patch classifier with
//!   analytic gradients and deterministic SGD.
//! - [`adaptation`] runs the staged protocol: supervised day training,
//!   per-stage pseudo-labeling, and proportionally sampled joint
//!   fine-tuning, plus the one-step baseline.
//! - [`eval`] accumulates confusion matrices and reports per-class and
//!   mean IoU with void exclusion.
//! - [`solar`] computes solar elevation and classifies timestamps into
//!   the five illumination stages.
//!
//! Everything here is pure computation over heap buffers: the crate is
//! `no_std` (with `alloc`) and all float math goes through `libm`, so a
//! given seed produces bit-identical results regardless of the host
//! feature set. File formats, IO, and the CLI live in the companion
//! `duskadapt` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adaptation;
pub mod checkpoint;
pub mod corridor;
pub mod error;
pub mod eval;
pub mod image;
pub mod rng;
pub mod segnet;
pub mod solar;

pub use error::CoreError;
pub use image::{Image, LabelMap, VOID};

/// Convenience alias used across the crate.
pub type Result<T> = core::result::Result<T, CoreError>;

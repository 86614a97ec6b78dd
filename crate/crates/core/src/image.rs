//! Pixel containers: real-valued images and per-pixel label maps.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{CoreError, Result};

/// Sentinel label for pixels excluded from loss and evaluation.
pub const VOID: u8 = 255;

/// Largest usable class count; 255 is reserved for [`VOID`].
pub const MAX_CLASSES: usize = 254;

/// A row-major real-valued image with values in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    /// Build an image, validating range and buffer length.
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(CoreError::InvalidConfig(format!(
                "image dimensions must be nonzero, got {height}x{width}x{channels}"
            )));
        }
        if data.len() != height * width * channels {
            return Err(CoreError::ShapeMismatch(format!(
                "image buffer has {} values, expected {}",
                data.len(),
                height * width * channels
            )));
        }
        if !data.iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v)) {
            return Err(CoreError::InvalidInput(
                "image values must be finite and within [0, 1]".into(),
            ));
        }
        Ok(Self { height, width, channels, data })
    }

    /// All-zero (black) image.
    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self { height, width, channels, data: vec![0.0; height * width * channels] }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> f64 {
        self.data[(row * self.width + col) * self.channels + channel]
    }

    /// Value at `(row, col)` with zero padding outside the frame.
    #[inline]
    pub fn get_padded(&self, row: isize, col: isize, channel: usize) -> f64 {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            0.0
        } else {
            self.get(row as usize, col as usize, channel)
        }
    }

    /// Mean over all values (all pixels, all channels).
    pub fn mean_intensity(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

/// Per-pixel class IDs in `{0..C-1}` plus the [`VOID`] sentinel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    height: usize,
    width: usize,
    labels: Vec<u8>,
}

impl LabelMap {
    /// Build a label map, checking every non-void label against `class_count`.
    pub fn new(height: usize, width: usize, labels: Vec<u8>, class_count: usize) -> Result<Self> {
        if class_count < 2 || class_count > MAX_CLASSES {
            return Err(CoreError::InvalidConfig(format!(
                "class_count must be in [2, {MAX_CLASSES}], got {class_count}"
            )));
        }
        if labels.len() != height * width {
            return Err(CoreError::ShapeMismatch(format!(
                "label buffer has {} values, expected {}",
                labels.len(),
                height * width
            )));
        }
        if let Some(bad) = labels.iter().find(|&&l| l != VOID && usize::from(l) >= class_count) {
            return Err(CoreError::InvalidInput(format!(
                "label {bad} out of range for {class_count} classes"
            )));
        }
        Ok(Self { height, width, labels })
    }

    /// Constant-valued label map.
    pub fn filled(height: usize, width: usize, label: u8) -> Self {
        Self { height, width, labels: vec![label; height * width] }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.labels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, label: u8) {
        self.labels[row * self.width + col] = label;
    }

    /// Number of non-void pixels.
    pub fn valid_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l != VOID).count()
    }

    pub fn same_shape(&self, other: &LabelMap) -> bool {
        self.height == other.height && self.width == other.width
    }
}

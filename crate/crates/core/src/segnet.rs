//! A small, deterministic pixelwise segmentation model.
//!
//! Each pixel is classified from the flattened local patch around it
//! (zero-padded at borders) plus a bias term, through a single linear
//! layer and a softmax over classes. The model is deliberately tiny: its
//! gradients are analytic and exactly checkable against finite
//! differences, while still exposing the full train / duplicate /
//! fine-tune surface the staged adaptation protocol needs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::image::{Image, LabelMap, MAX_CLASSES, VOID};
use crate::rng::stream_rng;
use crate::{CoreError, Result};

/// Learning rate reported for the reference full-scale setup.
pub const BASE_LEARNING_RATE: f64 = 5e-5;

/// Default multiplier on [`BASE_LEARNING_RATE`]; the linear patch model
/// has a far better conditioned loss surface than a deep network, so it
/// trains at a correspondingly larger step. Set the multiplier to 1 to
/// select the raw base rate.
pub const DEFAULT_LR_MULTIPLIER: f64 = 1e3;

/// Shape of a model: class count, patch radius, input channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub class_count: usize,
    pub patch_radius: usize,
    pub channels: usize,
}

impl ModelSpec {
    pub fn new(class_count: usize, patch_radius: usize, channels: usize) -> Self {
        Self { class_count, patch_radius, channels }
    }

    /// Patch side length `2r + 1`.
    pub fn patch_side(&self) -> usize {
        2 * self.patch_radius + 1
    }

    /// Features per pixel: flattened patch values plus one bias slot.
    pub fn feature_len(&self) -> usize {
        self.patch_side() * self.patch_side() * self.channels + 1
    }

    fn validate(&self) -> Result<()> {
        if self.class_count < 2 || self.class_count > MAX_CLASSES {
            return Err(CoreError::InvalidConfig(format!(
                "class_count must be in [2, {MAX_CLASSES}], got {}",
                self.class_count
            )));
        }
        if self.channels == 0 {
            return Err(CoreError::InvalidConfig("channels must be nonzero".into()));
        }
        Ok(())
    }
}

/// SGD settings for one training pass.
#[derive(Clone, Debug, PartialEq)]
pub struct SgdConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub shuffle_seed: u64,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            learning_rate: BASE_LEARNING_RATE * DEFAULT_LR_MULTIPLIER,
            batch_size: 1,
            epochs: 10,
            shuffle_seed: 0,
        }
    }
}

impl SgdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "learning_rate must be finite and >= 0, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(CoreError::InvalidConfig("batch_size must be >= 1".into()));
        }
        Ok(())
    }
}

/// Weights of the pixel classifier: a `[C x feature_len]` row-major
/// matrix whose last column is the bias.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    spec: ModelSpec,
    weights: Vec<f64>,
}

/// Dense per-pixel class scores, row-major `[H x W x C]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMap {
    pub height: usize,
    pub width: usize,
    pub class_count: usize,
    pub data: Vec<f64>,
}

impl ScoreMap {
    #[inline]
    pub fn get(&self, row: usize, col: usize, class: usize) -> f64 {
        self.data[(row * self.width + col) * self.class_count + class]
    }
}

impl ModelParams {
    /// Fresh model with weights i.i.d. uniform in `[-0.01, 0.01]` from a
    /// deterministic stream; identical inputs give bit-identical weights.
    pub fn init(spec: ModelSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = stream_rng(seed);
        let weights =
            (0..spec.class_count * spec.feature_len()).map(|_| rng.random_range(-0.01..=0.01)).collect();
        Ok(Self { spec, weights })
    }

    /// Rebuild a model from raw parts (used by checkpoint decoding and tests).
    pub fn from_parts(spec: ModelSpec, weights: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if weights.len() != spec.class_count * spec.feature_len() {
            return Err(CoreError::ShapeMismatch(format!(
                "weight buffer has {} values, expected {}",
                weights.len(),
                spec.class_count * spec.feature_len()
            )));
        }
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(CoreError::InvalidInput("weights must be finite".into()));
        }
        Ok(Self { spec, weights })
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec
    }

    pub fn class_count(&self) -> usize {
        self.spec.class_count
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    /// Exact duplicate; updates to the copy never touch the original.
    pub fn duplicate(&self) -> Self {
        self.clone()
    }

    fn check_image(&self, image: &Image) -> Result<()> {
        if image.channels() != self.spec.channels {
            return Err(CoreError::ShapeMismatch(format!(
                "image has {} channels, model expects {}",
                image.channels(),
                self.spec.channels
            )));
        }
        Ok(())
    }

    /// Gather the zero-padded patch around `(row, col)` plus the bias slot.
    fn fill_features(&self, image: &Image, row: usize, col: usize, out: &mut [f64]) {
        let r = self.spec.patch_radius as isize;
        let mut k = 0;
        for dr in -r..=r {
            for dc in -r..=r {
                for ch in 0..self.spec.channels {
                    out[k] = image.get_padded(row as isize + dr, col as isize + dc, ch);
                    k += 1;
                }
            }
        }
        out[k] = 1.0;
    }

    /// Raw class scores for every pixel.
    pub fn predict_logits(&self, image: &Image) -> Result<ScoreMap> {
        self.check_image(image)?;
        let (h, w, c) = (image.height(), image.width(), self.spec.class_count);
        let flen = self.spec.feature_len();
        let mut features = vec![0.0; flen];
        let mut data = vec![0.0; h * w * c];
        for row in 0..h {
            for col in 0..w {
                self.fill_features(image, row, col, &mut features);
                let base = (row * w + col) * c;
                for class in 0..c {
                    let wrow = &self.weights[class * flen..(class + 1) * flen];
                    let mut acc = 0.0;
                    for (wv, fv) in wrow.iter().zip(features.iter()) {
                        acc += wv * fv;
                    }
                    data[base + class] = acc;
                }
            }
        }
        Ok(ScoreMap { height: h, width: w, class_count: c, data })
    }

    /// Per-pixel argmax labels; ties break toward the lowest class ID,
    /// and [`VOID`] is never emitted.
    pub fn predict_labels(&self, image: &Image) -> Result<LabelMap> {
        let scores = self.predict_logits(image)?;
        let mut labels = LabelMap::filled(scores.height, scores.width, 0);
        for row in 0..scores.height {
            for col in 0..scores.width {
                let mut best = 0usize;
                let mut best_score = scores.get(row, col, 0);
                for class in 1..scores.class_count {
                    let s = scores.get(row, col, class);
                    if s > best_score {
                        best = class;
                        best_score = s;
                    }
                }
                labels.set(row, col, best as u8);
            }
        }
        Ok(labels)
    }

    /// Mean softmax cross-entropy over non-void pixels and its gradient
    /// (same shape as the weights). Void pixels contribute exactly zero.
    pub fn loss_and_grad(&self, image: &Image, labels: &LabelMap) -> Result<(f64, Vec<f64>)> {
        self.check_image(image)?;
        if labels.height() != image.height() || labels.width() != image.width() {
            return Err(CoreError::ShapeMismatch(format!(
                "labels are {}x{}, image is {}x{}",
                labels.height(),
                labels.width(),
                image.height(),
                image.width()
            )));
        }
        let c = self.spec.class_count;
        let flen = self.spec.feature_len();
        let mut features = vec![0.0; flen];
        let mut logits = vec![0.0; c];
        let mut probs = vec![0.0; c];
        let mut grad = vec![0.0; self.weights.len()];
        let mut loss = 0.0;
        let mut valid = 0usize;

        for row in 0..image.height() {
            for col in 0..image.width() {
                let label = labels.get(row, col);
                if label == VOID {
                    continue;
                }
                let y = usize::from(label);
                if y >= c {
                    return Err(CoreError::InvalidInput(format!(
                        "label {y} out of range for {c} classes"
                    )));
                }
                valid += 1;
                self.fill_features(image, row, col, &mut features);
                for class in 0..c {
                    let wrow = &self.weights[class * flen..(class + 1) * flen];
                    let mut acc = 0.0;
                    for (wv, fv) in wrow.iter().zip(features.iter()) {
                        acc += wv * fv;
                    }
                    logits[class] = acc;
                }
                // Softmax with max subtraction for stability.
                let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut z = 0.0;
                for class in 0..c {
                    probs[class] = libm::exp(logits[class] - max);
                    z += probs[class];
                }
                loss -= logits[y] - max - libm::log(z);
                for class in 0..c {
                    let coeff = probs[class] / z - if class == y { 1.0 } else { 0.0 };
                    let grow = &mut grad[class * flen..(class + 1) * flen];
                    for (gv, fv) in grow.iter_mut().zip(features.iter()) {
                        *gv += coeff * fv;
                    }
                }
            }
        }

        if valid == 0 {
            return Err(CoreError::DegenerateInput("all pixels are void".into()));
        }
        let scale = 1.0 / valid as f64;
        loss *= scale;
        for g in &mut grad {
            *g *= scale;
        }
        Ok((loss, grad))
    }

    /// Mean loss over a set of samples (no gradient); skips nothing.
    pub fn mean_loss<'a, I>(&self, samples: I) -> Result<f64>
    where
        I: IntoIterator<Item = (&'a Image, &'a LabelMap)>,
    {
        let mut total = 0.0;
        let mut n = 0usize;
        for (image, labels) in samples {
            let (loss, _) = self.loss_and_grad(image, labels)?;
            total += loss;
            n += 1;
        }
        if n == 0 {
            return Err(CoreError::DegenerateInput("no samples".into()));
        }
        Ok(total / n as f64)
    }
}

/// One pass of mini-batch SGD over `stream`, in stream order.
///
/// Returns the updated parameters; the input model is untouched. A
/// non-finite loss aborts with the offending sample's stream index.
pub fn sgd_epoch<'a, I>(model: &ModelParams, stream: I, config: &SgdConfig) -> Result<ModelParams>
where
    I: IntoIterator<Item = (&'a Image, &'a LabelMap)>,
{
    config.validate()?;
    let mut out = model.duplicate();
    let mut batch_grad = vec![0.0; out.weights.len()];
    let mut in_batch = 0usize;
    let mut index = 0usize;
    let mut seen = false;

    for (image, labels) in stream {
        seen = true;
        let (loss, grad) = out.loss_and_grad(image, labels)?;
        if !loss.is_finite() {
            return Err(CoreError::TrainingDiverged { sample_index: index });
        }
        for (b, g) in batch_grad.iter_mut().zip(grad.iter()) {
            *b += g;
        }
        in_batch += 1;
        index += 1;
        if in_batch == config.batch_size {
            apply_step(&mut out, &batch_grad, in_batch, config.learning_rate);
            batch_grad.iter_mut().for_each(|b| *b = 0.0);
            in_batch = 0;
        }
    }
    if in_batch > 0 {
        apply_step(&mut out, &batch_grad, in_batch, config.learning_rate);
    }
    if !seen {
        return Err(CoreError::InvalidConfig("empty training stream".into()));
    }
    Ok(out)
}

fn apply_step(model: &mut ModelParams, grad_sum: &[f64], batch: usize, lr: f64) {
    let scale = lr / batch as f64;
    for (w, g) in model.weights.iter_mut().zip(grad_sum.iter()) {
        *w -= scale * g;
    }
}

/// Human-readable shape summary, used in logs.
pub fn describe(model: &ModelParams) -> String {
    let s = model.spec();
    format!(
        "C={} r={} ch={} weights={}x{}",
        s.class_count,
        s.patch_radius,
        s.channels,
        s.class_count,
        s.feature_len()
    )
}

//! Synthetic domain corridor: labeled road-scene analogs darkened through
//! five illumination stages.
//!
//! Scenes are composed of a ground band, a sky band, and a few random
//! rectangles or discs of the remaining classes, each rendered in a
//! class-specific base color with small per-pixel jitter. Darkening is a
//! parametric curve: brightness scaling, gamma compression, additive
//! glare blobs at the dark stages, and Gaussian sensor noise, clamped to
//! `[0, 1]`.
//!
//! All sample values are snapped to the 8-bit grid (`k / 255`), so a
//! corridor written to disk as 8-bit images and read back is bit-identical
//! to the in-memory one.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::image::{Image, LabelMap, MAX_CLASSES};
use crate::rng::{derive_seed, stream_rng};
use crate::{CoreError, Result};

/// The five illumination stages, ordered bright to dark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum DomainStage {
    Day = 0,
    Civil = 1,
    Nautical = 2,
    Astronomical = 3,
    Night = 4,
}

impl DomainStage {
    pub const ALL: [DomainStage; 5] = [
        DomainStage::Day,
        DomainStage::Civil,
        DomainStage::Nautical,
        DomainStage::Astronomical,
        DomainStage::Night,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            DomainStage::Day => "day",
            DomainStage::Civil => "civil",
            DomainStage::Nautical => "nautical",
            DomainStage::Astronomical => "astronomical",
            DomainStage::Night => "night",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        DomainStage::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| CoreError::Malformed(format!("unknown stage name '{name}'")))
    }
}

/// Base colors used to render class regions at daytime, RGB in `[0, 1]`.
/// The first two entries are the ground and sky bands; later entries are
/// object classes. Classes are separated along two axes at once: hue
/// directions are far apart (channel ratios survive gamma compression,
/// carrying the bright and twilight stages), and luminances form a ladder
/// (multiplicative darkening preserves brightness ordering, which is the
/// one signal left near the dark end). Class counts beyond the table
/// reuse it cyclically with a deterministic brightness offset.
const CLASS_BASE_COLORS: [[f64; 3]; 8] = [
    [0.18, 0.10, 0.06], // ground
    [0.62, 0.78, 0.99], // sky
    [0.10, 0.52, 0.10], // foliage
    [0.88, 0.80, 0.12], // marker
    [0.48, 0.10, 0.50], // facade
    [0.10, 0.55, 0.52], // water
    [0.80, 0.40, 0.08], // amber
    [0.85, 0.20, 0.15], // signal
];

fn base_color(class: usize, channels: usize) -> [f64; 3] {
    let mut color = CLASS_BASE_COLORS[class % CLASS_BASE_COLORS.len()];
    // Distinguish wrapped classes by a fixed lightness shift.
    let wrap = (class / CLASS_BASE_COLORS.len()) as f64;
    for c in color.iter_mut() {
        *c = (*c + wrap * 0.11).min(1.0);
    }
    if channels == 1 {
        let g = (color[0] + color[1] + color[2]) / 3.0;
        color = [g, g, g];
    }
    color
}

/// Configuration for the synthetic corridor.
#[derive(Clone, Debug, PartialEq)]
pub struct CorridorConfig {
    pub class_count: usize,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    /// Sample counts for day, civil, nautical, astronomical, night test.
    pub counts: [usize; 5],
    /// Per-stage brightness factor, strictly decreasing, in `(0, 1]`.
    pub brightness: [f64; 5],
    /// Per-stage gamma, each `>= 1`.
    pub gamma: [f64; 5],
    /// Per-stage Gaussian noise sigma, non-decreasing, `>= 0`.
    pub noise_sigma: [f64; 5],
    /// Per-stage maximum count of additive glare blobs.
    pub glare_max_blobs: [u8; 5],
    /// Explicit scene-number range starts per stage; derived from the
    /// counts when absent. Ranges must not overlap.
    pub scene_seed_starts: Option<[u64; 5]>,
    pub master_seed: u64,
}

impl Default for CorridorConfig {
    fn default() -> Self {
        Self {
            class_count: 5,
            height: 32,
            width: 32,
            channels: 3,
            counts: [200, 200, 200, 200, 50],
            brightness: [1.0, 0.6, 0.35, 0.2, 0.12],
            gamma: [1.0, 1.2, 1.5, 1.8, 2.2],
            noise_sigma: [0.0, 0.01, 0.02, 0.03, 0.05],
            glare_max_blobs: [0, 0, 1, 2, 3],
            scene_seed_starts: None,
            master_seed: 0,
        }
    }
}

impl CorridorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.class_count < 2 || self.class_count > MAX_CLASSES {
            return Err(CoreError::InvalidConfig(format!(
                "class_count must be in [2, {MAX_CLASSES}], got {}",
                self.class_count
            )));
        }
        if self.height < 8 || self.width < 8 {
            return Err(CoreError::InvalidConfig(format!(
                "scene size must be at least 8x8, got {}x{}",
                self.height, self.width
            )));
        }
        if self.channels != 1 && self.channels != 3 {
            return Err(CoreError::InvalidConfig(format!(
                "channels must be 1 or 3, got {}",
                self.channels
            )));
        }
        if self.counts.iter().any(|&c| c == 0) {
            return Err(CoreError::InvalidConfig("all stage counts must be >= 1".into()));
        }
        for w in self.brightness.windows(2) {
            if !(w[1] < w[0]) {
                return Err(CoreError::InvalidConfig(
                    "brightness must be strictly decreasing across stages".into(),
                ));
            }
        }
        if self.brightness.iter().any(|&b| !(b > 0.0 && b <= 1.0)) {
            return Err(CoreError::InvalidConfig("brightness must lie in (0, 1]".into()));
        }
        if self.gamma.iter().any(|&g| !(g >= 1.0) || !g.is_finite()) {
            return Err(CoreError::InvalidConfig("gamma must be >= 1".into()));
        }
        for w in self.noise_sigma.windows(2) {
            if w[1] < w[0] {
                return Err(CoreError::InvalidConfig(
                    "noise sigma must be non-decreasing across stages".into(),
                ));
            }
        }
        if self.noise_sigma.iter().any(|&n| n < 0.0 || !n.is_finite()) {
            return Err(CoreError::InvalidConfig("noise sigma must be >= 0".into()));
        }
        let starts = self.scene_starts();
        let mut ranges: Vec<(u64, u64)> = starts
            .iter()
            .zip(self.counts.iter())
            .map(|(&s, &c)| (s, s + c as u64))
            .collect();
        ranges.sort_unstable();
        for pair in ranges.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(CoreError::InvalidConfig(
                    "scene seed ranges overlap between stages".into(),
                ));
            }
        }
        Ok(())
    }

    /// Scene-number range start per stage; defaults to cumulative counts,
    /// which can never overlap.
    pub fn scene_starts(&self) -> [u64; 5] {
        if let Some(starts) = self.scene_seed_starts {
            return starts;
        }
        let mut starts = [0u64; 5];
        let mut acc = 0u64;
        for (i, &c) in self.counts.iter().enumerate() {
            starts[i] = acc;
            acc += c as u64;
        }
        starts
    }

    /// Ground-truth labels for a scene number, regenerated on demand.
    /// Darkening never touches labels, so this is exact for every stage.
    pub fn truth_labels(&self, scene_number: u64) -> Result<LabelMap> {
        let seed = derive_seed(self.master_seed, "scene", scene_number);
        let (_, labels) = generate_scene(seed, self.height, self.width, self.class_count, self.channels)?;
        Ok(labels)
    }
}

/// One image with optional labels and its stage.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub id: String,
    pub stage: DomainStage,
    pub image: Image,
    pub labels: Option<LabelMap>,
}

impl Sample {
    /// Scene number encoded in generated ids (`sc{N}`), if present.
    pub fn scene_number(&self) -> Option<u64> {
        self.id.strip_prefix("sc").and_then(|s| s.parse().ok())
    }
}

/// An ordered collection of samples sharing one stage.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    stage: DomainStage,
    samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(stage: DomainStage, samples: Vec<Sample>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for sample in &samples {
            if sample.stage != stage {
                return Err(CoreError::Protocol(format!(
                    "sample '{}' has stage {} in a {} dataset",
                    sample.id,
                    sample.stage.name(),
                    stage.name()
                )));
            }
            if !ids.insert(sample.id.as_str()) {
                return Err(CoreError::Protocol(format!("duplicate sample id '{}'", sample.id)));
            }
        }
        Ok(Self { stage, samples })
    }

    pub fn stage(&self) -> DomainStage {
        self.stage
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// True when every sample carries labels.
    pub fn is_labeled(&self) -> bool {
        self.samples.iter().all(|s| s.labels.is_some())
    }

    /// True when no sample carries labels.
    pub fn is_unlabeled(&self) -> bool {
        self.samples.iter().all(|s| s.labels.is_none())
    }

    /// Copy with all labels removed.
    pub fn without_labels(&self) -> Dataset {
        Dataset {
            stage: self.stage,
            samples: self
                .samples
                .iter()
                .map(|s| Sample { id: s.id.clone(), stage: s.stage, image: s.image.clone(), labels: None })
                .collect(),
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.samples.iter().map(|s| s.id.as_str())
    }
}

/// Generate one labeled daytime scene: ground and sky bands plus one to
/// four object shapes from the remaining classes. Labels are exact and
/// never void.
pub fn generate_scene(
    seed: u64,
    height: usize,
    width: usize,
    class_count: usize,
    channels: usize,
) -> Result<(Image, LabelMap)> {
    if class_count < 2 || class_count > MAX_CLASSES {
        return Err(CoreError::InvalidConfig(format!(
            "class_count must be in [2, {MAX_CLASSES}], got {class_count}"
        )));
    }
    if height < 8 || width < 8 {
        return Err(CoreError::InvalidConfig(format!(
            "scene size must be at least 8x8, got {height}x{width}"
        )));
    }
    if channels != 1 && channels != 3 {
        return Err(CoreError::InvalidConfig(format!("channels must be 1 or 3, got {channels}")));
    }

    let mut rng = stream_rng(seed);
    let mut data = alloc::vec![0.0f64; height * width * channels];
    let mut labels = alloc::vec![0u8; height * width];

    let horizon = (rng.random_range(0.42..0.58) * height as f64) as usize;
    // Scene-wide exposure factor: mostly well-exposed captures plus a
    // sparse underexposed tail. The tail stretches the labeled brightness
    // envelope down toward the dark stages, so the darkening is a
    // continuum rather than five isolated islands, and training across it
    // keeps the classifier from leaning on absolute intensity alone.
    let exposure = rng.random_range(0.30..=1.20);
    let sky = jittered_base(&mut rng, 1, channels, exposure);
    let ground = jittered_base(&mut rng, 0, channels, exposure);

    for row in 0..height {
        let (class, color) = if row < horizon { (1u8, &sky) } else { (0u8, &ground) };
        for col in 0..width {
            labels[row * width + col] = class;
            paint(&mut rng, &mut data, row, col, width, channels, color, exposure);
        }
    }

    if class_count > 2 {
        let object_count = rng.random_range(1..=2usize);
        let min_dim = height.min(width) as f64;
        for _ in 0..object_count {
            let class = rng.random_range(2..class_count) as u8;
            let color = jittered_base(&mut rng, usize::from(class), channels, exposure);
            let cy = rng.random_range(0.0..height as f64);
            let cx = rng.random_range(0.0..width as f64);
            let half = rng.random_range(min_dim * 0.18..min_dim * 0.32);
            let disc = rng.random_range(0.0..1.0f64) < 0.3;
            let (r0, r1) = clip_span(cy, half, height);
            let (c0, c1) = clip_span(cx, half, width);
            for row in r0..r1 {
                for col in c0..c1 {
                    if disc {
                        let dy = row as f64 + 0.5 - cy;
                        let dx = col as f64 + 0.5 - cx;
                        if dy * dy + dx * dx > half * half {
                            continue;
                        }
                    }
                    labels[row * width + col] = class;
                    paint(&mut rng, &mut data, row, col, width, channels, &color, exposure);
                }
            }
        }
    }

    let image = Image::new(height, width, channels, data)?;
    let labels = LabelMap::new(height, width, labels, class_count)?;
    Ok((image, labels))
}

/// Per-scene color: the class base color plus a small albedo offset, both
/// under the scene exposure.
fn jittered_base<R: Rng>(rng: &mut R, class: usize, channels: usize, exposure: f64) -> [f64; 3] {
    let mut color = base_color(class, channels);
    for c in color.iter_mut() {
        *c = ((*c + rng.random_range(-0.04..=0.04)) * exposure).clamp(0.0, 1.0);
    }
    color
}

fn clip_span(center: f64, half: f64, limit: usize) -> (usize, usize) {
    let lo = libm::floor(center - half).max(0.0) as usize;
    let hi = (libm::ceil(center + half).max(0.0) as usize).min(limit);
    (lo.min(limit), hi)
}

fn paint<R: Rng>(
    rng: &mut R,
    data: &mut [f64],
    row: usize,
    col: usize,
    width: usize,
    channels: usize,
    color: &[f64; 3],
    exposure: f64,
) {
    // Per-pixel shading jitter is mostly common-mode (surface shading moves
    // all channels together) with a small chromatic component; both scale
    // with exposure like the base color.
    let shade = rng.random_range(-0.08..=0.08) * exposure;
    for ch in 0..channels {
        let v = color[ch] + shade + rng.random_range(-0.01..=0.01) * exposure;
        data[(row * width + col) * channels + ch] = v.clamp(0.0, 1.0);
    }
}

/// Spectral weights for glare blobs; artificial light leans warm.
const GLARE_TINT: [f64; 3] = [1.0, 0.93, 0.78];

/// Apply the illumination degradation for `stage`:
/// `clamp((b * x)^g + glare + noise, 0, 1)`. Day is the identity.
pub fn degrade(image: &Image, stage: DomainStage, config: &CorridorConfig, seed: u64) -> Image {
    let s = stage.index();
    let b = config.brightness[s];
    let g = config.gamma[s];
    let sigma = config.noise_sigma[s];
    let max_blobs = config.glare_max_blobs[s];

    let (h, w, ch) = (image.height(), image.width(), image.channels());
    let mut data: Vec<f64> = image
        .data()
        .iter()
        .map(|&v| if b == 1.0 && g == 1.0 { v } else { libm::pow(b * v, g) })
        .collect();

    let mut rng = stream_rng(seed);
    if max_blobs > 0 {
        let count = rng.random_range(0..=max_blobs);
        for _ in 0..count {
            let cy = rng.random_range(0.0..h as f64);
            let cx = rng.random_range(0.0..w as f64);
            let blob_sigma = rng.random_range(2.0..5.0f64);
            let amp = rng.random_range(0.15..0.35f64);
            let reach = blob_sigma * 3.0;
            let (r0, r1) = clip_span(cy, reach, h);
            let (c0, c1) = clip_span(cx, reach, w);
            for row in r0..r1 {
                for col in c0..c1 {
                    let dy = row as f64 + 0.5 - cy;
                    let dx = col as f64 + 0.5 - cx;
                    let fall = libm::exp(-(dy * dy + dx * dx) / (2.0 * blob_sigma * blob_sigma));
                    for cidx in 0..ch {
                        let tint = if ch == 1 { 0.9 } else { GLARE_TINT[cidx] };
                        data[(row * w + col) * ch + cidx] += amp * tint * fall;
                    }
                }
            }
        }
    }
    if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).expect("sigma validated non-negative");
        for v in data.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    for v in data.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    Image::new(h, w, ch, data).expect("degraded values clamped into range")
}

/// Snap every value to the 8-bit grid `k / 255`.
fn quantize(image: &Image) -> Image {
    let data = image.data().iter().map(|&v| libm::round(v * 255.0) / 255.0).collect();
    Image::new(image.height(), image.width(), image.channels(), data)
        .expect("quantization preserves range")
}

/// The five generated splits: labeled day, three unlabeled twilights, and
/// the labeled night test split.
#[derive(Clone, Debug)]
pub struct Corridor {
    pub day: Dataset,
    pub civil: Dataset,
    pub nautical: Dataset,
    pub astronomical: Dataset,
    pub night_test: Dataset,
}

impl Corridor {
    pub fn twilights(&self) -> [&Dataset; 3] {
        [&self.civil, &self.nautical, &self.astronomical]
    }

    pub fn splits(&self) -> [&Dataset; 5] {
        [&self.day, &self.civil, &self.nautical, &self.astronomical, &self.night_test]
    }
}

/// Build the full corridor. Scene numbers are disjoint across splits, so
/// no scene ever appears in two of them; twilight splits carry no labels
/// even though the generator knows them; the night split keeps labels for
/// evaluation only.
pub fn build_corridor(config: &CorridorConfig) -> Result<Corridor> {
    config.validate()?;
    let starts = config.scene_starts();
    let mut splits: Vec<Dataset> = Vec::with_capacity(5);
    for stage in DomainStage::ALL {
        let s = stage.index();
        let labeled = stage == DomainStage::Day || stage == DomainStage::Night;
        let mut samples = Vec::with_capacity(config.counts[s]);
        for j in 0..config.counts[s] {
            let scene_number = starts[s] + j as u64;
            let scene_seed = derive_seed(config.master_seed, "scene", scene_number);
            let (image, labels) =
                generate_scene(scene_seed, config.height, config.width, config.class_count, config.channels)?;
            let degrade_seed = derive_seed(config.master_seed, "degrade", scene_number);
            let image = quantize(&degrade(&image, stage, config, degrade_seed));
            samples.push(Sample {
                id: format!("sc{scene_number:06}"),
                stage,
                image,
                labels: labeled.then_some(labels),
            });
        }
        splits.push(Dataset::new(stage, samples)?);
    }
    let mut it = splits.into_iter();
    Ok(Corridor {
        day: it.next().unwrap(),
        civil: it.next().unwrap(),
        nautical: it.next().unwrap(),
        astronomical: it.next().unwrap(),
        night_test: it.next().unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkpoint::dataset_sha256;

    #[test]
    fn scenes_are_deterministic() {
        let a = generate_scene(42, 16, 16, 5, 3).unwrap();
        let b = generate_scene(42, 16, 16, 5, 3).unwrap();
        assert_eq!(a, b);
        let c = generate_scene(43, 16, 16, 5, 3).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn scene_labels_stay_in_range() {
        for seed in 0..20 {
            let (_, labels) = generate_scene(seed, 16, 16, 4, 3).unwrap();
            assert!(labels.labels().iter().all(|&l| l < 4));
        }
    }

    #[test]
    fn tiny_scene_is_rejected() {
        assert!(matches!(
            generate_scene(0, 4, 16, 5, 3),
            Err(CoreError::InvalidConfig(_))
        ));
    }

    #[test]
    fn every_class_appears_in_most_scenes() {
        // Calibrated over the shipped generator: with 1..=4 objects drawn
        // uniformly from classes {2, 3, 4}, each object class lands in
        // roughly 60 of 100 scenes; the bands are always present.
        let mut per_class = [0u32; 5];
        for seed in 0..100 {
            let (_, labels) = generate_scene(seed, 32, 32, 5, 3).unwrap();
            let mut present = [false; 5];
            for &l in labels.labels() {
                present[usize::from(l)] = true;
            }
            for (count, seen) in per_class.iter_mut().zip(present) {
                if seen {
                    *count += 1;
                }
            }
        }
        for (class, &count) in per_class.iter().enumerate() {
            assert!(count >= 30, "class {class} appeared in only {count} of 100 scenes");
        }
    }

    #[test]
    fn day_degrade_is_identity() {
        let cfg = CorridorConfig::default();
        let (img, _) = generate_scene(7, 16, 16, 5, 3).unwrap();
        let out = degrade(&img, DomainStage::Day, &cfg, 99);
        assert_eq!(img, out);
    }

    #[test]
    fn mean_intensity_decreases_without_noise_or_glare() {
        let cfg = CorridorConfig {
            noise_sigma: [0.0; 5],
            glare_max_blobs: [0; 5],
            ..CorridorConfig::default()
        };
        for seed in [1u64, 9, 77] {
            let (img, _) = generate_scene(seed, 32, 32, 5, 3).unwrap();
            let mut prev = f64::INFINITY;
            for stage in DomainStage::ALL {
                let mean = degrade(&img, stage, &cfg, seed).mean_intensity();
                assert!(mean < prev, "stage {} did not darken: {mean} vs {prev}", stage.name());
                prev = mean;
            }
        }
    }

    #[test]
    fn night_to_day_intensity_ratio_band() {
        // Calibrated on the default config and frozen: the night/day mean
        // intensity ratio over 50 scenes sits inside [0.05, 0.25].
        let cfg = CorridorConfig::default();
        let mut day_sum = 0.0;
        let mut night_sum = 0.0;
        for seed in 0..50u64 {
            let (img, _) = generate_scene(derive_seed(3, "ratio", seed), 32, 32, 5, 3).unwrap();
            day_sum += degrade(&img, DomainStage::Day, &cfg, seed).mean_intensity();
            night_sum += degrade(&img, DomainStage::Night, &cfg, seed).mean_intensity();
        }
        let ratio = night_sum / day_sum;
        assert!((0.05..=0.25).contains(&ratio), "night/day ratio {ratio} outside [0.05, 0.25]");
    }

    #[test]
    fn corridor_shape_and_label_policy() {
        let cfg = CorridorConfig {
            counts: [12, 10, 9, 8, 5],
            height: 16,
            width: 16,
            ..CorridorConfig::default()
        };
        let corridor = build_corridor(&cfg).unwrap();
        assert_eq!(corridor.day.len(), 12);
        assert_eq!(corridor.civil.len(), 10);
        assert_eq!(corridor.nautical.len(), 9);
        assert_eq!(corridor.astronomical.len(), 8);
        assert_eq!(corridor.night_test.len(), 5);
        assert!(corridor.day.is_labeled());
        assert!(corridor.civil.is_unlabeled());
        assert!(corridor.nautical.is_unlabeled());
        assert!(corridor.astronomical.is_unlabeled());
        assert!(corridor.night_test.is_labeled());
    }

    #[test]
    fn corridor_ids_are_disjoint_across_splits() {
        let cfg = CorridorConfig {
            counts: [6, 6, 6, 6, 4],
            height: 16,
            width: 16,
            ..CorridorConfig::default()
        };
        let corridor = build_corridor(&cfg).unwrap();
        let mut seen = BTreeSet::new();
        for split in corridor.splits() {
            for id in split.ids() {
                assert!(seen.insert(alloc::string::String::from(id)), "id {id} in two splits");
            }
        }
    }

    #[test]
    fn overlapping_seed_ranges_are_rejected() {
        let cfg = CorridorConfig {
            scene_seed_starts: Some([0, 100, 150, 300, 400]),
            ..CorridorConfig::default()
        };
        // civil starts at 100 with 200 samples, nautical at 150: overlap.
        assert!(matches!(cfg.validate(), Err(CoreError::InvalidConfig(_))));
    }

    #[test]
    fn corridor_regeneration_is_byte_identical() {
        let cfg = CorridorConfig {
            counts: [5, 5, 5, 5, 3],
            height: 16,
            width: 16,
            master_seed: 11,
            ..CorridorConfig::default()
        };
        let a = build_corridor(&cfg).unwrap();
        let b = build_corridor(&cfg).unwrap();
        for (x, y) in a.splits().iter().zip(b.splits().iter()) {
            assert_eq!(dataset_sha256(x), dataset_sha256(y));
        }
    }

    #[test]
    fn corridor_values_sit_on_8bit_grid() {
        let cfg = CorridorConfig {
            counts: [2, 2, 2, 2, 2],
            height: 16,
            width: 16,
            ..CorridorConfig::default()
        };
        let corridor = build_corridor(&cfg).unwrap();
        for split in corridor.splits() {
            for sample in split.samples() {
                for &v in sample.image.data() {
                    let k = libm::round(v * 255.0);
                    assert!((v - k / 255.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn day_labels_match_generator_truth() {
        let cfg = CorridorConfig {
            counts: [4, 2, 2, 2, 2],
            height: 16,
            width: 16,
            master_seed: 5,
            ..CorridorConfig::default()
        };
        let corridor = build_corridor(&cfg).unwrap();
        for sample in corridor.day.samples() {
            let truth = cfg.truth_labels(sample.scene_number().unwrap()).unwrap();
            assert_eq!(sample.labels.as_ref().unwrap(), &truth);
        }
    }
}

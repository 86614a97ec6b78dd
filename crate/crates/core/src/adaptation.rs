//! The staged self-training protocol.
//!
//! Starting from a model trained on labeled daytime scenes, each twilight
//! stage is pseudo-labeled by the newest model, the model is duplicated,
//! and the duplicate is fine-tuned on a hybrid stream that samples the
//! daytime set and every pseudo-labeled set so far in proportion to their
//! weights. After the third stage the final model is the night-inference
//! model. A one-step baseline pseudo-labels all three twilight stages
//! with the daytime model at once and fine-tunes a single time.
//!
//! Pseudo-labels are produced once and reused as-is by later steps; they
//! are never regenerated by newer models. Every operation is deterministic
//! given the plan seed, and each run emits line-oriented provenance
//! records naming the models (by content hash) and datasets involved.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::checkpoint::{dataset_sha256, model_sha256};
use crate::corridor::{Dataset, DomainStage, Sample};
use crate::image::{Image, LabelMap};
use crate::rng::{derive_seed, stream_rng};
use crate::segnet::{sgd_epoch, ModelParams, ModelSpec, SgdConfig};
use crate::{CoreError, Result};

/// Which protocol variant to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdaptMode {
    /// The full staged protocol across all three twilight stages.
    ThreeStep,
    /// Pseudo-label every twilight stage with the daytime model, then
    /// fine-tune once.
    OneStep,
    /// Daytime training only.
    NoAdapt,
}

impl AdaptMode {
    pub fn name(self) -> &'static str {
        match self {
            AdaptMode::ThreeStep => "three-step",
            AdaptMode::OneStep => "one-step",
            AdaptMode::NoAdapt => "none",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "three-step" => Ok(AdaptMode::ThreeStep),
            "one-step" => Ok(AdaptMode::OneStep),
            "none" => Ok(AdaptMode::NoAdapt),
            other => Err(CoreError::Malformed(format!("unknown adaptation mode '{other}'"))),
        }
    }
}

/// Everything needed to run the protocol end to end.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptationPlan {
    pub class_count: usize,
    pub patch_radius: usize,
    /// Sampling weights for the three pseudo-labeled stages; the daytime
    /// set always participates with an implicit weight of 1.
    pub lambdas: [f64; 3],
    pub day_sgd: SgdConfig,
    pub stage_sgd: [SgdConfig; 3],
    /// Stream draws per fine-tune epoch, as a multiple of the daytime
    /// set size. Fixes the compute budget regardless of how many stages
    /// are active.
    pub stream_factor: usize,
    pub mode: AdaptMode,
    pub seed: u64,
}

impl Default for AdaptationPlan {
    fn default() -> Self {
        Self {
            class_count: 5,
            patch_radius: 2,
            lambdas: [1.0, 1.0, 1.0],
            // The supervised bootstrap gets a longer budget than the
            // fine-tunes; everything downstream leans on its quality.
            day_sgd: SgdConfig { epochs: 60, ..SgdConfig::default() },
            stage_sgd: [SgdConfig::default(), SgdConfig::default(), SgdConfig::default()],
            stream_factor: 4,
            mode: AdaptMode::ThreeStep,
            seed: 0,
        }
    }
}

impl AdaptationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.lambdas.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(CoreError::InvalidConfig("lambdas must be finite and >= 0".into()));
        }
        if self.stream_factor == 0 {
            return Err(CoreError::InvalidConfig("stream_factor must be >= 1".into()));
        }
        self.day_sgd.validate()?;
        for sgd in &self.stage_sgd {
            sgd.validate()?;
        }
        Ok(())
    }

    fn model_spec(&self, day: &Dataset) -> Result<ModelSpec> {
        let channels = day
            .samples()
            .first()
            .map(|s| s.image.channels())
            .ok_or_else(|| CoreError::InvalidConfig("daytime dataset is empty".into()))?;
        Ok(ModelSpec::new(self.class_count, self.patch_radius, channels))
    }
}

/// Supervised bootstrap on the labeled daytime set. Zero epochs returns
/// the freshly initialized model unchanged.
pub fn train_daytime(day: &Dataset, spec: ModelSpec, sgd: &SgdConfig, seed: u64) -> Result<ModelParams> {
    sgd.validate()?;
    if day.is_empty() {
        return Err(CoreError::InvalidConfig("daytime dataset is empty".into()));
    }
    if !day.is_labeled() {
        return Err(CoreError::Protocol("daytime dataset contains unlabeled samples".into()));
    }
    let mut model = ModelParams::init(spec, derive_seed(seed, "init", 0))?;
    let mut order: Vec<usize> = (0..day.len()).collect();
    let shuffle_base = derive_seed(seed, "shuffle", sgd.shuffle_seed);
    for epoch in 0..sgd.epochs {
        let mut rng = stream_rng(derive_seed(shuffle_base, "epoch", epoch as u64));
        order.shuffle(&mut rng);
        let stream = order.iter().map(|&i| {
            let s = &day.samples()[i];
            (&s.image, s.labels.as_ref().expect("labeled checked above"))
        });
        model = sgd_epoch(&model, stream, sgd)?;
    }
    Ok(model)
}

/// Label every image of an unlabeled dataset with the model's argmax
/// predictions. Output size always equals input size; no confidence
/// filtering is applied.
pub fn pseudo_label(model: &ModelParams, dataset: &Dataset) -> Result<Dataset> {
    if !dataset.is_unlabeled() {
        return Err(CoreError::Protocol(format!(
            "dataset '{}' already carries labels",
            dataset.stage().name()
        )));
    }
    let mut samples = Vec::with_capacity(dataset.len());
    for sample in dataset.samples() {
        let labels = model.predict_labels(&sample.image)?;
        samples.push(Sample {
            id: sample.id.clone(),
            stage: sample.stage,
            image: sample.image.clone(),
            labels: Some(labels),
        });
    }
    Dataset::new(dataset.stage(), samples)
}

/// Draw `(dataset, sample)` index pairs: dataset `i` with probability
/// `w_i / sum(w)`, then uniform with replacement within the dataset.
pub fn mixed_indices(sizes: &[usize], weights: &[f64], length: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if sizes.len() != weights.len() {
        return Err(CoreError::InvalidConfig(format!(
            "{} datasets but {} weights",
            sizes.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(CoreError::InvalidConfig("weights must be finite and >= 0".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(CoreError::InvalidConfig("at least one weight must be positive".into()));
    }
    let mut last_active = 0usize;
    for (i, (&w, &n)) in weights.iter().zip(sizes.iter()).enumerate() {
        if w > 0.0 {
            if n == 0 {
                return Err(CoreError::InvalidConfig(format!(
                    "dataset {i} has weight {w} but no samples"
                )));
            }
            last_active = i;
        }
    }

    let mut rng = stream_rng(seed);
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        let target: f64 = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = last_active;
        for (i, &w) in weights.iter().enumerate() {
            acc += w;
            if target < acc {
                pick = i;
                break;
            }
        }
        let index = rng.random_range(0..sizes[pick]);
        out.push((pick, index));
    }
    Ok(out)
}

/// Materialize a hybrid training stream over labeled datasets.
pub fn mixed_stream<'a>(
    datasets: &[&'a Dataset],
    weights: &[f64],
    length: usize,
    seed: u64,
) -> Result<Vec<(&'a Image, &'a LabelMap)>> {
    for (i, (ds, &w)) in datasets.iter().zip(weights.iter()).enumerate() {
        if w > 0.0 && !ds.is_labeled() {
            return Err(CoreError::Protocol(format!("dataset {i} in the stream is unlabeled")));
        }
    }
    let sizes: Vec<usize> = datasets.iter().map(|d| d.len()).collect();
    let picks = mixed_indices(&sizes, weights, length, seed)?;
    Ok(picks
        .into_iter()
        .map(|(d, i)| {
            let sample = &datasets[d].samples()[i];
            (&sample.image, sample.labels.as_ref().expect("labeled checked above"))
        })
        .collect())
}

/// Duplicate `prev` and fine-tune it on the weighted hybrid stream over
/// `labeled_sets`; `prev` itself is never modified. With zero epochs the
/// result is an exact duplicate.
pub fn adapt_step(
    prev: &ModelParams,
    labeled_sets: &[&Dataset],
    weights: &[f64],
    sgd: &SgdConfig,
    stream_len: usize,
    seed: u64,
) -> Result<ModelParams> {
    sgd.validate()?;
    if labeled_sets.is_empty() {
        return Err(CoreError::InvalidConfig("adapt_step needs at least one dataset".into()));
    }
    if labeled_sets[0].stage() != DomainStage::Day {
        return Err(CoreError::Protocol(
            "the first dataset of a fine-tune must be the daytime set".into(),
        ));
    }
    if sgd.epochs > 0 && stream_len == 0 {
        return Err(CoreError::InvalidConfig("fine-tune stream is empty".into()));
    }
    let stream_base = derive_seed(seed, "stream", sgd.shuffle_seed);
    let mut model = prev.duplicate();
    for epoch in 0..sgd.epochs {
        let stream = mixed_stream(
            labeled_sets,
            weights,
            stream_len,
            derive_seed(stream_base, "epoch", epoch as u64),
        )?;
        model = sgd_epoch(&model, stream.iter().copied(), sgd)?;
    }
    Ok(model)
}

/// Operations recorded in provenance logs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProvenanceOp {
    TrainDaytime,
    PseudoLabel,
    AdaptStep,
    RunSummary,
}

impl ProvenanceOp {
    pub fn name(self) -> &'static str {
        match self {
            ProvenanceOp::TrainDaytime => "train_daytime",
            ProvenanceOp::PseudoLabel => "pseudo_label",
            ProvenanceOp::AdaptStep => "adapt_step",
            ProvenanceOp::RunSummary => "run_summary",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "train_daytime" => Ok(ProvenanceOp::TrainDaytime),
            "pseudo_label" => Ok(ProvenanceOp::PseudoLabel),
            "adapt_step" => Ok(ProvenanceOp::AdaptStep),
            "run_summary" => Ok(ProvenanceOp::RunSummary),
            other => Err(CoreError::Malformed(format!("unknown provenance op '{other}'"))),
        }
    }
}

/// One line of the provenance log: which operation ran, with which model
/// (by name and checkpoint hash), over which datasets (by content hash),
/// under which seed and budget. Enough to replay the run exactly.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProvenanceRecord {
    pub op: Option<ProvenanceOp>,
    pub stage: Option<DomainStage>,
    pub model: Option<String>,
    pub model_sha256: Option<String>,
    pub parent: Option<String>,
    pub parent_sha256: Option<String>,
    pub data_sha256: Vec<String>,
    pub output_sha256: Option<String>,
    pub seed: Option<u64>,
    pub epochs: Option<usize>,
    pub stream_len: Option<usize>,
    pub steps: Option<usize>,
    pub lambdas: Vec<f64>,
    pub mode: Option<AdaptMode>,
    pub total_steps: Option<usize>,
}

impl ProvenanceRecord {
    /// Render as a single `key=value` line.
    pub fn to_line(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if let Some(op) = self.op {
            parts.push(format!("op={}", op.name()));
        }
        if let Some(stage) = self.stage {
            parts.push(format!("stage={}", stage.name()));
        }
        if let Some(v) = &self.model {
            parts.push(format!("model={v}"));
        }
        if let Some(v) = &self.model_sha256 {
            parts.push(format!("model_sha256={v}"));
        }
        if let Some(v) = &self.parent {
            parts.push(format!("parent={v}"));
        }
        if let Some(v) = &self.parent_sha256 {
            parts.push(format!("parent_sha256={v}"));
        }
        if !self.data_sha256.is_empty() {
            parts.push(format!("data_sha256={}", self.data_sha256.join(",")));
        }
        if let Some(v) = &self.output_sha256 {
            parts.push(format!("output_sha256={v}"));
        }
        if let Some(v) = self.seed {
            parts.push(format!("seed={v}"));
        }
        if let Some(v) = self.epochs {
            parts.push(format!("epochs={v}"));
        }
        if let Some(v) = self.stream_len {
            parts.push(format!("stream_len={v}"));
        }
        if let Some(v) = self.steps {
            parts.push(format!("steps={v}"));
        }
        if !self.lambdas.is_empty() {
            let rendered: Vec<String> = self.lambdas.iter().map(|l| l.to_string()).collect();
            parts.push(format!("lambdas={}", rendered.join(",")));
        }
        if let Some(v) = self.mode {
            parts.push(format!("mode={}", v.name()));
        }
        if let Some(v) = self.total_steps {
            parts.push(format!("total_steps={v}"));
        }
        parts.join(" ")
    }

    /// Parse a line produced by [`Self::to_line`].
    pub fn parse(line: &str) -> Result<Self> {
        let mut record = ProvenanceRecord::default();
        for part in line.split_whitespace() {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| CoreError::Malformed(format!("provenance field '{part}' has no '='")))?;
            match key {
                "op" => record.op = Some(ProvenanceOp::from_name(value)?),
                "stage" => record.stage = Some(DomainStage::from_name(value)?),
                "model" => record.model = Some(value.to_string()),
                "model_sha256" => record.model_sha256 = Some(value.to_string()),
                "parent" => record.parent = Some(value.to_string()),
                "parent_sha256" => record.parent_sha256 = Some(value.to_string()),
                "data_sha256" => {
                    record.data_sha256 = value.split(',').map(String::from).collect();
                }
                "output_sha256" => record.output_sha256 = Some(value.to_string()),
                "seed" => record.seed = Some(parse_num(key, value)?),
                "epochs" => record.epochs = Some(parse_num(key, value)? as usize),
                "stream_len" => record.stream_len = Some(parse_num(key, value)? as usize),
                "steps" => record.steps = Some(parse_num(key, value)? as usize),
                "lambdas" => {
                    record.lambdas = value
                        .split(',')
                        .map(|v| {
                            v.parse::<f64>().map_err(|_| {
                                CoreError::Malformed(format!("bad lambda value '{v}'"))
                            })
                        })
                        .collect::<Result<Vec<f64>>>()?;
                }
                "mode" => record.mode = Some(AdaptMode::from_name(value)?),
                "total_steps" => record.total_steps = Some(parse_num(key, value)? as usize),
                other => {
                    return Err(CoreError::Malformed(format!("unknown provenance key '{other}'")))
                }
            }
        }
        Ok(record)
    }
}

fn parse_num(key: &str, value: &str) -> Result<u64> {
    value
        .parse::<u64>()
        .map_err(|_| CoreError::Malformed(format!("bad numeric value '{value}' for '{key}'")))
}

/// Checkpoints produced by the staged protocol.
#[derive(Clone, Debug)]
pub struct StageCheckpoints {
    pub phi0: ModelParams,
    pub phi1: ModelParams,
    pub phi2: ModelParams,
    pub phi3: ModelParams,
}

impl StageCheckpoints {
    pub fn named(&self) -> [(&'static str, &ModelParams); 4] {
        [("phi0", &self.phi0), ("phi1", &self.phi1), ("phi2", &self.phi2), ("phi3", &self.phi3)]
    }
}

/// Result of the full staged run.
#[derive(Clone, Debug)]
pub struct GradualRun {
    pub checkpoints: StageCheckpoints,
    /// Pseudo-labeled twilight datasets, in stage order.
    pub pseudo_labeled: [Dataset; 3],
    pub provenance: Vec<ProvenanceRecord>,
}

/// Result of the one-step baseline.
#[derive(Clone, Debug)]
pub struct OneStepRun {
    pub phi0: ModelParams,
    pub adapted: ModelParams,
    pub pseudo_labeled: [Dataset; 3],
    pub provenance: Vec<ProvenanceRecord>,
}

/// Result of the daytime-only baseline.
#[derive(Clone, Debug)]
pub struct BaselineRun {
    pub phi0: ModelParams,
    pub provenance: Vec<ProvenanceRecord>,
}

fn check_corridor_inputs(day: &Dataset, twilights: [&Dataset; 3]) -> Result<()> {
    if day.stage() != DomainStage::Day {
        return Err(CoreError::Protocol("first dataset must carry the day stage".into()));
    }
    let expected = [DomainStage::Civil, DomainStage::Nautical, DomainStage::Astronomical];
    for (ds, want) in twilights.iter().zip(expected) {
        if ds.stage() != want {
            return Err(CoreError::Protocol(format!(
                "twilight dataset order is wrong: got {}, expected {}",
                ds.stage().name(),
                want.name()
            )));
        }
        if !ds.is_unlabeled() {
            return Err(CoreError::Protocol(format!(
                "twilight dataset '{}' must be unlabeled",
                ds.stage().name()
            )));
        }
    }
    Ok(())
}

fn bootstrap(
    day: &Dataset,
    plan: &AdaptationPlan,
    records: &mut Vec<ProvenanceRecord>,
) -> Result<ModelParams> {
    let spec = plan.model_spec(day)?;
    let seed = derive_seed(plan.seed, "phi0", 0);
    let phi0 = train_daytime(day, spec, &plan.day_sgd, seed)?;
    records.push(ProvenanceRecord {
        op: Some(ProvenanceOp::TrainDaytime),
        stage: Some(DomainStage::Day),
        model: Some("phi0".into()),
        model_sha256: Some(model_sha256(&phi0)),
        data_sha256: vec![dataset_sha256(day)],
        seed: Some(seed),
        epochs: Some(plan.day_sgd.epochs),
        steps: Some(plan.day_sgd.epochs * day.len()),
        ..ProvenanceRecord::default()
    });
    Ok(phi0)
}

fn pseudo_label_recorded(
    model: &ModelParams,
    model_name: &str,
    dataset: &Dataset,
    records: &mut Vec<ProvenanceRecord>,
) -> Result<Dataset> {
    let labeled = pseudo_label(model, dataset)?;
    records.push(ProvenanceRecord {
        op: Some(ProvenanceOp::PseudoLabel),
        stage: Some(dataset.stage()),
        model: Some(model_name.into()),
        model_sha256: Some(model_sha256(model)),
        data_sha256: vec![dataset_sha256(dataset)],
        output_sha256: Some(dataset_sha256(&labeled)),
        ..ProvenanceRecord::default()
    });
    Ok(labeled)
}

#[allow(clippy::too_many_arguments)]
fn adapt_step_recorded(
    prev: &ModelParams,
    prev_name: &str,
    name: &str,
    stage: DomainStage,
    sets: &[&Dataset],
    weights: &[f64],
    sgd: &SgdConfig,
    stream_len: usize,
    seed: u64,
    records: &mut Vec<ProvenanceRecord>,
) -> Result<ModelParams> {
    let model = adapt_step(prev, sets, weights, sgd, stream_len, seed)?;
    records.push(ProvenanceRecord {
        op: Some(ProvenanceOp::AdaptStep),
        stage: Some(stage),
        model: Some(name.into()),
        model_sha256: Some(model_sha256(&model)),
        parent: Some(prev_name.into()),
        parent_sha256: Some(model_sha256(prev)),
        data_sha256: sets.iter().map(|d| dataset_sha256(d)).collect(),
        seed: Some(seed),
        epochs: Some(sgd.epochs),
        stream_len: Some(stream_len),
        steps: Some(sgd.epochs * stream_len),
        lambdas: weights[1..].to_vec(),
        ..ProvenanceRecord::default()
    });
    Ok(model)
}

/// Daytime training only; the no-adaptation baseline.
pub fn run_baseline(day: &Dataset, plan: &AdaptationPlan) -> Result<BaselineRun> {
    plan.validate()?;
    let mut records = Vec::new();
    let phi0 = bootstrap(day, plan, &mut records)?;
    let total = records.iter().filter_map(|r| r.steps).sum();
    records.push(ProvenanceRecord {
        op: Some(ProvenanceOp::RunSummary),
        mode: Some(AdaptMode::NoAdapt),
        total_steps: Some(total),
        ..ProvenanceRecord::default()
    });
    Ok(BaselineRun { phi0, provenance: records })
}

/// The full staged protocol: bootstrap, then pseudo-label and fine-tune
/// through civil, nautical, and astronomical twilight in order.
pub fn run_gradual(day: &Dataset, twilights: [&Dataset; 3], plan: &AdaptationPlan) -> Result<GradualRun> {
    plan.validate()?;
    if plan.mode != AdaptMode::ThreeStep {
        return Err(CoreError::InvalidConfig(format!(
            "run_gradual requires three-step mode, plan says '{}'",
            plan.mode.name()
        )));
    }
    check_corridor_inputs(day, twilights)?;
    let mut records = Vec::new();
    let stream_len = plan.stream_factor * day.len();

    let phi0 = bootstrap(day, plan, &mut records)?;

    let d1 = pseudo_label_recorded(&phi0, "phi0", twilights[0], &mut records)?;
    let phi1 = adapt_step_recorded(
        &phi0,
        "phi0",
        "phi1",
        DomainStage::Civil,
        &[day, &d1],
        &[1.0, plan.lambdas[0]],
        &plan.stage_sgd[0],
        stream_len,
        derive_seed(plan.seed, "phi1", 0),
        &mut records,
    )?;

    let d2 = pseudo_label_recorded(&phi1, "phi1", twilights[1], &mut records)?;
    let phi2 = adapt_step_recorded(
        &phi1,
        "phi1",
        "phi2",
        DomainStage::Nautical,
        &[day, &d1, &d2],
        &[1.0, plan.lambdas[0], plan.lambdas[1]],
        &plan.stage_sgd[1],
        stream_len,
        derive_seed(plan.seed, "phi2", 0),
        &mut records,
    )?;

    let d3 = pseudo_label_recorded(&phi2, "phi2", twilights[2], &mut records)?;
    let phi3 = adapt_step_recorded(
        &phi2,
        "phi2",
        "phi3",
        DomainStage::Astronomical,
        &[day, &d1, &d2, &d3],
        &[1.0, plan.lambdas[0], plan.lambdas[1], plan.lambdas[2]],
        &plan.stage_sgd[2],
        stream_len,
        derive_seed(plan.seed, "phi3", 0),
        &mut records,
    )?;

    let total = records.iter().filter_map(|r| r.steps).sum();
    records.push(ProvenanceRecord {
        op: Some(ProvenanceOp::RunSummary),
        mode: Some(AdaptMode::ThreeStep),
        total_steps: Some(total),
        ..ProvenanceRecord::default()
    });

    Ok(GradualRun {
        checkpoints: StageCheckpoints { phi0, phi1, phi2, phi3 },
        pseudo_labeled: [d1, d2, d3],
        provenance: records,
    })
}

/// The one-step baseline: every twilight stage is pseudo-labeled by the
/// daytime model, then a single fine-tune runs over all four datasets.
pub fn run_one_step(day: &Dataset, twilights: [&Dataset; 3], plan: &AdaptationPlan) -> Result<OneStepRun> {
    plan.validate()?;
    if plan.mode != AdaptMode::OneStep {
        return Err(CoreError::InvalidConfig(format!(
            "run_one_step requires one-step mode, plan says '{}'",
            plan.mode.name()
        )));
    }
    check_corridor_inputs(day, twilights)?;
    let mut records = Vec::new();
    let stream_len = plan.stream_factor * day.len();

    let phi0 = bootstrap(day, plan, &mut records)?;

    let d1 = pseudo_label_recorded(&phi0, "phi0", twilights[0], &mut records)?;
    let d2 = pseudo_label_recorded(&phi0, "phi0", twilights[1], &mut records)?;
    let d3 = pseudo_label_recorded(&phi0, "phi0", twilights[2], &mut records)?;

    let adapted = adapt_step_recorded(
        &phi0,
        "phi0",
        "onestep",
        DomainStage::Astronomical,
        &[day, &d1, &d2, &d3],
        &[1.0, plan.lambdas[0], plan.lambdas[1], plan.lambdas[2]],
        &plan.stage_sgd[0],
        stream_len,
        derive_seed(plan.seed, "onestep", 0),
        &mut records,
    )?;

    let total = records.iter().filter_map(|r| r.steps).sum();
    records.push(ProvenanceRecord {
        op: Some(ProvenanceOp::RunSummary),
        mode: Some(AdaptMode::OneStep),
        total_steps: Some(total),
        ..ProvenanceRecord::default()
    });

    Ok(OneStepRun { phi0, adapted, pseudo_labeled: [d1, d2, d3], provenance: records })
}

//! Confusion-matrix accumulation, per-class IoU, and comparison reports.
//!
//! Ground-truth void pixels are excluded from both the matrix and the
//! ignored-pixel bookkeeping; predictions must never contain void.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corridor::Dataset;
use crate::image::{LabelMap, VOID};
use crate::segnet::ModelParams;
use crate::{CoreError, Result};

/// Pixel counts `counts[gt][pred]` over evaluated pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    class_count: usize,
    counts: Vec<u64>,
    evaluated: u64,
    ignored: u64,
}

impl ConfusionMatrix {
    pub fn new(class_count: usize) -> Self {
        Self { class_count, counts: vec![0; class_count * class_count], evaluated: 0, ignored: 0 }
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    #[inline]
    pub fn count(&self, gt: usize, pred: usize) -> u64 {
        self.counts[gt * self.class_count + pred]
    }

    pub fn evaluated(&self) -> u64 {
        self.evaluated
    }

    pub fn ignored(&self) -> u64 {
        self.ignored
    }

    /// Add one image's pixels. Void ground truth only bumps the ignored
    /// counter; void predictions violate the protocol.
    pub fn accumulate(&mut self, ground_truth: &LabelMap, prediction: &LabelMap) -> Result<()> {
        if !ground_truth.same_shape(prediction) {
            return Err(CoreError::ShapeMismatch(format!(
                "ground truth is {}x{}, prediction is {}x{}",
                ground_truth.height(),
                ground_truth.width(),
                prediction.height(),
                prediction.width()
            )));
        }
        for (&gt, &pred) in ground_truth.labels().iter().zip(prediction.labels()) {
            if pred == VOID {
                return Err(CoreError::Protocol("prediction contains a void pixel".into()));
            }
            if usize::from(pred) >= self.class_count {
                return Err(CoreError::InvalidInput(format!(
                    "predicted label {pred} out of range for {} classes",
                    self.class_count
                )));
            }
            if gt == VOID {
                self.ignored += 1;
                continue;
            }
            if usize::from(gt) >= self.class_count {
                return Err(CoreError::InvalidInput(format!(
                    "ground-truth label {gt} out of range for {} classes",
                    self.class_count
                )));
            }
            self.counts[usize::from(gt) * self.class_count + usize::from(pred)] += 1;
            self.evaluated += 1;
        }
        Ok(())
    }

    /// Element-wise sum with another matrix of the same shape.
    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if self.class_count != other.class_count {
            return Err(CoreError::ShapeMismatch(format!(
                "cannot merge {}-class and {}-class matrices",
                self.class_count, other.class_count
            )));
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
        self.evaluated += other.evaluated;
        self.ignored += other.ignored;
        Ok(())
    }
}

/// Per-class and mean IoU. Classes with zero union have no defined IoU
/// and are excluded from the mean.
#[derive(Clone, Debug, PartialEq)]
pub struct IoUReport {
    pub per_class: Vec<Option<f64>>,
    pub mean_iou: f64,
    pub evaluated: u64,
    pub ignored: u64,
}

/// Compute IoU per class (`TP / (TP + FP + FN)`) and the mean over
/// defined classes.
pub fn iou_report(cm: &ConfusionMatrix) -> Result<IoUReport> {
    let c = cm.class_count();
    let mut per_class = vec![None; c];
    let mut sum = 0.0;
    let mut defined = 0usize;
    for class in 0..c {
        let tp = cm.count(class, class);
        let false_pos: u64 = (0..c).filter(|&g| g != class).map(|g| cm.count(g, class)).sum();
        let false_neg: u64 = (0..c).filter(|&p| p != class).map(|p| cm.count(class, p)).sum();
        let union = tp + false_pos + false_neg;
        if union > 0 {
            let iou = tp as f64 / union as f64;
            per_class[class] = Some(iou);
            sum += iou;
            defined += 1;
        }
    }
    if defined == 0 {
        return Err(CoreError::NoEvaluableClass);
    }
    Ok(IoUReport {
        per_class,
        mean_iou: sum / defined as f64,
        evaluated: cm.evaluated(),
        ignored: cm.ignored(),
    })
}

/// Run a model over a labeled dataset and report IoU.
pub fn evaluate_model(model: &ModelParams, dataset: &Dataset) -> Result<(ConfusionMatrix, IoUReport)> {
    if !dataset.is_labeled() {
        return Err(CoreError::Protocol(format!(
            "evaluation dataset '{}' has unlabeled samples",
            dataset.stage().name()
        )));
    }
    let mut cm = ConfusionMatrix::new(model.class_count());
    for sample in dataset.samples() {
        let prediction = model.predict_labels(&sample.image)?;
        cm.accumulate(sample.labels.as_ref().expect("checked labeled"), &prediction)?;
    }
    let report = iou_report(&cm)?;
    Ok((cm, report))
}

/// One row of a comparison table.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub name: String,
    pub report: IoUReport,
    pub best: bool,
}

/// Order-preserving comparison across model variants; the single best
/// mean IoU is flagged, first entry winning ties.
pub fn compare_report(entries: Vec<(String, IoUReport)>) -> Result<Vec<ComparisonRow>> {
    if entries.is_empty() {
        return Err(CoreError::InvalidConfig("comparison needs at least one entry".into()));
    }
    let mut best_idx = 0usize;
    for (i, (_, report)) in entries.iter().enumerate() {
        if report.mean_iou > entries[best_idx].1.mean_iou {
            best_idx = i;
        }
    }
    Ok(entries
        .into_iter()
        .enumerate()
        .map(|(i, (name, report))| ComparisonRow { name, report, best: i == best_idx })
        .collect())
}

/// CSV rendering with full float precision. Header:
/// `name,mean_iou,iou_class_0..iou_class_{C-1},best`; undefined per-class
/// entries are left empty.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let class_count = rows.first().map_or(0, |r| r.report.per_class.len());
    let mut out = String::from("name,mean_iou");
    for c in 0..class_count {
        out.push_str(&format!(",iou_class_{c}"));
    }
    out.push_str(",best\n");
    for row in rows {
        out.push_str(&row.name);
        out.push_str(&format!(",{}", row.report.mean_iou));
        for c in 0..class_count {
            match row.report.per_class.get(c).copied().flatten() {
                Some(iou) => out.push_str(&format!(",{iou}")),
                None => out.push(','),
            }
        }
        out.push_str(if row.best { ",true\n" } else { ",false\n" });
    }
    out
}

/// Human-readable table with mean IoU as a percentage at one decimal.
pub fn comparison_table(rows: &[ComparisonRow]) -> String {
    let name_w = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
    let mut out = format!("{:<name_w$}  {:>8}  best\n", "model", "mean IoU");
    for row in rows {
        out.push_str(&format!(
            "{:<name_w$}  {:>8.1}  {}\n",
            row.name,
            row.report.mean_iou * 100.0,
            if row.best { "*" } else { "" }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn lm(labels: &[u8], class_count: usize) -> LabelMap {
        LabelMap::new(1, labels.len(), labels.to_vec(), class_count).unwrap()
    }

    #[test]
    fn perfect_prediction_scores_one() {
        let mut cm = ConfusionMatrix::new(5);
        let map = LabelMap::filled(10, 10, 3);
        cm.accumulate(&map, &map).unwrap();
        assert_eq!(cm.count(3, 3), 100);
        assert_eq!(cm.evaluated(), 100);
        let report = iou_report(&cm).unwrap();
        assert_eq!(report.per_class[3], Some(1.0));
        assert_eq!(report.mean_iou, 1.0);
    }

    #[test]
    fn hand_case_seven_twelfths() {
        let mut cm = ConfusionMatrix::new(2);
        cm.accumulate(&lm(&[0, 0, 1, 1], 2), &lm(&[0, 1, 1, 1], 2)).unwrap();
        let report = iou_report(&cm).unwrap();
        assert_eq!(report.per_class[0], Some(0.5));
        assert_eq!(report.per_class[1], Some(2.0 / 3.0));
        assert!((report.mean_iou - 7.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn void_ground_truth_is_ignored() {
        let mut cm = ConfusionMatrix::new(2);
        cm.accumulate(&lm(&[0, VOID], 2), &lm(&[1, 1], 2)).unwrap();
        assert_eq!(cm.count(0, 1), 1);
        assert_eq!(cm.ignored(), 1);
        assert_eq!(cm.evaluated(), 1);
    }

    #[test]
    fn disjoint_prediction_scores_zero() {
        let mut cm = ConfusionMatrix::new(2);
        cm.accumulate(&lm(&[0, 0], 2), &lm(&[1, 1], 2)).unwrap();
        let report = iou_report(&cm).unwrap();
        assert_eq!(report.per_class[0], Some(0.0));
        assert_eq!(report.per_class[1], Some(0.0));
    }

    #[test]
    fn shape_mismatch_and_void_prediction_are_errors() {
        let mut cm = ConfusionMatrix::new(2);
        let err = cm.accumulate(&lm(&[0, 0], 2), &LabelMap::filled(2, 1, 0)).unwrap_err();
        assert!(matches!(err, CoreError::ShapeMismatch(_)));
        let err = cm.accumulate(&lm(&[0], 2), &lm(&[VOID], 2)).unwrap_err();
        assert!(matches!(err, CoreError::Protocol(_)));
    }

    #[test]
    fn accumulation_order_does_not_matter() {
        let gt1 = lm(&[0, 1, 1], 2);
        let p1 = lm(&[0, 0, 1], 2);
        let gt2 = lm(&[1, 1, 0], 2);
        let p2 = lm(&[1, 0, 0], 2);
        let mut a = ConfusionMatrix::new(2);
        a.accumulate(&gt1, &p1).unwrap();
        a.accumulate(&gt2, &p2).unwrap();
        let mut b = ConfusionMatrix::new(2);
        b.accumulate(&gt2, &p2).unwrap();
        b.accumulate(&gt1, &p1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn merge_equals_whole_set_accumulation() {
        let gt = lm(&[0, 1, 2, 2, 1, 0], 3);
        let pred = lm(&[0, 2, 2, 1, 1, 1], 3);
        let mut whole = ConfusionMatrix::new(3);
        whole.accumulate(&gt, &pred).unwrap();

        let mut left = ConfusionMatrix::new(3);
        left.accumulate(&lm(&[0, 1, 2], 3), &lm(&[0, 2, 2], 3)).unwrap();
        let mut right = ConfusionMatrix::new(3);
        right.accumulate(&lm(&[2, 1, 0], 3), &lm(&[1, 1, 1], 3)).unwrap();
        left.merge(&right).unwrap();
        assert_eq!(left, whole);
    }

    #[test]
    fn empty_matrix_has_no_evaluable_class() {
        let cm = ConfusionMatrix::new(3);
        assert_eq!(iou_report(&cm).unwrap_err(), CoreError::NoEvaluableClass);
    }

    #[test]
    fn absent_class_is_dropped_from_mean() {
        let mut cm = ConfusionMatrix::new(3);
        cm.accumulate(&lm(&[0, 0, 1, 1], 3), &lm(&[0, 1, 1, 1], 3)).unwrap();
        let report = iou_report(&cm).unwrap();
        assert_eq!(report.per_class[2], None);
        assert!((report.mean_iou - 7.0 / 12.0).abs() < 1e-15);
    }

    fn fake_report(mean: f64) -> IoUReport {
        IoUReport { per_class: vec![Some(mean)], mean_iou: mean, evaluated: 1, ignored: 0 }
    }

    #[test]
    fn best_flag_lands_on_highest_mean() {
        let rows = compare_report(vec![
            ("baseline".to_string(), fake_report(0.352)),
            ("step1".to_string(), fake_report(0.386)),
            ("step2".to_string(), fake_report(0.399)),
            ("step3".to_string(), fake_report(0.416)),
            ("onestep".to_string(), fake_report(0.391)),
        ])
        .unwrap();
        let flags: Vec<bool> = rows.iter().map(|r| r.best).collect();
        assert_eq!(flags, vec![false, false, false, true, false]);
    }

    #[test]
    fn single_entry_is_best_and_ties_go_first() {
        let rows = compare_report(vec![("only".to_string(), fake_report(0.5))]).unwrap();
        assert!(rows[0].best);
        let rows = compare_report(vec![
            ("first".to_string(), fake_report(0.4)),
            ("second".to_string(), fake_report(0.4)),
        ])
        .unwrap();
        assert!(rows[0].best && !rows[1].best);
    }

    #[test]
    fn csv_layout_and_empty_cells() {
        let report = IoUReport {
            per_class: vec![Some(0.5), None, Some(1.0)],
            mean_iou: 0.75,
            evaluated: 8,
            ignored: 2,
        };
        let rows = compare_report(vec![("m".to_string(), report)]).unwrap();
        let csv = comparison_csv(&rows);
        assert_eq!(
            csv,
            "name,mean_iou,iou_class_0,iou_class_1,iou_class_2,best\nm,0.75,0.5,,1,true\n"
        );
    }

    #[test]
    fn rendered_table_uses_one_decimal() {
        let rows = compare_report(vec![("phi3".to_string(), fake_report(0.41637))]).unwrap();
        let table = comparison_table(&rows);
        assert!(table.contains("41.6"), "table was: {table}");
    }
}

//! Temporary calibration probe - prints pipeline numbers. Will be removed.

use duskadapt_core::adaptation::{adapt_step, run_gradual, run_one_step, AdaptMode, AdaptationPlan};
use duskadapt_core::corridor::{build_corridor, CorridorConfig, Dataset, Sample};
use duskadapt_core::eval::evaluate_model;
use duskadapt_core::rng::derive_seed;
use duskadapt_core::segnet::{ModelParams, SgdConfig};

fn stage_accuracy(model: &ModelParams, cfg: &CorridorConfig, ds: &Dataset) -> f64 {
    let mut agree = 0usize;
    let mut total = 0usize;
    for sample in ds.samples() {
        let truth = cfg.truth_labels(sample.scene_number().unwrap()).unwrap();
        let pred = model.predict_labels(&sample.image).unwrap();
        for (t, p) in truth.labels().iter().zip(pred.labels()) {
            total += 1;
            if t == p {
                agree += 1;
            }
        }
    }
    agree as f64 / total as f64
}

#[test]
#[ignore]
fn probe() {
    for lrs in [[0.05f64, 0.05, 0.05]] {
        let day_epochs = 60usize;
        println!("==== stage lrs {lrs:?} ====");
        for seed in [3u64, 7, 11, 17, 23, 29, 37, 41, 47, 53, 61, 71] {
            let corridor_cfg = CorridorConfig {
                master_seed: derive_seed(seed, "corridor", 0),
                ..CorridorConfig::default()
            };
            let corridor = build_corridor(&corridor_cfg).unwrap();
            let plan = AdaptationPlan {
                seed: derive_seed(seed, "adapt", 0),
                day_sgd: SgdConfig { epochs: day_epochs, ..SgdConfig::default() },
                stage_sgd: [
                    SgdConfig { learning_rate: lrs[0], ..SgdConfig::default() },
                    SgdConfig { learning_rate: lrs[1], ..SgdConfig::default() },
                    SgdConfig { learning_rate: lrs[2], ..SgdConfig::default() },
                ],
                ..AdaptationPlan::default()
            };
            let run = run_gradual(&corridor.day, corridor.twilights(), &plan).unwrap();
            let plan1 = AdaptationPlan { mode: AdaptMode::OneStep, ..plan.clone() };
            let one = run_one_step(&corridor.day, corridor.twilights(), &plan1).unwrap();

            let cps = &run.checkpoints;
            // Ceiling reference: fine-tune phi0 directly on TRUE night labels.
            let night_true = {
                let samples: Vec<Sample> = corridor
                    .night_test
                    .samples()
                    .iter()
                    .map(|smp| Sample {
                        id: smp.id.clone(),
                        stage: smp.stage,
                        image: smp.image.clone(),
                        labels: Some(corridor_cfg.truth_labels(smp.scene_number().unwrap()).unwrap()),
                    })
                    .collect();
                Dataset::new(corridor.night_test.stage(), samples).unwrap()
            };
            let ceiling = adapt_step(
                &cps.phi0,
                &[&corridor.day, &night_true],
                &[1.0, 1.0],
                &SgdConfig::default(),
                4 * corridor.day.len(),
                derive_seed(seed, "ceiling", 0),
            )
            .unwrap();
            let m = |mp: &ModelParams| evaluate_model(mp, &corridor.night_test).unwrap().1;
            println!(
                "seed {seed}: day={:.3} handoff acc civ={:.3} nau={:.3} ast={:.3} | night mIoU: phi0={:.4} phi1={:.4} phi2={:.4} phi3={:.4} onestep={:.4}",
                stage_accuracy(&cps.phi0, &corridor_cfg, &corridor.day),
                stage_accuracy(&cps.phi0, &corridor_cfg, &corridor.civil),
                stage_accuracy(&cps.phi1, &corridor_cfg, &corridor.nautical),
                stage_accuracy(&cps.phi2, &corridor_cfg, &corridor.astronomical),
                m(&cps.phi0).mean_iou,
                m(&cps.phi1).mean_iou,
                m(&cps.phi2).mean_iou,
                m(&cps.phi3).mean_iou,
                m(&one.adapted).mean_iou,
            );
            println!("          night-oracle ceiling mIoU = {:.4}", m(&ceiling).mean_iou);
        }
    }
}

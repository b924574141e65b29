//! Assigning new observations to the clusters of a fitted model.

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::GaussianKernel;
use dpmix::stats::sample_normal;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn main() -> dpmix::Result<()> {
    let mut rng = RandomSource::new(7);
    let ys: Vec<f64> = (0..100).map(|i| sample_normal(&mut rng, if i < 50 { -5.0 } else { 5.0 }, 1.0)).collect();
    let model = KernelRegistry::builtin().default_model(GaussianKernel::ID, 1)?;
    let mut dp = DpState::initialise(Observations::univariate(&ys)?, model, AlphaPrior::default(), RandomSource::new(8))?;
    dp.fit(FitOptions::new(300))?;

    let new = Observations::univariate(&[-5.2, -4.1, 0.0, 4.8, 30.0])?;
    let pred = dp.cluster_label_predict(&new, &mut RandomSource::new(9))?;
    for (y, label) in new.rows().zip(&pred.labels) {
        let theta = &pred.cluster_params[*label];
        println!("y = {:6.1} -> label {label} (mean {:6.2})", y[0], theta.scalar(0));
    }
    println!("labels in use: {} (fitted clusters: {})", pred.num_labels, dp.num_clusters());

    let probs = dp.assignment_probabilities(&[4.8], &mut RandomSource::new(10))?;
    println!("assignment probabilities for 4.8 (last entry = new cluster): {probs:.3?}");
    Ok(())
}

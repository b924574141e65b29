//! Updating a fitted model as data arrive in batches: new observations are
//! first assigned by prediction, then the chain continues on the new batch.

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::GaussianKernel;
use dpmix::stats::sample_normal;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn batch(rng: &mut RandomSource, means: &[f64]) -> Vec<f64> {
    (0..40).map(|i| sample_normal(rng, means[i % means.len()], 1.0)).collect()
}

fn main() -> dpmix::Result<()> {
    let mut rng = RandomSource::new(13);
    let model = KernelRegistry::builtin().default_model(GaussianKernel::ID, 1)?;
    let first = batch(&mut rng, &[-4.0, 4.0]);
    let mut dp = DpState::initialise(Observations::univariate(&first)?, model, AlphaPrior::default(), RandomSource::new(14))?;
    dp.fit(FitOptions::new(100).store_samples(false))?;
    println!("batch 0: K = {}", dp.num_clusters());

    for (b, means) in [[-4.0, 4.0], [4.0, 12.0], [12.0, 12.0]].iter().enumerate() {
        dp.change_observations(Observations::univariate(&batch(&mut rng, means))?)?;
        dp.fit(FitOptions::new(50).store_samples(false))?;
        let centres: Vec<String> = dp.cluster_params().iter().map(|t| format!("{:.1}", t.scalar(0))).collect();
        println!("batch {}: K = {}  means = [{}]", b + 1, dp.num_clusters(), centres.join(", "));
    }
    Ok(())
}

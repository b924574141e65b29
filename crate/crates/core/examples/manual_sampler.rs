//! Driving the sampler one update at a time instead of calling `fit`, with
//! the concentration held fixed for the first half of the run.

use dpmix::dp::{AlphaPrior, DpState};
use dpmix::kernels::GaussianKernel;
use dpmix::stats::sample_normal;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn main() -> dpmix::Result<()> {
    let mut rng = RandomSource::new(11);
    let ys: Vec<f64> = (0..60).map(|i| sample_normal(&mut rng, [-3.0, 0.0, 3.0][i % 3], 0.5)).collect();
    let model = KernelRegistry::builtin().default_model(GaussianKernel::ID, 1)?;
    let mut dp = DpState::initialise(Observations::univariate(&ys)?, model, AlphaPrior::default(), RandomSource::new(12))?;
    dp.set_alpha(1.0)?;

    let mut trace = Vec::new();
    for it in 0..400 {
        dp.cluster_component_update()?;
        dp.cluster_parameter_update()?;
        if it >= 200 {
            dp.update_alpha();
        }
        dp.validate()?;
        trace.push((dp.num_clusters(), dp.alpha()));
    }
    for (it, (k, alpha)) in trace.iter().enumerate().step_by(50) {
        println!("iteration {it:3}: K = {k}  alpha = {alpha:.3}");
    }
    Ok(())
}

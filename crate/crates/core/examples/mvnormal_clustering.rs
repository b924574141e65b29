//! Clustering two-dimensional data with the conjugate multivariate normal
//! kernel (Normal-Inverse-Wishart base measure).

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::MvNormalKernel;
use dpmix::stats::sample_normal;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn main() -> dpmix::Result<()> {
    let centres = [(-4.0, 0.0), (4.0, 0.0), (0.0, 5.0)];
    let mut rng = RandomSource::new(5);
    let rows: Vec<Vec<f64>> = (0..150)
        .map(|i| {
            let (cx, cy) = centres[i % 3];
            vec![sample_normal(&mut rng, cx, 1.0), sample_normal(&mut rng, cy, 1.0)]
        })
        .collect();

    let model = KernelRegistry::builtin().default_model(MvNormalKernel::ID, 2)?;
    let mut dp = DpState::initialise(Observations::from_rows(&rows)?, model, AlphaPrior::default(), RandomSource::new(6))?;
    dp.fit(FitOptions::new(1500).store_samples(false))?;

    println!("clusters: {}", dp.num_clusters());
    for (k, theta) in dp.cluster_params().iter().enumerate() {
        let mu = theta.vector(0);
        println!("cluster {k}: n = {:3}  mean = ({:6.2}, {:6.2})", dp.points_per_cluster()[k], mu[0], mu[1]);
    }
    Ok(())
}

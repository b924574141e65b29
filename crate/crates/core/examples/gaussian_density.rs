//! Density estimation with the conjugate Gaussian kernel.
//!
//! Bimodal data are standardized, fitted, and the posterior mean density with
//! a 95% band is printed back on the original scale.

use dpmix::cli::Standardization;
use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::GaussianKernel;
use dpmix::measure::{linspace, posterior_summary};
use dpmix::stats::sample_normal;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn main() -> dpmix::Result<()> {
    let mut rng = RandomSource::new(1);
    let ys: Vec<f64> = (0..200).map(|i| sample_normal(&mut rng, if i % 2 == 0 { 10.0 } else { 16.0 }, 1.5)).collect();

    let raw = Observations::univariate(&ys)?;
    let scale = Standardization::fit(&raw)?;
    let model = KernelRegistry::builtin().default_model(GaussianKernel::ID, 1)?;
    let mut dp = DpState::initialise(scale.apply(&raw)?, model, AlphaPrior::new(2.0, 4.0)?, RandomSource::new(2))?;
    dp.fit(FitOptions::new(500))?;
    println!("clusters: {}  alpha: {:.3}", dp.num_clusters(), dp.alpha());
    println!("points per cluster: {:?}", dp.points_per_cluster());

    let grid = linspace(-3.0, 3.0, 25);
    let table = scale.unscale_summary(&posterior_summary(&dp, &grid, 250, 5, 0.95)?)?;
    println!("{:>8} {:>8} {:>8} {:>8}", "y", "mean", "lower", "upper");
    for i in 0..table.len() {
        println!("{:8.2} {:8.4} {:8.4} {:8.4}", table.x[i], table.mean[i], table.lower[i], table.upper[i]);
    }
    Ok(())
}

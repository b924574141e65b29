//! Posterior draws of the mixing measure itself: truncated stick-breaking
//! weights and atoms, and the random density they define.

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::GaussianKernel;
use dpmix::measure::{linspace, posterior_clusters, posterior_function_eps, stick_breaking_weights, truncation_level};
use dpmix::stats::sample_normal;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn main() -> dpmix::Result<()> {
    println!("sticks (0.5, 0.5, 0.5) -> weights {:?}", stick_breaking_weights(&[0.5, 0.5, 0.5])?);

    let mut rng = RandomSource::new(17);
    let ys: Vec<f64> = (0..80).map(|i| sample_normal(&mut rng, if i % 2 == 0 { -2.0 } else { 2.0 }, 0.7)).collect();
    let model = KernelRegistry::builtin().default_model(GaussianKernel::ID, 1)?;
    let mut dp = DpState::initialise(Observations::univariate(&ys)?, model, AlphaPrior::default(), RandomSource::new(18))?;
    dp.fit(FitOptions::new(200).store_samples(false))?;

    let eps = 1e-3;
    println!("truncation level at alpha = {:.3}: {}", dp.alpha(), truncation_level(dp.alpha(), ys.len(), eps)?);
    let mut draws = RandomSource::new(19);
    let m = posterior_clusters(&dp, eps, &mut draws)?;
    let mut top: Vec<(f64, f64)> = m.weights.iter().zip(&m.atoms).map(|(w, a)| (*w, a.scalar(0))).collect();
    top.sort_by(|a, b| b.0.total_cmp(&a.0));
    println!("{} atoms, residual {:.2e}; heaviest:", m.len(), m.truncation_residual);
    for (w, mu) in top.iter().take(5) {
        println!("  weight {w:.3} at mean {mu:6.2}");
    }

    let f = posterior_function_eps(&dp, eps, &mut draws)?;
    let grid = linspace(-4.0, 4.0, 9);
    for (x, v) in grid.iter().zip(f.evaluate_grid(&grid)?) {
        println!("f({x:5.1}) = {v:.4}");
    }
    Ok(())
}

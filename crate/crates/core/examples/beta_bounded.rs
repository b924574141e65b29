//! Bounded data on [0, 1] with the Beta kernel (Metropolis-Hastings updates)
//! and a hyper-prior on the base measure scale.

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::BetaKernel;
use dpmix::measure::{linspace, posterior_summary};
use dpmix::stats::sample_beta;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn main() -> dpmix::Result<()> {
    let mut rng = RandomSource::new(3);
    let ys: Vec<f64> =
        (0..300).map(|i| if i % 2 == 0 { sample_beta(&mut rng, 1.0, 3.0) } else { sample_beta(&mut rng, 7.0, 3.0) }).collect();

    let model = KernelRegistry::builtin().default_model(BetaKernel::ID, 1)?;
    let mut dp = DpState::initialise(Observations::univariate(&ys)?, model, AlphaPrior::default(), RandomSource::new(4))?;
    dp.fit(FitOptions::new(1000).update_prior(true))?;

    let rate = dp.diagnostics().rate().unwrap_or(f64::NAN);
    println!("clusters: {}  acceptance rate: {rate:.3}", dp.num_clusters());
    println!("hyper-parameters now: {:?}", dp.model().md().g0_priors);

    let table = posterior_summary(&dp, &linspace(0.02, 0.98, 13), 500, 5, 0.95)?;
    print!("{}", table.to_csv_string()?);
    Ok(())
}

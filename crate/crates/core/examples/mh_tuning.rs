//! Tuning the Metropolis-Hastings step sizes of the Beta kernel by watching
//! the acceptance rate; around 0.234 is the usual target.

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::BetaKernel;
use dpmix::stats::sample_beta;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn main() -> dpmix::Result<()> {
    let mut rng = RandomSource::new(26);
    let ys: Vec<f64> =
        (0..300).map(|i| if i % 2 == 0 { sample_beta(&mut rng, 1.0, 3.0) } else { sample_beta(&mut rng, 7.0, 3.0) }).collect();
    let data = Observations::univariate(&ys)?;
    let registry = KernelRegistry::builtin();

    println!("{:>6} {:>6} {:>10}", "h_mu", "h_nu", "accepted");
    for h in [0.02, 0.05, 0.1, 0.25, 0.5, 1.0] {
        let model = registry.model(BetaKernel::mixing(1.0, [2.0, 8.0], [h, 1.0]))?;
        let mut dp = DpState::initialise(data.clone(), model, AlphaPrior::default(), RandomSource::new(27))?;
        dp.fit(FitOptions::new(100).store_samples(false))?;
        dp.reset_diagnostics();
        dp.fit(FitOptions::new(200).store_samples(false))?;
        let rate = dp.diagnostics().rate().unwrap_or(f64::NAN);
        let mark = if (0.15..=0.40).contains(&rate) { "  <- in range" } else { "" };
        println!("{h:6.2} {:6.2} {rate:10.3}{mark}", 1.0);
    }
    Ok(())
}

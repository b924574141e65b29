//! A new conjugate kernel written against the public `Kernel` trait: Poisson
//! counts with a Gamma(a0, b0) base measure on the rate.

use std::sync::Arc;

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::measure::posterior_summary;
use dpmix::stats::{sample_gamma, sample_poisson};
use dpmix::{Conjugacy, Kernel, KernelRegistry, MixingDistribution, Observations, RandomSource, Theta};
use statrs::function::gamma::ln_gamma;

#[derive(Debug)]
struct Poisson;

impl Kernel for Poisson {
    fn id(&self) -> &str {
        "poisson"
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        MixingDistribution::new("poisson", Conjugacy::Conjugate, vec![1.0, 0.1])
    }

    fn check_datum(&self, _md: &MixingDistribution, y: &[f64]) -> Result<(), String> {
        (y[0] >= 0.0 && y[0].fract() == 0.0).then_some(()).ok_or_else(|| format!("{} is not a count", y[0]))
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        let rate = theta.scalar(0);
        y[0] * rate.ln() - rate - ln_gamma(y[0] + 1.0)
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        Theta::scalars(&[sample_gamma(rng, md.g0_priors[0], md.g0_priors[1])])
    }

    fn posterior_draw(&self, md: &MixingDistribution, data: &[&[f64]], rng: &mut RandomSource) -> Option<Theta> {
        let total: f64 = data.iter().map(|y| y[0]).sum();
        let rate = sample_gamma(rng, md.g0_priors[0] + total, md.g0_priors[1] + data.len() as f64);
        Some(Theta::scalars(&[rate]))
    }

    // negative binomial marginal
    fn ln_predictive(&self, md: &MixingDistribution, y: &[f64]) -> Option<f64> {
        let (a, b) = (md.g0_priors[0], md.g0_priors[1]);
        Some(a * b.ln() - ln_gamma(a) + ln_gamma(a + y[0]) - (a + y[0]) * (b + 1.0).ln() - ln_gamma(y[0] + 1.0))
    }
}

fn main() -> dpmix::Result<()> {
    let mut registry = KernelRegistry::builtin();
    registry.register(Arc::new(Poisson));

    let mut rng = RandomSource::new(20);
    let ys: Vec<f64> = (0..300).map(|i| sample_poisson(&mut rng, if i % 2 == 0 { 3.0 } else { 10.0 })).collect();
    let model = registry.default_model("poisson", 1)?;
    println!("prior predictive mass at 0: {:.4}", model.predictive(&[0.0])?);

    let mut dp = DpState::initialise(Observations::univariate(&ys)?, model, AlphaPrior::default(), RandomSource::new(21))?;
    dp.fit(FitOptions::new(500))?;
    let rates: Vec<String> = dp.cluster_params().iter().map(|t| format!("{:.2}", t.scalar(0))).collect();
    println!("clusters: {}  rates: [{}]", dp.num_clusters(), rates.join(", "));

    let counts: Vec<f64> = (0..=20).map(f64::from).collect();
    let pmf = posterior_summary(&dp, &counts, 250, 5, 0.95)?;
    for (k, p) in counts.iter().zip(&pmf.mean).step_by(2) {
        println!("P(y = {k:2}) = {p:.4}");
    }
    Ok(())
}

//! A non-conjugate kernel: Gamma(shape, rate) components with exponential
//! priors, fitted through the auxiliary-parameter sampler with
//! Metropolis-Hastings updates. Proposals are reflected at zero.

use std::sync::Arc;

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::random_walk;
use dpmix::stats::{ln_gamma_pdf, sample_gamma};
use dpmix::{Conjugacy, Kernel, KernelRegistry, MixingDistribution, Observations, RandomSource, Theta};

#[derive(Debug)]
struct GammaMixture;

impl Kernel for GammaMixture {
    fn id(&self) -> &str {
        "gamma"
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        MixingDistribution::new("gamma", Conjugacy::NonConjugate, vec![0.1, 0.1]).with_mh_step_sizes(vec![0.5, 0.2])
    }

    fn check_datum(&self, _md: &MixingDistribution, y: &[f64]) -> Result<(), String> {
        if y[0] > 0.0 {
            Ok(())
        } else {
            Err("data must be positive".into())
        }
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        ln_gamma_pdf(y[0], theta.scalar(0), theta.scalar(1))
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        Theta::scalars(&[sample_gamma(rng, 1.0, md.g0_priors[0]), sample_gamma(rng, 1.0, md.g0_priors[1])])
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        let (a, b) = (theta.scalar(0), theta.scalar(1));
        if a <= 0.0 || b <= 0.0 {
            return Some(f64::NEG_INFINITY);
        }
        let (ra, rb) = (md.g0_priors[0], md.g0_priors[1]);
        Some(ra.ln() - ra * a + rb.ln() - rb * b)
    }

    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        random_walk(old, &md.mh_step_sizes, &[true, true], rng)
    }
}

fn main() -> dpmix::Result<()> {
    let mut registry = KernelRegistry::builtin();
    registry.register(Arc::new(GammaMixture));

    let mut rng = RandomSource::new(22);
    let ys: Vec<f64> =
        (0..200).map(|i| if i % 2 == 0 { sample_gamma(&mut rng, 2.0, 2.0) } else { sample_gamma(&mut rng, 20.0, 2.0) }).collect();
    let model = registry.default_model("gamma", 1)?;
    let mut dp = DpState::initialise(Observations::univariate(&ys)?, model, AlphaPrior::default(), RandomSource::new(23))?
        .with_auxiliary(3)?
        .with_mh_steps(5)?;
    dp.fit(FitOptions::new(500).store_samples(false))?;

    println!("clusters: {}  acceptance rate: {:.3}", dp.num_clusters(), dp.diagnostics().rate().unwrap_or(f64::NAN));
    for (k, t) in dp.cluster_params().iter().enumerate() {
        let (a, b) = (t.scalar(0), t.scalar(1));
        println!("cluster {k}: n = {:3}  shape {a:6.2}  rate {b:5.2}  mean {:5.2}", dp.points_per_cluster()[k], a / b);
    }
    Ok(())
}

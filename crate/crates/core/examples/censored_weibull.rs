//! Survival times with right censoring. The kernel wraps the built-in
//! Weibull kernel and swaps the density for the survival function on
//! censored rows; rows are `[time, censored]`.

use std::sync::Arc;

use dpmix::dp::{AlphaPrior, DpState, FitOptions};
use dpmix::kernels::WeibullKernel;
use dpmix::measure::{linspace, posterior_summary};
use dpmix::stats::sample_weibull;
use dpmix::{Kernel, KernelRegistry, MixingDistribution, Observations, RandomSource, Theta};

#[derive(Debug)]
struct CensoredWeibull;

fn plain(md: &MixingDistribution) -> MixingDistribution {
    let mut w = md.clone();
    w.kernel_id = WeibullKernel::ID.into();
    w
}

impl Kernel for CensoredWeibull {
    fn id(&self) -> &str {
        "weibull-censored"
    }

    fn default_mixing(&self, dim: usize) -> MixingDistribution {
        let mut md = WeibullKernel.default_mixing(dim);
        md.kernel_id = self.id().into();
        md
    }

    fn validate(&self, md: &MixingDistribution) -> dpmix::Result<()> {
        WeibullKernel.validate(&plain(md))
    }

    fn data_dim(&self, _md: &MixingDistribution) -> Option<usize> {
        Some(2)
    }

    fn check_datum(&self, _md: &MixingDistribution, y: &[f64]) -> Result<(), String> {
        if y[0] > 0.0 && (y[1] == 0.0 || y[1] == 1.0) {
            Ok(())
        } else {
            Err(format!("bad row {y:?}"))
        }
    }

    fn ln_likelihood(&self, md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        let (a, b) = (theta.scalar(0), theta.scalar(1));
        if !(a > 0.0 && b > 0.0) {
            return f64::NEG_INFINITY;
        }
        if y[1] == 1.0 {
            -y[0].powf(a) / b
        } else {
            WeibullKernel.ln_likelihood(&plain(md), &y[..1], theta)
        }
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        WeibullKernel.prior_draw(&plain(md), rng)
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        WeibullKernel.ln_prior_density(&plain(md), theta)
    }

    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        WeibullKernel.propose(&plain(md), old, rng)
    }

    fn update_prior(&self, md: &MixingDistribution, clusters: &[&Theta], rng: &mut RandomSource) -> MixingDistribution {
        let mut out = WeibullKernel.update_prior(&plain(md), clusters, rng);
        out.kernel_id = self.id().into();
        out
    }

    fn grid_point(&self, _md: &MixingDistribution, x: f64) -> Option<Vec<f64>> {
        Some(vec![x, 0.0])
    }
}

fn main() -> dpmix::Result<()> {
    let mut registry = KernelRegistry::builtin();
    registry.register(Arc::new(CensoredWeibull));

    // two sub-populations, follow-up ends at t = 3
    let mut rng = RandomSource::new(24);
    let rows: Vec<Vec<f64>> = (0..150)
        .map(|i| {
            let t = if i % 3 == 0 { sample_weibull(&mut rng, 1.5, 8.0) } else { sample_weibull(&mut rng, 3.0, 1.0) };
            if t > 3.0 {
                vec![3.0, 1.0]
            } else {
                vec![t, 0.0]
            }
        })
        .collect();
    let censored = rows.iter().filter(|r| r[1] == 1.0).count();
    println!("{censored} of {} rows censored", rows.len());

    let model = registry.default_model("weibull-censored", 2)?;
    let mut dp = DpState::initialise(Observations::from_rows(&rows)?, model, AlphaPrior::default(), RandomSource::new(25))?;
    dp.fit(FitOptions::new(400).update_prior(true))?;
    println!("clusters: {}  acceptance rate: {:.3}", dp.num_clusters(), dp.diagnostics().rate().unwrap_or(f64::NAN));

    let t = posterior_summary(&dp, &linspace(0.1, 3.0, 8), 200, 2, 0.9)?;
    for i in 0..t.len() {
        println!("t = {:4.2}: density {:.3} [{:.3}, {:.3}]", t.x[i], t.mean[i], t.lower[i], t.upper[i]);
    }
    Ok(())
}

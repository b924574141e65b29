//! Weibull kernel `k(y | a, b) = (a/b) y^(a-1) exp(-y^a / b)` for `y > 0`.
//!
//! Note that `b` is not the usual scale; the usual scale is `b^(1/a)`.
//!
//! `θ = [a, b]` with base measure `U(a | 0, φ) · InvGamma(b | α, β)`.
//! Layout: `g0_priors = [φ, β]` (default `[6, 2]`), `fixed_constants = [α]`
//! (default 2), `hyper_prior_parameters = [x_m, k, α0, β0]` for
//! `φ ~ Pareto(x_m, k)` and `β ~ Gamma(α0, β0)` (default `[6, 2, 1, 0.5]`),
//! `mh_step_sizes = [h_a, h_b]`.

use crate::data::Theta;
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::stats::{ln_inv_gamma_pdf, ln_weibull, sample_inv_gamma, DistSpec};

use super::{expect_len, expect_positive, random_walk, Conjugacy, Kernel, MixingDistribution};

pub const DEFAULT_STEP_SIZES: [f64; 2] = [0.5, 0.5];

#[derive(Debug, Clone, Copy, Default)]
pub struct WeibullKernel;

fn shape_alpha(md: &MixingDistribution) -> f64 {
    md.fixed_constants.first().copied().unwrap_or(2.0)
}

fn hyper(md: &MixingDistribution) -> Result<[f64; 4]> {
    md.hyper_prior_parameters
        .as_slice()
        .try_into()
        .map_err(|_| Error::param("weibull hyper_prior_parameters must be [x_m, k, alpha0, beta0]"))
}

impl WeibullKernel {
    pub const ID: &'static str = "weibull";

    pub fn mixing(g0: [f64; 2], alpha: f64, hyper: [f64; 4], steps: [f64; 2]) -> MixingDistribution {
        MixingDistribution::new(Self::ID, Conjugacy::NonConjugate, g0.to_vec())
            .with_mh_step_sizes(steps.to_vec())
            .with_hyper_prior_parameters(hyper.to_vec())
            .with_fixed_constants(vec![alpha])
    }

    /// Conditional posteriors of `φ` and `β` given the distinct cluster
    /// parameters: `Pareto(max{a_i, x_m}, k + n_c)` and
    /// `Gamma(α0 + n_c α, β0 + Σ 1/b_i)`.
    pub fn hyper_posteriors(md: &MixingDistribution, clusters: &[&Theta]) -> Result<(DistSpec, DistSpec)> {
        let [x_m, k, alpha0, beta0] = hyper(md)?;
        let n_c = clusters.len() as f64;
        let a_max = clusters.iter().map(|t| t.scalar(0)).fold(x_m, f64::max);
        let inv_sum: f64 = clusters.iter().map(|t| 1.0 / t.scalar(1)).sum();
        Ok((
            DistSpec::pareto(a_max, k + n_c)?,
            DistSpec::gamma(alpha0 + n_c * shape_alpha(md), beta0 + inv_sum)?,
        ))
    }
}

impl Kernel for WeibullKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        WeibullKernel::mixing([6.0, 2.0], 2.0, [6.0, 2.0, 1.0, 0.5], DEFAULT_STEP_SIZES)
    }

    fn validate(&self, md: &MixingDistribution) -> Result<()> {
        expect_len(md, "g0_priors", md.g0_priors.len(), 2)?;
        expect_len(md, "fixed_constants", md.fixed_constants.len(), 1)?;
        expect_positive("phi", md.g0_priors[0])?;
        expect_positive("beta", md.g0_priors[1])?;
        expect_positive("alpha", shape_alpha(md))?;
        if md.conjugacy != Conjugacy::NonConjugate {
            return Err(Error::param("the weibull kernel is non-conjugate"));
        }
        if !md.hyper_prior_parameters.is_empty() {
            for (name, v) in ["x_m", "k", "alpha0", "beta0"].iter().zip(hyper(md)?) {
                expect_positive(name, v)?;
            }
        }
        Ok(())
    }

    fn check_datum(&self, _md: &MixingDistribution, y: &[f64]) -> std::result::Result<(), String> {
        if y[0] > 0.0 {
            Ok(())
        } else {
            Err(format!("value {} is not strictly positive", y[0]))
        }
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        ln_weibull(y[0], theta.scalar(0), theta.scalar(1))
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        let a = md.g0_priors[0] * rng.uniform();
        let b = sample_inv_gamma(rng, shape_alpha(md), md.g0_priors[1]);
        Theta::scalars(&[a, b])
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        let phi = md.g0_priors[0];
        let (a, b) = (theta.scalar(0), theta.scalar(1));
        if !(a > 0.0 && a <= phi) {
            return Some(f64::NEG_INFINITY);
        }
        Some(-phi.ln() + ln_inv_gamma_pdf(b, shape_alpha(md), md.g0_priors[1]))
    }

    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        random_walk(old, &md.mh_step_sizes, &[true, true], rng)
    }

    fn update_prior(&self, md: &MixingDistribution, clusters: &[&Theta], rng: &mut RandomSource) -> MixingDistribution {
        let Ok((phi_post, beta_post)) = WeibullKernel::hyper_posteriors(md, clusters) else {
            return md.clone();
        };
        let mut out = md.clone();
        if let (Ok(phi), Ok(beta)) = (phi_post.sample_scalars(rng, 1), beta_post.sample_scalars(rng, 1)) {
            out.g0_priors = vec![phi[0], beta[0]];
        }
        out
    }
}

//! Beta kernel on `[0, T]` in the mean/precision parameterisation.
//!
//! `θ = [μ, ν]` with shapes `(μν/T, ν(1 − μ/T))`. The base measure is
//! `U(μ | 0, T) · InvGamma(ν | α0, β0)`, so the kernel is non-conjugate and
//! fitted with Metropolis–Hastings.
//!
//! Layout: `g0_priors = [α0, β0]` (default `[2, 8]`), `fixed_constants = [T]`
//! (default 1), `hyper_prior_parameters = [a, b]` for `β0 ~ Gamma(a, b)`
//! (default `[1, 0.125]`), `mh_step_sizes = [h_μ, h_ν]`.

use crate::data::Theta;
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::stats::{ln_beta_mean_precision, ln_inv_gamma_pdf, sample_inv_gamma, DistSpec};

use super::{expect_len, expect_positive, random_walk, Conjugacy, Kernel, MixingDistribution};

/// Distance kept from the ends of `[0, T]` when evaluating the density.
pub const BOUNDARY_CLAMP: f64 = 1e-10;

pub const DEFAULT_STEP_SIZES: [f64; 2] = [0.05, 1.0];

#[derive(Debug, Clone, Copy, Default)]
pub struct BetaKernel;

fn upper(md: &MixingDistribution) -> f64 {
    md.fixed_constants.first().copied().unwrap_or(1.0)
}

impl BetaKernel {
    pub const ID: &'static str = "beta";

    /// Mixing distribution with support `[0, upper]` and the given base-measure
    /// parameters and step sizes.
    pub fn mixing(upper: f64, g0: [f64; 2], steps: [f64; 2]) -> MixingDistribution {
        MixingDistribution::new(Self::ID, Conjugacy::NonConjugate, g0.to_vec())
            .with_mh_step_sizes(steps.to_vec())
            .with_hyper_prior_parameters(vec![1.0, 0.125])
            .with_fixed_constants(vec![upper])
    }

    /// Conditional posterior of `β0` given the distinct cluster parameters:
    /// `Gamma(a + n_c α0, b + Σ 1/ν_i)`.
    pub fn hyper_posterior(md: &MixingDistribution, clusters: &[&Theta]) -> Result<DistSpec> {
        let (a, b) = hyper_prior(md)?;
        let alpha0 = md.g0_priors[0];
        let inv_sum: f64 = clusters.iter().map(|t| 1.0 / t.scalar(1)).sum();
        DistSpec::gamma(a + clusters.len() as f64 * alpha0, b + inv_sum)
    }
}

fn hyper_prior(md: &MixingDistribution) -> Result<(f64, f64)> {
    match md.hyper_prior_parameters[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::param("beta kernel hyper_prior_parameters must be [a, b]")),
    }
}

impl Kernel for BetaKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        BetaKernel::mixing(1.0, [2.0, 8.0], DEFAULT_STEP_SIZES)
    }

    fn validate(&self, md: &MixingDistribution) -> Result<()> {
        expect_len(md, "g0_priors", md.g0_priors.len(), 2)?;
        expect_len(md, "fixed_constants", md.fixed_constants.len(), 1)?;
        expect_positive("alpha0", md.g0_priors[0])?;
        expect_positive("beta0", md.g0_priors[1])?;
        expect_positive("T", upper(md))?;
        if md.conjugacy != Conjugacy::NonConjugate {
            return Err(Error::param("the beta kernel is non-conjugate"));
        }
        if !md.hyper_prior_parameters.is_empty() {
            let (a, b) = hyper_prior(md)?;
            expect_positive("hyper-prior shape", a)?;
            expect_positive("hyper-prior rate", b)?;
        }
        Ok(())
    }

    fn check_datum(&self, md: &MixingDistribution, y: &[f64]) -> std::result::Result<(), String> {
        let t = upper(md);
        if (0.0..=t).contains(&y[0]) {
            Ok(())
        } else {
            Err(format!("value {} outside [0, {t}]", y[0]))
        }
    }

    fn ln_likelihood(&self, md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        let t = upper(md);
        let x = y[0].clamp(BOUNDARY_CLAMP, t - BOUNDARY_CLAMP);
        if !(0.0..=t).contains(&y[0]) {
            return f64::NEG_INFINITY;
        }
        ln_beta_mean_precision(x, theta.scalar(0), theta.scalar(1), t)
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        let mu = upper(md) * rng.uniform();
        let nu = sample_inv_gamma(rng, md.g0_priors[0], md.g0_priors[1]);
        Theta::scalars(&[mu, nu])
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        let t = upper(md);
        let (mu, nu) = (theta.scalar(0), theta.scalar(1));
        if !(0.0..=t).contains(&mu) {
            return Some(f64::NEG_INFINITY);
        }
        Some(-t.ln() + ln_inv_gamma_pdf(nu, md.g0_priors[0], md.g0_priors[1]))
    }

    /// `μ` is left unreflected (leaving `[0, T]` gives zero prior density);
    /// `ν` is reflected into the positive half-line.
    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        random_walk(old, &md.mh_step_sizes, &[false, true], rng)
    }

    fn update_prior(&self, md: &MixingDistribution, clusters: &[&Theta], rng: &mut RandomSource) -> MixingDistribution {
        let Ok(post) = BetaKernel::hyper_posterior(md, clusters) else {
            return md.clone();
        };
        let mut out = md.clone();
        if let Ok(draw) = post.sample_scalars(rng, 1) {
            out.g0_priors[1] = draw[0];
        }
        out
    }
}

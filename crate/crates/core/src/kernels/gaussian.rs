//! Univariate Gaussian kernel with a Normal-Inverse-Gamma base measure.
//!
//! `θ = [μ, σ²]`, `g0_priors = [μ0, κ0, α0, β0]` with
//! `G0 = N(μ | μ0, σ²/κ0) · InvGamma(σ² | α0, β0)`. Defaults are
//! `μ0 = 0, κ0 = 1, α0 = 1, β0 = 1`.
//!
//! The kernel is conjugate by default. Declaring the mixing distribution
//! `NonConjugate` (with step sizes) routes the same model through the
//! Metropolis–Hastings / auxiliary-parameter machinery instead.

use crate::data::Theta;
use crate::error::Result;
use crate::rng::RandomSource;
use crate::stats::{ln_inv_gamma_pdf, ln_normal, ln_student_t, sample_inv_gamma, sample_normal};

use super::{expect_len, expect_positive, random_walk, Conjugacy, Kernel, MixingDistribution};

#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianKernel;

/// Parameters of a Normal-Inverse-Gamma distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NigParams {
    pub mu: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl NigParams {
    fn from_md(md: &MixingDistribution) -> Self {
        let g = &md.g0_priors;
        NigParams { mu: g[0], kappa: g[1], alpha: g[2], beta: g[3] }
    }
}

/// Posterior NIG parameters after observing `ys`.
pub fn nig_posterior(prior: NigParams, ys: &[f64]) -> NigParams {
    let n = ys.len() as f64;
    if ys.is_empty() {
        return prior;
    }
    let mean = ys.iter().sum::<f64>() / n;
    let ss: f64 = ys.iter().map(|y| (y - mean) * (y - mean)).sum();
    let kappa = prior.kappa + n;
    NigParams {
        mu: (prior.kappa * prior.mu + n * mean) / kappa,
        kappa,
        alpha: prior.alpha + n / 2.0,
        beta: prior.beta + 0.5 * ss + prior.kappa * n * (mean - prior.mu).powi(2) / (2.0 * kappa),
    }
}

fn draw_nig(p: NigParams, rng: &mut RandomSource) -> Theta {
    let var = sample_inv_gamma(rng, p.alpha, p.beta);
    let mu = sample_normal(rng, p.mu, (var / p.kappa).sqrt());
    Theta::scalars(&[mu, var])
}

impl GaussianKernel {
    pub const ID: &'static str = "gaussian";

    /// The default base measure declared non-conjugate, so fitting goes
    /// through the auxiliary-parameter sampler with MH cluster updates.
    pub fn nonconjugate_mixing(step_sizes: [f64; 2]) -> MixingDistribution {
        let mut md = GaussianKernel.default_mixing(1);
        md.conjugacy = Conjugacy::NonConjugate;
        md.mh_step_sizes = step_sizes.to_vec();
        md
    }
}

impl Kernel for GaussianKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        MixingDistribution::new(Self::ID, Conjugacy::Conjugate, vec![0.0, 1.0, 1.0, 1.0])
    }

    fn validate(&self, md: &MixingDistribution) -> Result<()> {
        expect_len(md, "g0_priors", md.g0_priors.len(), 4)?;
        expect_positive("kappa0", md.g0_priors[1])?;
        expect_positive("alpha0", md.g0_priors[2])?;
        expect_positive("beta0", md.g0_priors[3])
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        ln_normal(y[0], theta.scalar(0), theta.scalar(1))
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        draw_nig(NigParams::from_md(md), rng)
    }

    fn posterior_draw(&self, md: &MixingDistribution, data: &[&[f64]], rng: &mut RandomSource) -> Option<Theta> {
        let ys: Vec<f64> = data.iter().map(|y| y[0]).collect();
        Some(draw_nig(nig_posterior(NigParams::from_md(md), &ys), rng))
    }

    fn ln_predictive(&self, md: &MixingDistribution, y: &[f64]) -> Option<f64> {
        let p = NigParams::from_md(md);
        let scale = (p.beta * (p.kappa + 1.0) / (p.alpha * p.kappa)).sqrt();
        Some(ln_student_t(y[0], 2.0 * p.alpha, p.mu, scale))
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        let p = NigParams::from_md(md);
        let (mu, var) = (theta.scalar(0), theta.scalar(1));
        if !(var > 0.0) {
            return Some(f64::NEG_INFINITY);
        }
        Some(ln_normal(mu, p.mu, var / p.kappa) + ln_inv_gamma_pdf(var, p.alpha, p.beta))
    }

    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        random_walk(old, &md.mh_step_sizes, &[false, true], rng)
    }
}

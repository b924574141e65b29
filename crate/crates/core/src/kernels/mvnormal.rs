//! Multivariate Gaussian kernels, `θ = [μ-vector, Σ]`.
//!
//! [`MvNormalKernel`] uses the conjugate Normal-Inverse-Wishart base measure
//! `N(μ | μ0, Σ/κ0) · IW_ν0(Σ | Φ0)`; `g0_priors = [μ0 (d), κ0, ν0, Φ0 (d², row-major)]`
//! and `fixed_constants = [d]`. Defaults: `μ0 = 0, Φ0 = I, κ0 = d, ν0 = d`.
//!
//! [`MvNormalSemiKernel`] uses the independent base measure
//! `N(μ | μ0, Σ0) · IW_ν0(Σ | Φ0)`; `g0_priors = [μ0 (d), Σ0 (d²), ν0, Φ0 (d²)]`.
//! It is non-conjugate (new clusters come from auxiliary base-measure draws)
//! but cluster parameters are updated by Gibbs cycles over the two full
//! conditionals rather than Metropolis–Hastings.

use nalgebra::{DMatrix, DVector};

use crate::data::{ParamBlock, Theta};
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::stats::{
    is_spd, ln_inverse_wishart, ln_mvnormal, ln_mvstudent_t, sample_inverse_wishart, sample_mvnormal, spd_inverse,
    symmetrize,
};

use super::{expect_len, expect_positive, Conjugacy, Kernel, MixingDistribution};

fn dim_of(md: &MixingDistribution) -> usize {
    md.fixed_constants.first().copied().unwrap_or(1.0) as usize
}

fn check_dim(md: &MixingDistribution) -> Result<usize> {
    let d = md.fixed_constants.first().copied().unwrap_or(0.0);
    if !(d >= 1.0) || d.fract() != 0.0 {
        return Err(Error::param("multivariate kernels need fixed_constants = [d] with integer d ≥ 1"));
    }
    Ok(d as usize)
}

fn as_vector(y: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(y)
}

fn mv_theta(mu: DVector<f64>, sigma: DMatrix<f64>) -> Theta {
    Theta(vec![ParamBlock::Vector(mu), ParamBlock::Matrix(sigma)])
}

fn mv_ln_likelihood(y: &[f64], theta: &Theta) -> f64 {
    ln_mvnormal(&as_vector(y), theta.vector(0), theta.matrix(1))
}

fn mean_and_scatter(data: &[&[f64]], d: usize, center: Option<&DVector<f64>>) -> (DVector<f64>, DMatrix<f64>) {
    let n = data.len();
    let mut mean = DVector::zeros(d);
    for y in data {
        mean += as_vector(y);
    }
    if n > 0 {
        mean /= n as f64;
    }
    let c = center.unwrap_or(&mean).clone();
    let mut scatter = DMatrix::zeros(d, d);
    for y in data {
        let diff = as_vector(y) - &c;
        scatter += &diff * diff.transpose();
    }
    (mean, scatter)
}

/// Parameters of a Normal-Inverse-Wishart distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct NiwParams {
    pub mu: DVector<f64>,
    pub kappa: f64,
    pub nu: f64,
    pub phi: DMatrix<f64>,
}

impl NiwParams {
    pub fn from_md(md: &MixingDistribution) -> Self {
        let d = dim_of(md);
        let g = &md.g0_priors;
        NiwParams {
            mu: DVector::from_column_slice(&g[..d]),
            kappa: g[d],
            nu: g[d + 1],
            phi: DMatrix::from_row_slice(d, d, &g[d + 2..d + 2 + d * d]),
        }
    }

    pub fn to_g0(&self) -> Vec<f64> {
        let d = self.mu.len();
        let mut g: Vec<f64> = self.mu.iter().copied().collect();
        g.push(self.kappa);
        g.push(self.nu);
        for i in 0..d {
            g.extend(self.phi.row(i).iter().copied());
        }
        g
    }
}

/// Posterior NIW parameters after observing `ys`.
pub fn niw_posterior(prior: &NiwParams, ys: &[&[f64]]) -> NiwParams {
    let d = prior.mu.len();
    let n = ys.len() as f64;
    if ys.is_empty() {
        return prior.clone();
    }
    let (mean, scatter) = mean_and_scatter(ys, d, None);
    let kappa = prior.kappa + n;
    let dm = &mean - &prior.mu;
    NiwParams {
        mu: (&prior.mu * prior.kappa + &mean * n) / kappa,
        kappa,
        nu: prior.nu + n,
        phi: symmetrize(&(&prior.phi + scatter + &dm * dm.transpose() * (prior.kappa * n / kappa))),
    }
}

fn draw_niw(p: &NiwParams, rng: &mut RandomSource) -> Theta {
    let sigma = sample_inverse_wishart(rng, p.nu, &p.phi).expect("validated NIW parameters");
    let mu = sample_mvnormal(rng, &p.mu, &(&sigma / p.kappa)).expect("inverse-wishart draw is spd");
    mv_theta(mu, sigma)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MvNormalKernel;

impl MvNormalKernel {
    pub const ID: &'static str = "mvnormal";

    pub fn mixing(prior: &NiwParams) -> MixingDistribution {
        MixingDistribution::new(Self::ID, Conjugacy::Conjugate, prior.to_g0())
            .with_fixed_constants(vec![prior.mu.len() as f64])
    }
}

impl Kernel for MvNormalKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, dim: usize) -> MixingDistribution {
        let d = dim.max(1);
        MvNormalKernel::mixing(&NiwParams {
            mu: DVector::zeros(d),
            kappa: d as f64,
            nu: d as f64,
            phi: DMatrix::identity(d, d),
        })
    }

    fn validate(&self, md: &MixingDistribution) -> Result<()> {
        let d = check_dim(md)?;
        expect_len(md, "g0_priors", md.g0_priors.len(), d + 2 + d * d)?;
        let p = NiwParams::from_md(md);
        expect_positive("kappa0", p.kappa)?;
        if !(p.nu > d as f64 - 1.0) {
            return Err(Error::param(format!("nu0 must exceed d - 1 = {}", d - 1)));
        }
        if !is_spd(&p.phi) {
            return Err(Error::MatrixDomain("Phi0 must be symmetric positive definite".into()));
        }
        Ok(())
    }

    fn data_dim(&self, md: &MixingDistribution) -> Option<usize> {
        Some(dim_of(md))
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        mv_ln_likelihood(y, theta)
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        draw_niw(&NiwParams::from_md(md), rng)
    }

    fn posterior_draw(&self, md: &MixingDistribution, data: &[&[f64]], rng: &mut RandomSource) -> Option<Theta> {
        Some(draw_niw(&niw_posterior(&NiwParams::from_md(md), data), rng))
    }

    fn ln_predictive(&self, md: &MixingDistribution, y: &[f64]) -> Option<f64> {
        let p = NiwParams::from_md(md);
        let d = p.mu.len() as f64;
        let df = p.nu - d + 1.0;
        let shape = &p.phi * ((p.kappa + 1.0) / (p.kappa * df));
        Some(ln_mvstudent_t(&as_vector(y), df, &p.mu, &shape))
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        let p = NiwParams::from_md(md);
        let sigma = theta.matrix(1);
        Some(ln_mvnormal(theta.vector(0), &p.mu, &(sigma / p.kappa)) + ln_inverse_wishart(sigma, p.nu, &p.phi))
    }

    fn grid_point(&self, md: &MixingDistribution, x: f64) -> Option<Vec<f64>> {
        (dim_of(md) == 1).then(|| vec![x])
    }
}

/// Independent Normal × Inverse-Wishart base measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiConjugatePrior {
    pub mu0: DVector<f64>,
    pub sigma0: DMatrix<f64>,
    pub nu0: f64,
    pub phi0: DMatrix<f64>,
}

impl SemiConjugatePrior {
    pub fn from_md(md: &MixingDistribution) -> Self {
        let d = dim_of(md);
        let g = &md.g0_priors;
        SemiConjugatePrior {
            mu0: DVector::from_column_slice(&g[..d]),
            sigma0: DMatrix::from_row_slice(d, d, &g[d..d + d * d]),
            nu0: g[d + d * d],
            phi0: DMatrix::from_row_slice(d, d, &g[d + d * d + 1..d + 2 * d * d + 1]),
        }
    }

    pub fn to_g0(&self) -> Vec<f64> {
        let d = self.mu0.len();
        let mut g: Vec<f64> = self.mu0.iter().copied().collect();
        for i in 0..d {
            g.extend(self.sigma0.row(i).iter().copied());
        }
        g.push(self.nu0);
        for i in 0..d {
            g.extend(self.phi0.row(i).iter().copied());
        }
        g
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MvNormalSemiKernel;

impl MvNormalSemiKernel {
    pub const ID: &'static str = "mvnormal-semi";

    pub fn mixing(prior: &SemiConjugatePrior) -> MixingDistribution {
        MixingDistribution::new(Self::ID, Conjugacy::NonConjugate, prior.to_g0())
            .with_fixed_constants(vec![prior.mu0.len() as f64])
    }
}

impl Kernel for MvNormalSemiKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, dim: usize) -> MixingDistribution {
        let d = dim.max(1);
        MvNormalSemiKernel::mixing(&SemiConjugatePrior {
            mu0: DVector::zeros(d),
            sigma0: DMatrix::identity(d, d),
            nu0: d as f64,
            phi0: DMatrix::identity(d, d),
        })
    }

    fn validate(&self, md: &MixingDistribution) -> Result<()> {
        let d = check_dim(md)?;
        expect_len(md, "g0_priors", md.g0_priors.len(), d + 1 + 2 * d * d)?;
        if md.conjugacy != Conjugacy::NonConjugate {
            return Err(Error::param("the semi-conjugate kernel must be declared non-conjugate"));
        }
        let p = SemiConjugatePrior::from_md(md);
        if !(p.nu0 > d as f64 - 1.0) {
            return Err(Error::param(format!("nu0 must exceed d - 1 = {}", d - 1)));
        }
        if !is_spd(&p.sigma0) || !is_spd(&p.phi0) {
            return Err(Error::MatrixDomain("Sigma0 and Phi0 must be symmetric positive definite".into()));
        }
        Ok(())
    }

    fn data_dim(&self, md: &MixingDistribution) -> Option<usize> {
        Some(dim_of(md))
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        mv_ln_likelihood(y, theta)
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        let p = SemiConjugatePrior::from_md(md);
        let sigma = sample_inverse_wishart(rng, p.nu0, &p.phi0).expect("validated prior");
        let mu = sample_mvnormal(rng, &p.mu0, &p.sigma0).expect("validated prior");
        mv_theta(mu, sigma)
    }

    fn has_gibbs_conditionals(&self) -> bool {
        true
    }

    fn gibbs_cycle(
        &self,
        md: &MixingDistribution,
        data: &[&[f64]],
        current: &Theta,
        rng: &mut RandomSource,
    ) -> Option<Theta> {
        let p = SemiConjugatePrior::from_md(md);
        let d = p.mu0.len();
        let n = data.len() as f64;
        let mu = current.vector(0);

        // Σ | μ ~ IW(ν0 + n, Φ0 + Σ (y - μ)(y - μ)ᵀ)
        let (mean, scatter) = mean_and_scatter(data, d, Some(mu));
        let phi_n = symmetrize(&(&p.phi0 + scatter));
        let sigma = sample_inverse_wishart(rng, p.nu0 + n, &phi_n).ok()?;

        // μ | Σ ~ N(Σn (Σ0⁻¹ μ0 + n Σ⁻¹ ȳ), Σn),  Σn = (Σ0⁻¹ + n Σ⁻¹)⁻¹
        let sigma0_inv = spd_inverse(&p.sigma0)?;
        let sigma_inv = spd_inverse(&sigma)?;
        let sigma_n = spd_inverse(&(&sigma0_inv + &sigma_inv * n))?;
        let mu_n = &sigma_n * (&sigma0_inv * &p.mu0 + &sigma_inv * &mean * n);
        let mu_new = sample_mvnormal(rng, &mu_n, &sigma_n).ok()?;
        Some(mv_theta(mu_new, sigma))
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        let p = SemiConjugatePrior::from_md(md);
        Some(ln_mvnormal(theta.vector(0), &p.mu0, &p.sigma0) + ln_inverse_wishart(theta.matrix(1), p.nu0, &p.phi0))
    }

    fn grid_point(&self, md: &MixingDistribution, x: f64) -> Option<Vec<f64>> {
        (dim_of(md) == 1).then(|| vec![x])
    }
}

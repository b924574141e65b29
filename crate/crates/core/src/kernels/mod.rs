//! Mixture kernels and the behavioural interface user-defined kernels implement.
//!
//! A kernel is split in two halves:
//!
//! * [`MixingDistribution`] is plain data: the kernel id, its conjugacy class,
//!   the base-measure parameters, Metropolis–Hastings step sizes, hyper-prior
//!   parameters and fixed constants. It is what gets serialised.
//! * [`Kernel`] is behaviour: likelihood, base-measure draws, posterior draws,
//!   predictive and prior densities, proposals and hyper-parameter updates.
//!   Each method receives the [`MixingDistribution`] it should read its
//!   parameters from.
//!
//! [`Model`] pairs the two and is what the samplers consume. New kernels are
//! added by implementing [`Kernel`] and registering it in a
//! [`KernelRegistry`]; the samplers then work unchanged.

pub mod beta;
pub mod gaussian;
pub mod mvnormal;
pub mod weibull;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use beta::BetaKernel;
pub use gaussian::{nig_posterior, GaussianKernel, NigParams};
pub use mvnormal::{niw_posterior, MvNormalKernel, MvNormalSemiKernel, NiwParams, SemiConjugatePrior};
pub use weibull::WeibullKernel;

use crate::data::{Observations, ParamBlock, Theta};
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::stats::sample_std_normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conjugacy {
    Conjugate,
    NonConjugate,
}

/// Kernel description as data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingDistribution {
    pub kernel_id: String,
    pub conjugacy: Conjugacy,
    /// Base-measure parameters.
    pub g0_priors: Vec<f64>,
    /// Random-walk scale per parameter; used by Metropolis–Hastings kernels.
    #[serde(default)]
    pub mh_step_sizes: Vec<f64>,
    /// Priors on the base-measure parameters, for kernels with hyper-updates.
    #[serde(default)]
    pub hyper_prior_parameters: Vec<f64>,
    #[serde(default)]
    pub fixed_constants: Vec<f64>,
}

impl MixingDistribution {
    pub fn new(kernel_id: impl Into<String>, conjugacy: Conjugacy, g0_priors: Vec<f64>) -> Self {
        MixingDistribution {
            kernel_id: kernel_id.into(),
            conjugacy,
            g0_priors,
            mh_step_sizes: Vec::new(),
            hyper_prior_parameters: Vec::new(),
            fixed_constants: Vec::new(),
        }
    }

    pub fn with_mh_step_sizes(mut self, steps: Vec<f64>) -> Self {
        self.mh_step_sizes = steps;
        self
    }

    pub fn with_hyper_prior_parameters(mut self, params: Vec<f64>) -> Self {
        self.hyper_prior_parameters = params;
        self
    }

    pub fn with_fixed_constants(mut self, constants: Vec<f64>) -> Self {
        self.fixed_constants = constants;
        self
    }
}

/// Behaviour of a mixture kernel `k(y | θ)` together with its base measure `G0`.
///
/// Only [`Kernel::id`], [`Kernel::default_mixing`], [`Kernel::ln_likelihood`]
/// and [`Kernel::prior_draw`] are mandatory. Conjugate kernels additionally
/// provide [`Kernel::posterior_draw`] and [`Kernel::ln_predictive`];
/// Metropolis–Hastings kernels provide [`Kernel::ln_prior_density`] and
/// usually override [`Kernel::propose`] to respect parameter domains.
pub trait Kernel: Send + Sync + fmt::Debug {
    fn id(&self) -> &str;

    /// Default mixing distribution for `dim`-dimensional observations.
    fn default_mixing(&self, dim: usize) -> MixingDistribution;

    /// Kernel-specific checks on `md`, beyond what [`Model::new`] checks.
    fn validate(&self, _md: &MixingDistribution) -> Result<()> {
        Ok(())
    }

    /// Number of columns an observation must have, if fixed.
    fn data_dim(&self, _md: &MixingDistribution) -> Option<usize> {
        Some(1)
    }

    /// Support check for one observation; the message names the violation.
    fn check_datum(&self, _md: &MixingDistribution, _y: &[f64]) -> std::result::Result<(), String> {
        Ok(())
    }

    /// `ln k(y | θ)`; `-inf` when `θ` is outside its domain.
    fn ln_likelihood(&self, md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64;

    /// One draw from `G0`.
    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta;

    /// One exact draw from `p(θ | data)`, for conjugate kernels.
    fn posterior_draw(&self, _md: &MixingDistribution, _data: &[&[f64]], _rng: &mut RandomSource) -> Option<Theta> {
        None
    }

    /// `ln ∫ k(y | θ) dG0(θ)`, for conjugate kernels.
    fn ln_predictive(&self, _md: &MixingDistribution, _y: &[f64]) -> Option<f64> {
        None
    }

    /// Whether [`Kernel::gibbs_cycle`] replaces Metropolis–Hastings for this kernel.
    fn has_gibbs_conditionals(&self) -> bool {
        false
    }

    /// One cycle through the full conditionals of `θ` given `data`.
    fn gibbs_cycle(
        &self,
        _md: &MixingDistribution,
        _data: &[&[f64]],
        _current: &Theta,
        _rng: &mut RandomSource,
    ) -> Option<Theta> {
        None
    }

    /// `ln G0(θ)`, for non-conjugate kernels.
    fn ln_prior_density(&self, _md: &MixingDistribution, _theta: &Theta) -> Option<f64> {
        None
    }

    /// Metropolis–Hastings candidate. The default perturbs every scalar by
    /// `h · N(0, 1)` without reflection.
    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        random_walk(old, &md.mh_step_sizes, &[], rng)
    }

    /// Resample base-measure parameters given the distinct cluster parameters.
    /// Kernels without hyper-updates return `md` unchanged.
    fn update_prior(&self, md: &MixingDistribution, _clusters: &[&Theta], _rng: &mut RandomSource) -> MixingDistribution {
        md.clone()
    }

    /// Observation at which to evaluate the density for a scalar grid value.
    fn grid_point(&self, _md: &MixingDistribution, x: f64) -> Option<Vec<f64>> {
        Some(vec![x])
    }
}

/// Gaussian random walk on the scalar blocks of `old`; blocks whose index is
/// flagged in `reflect` are mapped back to the positive half-line by `|·|`.
pub fn random_walk(old: &Theta, steps: &[f64], reflect: &[bool], rng: &mut RandomSource) -> Theta {
    let mut out = old.clone();
    for (i, block) in out.0.iter_mut().enumerate() {
        if let ParamBlock::Scalar(v) = block {
            let h = steps.get(i).copied().unwrap_or(0.0);
            let mut next = *v + h * sample_std_normal(rng);
            if reflect.get(i).copied().unwrap_or(false) {
                next = next.abs();
            }
            *v = next;
        }
    }
    out
}

/// Acceptance counters for Metropolis–Hastings steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MhDiagnostics {
    pub proposed: u64,
    pub accepted: u64,
}

impl MhDiagnostics {
    pub fn rate(&self) -> Option<f64> {
        (self.proposed > 0).then(|| self.accepted as f64 / self.proposed as f64)
    }

    pub fn merge(&mut self, other: MhDiagnostics) {
        self.proposed += other.proposed;
        self.accepted += other.accepted;
    }
}

/// Number of Metropolis–Hastings steps used to refine a base-measure draw at
/// initialisation.
pub const INITIAL_MH_STEPS: usize = 10;

/// A validated mixing distribution bound to its kernel implementation.
#[derive(Clone)]
pub struct Model {
    md: MixingDistribution,
    kernel: Arc<dyn Kernel>,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model").field("md", &self.md).finish()
    }
}

impl Model {
    pub fn new(kernel: Arc<dyn Kernel>, md: MixingDistribution) -> Result<Self> {
        if md.kernel_id != kernel.id() {
            return Err(Error::Config(format!(
                "mixing distribution is for kernel `{}`, not `{}`",
                md.kernel_id,
                kernel.id()
            )));
        }
        let uses_mh = md.conjugacy == Conjugacy::NonConjugate && !kernel.has_gibbs_conditionals();
        if uses_mh {
            if md.mh_step_sizes.is_empty() {
                return Err(Error::param("non-conjugate kernels need mh_step_sizes"));
            }
            if md.mh_step_sizes.iter().any(|h| !(*h >= 0.0) || !h.is_finite()) {
                return Err(Error::param("mh_step_sizes must be finite and non-negative"));
            }
        } else if !md.mh_step_sizes.is_empty() {
            return Err(Error::param(format!(
                "kernel `{}` in this configuration does not take mh_step_sizes",
                md.kernel_id
            )));
        }
        if md.g0_priors.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("g0_priors must be finite"));
        }
        kernel.validate(&md)?;
        Ok(Model { md, kernel })
    }

    /// The kernel's default mixing distribution for `dim`-dimensional data.
    pub fn with_defaults(kernel: Arc<dyn Kernel>, dim: usize) -> Result<Self> {
        let md = kernel.default_mixing(dim);
        Model::new(kernel, md)
    }

    pub fn md(&self) -> &MixingDistribution {
        &self.md
    }

    pub fn kernel(&self) -> &Arc<dyn Kernel> {
        &self.kernel
    }

    pub fn conjugacy(&self) -> Conjugacy {
        self.md.conjugacy
    }

    pub fn is_conjugate(&self) -> bool {
        self.md.conjugacy == Conjugacy::Conjugate
    }

    /// Whether cluster updates use Metropolis–Hastings.
    pub fn uses_mh(&self) -> bool {
        !self.is_conjugate() && !self.kernel.has_gibbs_conditionals()
    }

    /// Check that every observation has the right width and lies in the
    /// kernel's support.
    pub fn check_data(&self, data: &Observations) -> Result<()> {
        if let Some(d) = self.kernel.data_dim(&self.md) {
            if data.dim() != d {
                return Err(Error::DataDomain {
                    index: 0,
                    message: format!("kernel `{}` expects {d} column(s), data has {}", self.md.kernel_id, data.dim()),
                });
            }
        }
        for (i, y) in data.rows().enumerate() {
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::DataDomain { index: i, message: "non-finite value".into() });
            }
            self.kernel
                .check_datum(&self.md, y)
                .map_err(|message| Error::DataDomain { index: i, message })?;
        }
        Ok(())
    }

    pub fn ln_likelihood(&self, y: &[f64], theta: &Theta) -> f64 {
        let v = self.kernel.ln_likelihood(&self.md, y, theta);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }

    /// Kernel density `k(y | θ)`; zero when `θ` is outside its domain.
    pub fn likelihood(&self, y: &[f64], theta: &Theta) -> f64 {
        self.ln_likelihood(y, theta).exp()
    }

    /// Pointwise kernel density for every row of `data`.
    pub fn likelihoods(&self, data: &Observations, theta: &Theta) -> Vec<f64> {
        data.rows().map(|y| self.likelihood(y, theta)).collect()
    }

    pub(crate) fn ln_likelihood_sum(&self, data: &[&[f64]], theta: &Theta) -> f64 {
        let mut total = 0.0;
        for y in data {
            total += self.ln_likelihood(y, theta);
            if total == f64::NEG_INFINITY {
                break;
            }
        }
        total
    }

    /// `n` i.i.d. draws from the base measure.
    pub fn prior_draw(&self, n: usize, rng: &mut RandomSource) -> Result<Vec<Theta>> {
        if n == 0 {
            return Err(Error::Domain("draw count must be at least 1".into()));
        }
        Ok((0..n).map(|_| self.kernel.prior_draw(&self.md, rng)).collect())
    }

    pub(crate) fn prior_draw_one(&self, rng: &mut RandomSource) -> Theta {
        self.kernel.prior_draw(&self.md, rng)
    }

    /// Draws from `p(θ | data)`.
    ///
    /// Conjugate kernels return `n` independent exact draws. Gibbs-capable
    /// kernels return the states of `n` Gibbs cycles, and Metropolis–Hastings
    /// kernels the states of `n` MH steps, both started at `start` (a base
    /// measure draw when `None`).
    pub fn posterior_draw(
        &self,
        data: &[&[f64]],
        n: usize,
        rng: &mut RandomSource,
        start: Option<&Theta>,
    ) -> Result<Vec<Theta>> {
        if n == 0 {
            return Err(Error::Domain("draw count must be at least 1".into()));
        }
        if self.is_conjugate() {
            return (0..n).map(|_| self.conjugate_posterior_draw(data, rng)).collect();
        }
        let mut current = match start {
            Some(t) => t.clone(),
            None => self.prior_draw_one(rng),
        };
        let mut out = Vec::with_capacity(n);
        if self.kernel.has_gibbs_conditionals() {
            for _ in 0..n {
                current = self.gibbs_cycle(data, &current, rng)?;
                out.push(current.clone());
            }
        } else {
            let mut ln_target = self.ln_target(data, &current)?;
            for _ in 0..n {
                let (next, next_target, _) = self.mh_step(data, current, ln_target, rng)?;
                current = next;
                ln_target = next_target;
                out.push(current.clone());
            }
        }
        Ok(out)
    }

    pub(crate) fn conjugate_posterior_draw(&self, data: &[&[f64]], rng: &mut RandomSource) -> Result<Theta> {
        self.kernel.posterior_draw(&self.md, data, rng).ok_or_else(|| {
            Error::Unsupported(format!("kernel `{}` provides no closed-form posterior draw", self.md.kernel_id))
        })
    }

    fn gibbs_cycle(&self, data: &[&[f64]], current: &Theta, rng: &mut RandomSource) -> Result<Theta> {
        self.kernel.gibbs_cycle(&self.md, data, current, rng).ok_or_else(|| {
            Error::Unsupported(format!("kernel `{}` provides no Gibbs conditionals", self.md.kernel_id))
        })
    }

    fn ln_target(&self, data: &[&[f64]], theta: &Theta) -> Result<f64> {
        let prior = self.ln_prior_density(theta)?;
        if prior == f64::NEG_INFINITY {
            return Ok(prior);
        }
        Ok(prior + self.ln_likelihood_sum(data, theta))
    }

    /// One Metropolis–Hastings step targeting `G0(θ) ∏ k(y | θ)`.
    /// Returns the new state, its log target, and whether it was accepted.
    pub(crate) fn mh_step(
        &self,
        data: &[&[f64]],
        current: Theta,
        ln_target: f64,
        rng: &mut RandomSource,
    ) -> Result<(Theta, f64, bool)> {
        let candidate = self.kernel.propose(&self.md, &current, rng);
        let cand_target = self.ln_target(data, &candidate)?;
        let u = rng.uniform();
        let accept = cand_target > f64::NEG_INFINITY
            && (ln_target == f64::NEG_INFINITY || u.ln() < cand_target - ln_target);
        if accept {
            Ok((candidate, cand_target, true))
        } else {
            Ok((current, ln_target, false))
        }
    }

    /// Resample one cluster parameter from `p(φ | y_cluster)`: an exact draw
    /// for conjugate kernels, `steps` Gibbs cycles or MH steps otherwise.
    pub(crate) fn resample_cluster(
        &self,
        data: &[&[f64]],
        current: &Theta,
        steps: usize,
        rng: &mut RandomSource,
        diag: &mut MhDiagnostics,
    ) -> Result<Theta> {
        if self.is_conjugate() {
            return self.conjugate_posterior_draw(data, rng);
        }
        let mut theta = current.clone();
        if self.kernel.has_gibbs_conditionals() {
            for _ in 0..steps {
                theta = self.gibbs_cycle(data, &theta, rng)?;
            }
            return Ok(theta);
        }
        let mut ln_target = self.ln_target(data, &theta)?;
        for _ in 0..steps {
            let (next, t, accepted) = self.mh_step(data, theta, ln_target, rng)?;
            theta = next;
            ln_target = t;
            diag.proposed += 1;
            diag.accepted += accepted as u64;
        }
        Ok(theta)
    }

    pub fn ln_predictive(&self, y: &[f64]) -> Result<f64> {
        if !self.is_conjugate() {
            return Err(Error::Unsupported("predictive is only defined for conjugate kernels".into()));
        }
        self.kernel.ln_predictive(&self.md, y).ok_or_else(|| {
            Error::Unsupported(format!("kernel `{}` provides no predictive", self.md.kernel_id))
        })
    }

    /// Marginal density `∫ k(y | θ) dG0(θ)`.
    pub fn predictive(&self, y: &[f64]) -> Result<f64> {
        Ok(self.ln_predictive(y)?.exp())
    }

    pub fn ln_prior_density(&self, theta: &Theta) -> Result<f64> {
        if self.is_conjugate() {
            return Err(Error::Unsupported("prior density is only exposed for non-conjugate kernels".into()));
        }
        self.kernel.ln_prior_density(&self.md, theta).ok_or_else(|| {
            Error::Unsupported(format!("kernel `{}` provides no prior density", self.md.kernel_id))
        })
    }

    /// Base-measure density `G0(θ)`.
    pub fn prior_density(&self, theta: &Theta) -> Result<f64> {
        Ok(self.ln_prior_density(theta)?.exp())
    }

    pub fn mh_parameter_proposal(&self, old: &Theta, rng: &mut RandomSource) -> Theta {
        self.kernel.propose(&self.md, old, rng)
    }

    /// A new model with base-measure parameters resampled given the distinct
    /// cluster parameters.
    pub fn prior_parameters_update(&self, clusters: &[&Theta], rng: &mut RandomSource) -> Model {
        if clusters.is_empty() {
            return self.clone();
        }
        let md = self.kernel.update_prior(&self.md, clusters, rng);
        Model { md, kernel: self.kernel.clone() }
    }

    pub fn grid_point(&self, x: f64) -> Option<Vec<f64>> {
        self.kernel.grid_point(&self.md, x)
    }

    /// Same kernel with a different mixing distribution.
    pub fn with_md(&self, md: MixingDistribution) -> Result<Model> {
        Model::new(self.kernel.clone(), md)
    }
}

/// Kernels addressable by id.
#[derive(Clone, Default)]
pub struct KernelRegistry {
    kernels: Vec<Arc<dyn Kernel>>,
}

impl fmt::Debug for KernelRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.kernels.iter().map(|k| k.id())).finish()
    }
}

impl KernelRegistry {
    pub fn empty() -> Self {
        KernelRegistry::default()
    }

    /// Registry holding `gaussian`, `mvnormal`, `mvnormal-semi`, `beta` and `weibull`.
    pub fn builtin() -> Self {
        let mut r = KernelRegistry::empty();
        r.register(Arc::new(GaussianKernel));
        r.register(Arc::new(MvNormalKernel));
        r.register(Arc::new(MvNormalSemiKernel));
        r.register(Arc::new(BetaKernel));
        r.register(Arc::new(WeibullKernel));
        r
    }

    /// Add a kernel, replacing any existing kernel with the same id.
    pub fn register(&mut self, kernel: Arc<dyn Kernel>) {
        self.kernels.retain(|k| k.id() != kernel.id());
        self.kernels.push(kernel);
    }

    pub fn get(&self, id: &str) -> Result<Arc<dyn Kernel>> {
        self.kernels
            .iter()
            .find(|k| k.id() == id)
            .cloned()
            .ok_or_else(|| Error::UnknownKernel(id.to_string()))
    }

    pub fn ids(&self) -> Vec<&str> {
        self.kernels.iter().map(|k| k.id()).collect()
    }

    pub fn model(&self, md: MixingDistribution) -> Result<Model> {
        let kernel = self.get(&md.kernel_id)?;
        Model::new(kernel, md)
    }

    pub fn default_model(&self, id: &str, dim: usize) -> Result<Model> {
        Model::with_defaults(self.get(id)?, dim)
    }
}

pub(crate) fn expect_len(md: &MixingDistribution, field: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::param(format!(
            "kernel `{}` expects {want} {field}, got {got}",
            md.kernel_id
        )));
    }
    Ok(())
}

pub(crate) fn expect_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{what} must be positive, got {v}")))
    }
}

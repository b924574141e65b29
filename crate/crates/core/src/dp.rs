//! The Dirichlet process mixture sampler.
//!
//! [`DpState`] holds the data, the current partition and cluster parameters,
//! the concentration `α` and the retained sample history. Each iteration of
//! [`DpState::fit`] performs a component sweep (Algorithm 4 for conjugate
//! kernels, Algorithm 8 with `m` auxiliary parameters otherwise), a cluster
//! parameter update and a concentration update, optionally followed by a
//! base-measure hyper-parameter update.
//!
//! Cluster labels are 0-based indices into the cluster table.

use serde::{Deserialize, Serialize};

use crate::data::{Observations, Theta};
use crate::error::{Error, Result};
use crate::kernels::{KernelRegistry, MhDiagnostics, Model, INITIAL_MH_STEPS};
use crate::rng::RandomSource;
use crate::stats::{sample_beta, sample_gamma};

/// Default number of auxiliary parameters for non-conjugate sweeps.
pub const DEFAULT_AUXILIARY: usize = 3;

/// `Gamma(a, b)` prior (shape–rate) on a concentration parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaPrior {
    pub a: f64,
    pub b: f64,
}

impl AlphaPrior {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let p = AlphaPrior { a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a > 0.0 && self.b > 0.0 && self.a.is_finite() && self.b.is_finite() {
            Ok(())
        } else {
            Err(Error::param(format!("alpha prior needs a > 0 and b > 0, got ({}, {})", self.a, self.b)))
        }
    }

    pub fn sample(&self, rng: &mut RandomSource) -> f64 {
        sample_gamma(rng, self.a, self.b)
    }
}

impl Default for AlphaPrior {
    fn default() -> Self {
        AlphaPrior { a: 2.0, b: 4.0 }
    }
}

/// Probability of the `Gamma(a + k, ·)` branch in the concentration update,
/// given the auxiliary draw `z`.
pub fn concentration_branch_weight(prior: AlphaPrior, k: usize, n: usize, z: f64) -> f64 {
    let p1 = prior.a + k as f64 - 1.0;
    let p2 = n as f64 * (prior.b - z.ln());
    p1 / (p1 + p2)
}

/// One draw of the concentration parameter by the auxiliary-variable scheme:
/// `z ~ Beta(α + 1, n)`, then a two-component Gamma mixture.
///
/// `k` is the number of distinct clusters (or tables, dishes) and `n` the
/// number of items they partition.
pub fn sample_concentration(alpha: f64, prior: AlphaPrior, k: usize, n: usize, rng: &mut RandomSource) -> f64 {
    if n == 0 {
        return prior.sample(rng);
    }
    let z = sample_beta(rng, alpha + 1.0, n as f64);
    let rate = prior.b - z.ln();
    let pi = concentration_branch_weight(prior, k, n, z);
    let shape = if rng.uniform() < pi {
        prior.a + k as f64
    } else {
        prior.a + k as f64 - 1.0
    };
    if shape <= 0.0 {
        // only reachable with a < 1 and k = 0
        return sample_gamma(rng, prior.a + k as f64, rate);
    }
    sample_gamma(rng, shape, rate)
}

/// Index drawn with probability proportional to `exp(ln_w[i])`.
///
/// When every weight is zero the draw falls back to uniform.
pub(crate) fn sample_log_categorical(ln_w: &[f64], rng: &mut RandomSource) -> usize {
    let max = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let u = rng.uniform();
    if max == f64::NEG_INFINITY || max.is_nan() {
        return ((u * ln_w.len() as f64) as usize).min(ln_w.len() - 1);
    }
    let w: Vec<f64> = ln_w.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = w.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, wi) in w.iter().enumerate() {
        acc += wi;
        if target < acc {
            return i;
        }
    }
    w.iter().rposition(|&v| v > 0.0).unwrap_or(w.len() - 1)
}

/// Normalised probabilities from log weights.
pub(crate) fn normalise_log_weights(ln_w: &[f64]) -> Vec<f64> {
    let max = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return vec![1.0 / ln_w.len() as f64; ln_w.len()];
    }
    let w: Vec<f64> = ln_w.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

fn ln_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// A mixture component: its parameters and how many observations it holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub params: Theta,
    pub count: usize,
}

/// Snapshot of the sampler state retained by [`DpState::fit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetainedSample {
    /// 1-based iteration number over the lifetime of the state.
    pub iteration: u64,
    pub labels: Vec<usize>,
    pub params: Vec<Theta>,
    /// `count / n` per cluster.
    pub weights: Vec<f64>,
    pub alpha: f64,
}

/// Options for [`DpState::fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub iterations: usize,
    pub thinning: usize,
    pub store_samples: bool,
    pub update_prior: bool,
    pub update_alpha: bool,
}

impl FitOptions {
    pub fn new(iterations: usize) -> Self {
        FitOptions {
            iterations,
            thinning: 1,
            store_samples: true,
            update_prior: false,
            update_alpha: true,
        }
    }

    pub fn thinning(mut self, k: usize) -> Self {
        self.thinning = k;
        self
    }

    pub fn store_samples(mut self, yes: bool) -> Self {
        self.store_samples = yes;
        self
    }

    pub fn update_prior(mut self, yes: bool) -> Self {
        self.update_prior = yes;
        self
    }

    pub fn update_alpha(mut self, yes: bool) -> Self {
        self.update_alpha = yes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.thinning == 0 {
            return Err(Error::Config("thinning must be at least 1".into()));
        }
        Ok(())
    }
}

/// Iterations (1-based, within one call) at which a progress line is emitted:
/// one per 10% of the run.
pub(crate) fn progress_marks(iterations: usize) -> Vec<usize> {
    let mut marks: Vec<usize> = (1..=10).map(|p| (p * iterations).div_ceil(10)).filter(|&t| t > 0).collect();
    marks.dedup();
    marks
}

/// Result of [`DpState::cluster_label_predict`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPrediction {
    /// One label per new observation, indexing `cluster_params`.
    pub labels: Vec<usize>,
    pub cluster_params: Vec<Theta>,
    pub points_per_cluster: Vec<usize>,
    pub num_labels: usize,
}

/// Serialisable form of a [`DpState`], without its random source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpRecord {
    pub data: Observations,
    pub mixing: crate::kernels::MixingDistribution,
    pub labels: Vec<usize>,
    pub clusters: Vec<Cluster>,
    pub alpha: f64,
    pub alpha_prior: AlphaPrior,
    pub m: usize,
    pub mh_steps: usize,
    pub iteration: u64,
    pub diagnostics: MhDiagnostics,
    pub history: Vec<RetainedSample>,
}

/// State of a Dirichlet process mixture sampler.
#[derive(Debug, Clone)]
pub struct DpState {
    data: Observations,
    model: Model,
    labels: Vec<usize>,
    clusters: Vec<Cluster>,
    alpha: f64,
    alpha_prior: AlphaPrior,
    m: usize,
    mh_steps: usize,
    iteration: u64,
    diagnostics: MhDiagnostics,
    history: Vec<RetainedSample>,
    rng: RandomSource,
}

impl DpState {
    /// All observations in one cluster, whose parameter is drawn from the
    /// posterior given all the data (a base-measure draw refined by a few
    /// Metropolis–Hastings steps or Gibbs cycles for non-conjugate kernels).
    /// `α` is drawn from its prior.
    pub fn initialise(data: Observations, model: Model, alpha_prior: AlphaPrior, mut rng: RandomSource) -> Result<Self> {
        alpha_prior.validate()?;
        model.check_data(&data)?;
        let rows: Vec<&[f64]> = data.rows().collect();
        let mut diagnostics = MhDiagnostics::default();
        let params = if model.is_conjugate() {
            model.conjugate_posterior_draw(&rows, &mut rng)?
        } else {
            let start = model.prior_draw_one(&mut rng);
            model.resample_cluster(&rows, &start, INITIAL_MH_STEPS, &mut rng, &mut diagnostics)?
        };
        let alpha = alpha_prior.sample(&mut rng);
        let n = data.len();
        Ok(DpState {
            data,
            model,
            labels: vec![0; n],
            clusters: vec![Cluster { params, count: n }],
            alpha,
            alpha_prior,
            m: DEFAULT_AUXILIARY,
            mh_steps: 1,
            iteration: 0,
            diagnostics: MhDiagnostics::default(),
            history: Vec::new(),
            rng,
        })
    }

    /// Number of auxiliary parameters for non-conjugate sweeps (at least 1).
    pub fn with_auxiliary(mut self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("auxiliary parameter count m must be at least 1".into()));
        }
        self.m = m;
        Ok(self)
    }

    /// Metropolis–Hastings steps (or Gibbs cycles) per cluster per parameter
    /// update, for non-conjugate kernels.
    pub fn with_mh_steps(mut self, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Config("mh steps per update must be at least 1".into()));
        }
        self.mh_steps = steps;
        Ok(self)
    }

    /// Overwrite `α`. Zero is allowed and disables new clusters.
    pub fn set_alpha(&mut self, alpha: f64) -> Result<()> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::param(format!("alpha must be finite and non-negative, got {alpha}")));
        }
        self.alpha = alpha;
        Ok(())
    }

    pub fn data(&self) -> &Observations {
        &self.data
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn points_per_cluster(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.count).collect()
    }

    pub fn cluster_params(&self) -> Vec<&Theta> {
        self.clusters.iter().map(|c| &c.params).collect()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_prior(&self) -> AlphaPrior {
        self.alpha_prior
    }

    pub fn auxiliary(&self) -> usize {
        self.m
    }

    pub fn mh_steps(&self) -> usize {
        self.mh_steps
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn history(&self) -> &[RetainedSample] {
        &self.history
    }

    /// Metropolis–Hastings acceptance counts accumulated by cluster parameter
    /// updates.
    pub fn diagnostics(&self) -> MhDiagnostics {
        self.diagnostics
    }

    pub fn reset_diagnostics(&mut self) {
        self.diagnostics = MhDiagnostics::default();
    }

    pub fn rng_mut(&mut self) -> &mut RandomSource {
        &mut self.rng
    }

    /// Parameter of the cluster holding observation `i`.
    pub fn theta_of(&self, i: usize) -> &Theta {
        &self.clusters[self.labels[i]].params
    }

    /// Replace the model (e.g. after a hyper-parameter update).
    pub fn set_model(&mut self, model: Model) -> Result<()> {
        if model.md().kernel_id != self.model.md().kernel_id {
            return Err(Error::Config("replacement model must use the same kernel".into()));
        }
        self.model = model;
        Ok(())
    }

    /// Check label, count and table consistency.
    pub fn validate(&self) -> Result<()> {
        let n = self.data.len();
        if self.labels.len() != n {
            return Err(Error::Domain(format!("{} labels for {n} observations", self.labels.len())));
        }
        let mut counts = vec![0usize; self.clusters.len()];
        for (i, &l) in self.labels.iter().enumerate() {
            if l >= self.clusters.len() {
                return Err(Error::Domain(format!("label {l} of observation {i} has no cluster")));
            }
            counts[l] += 1;
        }
        for (j, (c, &want)) in self.clusters.iter().zip(&counts).enumerate() {
            if c.count != want {
                return Err(Error::Domain(format!("cluster {j} records {} points, holds {want}", c.count)));
            }
            if c.count == 0 {
                return Err(Error::Domain(format!("cluster {j} is empty")));
            }
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::Domain(format!("alpha = {} is invalid", self.alpha)));
        }
        Ok(())
    }

    fn remove_cluster(&mut self, j: usize) -> Cluster {
        let last = self.clusters.len() - 1;
        let removed = self.clusters.swap_remove(j);
        if j != last {
            for l in self.labels.iter_mut() {
                if *l == last {
                    *l = j;
                }
            }
        }
        removed
    }

    /// One sweep over the observations in data order, reassigning each to an
    /// existing or new cluster.
    pub fn cluster_component_update(&mut self) -> Result<()> {
        let n = self.data.len();
        let conjugate = self.model.is_conjugate();
        let ln_alpha = ln_or_neg_inf(self.alpha);
        let ln_alpha_m = ln_alpha - (self.m as f64).ln();
        let mut ln_w: Vec<f64> = Vec::new();
        let mut aux: Vec<Theta> = Vec::with_capacity(self.m);
        for i in 0..n {
            let c = self.labels[i];
            self.clusters[c].count -= 1;
            let vacated = if self.clusters[c].count == 0 {
                Some(self.remove_cluster(c).params)
            } else {
                None
            };
            let y = self.data.row(i);

            ln_w.clear();
            for cl in &self.clusters {
                ln_w.push((cl.count as f64).ln() + self.model.ln_likelihood(y, &cl.params));
            }
            let k = ln_w.len();
            aux.clear();
            if conjugate {
                let pred = if ln_alpha == f64::NEG_INFINITY {
                    f64::NEG_INFINITY
                } else {
                    ln_alpha + self.model.ln_predictive(y)?
                };
                ln_w.push(pred);
            } else if ln_alpha > f64::NEG_INFINITY {
                if let Some(old) = vacated {
                    aux.push(old);
                }
                while aux.len() < self.m {
                    aux.push(self.model.prior_draw_one(&mut self.rng));
                }
                for a in &aux {
                    ln_w.push(ln_alpha_m + self.model.ln_likelihood(y, a));
                }
            }

            let choice = sample_log_categorical(&ln_w, &mut self.rng);
            if choice < k {
                self.labels[i] = choice;
                self.clusters[choice].count += 1;
            } else {
                let params = if conjugate {
                    self.model.conjugate_posterior_draw(&[y], &mut self.rng)?
                } else {
                    aux.swap_remove(choice - k)
                };
                self.clusters.push(Cluster { params, count: 1 });
                self.labels[i] = self.clusters.len() - 1;
            }
        }
        Ok(())
    }

    /// Observation indices per cluster.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.clusters.len()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Resample every cluster parameter given the observations assigned to it.
    pub fn cluster_parameter_update(&mut self) -> Result<()> {
        let members = self.members();
        for (j, idx) in members.iter().enumerate() {
            let rows = self.data.select(idx);
            let mut diag = MhDiagnostics::default();
            let next = self
                .model
                .resample_cluster(&rows, &self.clusters[j].params, self.mh_steps, &mut self.rng, &mut diag)?;
            self.diagnostics.merge(diag);
            self.clusters[j].params = next;
        }
        Ok(())
    }

    /// Resample `α` given the current number of clusters.
    pub fn update_alpha(&mut self) {
        self.alpha = sample_concentration(
            self.alpha,
            self.alpha_prior,
            self.clusters.len(),
            self.data.len(),
            &mut self.rng,
        );
    }

    /// Resample the base-measure hyper-parameters given the cluster parameters.
    pub fn update_prior(&mut self) {
        let params: Vec<&Theta> = self.clusters.iter().map(|c| &c.params).collect();
        self.model = self.model.prior_parameters_update(&params, &mut self.rng);
    }

    fn snapshot(&self) -> RetainedSample {
        let n = self.data.len() as f64;
        RetainedSample {
            iteration: self.iteration,
            labels: self.labels.clone(),
            params: self.clusters.iter().map(|c| c.params.clone()).collect(),
            weights: self.clusters.iter().map(|c| c.count as f64 / n).collect(),
            alpha: self.alpha,
        }
    }

    /// Run `options.iterations` iterations. Iterations `1, 1 + k, 1 + 2k, …`
    /// of this call are appended to the history when samples are stored.
    pub fn fit(&mut self, options: FitOptions) -> Result<()> {
        self.fit_with_progress(options, |_| {})
    }

    /// As [`DpState::fit`], sending one status line per 10% of iterations to
    /// `progress`.
    pub fn fit_with_progress(&mut self, options: FitOptions, mut progress: impl FnMut(&str)) -> Result<()> {
        options.validate()?;
        let marks = progress_marks(options.iterations);
        let mut next_mark = 0;
        for t in 1..=options.iterations {
            self.cluster_component_update()?;
            self.cluster_parameter_update()?;
            if options.update_alpha {
                self.update_alpha();
            }
            if options.update_prior {
                self.update_prior();
            }
            self.iteration += 1;
            if options.store_samples && (t - 1) % options.thinning == 0 {
                self.history.push(self.snapshot());
            }
            if next_mark < marks.len() && t == marks[next_mark] {
                next_mark += 1;
                progress(&format!(
                    "iteration {t}/{} ({}%): clusters = {}, alpha = {:.4}",
                    options.iterations,
                    100 * t / options.iterations,
                    self.clusters.len(),
                    self.alpha
                ));
            }
        }
        Ok(())
    }

    /// Normalised assignment probabilities for one observation: one entry per
    /// existing cluster followed by one for a new cluster.
    ///
    /// For non-conjugate kernels the new-cluster weight uses `m` fresh
    /// base-measure draws from `rng`.
    pub fn assignment_probabilities(&self, y: &[f64], rng: &mut RandomSource) -> Result<Vec<f64>> {
        let counts: Vec<usize> = self.points_per_cluster();
        let params: Vec<Theta> = self.clusters.iter().map(|c| c.params.clone()).collect();
        let (ln_w, _) = self.assignment_log_weights(y, &params, &counts, rng)?;
        let p = normalise_log_weights(&ln_w);
        let k = params.len();
        let mut out = p[..k].to_vec();
        out.push(p[k..].iter().sum());
        Ok(out)
    }

    fn assignment_log_weights(
        &self,
        y: &[f64],
        params: &[Theta],
        counts: &[usize],
        rng: &mut RandomSource,
    ) -> Result<(Vec<f64>, Vec<Theta>)> {
        let mut ln_w: Vec<f64> = params
            .iter()
            .zip(counts)
            .map(|(p, &c)| ln_or_neg_inf(c as f64) + self.model.ln_likelihood(y, p))
            .collect();
        let ln_alpha = ln_or_neg_inf(self.alpha);
        let mut aux = Vec::new();
        if self.model.is_conjugate() {
            let pred = if ln_alpha == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                ln_alpha + self.model.ln_predictive(y)?
            };
            ln_w.push(pred);
        } else {
            let ln_alpha_m = ln_alpha - (self.m as f64).ln();
            for _ in 0..self.m {
                let a = self.model.prior_draw_one(rng);
                ln_w.push(if ln_alpha == f64::NEG_INFINITY {
                    f64::NEG_INFINITY
                } else {
                    ln_alpha_m + self.model.ln_likelihood(y, &a)
                });
                aux.push(a);
            }
        }
        Ok((ln_w, aux))
    }

    /// Sequential assignment of `new_data` against the current clusters,
    /// starting from `counts`. New clusters are appended to `params`.
    fn assign_sequential(
        &self,
        new_data: &Observations,
        params: &mut Vec<Theta>,
        counts: &mut Vec<usize>,
        rng: &mut RandomSource,
    ) -> Result<Vec<usize>> {
        let mut labels = Vec::with_capacity(new_data.len());
        for y in new_data.rows() {
            let (ln_w, mut aux) = self.assignment_log_weights(y, params, counts, rng)?;
            let k = params.len();
            let choice = sample_log_categorical(&ln_w, rng);
            if choice < k {
                counts[choice] += 1;
                labels.push(choice);
            } else {
                let theta = if self.model.is_conjugate() {
                    self.model.conjugate_posterior_draw(&[y], rng)?
                } else {
                    aux.swap_remove(choice - k)
                };
                params.push(theta);
                counts.push(1);
                labels.push(k);
            }
        }
        Ok(labels)
    }

    /// Predict cluster labels for new observations without changing the state.
    ///
    /// Each point is labelled with an existing cluster with probability
    /// `∝ n_i k(y | θ_i)` or a new one `∝ α ∫ k(y | θ) dG0(θ)` (auxiliary
    /// base-measure draws for non-conjugate kernels). Points are processed in
    /// order and counts include earlier test points, so a cluster opened by
    /// one point is available to the next.
    pub fn cluster_label_predict(&self, new_data: &Observations, rng: &mut RandomSource) -> Result<ClusterPrediction> {
        self.model.check_data(new_data)?;
        let mut params: Vec<Theta> = self.clusters.iter().map(|c| c.params.clone()).collect();
        let mut counts = self.points_per_cluster();
        let labels = self.assign_sequential(new_data, &mut params, &mut counts, rng)?;
        Ok(ClusterPrediction {
            labels,
            num_labels: params.len(),
            cluster_params: params,
            points_per_cluster: counts,
        })
    }

    /// Replace the data, assigning each new observation to a cluster as in
    /// [`DpState::cluster_label_predict`]. Clusters left without data are
    /// dropped; the history is kept.
    pub fn change_observations(&mut self, new_data: Observations) -> Result<()> {
        self.model.check_data(&new_data)?;
        let mut params: Vec<Theta> = self.clusters.iter().map(|c| c.params.clone()).collect();
        let mut counts = self.points_per_cluster();
        let mut rng = self.rng.clone();
        let labels = self.assign_sequential(&new_data, &mut params, &mut counts, &mut rng)?;
        self.rng = rng;

        let mut fresh = vec![0usize; params.len()];
        for &l in &labels {
            fresh[l] += 1;
        }
        let mut remap = vec![usize::MAX; params.len()];
        let mut clusters = Vec::new();
        for (j, theta) in params.into_iter().enumerate() {
            if fresh[j] > 0 {
                remap[j] = clusters.len();
                clusters.push(Cluster { params: theta, count: fresh[j] });
            }
        }
        self.labels = labels.into_iter().map(|l| remap[l]).collect();
        self.clusters = clusters;
        self.data = new_data;
        Ok(())
    }

    pub fn to_record(&self) -> DpRecord {
        DpRecord {
            data: self.data.clone(),
            mixing: self.model.md().clone(),
            labels: self.labels.clone(),
            clusters: self.clusters.clone(),
            alpha: self.alpha,
            alpha_prior: self.alpha_prior,
            m: self.m,
            mh_steps: self.mh_steps,
            iteration: self.iteration,
            diagnostics: self.diagnostics,
            history: self.history.clone(),
        }
    }

    /// Rebuild a state from its record, resolving the kernel in `registry`.
    pub fn from_record(record: DpRecord, registry: &KernelRegistry, rng: RandomSource) -> Result<Self> {
        let model = registry.model(record.mixing)?;
        record.alpha_prior.validate()?;
        let state = DpState {
            data: record.data,
            model,
            labels: record.labels,
            clusters: record.clusters,
            alpha: record.alpha,
            alpha_prior: record.alpha_prior,
            m: record.m.max(1),
            mh_steps: record.mh_steps.max(1),
            iteration: record.iteration,
            diagnostics: record.diagnostics,
            history: record.history,
            rng,
        };
        state.validate()?;
        Ok(state)
    }
}

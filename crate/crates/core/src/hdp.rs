//! Hierarchical Dirichlet process mixtures for grouped data.
//!
//! `G_j ~ DP(α_j, G0)`, `G0 ~ DP(γ, H)`, sampled with the Chinese restaurant
//! franchise: customers (observations) sit at group-local tables, each table
//! serves one globally shared dish (mixture component).
//!
//! One iteration of [`HdpState::fit`] runs, for every group, a customer step
//! and a table step, then resamples every dish parameter from the pooled data
//! of all its customers, then the concentrations `α_j` and `γ`.

use serde::{Deserialize, Serialize};

use crate::data::{Observations, Theta};
use crate::dp::{
    normalise_log_weights, progress_marks, sample_concentration, sample_log_categorical, AlphaPrior, RetainedSample,
    DEFAULT_AUXILIARY,
};
use crate::error::{Error, Result};
use crate::kernels::{KernelRegistry, MhDiagnostics, Model, INITIAL_MH_STEPS};
use crate::measure::{summarize_history, PosteriorSummaryTable};
use crate::rng::RandomSource;

/// A table in one group's restaurant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub dish: usize,
    pub count: usize,
}

/// One group: its observations, the table of each observation and its tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub data: Observations,
    pub table_of: Vec<usize>,
    pub tables: Vec<Table>,
}

impl Group {
    fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.tables.len()];
        for (i, &t) in self.table_of.iter().enumerate() {
            out[t].push(i);
        }
        out
    }

    fn remove_table(&mut self, t: usize) {
        let last = self.tables.len() - 1;
        self.tables.swap_remove(t);
        if t != last {
            for l in self.table_of.iter_mut() {
                if *l == last {
                    *l = t;
                }
            }
        }
    }
}

/// A globally shared mixture component and the number of tables serving it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dish {
    pub params: Theta,
    pub tables: usize,
}

/// Options for [`HdpState::fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HdpFitOptions {
    pub iterations: usize,
    pub thinning: usize,
    pub store_samples: bool,
    pub update_prior: bool,
    pub update_alpha: bool,
    pub update_gamma: bool,
}

impl HdpFitOptions {
    pub fn new(iterations: usize) -> Self {
        HdpFitOptions {
            iterations,
            thinning: 1,
            store_samples: true,
            update_prior: false,
            update_alpha: true,
            update_gamma: true,
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

    pub fn update_gamma(mut self, yes: bool) -> Self {
        self.update_gamma = yes;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.thinning == 0 {
            return Err(Error::Config("thinning must be at least 1".into()));
        }
        Ok(())
    }
}

/// Serialisable form of an [`HdpState`], without its random source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HdpRecord {
    pub mixing: crate::kernels::MixingDistribution,
    pub groups: Vec<Group>,
    pub dishes: Vec<Dish>,
    pub alphas: Vec<f64>,
    pub alpha_prior: AlphaPrior,
    pub gamma: f64,
    pub gamma_prior: AlphaPrior,
    pub m: usize,
    pub mh_steps: usize,
    pub iteration: u64,
    pub diagnostics: MhDiagnostics,
    pub history: Vec<Vec<RetainedSample>>,
}

/// State of a Chinese restaurant franchise sampler.
#[derive(Debug, Clone)]
pub struct HdpState {
    model: Model,
    groups: Vec<Group>,
    dishes: Vec<Dish>,
    alphas: Vec<f64>,
    alpha_prior: AlphaPrior,
    gamma: f64,
    gamma_prior: AlphaPrior,
    m: usize,
    mh_steps: usize,
    iteration: u64,
    diagnostics: MhDiagnostics,
    history: Vec<Vec<RetainedSample>>,
    rng: RandomSource,
}

fn ln_pos(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

impl HdpState {
    /// Every group starts at a single table; all tables share one dish drawn
    /// from the posterior given the pooled data. `α_j` and `γ` are drawn from
    /// their priors.
    pub fn initialise(
        datasets: Vec<Observations>,
        model: Model,
        gamma_prior: AlphaPrior,
        alpha_prior: AlphaPrior,
        mut rng: RandomSource,
    ) -> Result<Self> {
        if datasets.is_empty() {
            return Err(Error::Data("at least one group is required".into()));
        }
        gamma_prior.validate()?;
        alpha_prior.validate()?;
        for data in &datasets {
            model.check_data(data)?;
        }
        let pooled: Vec<&[f64]> = datasets.iter().flat_map(|d| d.rows()).collect();
        let params = if model.is_conjugate() {
            model.conjugate_posterior_draw(&pooled, &mut rng)?
        } else {
            let start = model.prior_draw_one(&mut rng);
            let mut diag = MhDiagnostics::default();
            model.resample_cluster(&pooled, &start, INITIAL_MH_STEPS, &mut rng, &mut diag)?
        };
        let j = datasets.len();
        let groups: Vec<Group> = datasets
            .into_iter()
            .map(|data| {
                let n = data.len();
                Group { data, table_of: vec![0; n], tables: vec![Table { dish: 0, count: n }] }
            })
            .collect();
        let alphas = (0..j).map(|_| alpha_prior.sample(&mut rng)).collect();
        let gamma = gamma_prior.sample(&mut rng);
        Ok(HdpState {
            model,
            groups,
            dishes: vec![Dish { params, tables: j }],
            alphas,
            alpha_prior,
            gamma,
            gamma_prior,
            m: DEFAULT_AUXILIARY,
            mh_steps: 1,
            iteration: 0,
            diagnostics: MhDiagnostics::default(),
            history: vec![Vec::new(); j],
            rng,
        })
    }

    pub fn with_auxiliary(mut self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("auxiliary parameter count m must be at least 1".into()));
        }
        self.m = m;
        Ok(self)
    }

    pub fn with_mh_steps(mut self, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Config("mh steps per update must be at least 1".into()));
        }
        self.mh_steps = steps;
        Ok(self)
    }

    pub fn set_gamma(&mut self, gamma: f64) -> Result<()> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::param(format!("gamma must be positive, got {gamma}")));
        }
        self.gamma = gamma;
        Ok(())
    }

    pub fn set_alpha(&mut self, group: usize, alpha: f64) -> Result<()> {
        if group >= self.alphas.len() {
            return Err(Error::Index { index: group, len: self.alphas.len() });
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::param(format!("alpha must be positive, got {alpha}")));
        }
        self.alphas[group] = alpha;
        Ok(())
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn dishes(&self) -> &[Dish] {
        &self.dishes
    }

    pub fn num_dishes(&self) -> usize {
        self.dishes.len()
    }

    pub fn total_tables(&self) -> usize {
        self.groups.iter().map(|g| g.tables.len()).sum()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn diagnostics(&self) -> MhDiagnostics {
        self.diagnostics
    }

    /// Retained samples of one group.
    pub fn history(&self, group: usize) -> Result<&[RetainedSample]> {
        self.history
            .get(group)
            .map(Vec::as_slice)
            .ok_or(Error::Index { index: group, len: self.history.len() })
    }

    /// Dish index of each observation in `group`.
    pub fn dish_labels(&self, group: usize) -> Vec<usize> {
        let g = &self.groups[group];
        g.table_of.iter().map(|&t| g.tables[t].dish).collect()
    }

    /// Groups with at least one table serving each dish.
    pub fn dish_groups(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.dishes.len()];
        for (j, g) in self.groups.iter().enumerate() {
            for t in &g.tables {
                if out[t.dish].last() != Some(&j) {
                    out[t.dish].push(j);
                }
            }
        }
        out
    }

    /// Whether some dish is served in more than one group.
    pub fn has_shared_dish(&self) -> bool {
        self.dish_groups().iter().any(|g| g.len() > 1)
    }

    /// Check table and dish bookkeeping.
    pub fn validate(&self) -> Result<()> {
        let mut dish_tables = vec![0usize; self.dishes.len()];
        for (j, g) in self.groups.iter().enumerate() {
            if g.table_of.len() != g.data.len() {
                return Err(Error::Domain(format!("group {j}: table labels do not match data")));
            }
            let mut counts = vec![0usize; g.tables.len()];
            for &t in &g.table_of {
                if t >= g.tables.len() {
                    return Err(Error::Domain(format!("group {j}: table {t} does not exist")));
                }
                counts[t] += 1;
            }
            for (t, (tab, &c)) in g.tables.iter().zip(&counts).enumerate() {
                if tab.count != c || c == 0 {
                    return Err(Error::Domain(format!("group {j}: table {t} records {} holds {c}", tab.count)));
                }
                if tab.dish >= self.dishes.len() {
                    return Err(Error::Domain(format!("group {j}: table {t} serves missing dish {}", tab.dish)));
                }
                dish_tables[tab.dish] += 1;
            }
        }
        for (d, (dish, &c)) in self.dishes.iter().zip(&dish_tables).enumerate() {
            if dish.tables != c || c == 0 {
                return Err(Error::Domain(format!("dish {d} records {} tables, has {c}", dish.tables)));
            }
        }
        if self.dishes.len() > self.total_tables() {
            return Err(Error::Domain("more dishes than tables".into()));
        }
        if self.alphas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) || !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::Domain("concentrations must be positive and finite".into()));
        }
        Ok(())
    }

    fn remove_dish(&mut self, d: usize) -> Dish {
        let last = self.dishes.len() - 1;
        let removed = self.dishes.swap_remove(d);
        if d != last {
            for g in self.groups.iter_mut() {
                for t in g.tables.iter_mut() {
                    if t.dish == last {
                        t.dish = d;
                    }
                }
            }
        }
        removed
    }

    /// Drop one table reference from dish `d`, removing the dish (and
    /// returning its parameter) when no table serves it any more.
    fn release_dish(&mut self, d: usize) -> Option<Theta> {
        self.dishes[d].tables -= 1;
        (self.dishes[d].tables == 0).then(|| self.remove_dish(d).params)
    }

    fn fill_auxiliary(&mut self, vacated: Option<Theta>) -> Vec<Theta> {
        let mut aux = Vec::with_capacity(self.m);
        if let Some(v) = vacated {
            aux.push(v);
        }
        while aux.len() < self.m {
            aux.push(self.model.prior_draw_one(&mut self.rng));
        }
        aux
    }

    fn customer_step(&mut self, j: usize) -> Result<()> {
        let conjugate = self.model.is_conjugate();
        let ln_alpha = ln_pos(self.alphas[j]);
        let ln_gamma = ln_pos(self.gamma);
        let ln_m = (self.m as f64).ln();
        let n = self.groups[j].data.len();
        for i in 0..n {
            let t = self.groups[j].table_of[i];
            self.groups[j].tables[t].count -= 1;
            let mut vacated = None;
            if self.groups[j].tables[t].count == 0 {
                let d = self.groups[j].tables[t].dish;
                self.groups[j].remove_table(t);
                vacated = self.release_dish(d);
            }
            let y = self.groups[j].data.row(i).to_vec();

            let dish_ln_lik: Vec<f64> = self.dishes.iter().map(|d| self.model.ln_likelihood(&y, &d.params)).collect();
            let total_tables = self.total_tables() as f64;

            // new-dish weight: predictive, or the auxiliary average
            let (ln_g_new, aux, aux_ln_lik) = if conjugate {
                (self.model.ln_predictive(&y)?, Vec::new(), Vec::new())
            } else {
                let aux = self.fill_auxiliary(vacated.take());
                let ll: Vec<f64> = aux.iter().map(|a| self.model.ln_likelihood(&y, a)).collect();
                (log_sum_exp(&ll) - ln_m, aux, ll)
            };

            // dish mixture: Σ m_d k_d + γ g_new, over (Σ m_d + γ)
            let mut dish_terms: Vec<f64> = self
                .dishes
                .iter()
                .zip(&dish_ln_lik)
                .map(|(d, ll)| (d.tables as f64).ln() + ll)
                .collect();
            dish_terms.push(ln_gamma + ln_g_new);
            let ln_new_table = ln_alpha + log_sum_exp(&dish_terms) - (total_tables + self.gamma).ln();

            let group = &self.groups[j];
            let mut ln_w: Vec<f64> = group
                .tables
                .iter()
                .map(|tab| (tab.count as f64).ln() + dish_ln_lik[tab.dish])
                .collect();
            let k = ln_w.len();
            ln_w.push(ln_new_table);

            let choice = sample_log_categorical(&ln_w, &mut self.rng);
            if choice < k {
                self.groups[j].table_of[i] = choice;
                self.groups[j].tables[choice].count += 1;
                continue;
            }

            // new table: pick its dish
            let nd = self.dishes.len();
            let mut dish_w = dish_terms[..nd].to_vec();
            if conjugate {
                dish_w.push(dish_terms[nd]);
            } else {
                dish_w.extend(aux_ln_lik.iter().map(|ll| ln_gamma - ln_m + ll));
            }
            let pick = sample_log_categorical(&dish_w, &mut self.rng);
            let dish = if pick < nd {
                self.dishes[pick].tables += 1;
                pick
            } else {
                let params = if conjugate {
                    self.model.conjugate_posterior_draw(&[&y], &mut self.rng)?
                } else {
                    aux[pick - nd].clone()
                };
                self.dishes.push(Dish { params, tables: 1 });
                nd
            };
            self.groups[j].tables.push(Table { dish, count: 1 });
            self.groups[j].table_of[i] = self.groups[j].tables.len() - 1;
        }
        Ok(())
    }

    fn table_step(&mut self, j: usize) -> Result<()> {
        let ln_gamma = ln_pos(self.gamma);
        let ln_gamma_m = ln_gamma - (self.m as f64).ln();
        let members = self.groups[j].members();
        for (t, idx) in members.iter().enumerate() {
            let rows: Vec<Vec<f64>> = idx.iter().map(|&i| self.groups[j].data.row(i).to_vec()).collect();
            let rows: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
            let d_old = self.groups[j].tables[t].dish;
            let vacated = self.release_dish(d_old);
            let aux = self.fill_auxiliary(vacated);

            let mut ln_w: Vec<f64> = self
                .dishes
                .iter()
                .map(|d| (d.tables as f64).ln() + self.model.ln_likelihood_sum(&rows, &d.params))
                .collect();
            let nd = ln_w.len();
            ln_w.extend(aux.iter().map(|a| ln_gamma_m + self.model.ln_likelihood_sum(&rows, a)));
            let pick = sample_log_categorical(&ln_w, &mut self.rng);
            let dish = if pick < nd {
                self.dishes[pick].tables += 1;
                pick
            } else {
                let mut aux = aux;
                self.dishes.push(Dish { params: aux.swap_remove(pick - nd), tables: 1 });
                nd
            };
            self.groups[j].tables[t].dish = dish;
        }
        Ok(())
    }

    fn dish_parameter_update(&mut self) -> Result<()> {
        let mut pooled: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.dishes.len()];
        for (j, g) in self.groups.iter().enumerate() {
            for (i, &t) in g.table_of.iter().enumerate() {
                pooled[g.tables[t].dish].push((j, i));
            }
        }
        for (d, members) in pooled.iter().enumerate() {
            let rows: Vec<&[f64]> = members.iter().map(|&(j, i)| self.groups[j].data.row(i)).collect();
            let mut diag = MhDiagnostics::default();
            let next = self
                .model
                .resample_cluster(&rows, &self.dishes[d].params, self.mh_steps, &mut self.rng, &mut diag)?;
            self.diagnostics.merge(diag);
            self.dishes[d].params = next;
        }
        Ok(())
    }

    fn update_concentrations(&mut self, alpha: bool, gamma: bool) {
        if alpha {
            for j in 0..self.groups.len() {
                let g = &self.groups[j];
                self.alphas[j] =
                    sample_concentration(self.alphas[j], self.alpha_prior, g.tables.len(), g.data.len(), &mut self.rng);
            }
        }
        if gamma {
            let tables = self.total_tables();
            self.gamma = sample_concentration(self.gamma, self.gamma_prior, self.dishes.len(), tables, &mut self.rng);
        }
    }

    fn snapshot(&self, j: usize) -> RetainedSample {
        let g = &self.groups[j];
        let n = g.data.len() as f64;
        let mut compact = vec![usize::MAX; self.dishes.len()];
        let mut params = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut labels = Vec::with_capacity(g.data.len());
        for &t in &g.table_of {
            let d = g.tables[t].dish;
            if compact[d] == usize::MAX {
                compact[d] = params.len();
                params.push(self.dishes[d].params.clone());
                counts.push(0);
            }
            counts[compact[d]] += 1;
            labels.push(compact[d]);
        }
        RetainedSample {
            iteration: self.iteration,
            labels,
            params,
            weights: counts.into_iter().map(|c| c as f64 / n).collect(),
            alpha: self.alphas[j],
        }
    }

    /// One full franchise iteration without touching the history.
    pub fn step(&mut self, options: &HdpFitOptions) -> Result<()> {
        for j in 0..self.groups.len() {
            self.customer_step(j)?;
            self.table_step(j)?;
        }
        self.dish_parameter_update()?;
        self.update_concentrations(options.update_alpha, options.update_gamma);
        if options.update_prior {
            let params: Vec<&Theta> = self.dishes.iter().map(|d| &d.params).collect();
            self.model = self.model.prior_parameters_update(&params, &mut self.rng);
        }
        self.iteration += 1;
        Ok(())
    }

    pub fn fit(&mut self, options: HdpFitOptions) -> Result<()> {
        self.fit_with_progress(options, |_| {})
    }

    pub fn fit_with_progress(&mut self, options: HdpFitOptions, mut progress: impl FnMut(&str)) -> Result<()> {
        options.validate()?;
        let marks = progress_marks(options.iterations);
        let mut next_mark = 0;
        for t in 1..=options.iterations {
            self.step(&options)?;
            if options.store_samples && (t - 1) % options.thinning == 0 {
                for j in 0..self.groups.len() {
                    let s = self.snapshot(j);
                    self.history[j].push(s);
                }
            }
            if next_mark < marks.len() && t == marks[next_mark] {
                next_mark += 1;
                progress(&format!(
                    "iteration {t}/{} ({}%): tables = {}, dishes = {}, gamma = {:.4}",
                    options.iterations,
                    100 * t / options.iterations,
                    self.total_tables(),
                    self.dishes.len(),
                    self.gamma
                ));
            }
        }
        Ok(())
    }

    /// Probabilities of the customer-step choices for `y` in `group`: one per
    /// existing table, then one for a new table.
    pub fn table_probabilities(&self, group: usize, y: &[f64]) -> Result<Vec<f64>> {
        let g = self.groups.get(group).ok_or(Error::Index { index: group, len: self.groups.len() })?;
        let ln_pred = self.model.ln_predictive(y)?;
        let dl: Vec<f64> = self.dishes.iter().map(|d| self.model.ln_likelihood(y, &d.params)).collect();
        let mut terms: Vec<f64> = self.dishes.iter().zip(&dl).map(|(d, l)| (d.tables as f64).ln() + l).collect();
        terms.push(self.gamma.ln() + ln_pred);
        let mut ln_w: Vec<f64> = g.tables.iter().map(|t| (t.count as f64).ln() + dl[t.dish]).collect();
        ln_w.push(ln_pos(self.alphas[group]) + log_sum_exp(&terms) - (self.total_tables() as f64 + self.gamma).ln());
        Ok(normalise_log_weights(&ln_w))
    }

    pub fn to_record(&self) -> HdpRecord {
        HdpRecord {
            mixing: self.model.md().clone(),
            groups: self.groups.clone(),
            dishes: self.dishes.clone(),
            alphas: self.alphas.clone(),
            alpha_prior: self.alpha_prior,
            gamma: self.gamma,
            gamma_prior: self.gamma_prior,
            m: self.m,
            mh_steps: self.mh_steps,
            iteration: self.iteration,
            diagnostics: self.diagnostics,
            history: self.history.clone(),
        }
    }

    pub fn from_record(record: HdpRecord, registry: &KernelRegistry, rng: RandomSource) -> Result<Self> {
        let model = registry.model(record.mixing)?;
        if record.history.len() != record.groups.len() || record.alphas.len() != record.groups.len() {
            return Err(Error::Config("hdp record has mismatched group counts".into()));
        }
        let state = HdpState {
            model,
            groups: record.groups,
            dishes: record.dishes,
            alphas: record.alphas,
            alpha_prior: record.alpha_prior,
            gamma: record.gamma,
            gamma_prior: record.gamma_prior,
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

/// Posterior summary of one group's mixture density.
pub fn hdp_posterior_summary(
    state: &HdpState,
    group: usize,
    grid: &[f64],
    burnin: usize,
    thinning: usize,
    level: f64,
) -> Result<PosteriorSummaryTable> {
    summarize_history(state.model(), state.history(group)?, grid, burnin, thinning, level)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::kernels::{BetaKernel, GaussianKernel};

    fn groups(vals: &[&[f64]]) -> Vec<Observations> {
        vals.iter().map(|v| Observations::univariate(v).unwrap()).collect()
    }

    #[test]
    fn two_groups_start_with_one_dish() {
        let model = Model::with_defaults(Arc::new(GaussianKernel), 1).unwrap();
        let s = HdpState::initialise(
            groups(&[&[0.0, 1.0], &[2.0]]),
            model,
            AlphaPrior::new(2.0, 4.0).unwrap(),
            AlphaPrior::new(2.0, 4.0).unwrap(),
            RandomSource::new(1),
        )
        .unwrap();
        assert_eq!(s.total_tables(), 2);
        assert_eq!(s.num_dishes(), 1);
        s.validate().unwrap();
    }

    #[test]
    fn bookkeeping_survives_sweeps() {
        let model = Model::with_defaults(Arc::new(BetaKernel), 1).unwrap();
        let mut s = HdpState::initialise(
            groups(&[&[0.1, 0.2, 0.8, 0.9, 0.15], &[0.12, 0.5, 0.55, 0.6]]),
            model,
            AlphaPrior::default(),
            AlphaPrior::default(),
            RandomSource::new(2),
        )
        .unwrap();
        for _ in 0..30 {
            s.step(&HdpFitOptions::new(1)).unwrap();
            s.validate().unwrap();
        }
    }

    #[test]
    fn invalid_group_index() {
        let model = Model::with_defaults(Arc::new(GaussianKernel), 1).unwrap();
        let mut s = HdpState::initialise(
            groups(&[&[0.0, 1.0]]),
            model,
            AlphaPrior::default(),
            AlphaPrior::default(),
            RandomSource::new(3),
        )
        .unwrap();
        s.fit(HdpFitOptions::new(3)).unwrap();
        assert!(matches!(
            hdp_posterior_summary(&s, 1, &[0.0], 0, 1, 0.9),
            Err(Error::Index { index: 1, len: 1 })
        ));
        assert_eq!(hdp_posterior_summary(&s, 0, &[0.0, 1.0], 0, 1, 0.9).unwrap().len(), 2);
    }
}

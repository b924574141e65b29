//! Random measures and posterior summaries.
//!
//! * [`stick_breaking_weights`] and [`StickMeasure`]: truncated stick-breaking
//!   representation `Σ w_k δ_{φ_k}` of a Dirichlet process draw.
//! * [`posterior_clusters`] / [`posterior_function`]: one draw of the
//!   posterior random measure (or mixture density) given a fitted state.
//! * [`posterior_summary`]: pointwise mean, median and equal-tailed credible
//!   band of the mixture density across retained samples.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data::Theta;
use crate::dp::{DpState, RetainedSample};
use crate::error::{Error, Result};
use crate::kernels::Model;
use crate::rng::RandomSource;
use crate::stats::sample_beta;

/// Default bound on the expected stick residual.
pub const DEFAULT_EPS: f64 = 1e-3;

/// `w_k = z_k ∏_{i<k} (1 − z_i)`, for `z_k` in `(0, 1]`.
pub fn stick_breaking_weights(z: &[f64]) -> Result<Vec<f64>> {
    let mut rest = 1.0;
    let mut w = Vec::with_capacity(z.len());
    for (i, &zi) in z.iter().enumerate() {
        if !(zi > 0.0 && zi <= 1.0) {
            return Err(Error::Domain(format!("stick fraction z[{i}] = {zi} is outside (0, 1]")));
        }
        w.push(zi * rest);
        rest *= 1.0 - zi;
    }
    Ok(w)
}

/// Number of sticks `N` so that the expected residual `((c)/(c + 1))^N`
/// with `c = α + n` is at most `eps`.
pub fn truncation_level(alpha: f64, n: usize, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let c = alpha + n as f64;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("alpha + n must be positive, got {c}")));
    }
    let ratio = c / (c + 1.0);
    let level = (eps.ln() / ratio.ln()).ceil();
    Ok((level as usize).max(1))
}

/// A truncated atomic measure `Σ w_k δ_{φ_k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StickMeasure {
    pub z: Vec<f64>,
    pub weights: Vec<f64>,
    pub atoms: Vec<Theta>,
    /// Mass not assigned to any atom, `∏ (1 − z_k)`.
    pub truncation_residual: f64,
}

impl StickMeasure {
    pub fn from_sticks(z: Vec<f64>, atoms: Vec<Theta>) -> Result<Self> {
        if z.len() != atoms.len() {
            return Err(Error::Domain(format!("{} stick fractions for {} atoms", z.len(), atoms.len())));
        }
        let weights = stick_breaking_weights(&z)?;
        let truncation_residual = z.iter().map(|v| 1.0 - v).product();
        Ok(StickMeasure { z, weights, atoms, truncation_residual })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Draw a truncated `DP(α + n, (α G0 + Σ δ_{θ_i}) / (α + n))` measure, where
/// `thetas` holds one parameter per observation (with multiplicity).
pub fn stick_measure(
    model: &Model,
    alpha: f64,
    thetas: &[&Theta],
    eps: f64,
    rng: &mut RandomSource,
) -> Result<StickMeasure> {
    let n = thetas.len();
    let c = alpha + n as f64;
    let level = truncation_level(alpha, n, eps)?;
    let p_fresh = alpha / c;
    let mut z = Vec::with_capacity(level);
    let mut atoms = Vec::with_capacity(level);
    for _ in 0..level {
        // guard against z rounding to exactly 0 or 1
        let zk = sample_beta(rng, 1.0, c).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
        z.push(zk);
        let atom = if n == 0 || rng.uniform() < p_fresh {
            model.prior_draw_one(rng)
        } else {
            thetas[rng.index(n)].clone()
        };
        atoms.push(atom);
    }
    StickMeasure::from_sticks(z, atoms)
}

/// One draw of the posterior random measure given the current state.
pub fn posterior_clusters(state: &DpState, eps: f64, rng: &mut RandomSource) -> Result<StickMeasure> {
    let thetas: Vec<&Theta> = (0..state.data().len()).map(|i| state.theta_of(i)).collect();
    stick_measure(state.model(), state.alpha(), &thetas, eps, rng)
}

/// A mixture density `y ↦ Σ w_k k(y | φ_k)`.
#[derive(Debug, Clone)]
pub struct SampledDensity {
    pub model: Model,
    pub measure: StickMeasure,
}

impl SampledDensity {
    pub fn evaluate(&self, y: &[f64]) -> f64 {
        self.measure
            .weights
            .iter()
            .zip(&self.measure.atoms)
            .map(|(w, a)| w * self.model.likelihood(y, a))
            .sum()
    }

    /// Evaluate at scalar grid values, mapped through the kernel's grid convention.
    pub fn evaluate_grid(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter()
            .map(|&x| grid_point(&self.model, x).map(|y| self.evaluate(&y)))
            .collect()
    }
}

/// One posterior draw of the mixture density, truncated at [`DEFAULT_EPS`].
pub fn posterior_function(state: &DpState, rng: &mut RandomSource) -> Result<SampledDensity> {
    posterior_function_eps(state, DEFAULT_EPS, rng)
}

pub fn posterior_function_eps(state: &DpState, eps: f64, rng: &mut RandomSource) -> Result<SampledDensity> {
    Ok(SampledDensity {
        model: state.model().clone(),
        measure: posterior_clusters(state, eps, rng)?,
    })
}

fn grid_point(model: &Model, x: f64) -> Result<Vec<f64>> {
    model.grid_point(x).ok_or_else(|| {
        Error::Domain(format!("kernel `{}` has no scalar grid for density summaries", model.md().kernel_id))
    })
}

/// Quantile by linear interpolation between order statistics (type 7).
/// `sorted` must be non-empty and ascending.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Pointwise posterior summary of a density on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummaryTable {
    pub x: Vec<f64>,
    pub mean: Vec<f64>,
    pub median: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
}

impl PosteriorSummaryTable {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// CSV with header `x,Mean,Median,Lower,Upper`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "Mean", "Median", "Lower", "Upper"])?;
        for i in 0..self.len() {
            out.write_record([self.x[i], self.mean[i], self.median[i], self.lower[i], self.upper[i]].map(|v| v.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Mixture density `Σ w_c k(x | θ_c)` of one snapshot at each grid point.
pub fn snapshot_density(model: &Model, sample: &RetainedSample, points: &[Vec<f64>]) -> Vec<f64> {
    points
        .iter()
        .map(|y| {
            sample
                .weights
                .iter()
                .zip(&sample.params)
                .map(|(w, p)| w * model.likelihood(y, p))
                .sum()
        })
        .collect()
}

/// Summaries over `history[burnin..]`, keeping every `thinning`-th entry.
pub fn summarize_history(
    model: &Model,
    history: &[RetainedSample],
    grid: &[f64],
    burnin: usize,
    thinning: usize,
    level: f64,
) -> Result<PosteriorSummaryTable> {
    if grid.is_empty() {
        return Err(Error::Domain("grid is empty".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
    }
    if thinning == 0 {
        return Err(Error::Config("thinning must be at least 1".into()));
    }
    if burnin >= history.len() {
        return Err(Error::InsufficientSamples(format!(
            "burnin {burnin} leaves nothing of {} retained samples",
            history.len()
        )));
    }
    let points: Vec<Vec<f64>> = grid.iter().map(|&x| grid_point(model, x)).collect::<Result<_>>()?;
    let kept: Vec<&RetainedSample> = history[burnin..].iter().step_by(thinning).collect();
    let curves: Vec<Vec<f64>> = kept.iter().map(|s| snapshot_density(model, s, &points)).collect();

    let tail = (1.0 - level) / 2.0;
    let g = grid.len();
    let mut table = PosteriorSummaryTable {
        x: grid.to_vec(),
        mean: Vec::with_capacity(g),
        median: Vec::with_capacity(g),
        lower: Vec::with_capacity(g),
        upper: Vec::with_capacity(g),
        level,
    };
    let mut column = Vec::with_capacity(curves.len());
    for j in 0..g {
        column.clear();
        column.extend(curves.iter().map(|c| c[j]));
        column.sort_by(f64::total_cmp);
        table.mean.push(column.iter().sum::<f64>() / column.len() as f64);
        table.median.push(quantile_type7(&column, 0.5));
        table.lower.push(quantile_type7(&column, tail));
        table.upper.push(quantile_type7(&column, 1.0 - tail));
    }
    Ok(table)
}

/// Posterior mean, median and equal-tailed `level` band of the mixture
/// density at each grid point, over the retained history after `burnin`,
/// keeping every `thinning`-th sample. Consumes no randomness.
pub fn posterior_summary(
    state: &DpState,
    grid: &[f64],
    burnin: usize,
    thinning: usize,
    level: f64,
) -> Result<PosteriorSummaryTable> {
    summarize_history(state.model(), state.history(), grid, burnin, thinning, level)
}

/// `count` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count).map(|i| min + (max - min) * i as f64 / (count - 1) as f64).collect(),
    }
}

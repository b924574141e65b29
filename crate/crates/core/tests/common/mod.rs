//! Shared oracles and extension kernels for the integration tests.
//!
//! The oracles here are written independently of the library: straight-line
//! conjugate updates in plain `f64` arithmetic, numerical integration, and
//! exhaustive partition enumeration.

#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use dpmix::kernels::{Conjugacy, Kernel, MixingDistribution, WeibullKernel};
use dpmix::rng::RandomSource;
use dpmix::stats::{ln_gamma_pdf, sample_gamma};
use dpmix::Theta;
use statrs_free::ln_gamma;

/// Lanczos log-gamma, kept separate from the library's implementation.
mod statrs_free {
    pub fn ln_gamma(x: f64) -> f64 {
        const G: f64 = 7.0;
        const C: [f64; 9] = [
            0.999_999_999_999_809_93,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_13,
            -176.615_029_162_140_59,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_571_6e-6,
            1.505_632_735_149_311_6e-7,
        ];
        if x < 0.5 {
            return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - ln_gamma(1.0 - x);
        }
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
    }
}

pub fn lgamma(x: f64) -> f64 {
    ln_gamma(x)
}

// ---------------------------------------------------------------------------
// numerical integration

/// `∫_a^b f` by double-exponential quadrature, split into `pieces` panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            quadrature::integrate(&f, lo, lo + h, 1e-14).integral
        })
        .sum()
}

/// `∫_0^∞ f` via `x = t / (1 − t)`.
pub fn integrate_positive(f: impl Fn(f64) -> f64, pieces: usize) -> f64 {
    integrate(
        |t| {
            if t <= 0.0 || t >= 1.0 {
                return 0.0;
            }
            let x = t / (1.0 - t);
            let v = f(x) / ((1.0 - t) * (1.0 - t));
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        pieces,
    )
}

/// `∫_{-∞}^{∞} f` via `x = c + t / (1 − t²)`.
pub fn integrate_real(f: impl Fn(f64) -> f64, c: f64, pieces: usize) -> f64 {
    integrate(
        |t| {
            if t <= -1.0 || t >= 1.0 {
                return 0.0;
            }
            let d = 1.0 - t * t;
            let x = c + t / d;
            let v = f(x) * (1.0 + t * t) / (d * d);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        -1.0,
        1.0,
        pieces,
    )
}

// ---------------------------------------------------------------------------
// straight-line conjugate updates

/// `(μ_n, κ_n, α_n, β_n)` from raw sums, using the completed-square form
/// `β_n = β0 + ½(Σy² + κ0 μ0² − κ_n μ_n²)`.
pub fn nig_reference(prior: (f64, f64, f64, f64), ys: &[f64]) -> (f64, f64, f64, f64) {
    let (mu0, k0, a0, b0) = prior;
    let n = ys.len() as f64;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for y in ys {
        s1 += y;
        s2 += y * y;
    }
    let kn = k0 + n;
    let mun = (k0 * mu0 + s1) / kn;
    let an = a0 + n / 2.0;
    let bn = b0 + 0.5 * (s2 + k0 * mu0 * mu0 - kn * mun * mun);
    (mun, kn, an, bn)
}

pub type Mat = Vec<Vec<f64>>;

/// `(μ_n, κ_n, ν_n, Φ_n)` with `Φ_n = Φ0 + Σ y yᵀ + κ0 μ0 μ0ᵀ − κ_n μ_n μ_nᵀ`.
pub fn niw_reference(mu0: &[f64], k0: f64, nu0: f64, phi0: &Mat, ys: &[Vec<f64>]) -> (Vec<f64>, f64, f64, Mat) {
    let d = mu0.len();
    let n = ys.len() as f64;
    let kn = k0 + n;
    let mut s1 = vec![0.0; d];
    let mut s2 = vec![vec![0.0; d]; d];
    for y in ys {
        for a in 0..d {
            s1[a] += y[a];
            for b in 0..d {
                s2[a][b] += y[a] * y[b];
            }
        }
    }
    let mun: Vec<f64> = (0..d).map(|a| (k0 * mu0[a] + s1[a]) / kn).collect();
    let mut phin = phi0.clone();
    for a in 0..d {
        for b in 0..d {
            phin[a][b] += s2[a][b] + k0 * mu0[a] * mu0[b] - kn * mun[a] * mun[b];
        }
    }
    (mun, kn, nu0 + n, phin)
}

/// Log marginal likelihood of `ys` under a Normal kernel with NIG prior.
pub fn nig_log_marginal(prior: (f64, f64, f64, f64), ys: &[f64]) -> f64 {
    let (_, k0, a0, b0) = prior;
    let (_, kn, an, bn) = nig_reference(prior, ys);
    let n = ys.len() as f64;
    lgamma(an) - lgamma(a0) + a0 * b0.ln() - an * bn.ln() + 0.5 * (k0 / kn).ln() - 0.5 * n * (2.0 * PI).ln()
}

pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean) * (x - mean) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

pub fn inv_gamma_pdf(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (a * b.ln() - lgamma(a) - (a + 1.0) * x.ln() - b / x).exp()
}

pub fn beta_pdf(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() + lgamma(a + b) - lgamma(a) - lgamma(b)).exp()
}

pub fn poisson_pmf(k: u64, rate: f64) -> f64 {
    (k as f64 * rate.ln() - rate - lgamma(k as f64 + 1.0)).exp()
}

/// `∫∫ N(y | μ, σ²) NIG(μ, σ² | μ0, κ0, α0, β0) dμ dσ²` by nested quadrature.
pub fn nig_predictive_quadrature(prior: (f64, f64, f64, f64), y: f64) -> f64 {
    let (mu0, k0, a0, b0) = prior;
    integrate_positive(
        |s2| {
            let inner = integrate_real(
                |mu| normal_pdf(y, mu, s2) * normal_pdf(mu, mu0, s2 / k0),
                (y + k0 * mu0) / (1.0 + k0),
                4,
            );
            inner * inv_gamma_pdf(s2, a0, b0)
        },
        8,
    )
}

// ---------------------------------------------------------------------------
// partitions

/// All set partitions of `0..n` as restricted-growth label vectors.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            if i == 0 && l > 0 {
                break;
            }
            cur.push(l);
            rec(i + 1, n, cur, max.max(l), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = Vec::new();
    rec(0, n, &mut cur, 0, &mut out);
    out.iter_mut().for_each(|p| *p = canonical(p));
    out.sort();
    out.dedup();
    out
}

/// Relabel by order of first appearance.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// Exact posterior over partitions of `ys` for a DP mixture of Normals with
/// NIG base measure and fixed `α`: `α^K ∏ (n_c − 1)! ∏ m(y_c)`.
pub fn partition_posterior(ys: &[f64], alpha: f64, prior: (f64, f64, f64, f64)) -> Vec<(Vec<usize>, f64)> {
    let parts = set_partitions(ys.len());
    let mut ln_w = Vec::with_capacity(parts.len());
    for p in &parts {
        let k = p.iter().max().unwrap() + 1;
        let mut lw = k as f64 * alpha.ln();
        for c in 0..k {
            let members: Vec<f64> = p.iter().zip(ys).filter(|(l, _)| **l == c).map(|(_, y)| *y).collect();
            lw += lgamma(members.len() as f64) + nig_log_marginal(prior, &members);
        }
        ln_w.push(lw);
    }
    let max = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = ln_w.iter().map(|w| (w - max).exp()).sum();
    parts.into_iter().zip(ln_w).map(|(p, w)| (p, (w - max).exp() / total)).collect()
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Normalised histogram of `values` over `0..=max`.
pub fn histogram(values: &[usize], max: usize) -> Vec<f64> {
    let mut h = vec![0.0; max + 1];
    for &v in values {
        h[v.min(max)] += 1.0;
    }
    let n = values.len() as f64;
    h.iter_mut().for_each(|v| *v /= n);
    h
}

// ---------------------------------------------------------------------------
// concentration reference

/// Straight-line auxiliary-variable update for `α`, using its own Beta
/// draw (ratio of Gammas) and branch selection.
pub fn alpha_update_reference(alpha: f64, a: f64, b: f64, k: f64, n: f64, rng: &mut RandomSource) -> f64 {
    let x = sample_gamma(rng, alpha + 1.0, 1.0);
    let y = sample_gamma(rng, n, 1.0);
    let z = x / (x + y);
    let pi1 = a + k - 1.0;
    let pi2 = n * (b - z.ln());
    let pick_upper = rng.uniform() * (pi1 + pi2) < pi1;
    let shape = if pick_upper { a + k } else { a + k - 1.0 };
    sample_gamma(rng, shape, b - z.ln())
}

/// Exact posterior mean of `α` given `k` clusters among `n` points:
/// `p(α | k) ∝ Gamma(α | a, b) α^k Γ(α) / Γ(α + n)`.
pub fn alpha_posterior_mean(a: f64, b: f64, k: f64, n: f64) -> f64 {
    let ln_post = |x: f64| ln_gamma_pdf(x, a, b) + k * x.ln() + lgamma(x) - lgamma(x + n);
    let z = integrate_positive(|x| ln_post(x).exp(), 16);
    integrate_positive(|x| x * ln_post(x).exp(), 16) / z
}

// ---------------------------------------------------------------------------
// extension kernels, written only against the public kernel interface

/// Poisson kernel with conjugate `Gamma(α0, β0)` base measure (shape–rate).
#[derive(Debug, Clone, Copy, Default)]
pub struct PoissonKernel;

impl PoissonKernel {
    pub const ID: &'static str = "poisson";

    pub fn mixing(a0: f64, b0: f64) -> MixingDistribution {
        MixingDistribution::new(Self::ID, Conjugacy::Conjugate, vec![a0, b0])
    }
}

impl Kernel for PoissonKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        PoissonKernel::mixing(1.0, 1.0)
    }

    fn check_datum(&self, _md: &MixingDistribution, y: &[f64]) -> Result<(), String> {
        if y[0] >= 0.0 && y[0].fract() == 0.0 {
            Ok(())
        } else {
            Err(format!("{} is not a count", y[0]))
        }
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        let rate = theta.scalar(0);
        if !(rate > 0.0) {
            return f64::NEG_INFINITY;
        }
        y[0] * rate.ln() - rate - lgamma(y[0] + 1.0)
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        Theta::scalars(&[sample_gamma(rng, md.g0_priors[0], md.g0_priors[1])])
    }

    fn posterior_draw(&self, md: &MixingDistribution, data: &[&[f64]], rng: &mut RandomSource) -> Option<Theta> {
        let sum: f64 = data.iter().map(|y| y[0]).sum();
        let rate = sample_gamma(rng, md.g0_priors[0] + sum, md.g0_priors[1] + data.len() as f64);
        Some(Theta::scalars(&[rate]))
    }

    fn ln_predictive(&self, md: &MixingDistribution, y: &[f64]) -> Option<f64> {
        let (a0, b0) = (md.g0_priors[0], md.g0_priors[1]);
        let (a, b) = (a0 + y[0], b0 + 1.0);
        Some(a0 * b0.ln() - lgamma(a0) + lgamma(a) - a * b.ln() - lgamma(y[0] + 1.0))
    }
}

/// Gamma kernel `Gamma(y | α, β)` (shape–rate) with independent exponential
/// priors on both parameters, fitted by Metropolis–Hastings.
#[derive(Debug, Clone, Copy, Default)]
pub struct GammaKernel;

impl GammaKernel {
    pub const ID: &'static str = "gamma";

    pub fn mixing(rates: [f64; 2], steps: [f64; 2]) -> MixingDistribution {
        MixingDistribution::new(Self::ID, Conjugacy::NonConjugate, rates.to_vec()).with_mh_step_sizes(steps.to_vec())
    }
}

impl Kernel for GammaKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        GammaKernel::mixing([0.1, 0.1], [0.1, 0.1])
    }

    fn check_datum(&self, _md: &MixingDistribution, y: &[f64]) -> Result<(), String> {
        if y[0] > 0.0 {
            Ok(())
        } else {
            Err("gamma data must be positive".into())
        }
    }

    fn ln_likelihood(&self, _md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        ln_gamma_pdf(y[0], theta.scalar(0), theta.scalar(1))
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        let a = sample_gamma(rng, 1.0, md.g0_priors[0]);
        let b = sample_gamma(rng, 1.0, md.g0_priors[1]);
        Theta::scalars(&[a, b])
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        let (a, b) = (theta.scalar(0), theta.scalar(1));
        if !(a > 0.0 && b > 0.0) {
            return Some(f64::NEG_INFINITY);
        }
        let (ra, rb) = (md.g0_priors[0], md.g0_priors[1]);
        Some(ra.ln() - ra * a + rb.ln() - rb * b)
    }

    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        dpmix::kernels::random_walk(old, &md.mh_step_sizes, &[true, true], rng)
    }
}

/// Weibull kernel for right-censored data: rows are `[time, censored]`,
/// where censored rows contribute the survival function `exp(−t^a / b)`.
/// Base measure, proposals and hyper-parameter updates are the built-in
/// Weibull kernel's.
#[derive(Debug, Clone, Copy, Default)]
pub struct CensoredWeibullKernel;

impl CensoredWeibullKernel {
    pub const ID: &'static str = "weibull-censored";

    /// `hyper = [x_m, k, α0, β0]`.
    pub fn mixing(g0: [f64; 2], alpha: f64, hyper: [f64; 4], steps: [f64; 2]) -> MixingDistribution {
        let mut md = WeibullKernel::mixing(g0, alpha, hyper, steps);
        md.kernel_id = Self::ID.into();
        md
    }

    fn as_weibull(md: &MixingDistribution) -> MixingDistribution {
        let mut w = md.clone();
        w.kernel_id = WeibullKernel::ID.into();
        w
    }
}

impl Kernel for CensoredWeibullKernel {
    fn id(&self) -> &str {
        Self::ID
    }

    fn default_mixing(&self, _dim: usize) -> MixingDistribution {
        CensoredWeibullKernel::mixing([6.0, 2.0], 2.0, [6.0, 2.0, 1.0, 0.5], [0.5, 0.5])
    }

    fn validate(&self, md: &MixingDistribution) -> dpmix::Result<()> {
        WeibullKernel.validate(&CensoredWeibullKernel::as_weibull(md))
    }

    fn data_dim(&self, _md: &MixingDistribution) -> Option<usize> {
        Some(2)
    }

    fn check_datum(&self, _md: &MixingDistribution, y: &[f64]) -> Result<(), String> {
        if !(y[0] > 0.0) {
            return Err("times must be positive".into());
        }
        if y[1] != 0.0 && y[1] != 1.0 {
            return Err("censoring indicator must be 0 or 1".into());
        }
        Ok(())
    }

    fn ln_likelihood(&self, md: &MixingDistribution, y: &[f64], theta: &Theta) -> f64 {
        let (a, b) = (theta.scalar(0), theta.scalar(1));
        if !(a > 0.0 && b > 0.0) {
            return f64::NEG_INFINITY;
        }
        if y[1] == 1.0 {
            -y[0].powf(a) / b
        } else {
            WeibullKernel.ln_likelihood(&CensoredWeibullKernel::as_weibull(md), &y[..1], theta)
        }
    }

    fn prior_draw(&self, md: &MixingDistribution, rng: &mut RandomSource) -> Theta {
        WeibullKernel.prior_draw(&CensoredWeibullKernel::as_weibull(md), rng)
    }

    fn ln_prior_density(&self, md: &MixingDistribution, theta: &Theta) -> Option<f64> {
        WeibullKernel.ln_prior_density(&CensoredWeibullKernel::as_weibull(md), theta)
    }

    fn propose(&self, md: &MixingDistribution, old: &Theta, rng: &mut RandomSource) -> Theta {
        WeibullKernel.propose(&CensoredWeibullKernel::as_weibull(md), old, rng)
    }

    fn update_prior(&self, md: &MixingDistribution, clusters: &[&Theta], rng: &mut RandomSource) -> MixingDistribution {
        let mut out = WeibullKernel.update_prior(&CensoredWeibullKernel::as_weibull(md), clusters, rng);
        out.kernel_id = Self::ID.into();
        out
    }

    /// Density curves are evaluated for uncensored observations.
    fn grid_point(&self, _md: &MixingDistribution, x: f64) -> Option<Vec<f64>> {
        Some(vec![x, 0.0])
    }
}

// ---------------------------------------------------------------------------
// synthetic data

pub fn normal_mixture_sample(rng: &mut RandomSource, n_each: usize, means: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for &m in means {
        for _ in 0..n_each {
            out.push(m + dpmix::stats::sample_std_normal(rng));
        }
    }
    out
}

pub fn beta_sample(rng: &mut RandomSource, n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n).map(|_| dpmix::stats::sample_beta(rng, a, b)).collect()
}

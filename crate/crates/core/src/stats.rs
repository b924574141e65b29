//! Probability distributions used by the kernels and samplers.
//!
//! Gamma-type distributions use the **shape–rate** parameterisation
//! throughout: `Gamma(a, b)` has density proportional to `x^(a-1) e^(-b x)`
//! and mean `a / b`. `InverseGamma(a, b)` is the law of `1 / X` for
//! `X ~ Gamma(a, b)`.
//!
//! The Weibull family here is `k(y | a, b) = (a / b) y^(a-1) exp(-y^a / b)`;
//! `b` is *not* the conventional scale (that would be `b^(1/a)`).
//!
//! All densities are computed on the log scale and return `-inf` outside the
//! support.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Beta as BetaDist, Distribution, Gamma as GammaDist, Poisson as PoissonDist, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

// ---------------------------------------------------------------------------
// scalar log densities

pub fn ln_normal(x: f64, mean: f64, var: f64) -> f64 {
    if !(var > 0.0) {
        return f64::NEG_INFINITY;
    }
    let d = x - mean;
    -0.5 * (LN_2PI + var.ln() + d * d / var)
}

pub fn ln_gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return f64::NEG_INFINITY;
    }
    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

pub fn ln_inv_gamma_pdf(x: f64, shape: f64, scale: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return f64::NEG_INFINITY;
    }
    shape * scale.ln() - ln_gamma(shape) - (shape + 1.0) * x.ln() - scale / x
}

pub fn ln_beta_pdf(x: f64, a: f64, b: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return f64::NEG_INFINITY;
    }
    let lb = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    (a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - lb
}

/// Beta on `[0, upper]` with mean `mean` and precision `precision`.
pub fn ln_beta_mean_precision(x: f64, mean: f64, precision: f64, upper: f64) -> f64 {
    if !(mean > 0.0 && mean < upper && precision > 0.0) || !(0.0..=upper).contains(&x) {
        return f64::NEG_INFINITY;
    }
    let a = mean * precision / upper;
    let b = precision * (1.0 - mean / upper);
    let lb = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    (a - 1.0) * x.ln() + (b - 1.0) * (upper - x).ln() - lb - (precision - 1.0) * upper.ln()
}

/// Weibull in the `(a / b) y^(a-1) exp(-y^a / b)` parameterisation.
pub fn ln_weibull(y: f64, a: f64, b: f64) -> f64 {
    if !(y > 0.0 && a > 0.0 && b > 0.0) || !y.is_finite() {
        return f64::NEG_INFINITY;
    }
    a.ln() - b.ln() + (a - 1.0) * y.ln() - y.powf(a) / b
}

pub fn ln_student_t(y: f64, df: f64, loc: f64, scale: f64) -> f64 {
    let z = (y - loc) / scale;
    ln_gamma((df + 1.0) / 2.0)
        - ln_gamma(df / 2.0)
        - 0.5 * (df * PI).ln()
        - scale.ln()
        - (df + 1.0) / 2.0 * (z * z / df).ln_1p()
}

pub fn ln_pareto(x: f64, x_m: f64, k: f64) -> f64 {
    if x < x_m {
        return f64::NEG_INFINITY;
    }
    k.ln() + k * x_m.ln() - (k + 1.0) * x.ln()
}

pub fn ln_uniform(x: f64, lower: f64, upper: f64) -> f64 {
    if x < lower || x > upper {
        return f64::NEG_INFINITY;
    }
    -(upper - lower).ln()
}

pub fn ln_poisson(x: f64, rate: f64) -> f64 {
    if x < 0.0 || x.fract() != 0.0 || !(rate > 0.0) {
        return f64::NEG_INFINITY;
    }
    x * rate.ln() - rate - ln_gamma(x + 1.0)
}

/// Density of the location-scale Student-t: `(1/scale) t_df((y - loc)/scale)`.
pub fn student_t_ls_pdf(y: f64, df: f64, loc: f64, scale: f64) -> Result<f64> {
    if !(df > 0.0) {
        return Err(Error::param(format!("student-t df must be positive, got {df}")));
    }
    if !(scale > 0.0) {
        return Err(Error::param(format!("student-t scale must be positive, got {scale}")));
    }
    Ok(ln_student_t(y, df, loc, scale).exp())
}

// ---------------------------------------------------------------------------
// matrix helpers

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub(crate) fn ln_det_spd(m: &DMatrix<f64>) -> Option<f64> {
    let chol = m.clone().cholesky()?;
    Some(2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>())
}

pub(crate) fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let chol = m.clone().cholesky()?;
    Some(symmetrize(&chol.inverse()))
}

/// True when `m` is square, symmetric and positive definite.
pub fn is_spd(m: &DMatrix<f64>) -> bool {
    if !m.is_square() || m.nrows() == 0 {
        return false;
    }
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    if (m - m.transpose()).iter().any(|v| v.abs() > 1e-9 * scale) {
        return false;
    }
    m.clone().cholesky().is_some()
}

/// Log of the multivariate gamma function `Γ_d(x)`.
pub fn ln_multigamma(x: f64, d: usize) -> f64 {
    let df = d as f64;
    df * (df - 1.0) / 4.0 * PI.ln() + (1..=d).map(|j| ln_gamma(x + (1.0 - j as f64) / 2.0)).sum::<f64>()
}

pub fn ln_mvnormal(x: &DVector<f64>, mean: &DVector<f64>, cov: &DMatrix<f64>) -> f64 {
    let chol = match cov.clone().cholesky() {
        Some(c) => c,
        None => return f64::NEG_INFINITY,
    };
    let d = x.len() as f64;
    let diff = x - mean;
    let z = chol.l_dirty().solve_lower_triangular(&diff).expect("cholesky factor is invertible");
    let ln_det = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    -0.5 * (d * LN_2PI + ln_det + z.norm_squared())
}

/// Multivariate Student-t with `df` degrees of freedom and shape matrix `shape`.
pub fn ln_mvstudent_t(x: &DVector<f64>, df: f64, loc: &DVector<f64>, shape: &DMatrix<f64>) -> f64 {
    let chol = match shape.clone().cholesky() {
        Some(c) => c,
        None => return f64::NEG_INFINITY,
    };
    let d = x.len() as f64;
    let diff = x - loc;
    let z = chol.l_dirty().solve_lower_triangular(&diff).expect("cholesky factor is invertible");
    let ln_det = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    ln_gamma((df + d) / 2.0)
        - ln_gamma(df / 2.0)
        - d / 2.0 * (df * PI).ln()
        - 0.5 * ln_det
        - (df + d) / 2.0 * (z.norm_squared() / df).ln_1p()
}

pub fn ln_inverse_wishart(x: &DMatrix<f64>, df: f64, scale: &DMatrix<f64>) -> f64 {
    let d = x.nrows();
    let (ln_det_x, x_inv) = match (ln_det_spd(x), spd_inverse(x)) {
        (Some(l), Some(i)) => (l, i),
        _ => return f64::NEG_INFINITY,
    };
    let ln_det_s = match ln_det_spd(scale) {
        Some(l) => l,
        None => return f64::NEG_INFINITY,
    };
    let trace = (scale * x_inv).trace();
    let df_d = d as f64;
    df / 2.0 * ln_det_s
        - df * df_d / 2.0 * std::f64::consts::LN_2
        - ln_multigamma(df / 2.0, d)
        - (df + df_d + 1.0) / 2.0 * ln_det_x
        - 0.5 * trace
}

// ---------------------------------------------------------------------------
// samplers

pub fn sample_std_normal(rng: &mut RandomSource) -> f64 {
    rng.sample(StandardNormal)
}

pub fn sample_normal(rng: &mut RandomSource, mean: f64, sd: f64) -> f64 {
    mean + sd * sample_std_normal(rng)
}

/// Gamma with shape–rate parameters.
pub fn sample_gamma(rng: &mut RandomSource, shape: f64, rate: f64) -> f64 {
    GammaDist::new(shape, 1.0 / rate)
        .expect("gamma parameters validated by caller")
        .sample(rng)
}

pub fn sample_inv_gamma(rng: &mut RandomSource, shape: f64, scale: f64) -> f64 {
    1.0 / sample_gamma(rng, shape, scale)
}

pub fn sample_beta(rng: &mut RandomSource, a: f64, b: f64) -> f64 {
    BetaDist::new(a, b).expect("beta parameters validated by caller").sample(rng)
}

pub fn sample_pareto(rng: &mut RandomSource, x_m: f64, k: f64) -> f64 {
    x_m * rng.uniform().powf(-1.0 / k)
}

pub fn sample_weibull(rng: &mut RandomSource, a: f64, b: f64) -> f64 {
    let e = -rng.uniform().ln();
    (b * e).powf(1.0 / a)
}

pub fn sample_poisson(rng: &mut RandomSource, rate: f64) -> f64 {
    PoissonDist::new(rate).expect("poisson rate validated by caller").sample(rng)
}

pub fn sample_mvnormal(rng: &mut RandomSource, mean: &DVector<f64>, cov: &DMatrix<f64>) -> Result<DVector<f64>> {
    let chol = cov
        .clone()
        .cholesky()
        .ok_or_else(|| Error::MatrixDomain("covariance is not positive definite".into()))?;
    let z = DVector::from_fn(mean.len(), |_, _| sample_std_normal(rng));
    Ok(mean + chol.l() * z)
}

/// Wishart draw by the Bartlett decomposition.
pub fn sample_wishart(rng: &mut RandomSource, df: f64, scale: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = scale.nrows();
    if !(df > d as f64 - 1.0) {
        return Err(Error::param(format!("wishart df must exceed d - 1 = {}, got {df}", d as f64 - 1.0)));
    }
    let l = scale
        .clone()
        .cholesky()
        .ok_or_else(|| Error::MatrixDomain("wishart scale is not positive definite".into()))?
        .l();
    let mut a = DMatrix::zeros(d, d);
    for i in 0..d {
        // chi-square with df - i degrees of freedom
        a[(i, i)] = (2.0 * sample_gamma(rng, (df - i as f64) / 2.0, 1.0)).sqrt();
        for j in 0..i {
            a[(i, j)] = sample_std_normal(rng);
        }
    }
    let la = l * a;
    Ok(symmetrize(&(&la * la.transpose())))
}

/// Inverse-Wishart draw: Bartlett Wishart at `(df, scale⁻¹)`, then inverted.
pub fn sample_inverse_wishart(rng: &mut RandomSource, df: f64, scale: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !is_spd(scale) {
        return Err(Error::MatrixDomain("inverse-wishart scale must be symmetric positive definite".into()));
    }
    let scale_inv = spd_inverse(scale).expect("checked spd");
    let w = sample_wishart(rng, df, &scale_inv)?;
    spd_inverse(&w).ok_or_else(|| Error::MatrixDomain("wishart draw is singular".into()))
}

// ---------------------------------------------------------------------------
// DistSpec

/// A value in the support of some [`DistSpec`].
#[derive(Debug, Clone, PartialEq)]
pub enum Variate {
    Scalar(f64),
    Vector(DVector<f64>),
    Matrix(DMatrix<f64>),
}

impl Variate {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Variate::Scalar(v) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Normal { mean: f64, var: f64 },
    MultivariateNormal { mean: DVector<f64>, cov: DMatrix<f64> },
    /// Shape–rate.
    Gamma { shape: f64, rate: f64 },
    InverseGamma { shape: f64, scale: f64 },
    Beta { a: f64, b: f64 },
    BetaMeanPrecision { mean: f64, precision: f64, upper: f64 },
    /// `(a / b) y^(a-1) exp(-y^a / b)`.
    Weibull { a: f64, b: f64 },
    StudentT { df: f64, loc: f64, scale: f64 },
    InverseWishart { df: f64, scale: DMatrix<f64> },
    Pareto { x_m: f64, k: f64 },
    Uniform { lower: f64, upper: f64 },
    Poisson { rate: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive and finite, got {v}")))
    }
}

impl DistSpec {
    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        let d = DistSpec::Gamma { shape, rate };
        d.validate()?;
        Ok(d)
    }

    pub fn pareto(x_m: f64, k: f64) -> Result<Self> {
        let d = DistSpec::Pareto { x_m, k };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DistSpec::Normal { mean, var } => {
                if !mean.is_finite() {
                    return Err(Error::param("normal mean must be finite"));
                }
                positive("normal variance", *var)
            }
            DistSpec::MultivariateNormal { mean, cov } => {
                if cov.nrows() != mean.len() || !is_spd(cov) {
                    return Err(Error::MatrixDomain("covariance must be d×d symmetric positive definite".into()));
                }
                Ok(())
            }
            DistSpec::Gamma { shape, rate } => {
                positive("gamma shape", *shape)?;
                positive("gamma rate", *rate)
            }
            DistSpec::InverseGamma { shape, scale } => {
                positive("inverse-gamma shape", *shape)?;
                positive("inverse-gamma scale", *scale)
            }
            DistSpec::Beta { a, b } => {
                positive("beta a", *a)?;
                positive("beta b", *b)
            }
            DistSpec::BetaMeanPrecision { mean, precision, upper } => {
                positive("beta upper bound", *upper)?;
                positive("beta precision", *precision)?;
                if !(*mean > 0.0 && mean < upper) {
                    return Err(Error::param(format!("beta mean must lie in (0, {upper}), got {mean}")));
                }
                Ok(())
            }
            DistSpec::Weibull { a, b } => {
                positive("weibull a", *a)?;
                positive("weibull b", *b)
            }
            DistSpec::StudentT { df, loc, scale } => {
                positive("student-t df", *df)?;
                positive("student-t scale", *scale)?;
                if !loc.is_finite() {
                    return Err(Error::param("student-t location must be finite"));
                }
                Ok(())
            }
            DistSpec::InverseWishart { df, scale } => {
                if !is_spd(scale) {
                    return Err(Error::MatrixDomain("inverse-wishart scale must be symmetric positive definite".into()));
                }
                if !(*df > scale.nrows() as f64 - 1.0) {
                    return Err(Error::param("inverse-wishart df must exceed d - 1"));
                }
                Ok(())
            }
            DistSpec::Pareto { x_m, k } => {
                positive("pareto x_m", *x_m)?;
                positive("pareto k", *k)
            }
            DistSpec::Uniform { lower, upper } => {
                if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
                    return Err(Error::param("uniform bounds must satisfy lower < upper"));
                }
                Ok(())
            }
            DistSpec::Poisson { rate } => positive("poisson rate", *rate),
        }
    }

    fn is_multivariate(&self) -> bool {
        matches!(self, DistSpec::MultivariateNormal { .. } | DistSpec::InverseWishart { .. })
    }

    /// Log-density (log-mass for Poisson) at `x`; `-inf` outside the support.
    pub fn logpdf(&self, x: &Variate) -> Result<f64> {
        self.validate()?;
        match (self, x) {
            (DistSpec::MultivariateNormal { mean, cov }, Variate::Vector(v)) => {
                if v.len() != mean.len() {
                    return Err(Error::Domain("dimension mismatch".into()));
                }
                Ok(ln_mvnormal(v, mean, cov))
            }
            (DistSpec::InverseWishart { df, scale }, Variate::Matrix(m)) => {
                if m.shape() != scale.shape() {
                    return Err(Error::Domain("dimension mismatch".into()));
                }
                Ok(ln_inverse_wishart(m, *df, scale))
            }
            (_, Variate::Scalar(v)) if !self.is_multivariate() => Ok(self.logpdf_scalar_unchecked(*v)),
            _ => Err(Error::Domain("variate kind does not match distribution family".into())),
        }
    }

    /// Scalar convenience for [`DistSpec::logpdf`].
    pub fn logpdf_scalar(&self, x: f64) -> Result<f64> {
        self.logpdf(&Variate::Scalar(x))
    }

    fn logpdf_scalar_unchecked(&self, x: f64) -> f64 {
        match *self {
            DistSpec::Normal { mean, var } => ln_normal(x, mean, var),
            DistSpec::Gamma { shape, rate } => ln_gamma_pdf(x, shape, rate),
            DistSpec::InverseGamma { shape, scale } => ln_inv_gamma_pdf(x, shape, scale),
            DistSpec::Beta { a, b } => ln_beta_pdf(x, a, b),
            DistSpec::BetaMeanPrecision { mean, precision, upper } => {
                ln_beta_mean_precision(x, mean, precision, upper)
            }
            DistSpec::Weibull { a, b } => ln_weibull(x, a, b),
            DistSpec::StudentT { df, loc, scale } => ln_student_t(x, df, loc, scale),
            DistSpec::Pareto { x_m, k } => ln_pareto(x, x_m, k),
            DistSpec::Uniform { lower, upper } => ln_uniform(x, lower, upper),
            DistSpec::Poisson { rate } => ln_poisson(x, rate),
            DistSpec::MultivariateNormal { .. } | DistSpec::InverseWishart { .. } => unreachable!(),
        }
    }

    /// `n` independent draws.
    pub fn sample(&self, rng: &mut RandomSource, n: usize) -> Result<Vec<Variate>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    /// `n` scalar draws; errors for multivariate families.
    pub fn sample_scalars(&self, rng: &mut RandomSource, n: usize) -> Result<Vec<f64>> {
        if self.is_multivariate() {
            return Err(Error::Domain("multivariate family has no scalar draws".into()));
        }
        Ok(self
            .sample(rng, n)?
            .into_iter()
            .map(|v| v.as_scalar().expect("scalar family"))
            .collect())
    }

    fn sample_one(&self, rng: &mut RandomSource) -> Result<Variate> {
        let v = match self {
            DistSpec::Normal { mean, var } => sample_normal(rng, *mean, var.sqrt()),
            DistSpec::Gamma { shape, rate } => sample_gamma(rng, *shape, *rate),
            DistSpec::InverseGamma { shape, scale } => sample_inv_gamma(rng, *shape, *scale),
            DistSpec::Beta { a, b } => sample_beta(rng, *a, *b),
            DistSpec::BetaMeanPrecision { mean, precision, upper } => {
                let a = mean * precision / upper;
                let b = precision * (1.0 - mean / upper);
                upper * sample_beta(rng, a, b)
            }
            DistSpec::Weibull { a, b } => sample_weibull(rng, *a, *b),
            DistSpec::StudentT { df, loc, scale } => {
                let z = sample_std_normal(rng);
                let g = sample_gamma(rng, df / 2.0, df / 2.0);
                loc + scale * z / g.sqrt()
            }
            DistSpec::Pareto { x_m, k } => sample_pareto(rng, *x_m, *k),
            DistSpec::Uniform { lower, upper } => lower + (upper - lower) * rng.uniform(),
            DistSpec::Poisson { rate } => sample_poisson(rng, *rate),
            DistSpec::MultivariateNormal { mean, cov } => return Ok(Variate::Vector(sample_mvnormal(rng, mean, cov)?)),
            DistSpec::InverseWishart { df, scale } => {
                return Ok(Variate::Matrix(sample_inverse_wishart(rng, *df, scale)?))
            }
        };
        Ok(Variate::Scalar(v))
    }
}

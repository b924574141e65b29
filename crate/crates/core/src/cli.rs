//! Batch front end: CSV ingestion, fit configuration, model artifacts and the
//! `fit` / `summarize` / `predict` / `hdp-fit` / `hdp-summarize` commands.
//!
//! Every command is a plain function so it can be driven from tests and from
//! the `dpmix` binary alike.

use std::collections::HashMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::Observations;
use crate::dp::{AlphaPrior, DpRecord, DpState, FitOptions};
use crate::error::{Error, Result};
use crate::hdp::{hdp_posterior_summary, HdpFitOptions, HdpRecord, HdpState};
use crate::kernels::{Conjugacy, KernelRegistry, Model};
use crate::measure::{linspace, posterior_summary, PosteriorSummaryTable};
use crate::rng::RandomSource;

/// Version written into every artifact.
pub const FORMAT_VERSION: u32 = 1;

/// Acceptance rate Metropolis–Hastings step sizes should be tuned towards.
pub const TARGET_ACCEPTANCE: f64 = 0.234;

/// Which CSV columns to read. Entries are header names or 1-based indices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec(pub Vec<String>);

impl ColumnSpec {
    /// All columns except the group column, if any.
    pub fn all() -> Self {
        ColumnSpec(Vec::new())
    }

    pub fn parse(spec: &str) -> Self {
        ColumnSpec(spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
    }

    fn resolve(&self, headers: &[String], exclude: Option<usize>) -> Result<Vec<usize>> {
        let idx: Vec<usize> = if self.0.is_empty() {
            (0..headers.len()).filter(|&i| Some(i) != exclude).collect()
        } else {
            self.0.iter().map(|c| resolve_column(c, headers)).collect::<Result<_>>()?
        };
        if idx.is_empty() {
            return Err(Error::Data("column selection is empty".into()));
        }
        Ok(idx)
    }
}

fn resolve_column(c: &str, headers: &[String]) -> Result<usize> {
    if let Some(i) = headers.iter().position(|h| h == c) {
        return Ok(i);
    }
    match c.parse::<usize>() {
        Ok(i) if i >= 1 && i <= headers.len() => Ok(i - 1),
        _ => Err(Error::Data(format!("no column `{c}` (columns: {})", headers.join(", ")))),
    }
}

/// Per-column affine map to zero mean and unit standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Standardization {
    /// Column means and sample standard deviations of `data`.
    pub fn fit(data: &Observations) -> Result<Self> {
        let n = data.len();
        if n < 2 {
            return Err(Error::Data("standardization needs at least two rows".into()));
        }
        let mut means = Vec::with_capacity(data.dim());
        let mut sds = Vec::with_capacity(data.dim());
        for j in 0..data.dim() {
            let col = data.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            let sd = var.sqrt();
            if !(sd > 0.0) {
                return Err(Error::Data(format!("column {} is constant and cannot be standardized", j + 1)));
            }
            means.push(mean);
            sds.push(sd);
        }
        Ok(Standardization { means, sds })
    }

    pub fn apply(&self, data: &Observations) -> Result<Observations> {
        if data.dim() != self.means.len() {
            return Err(Error::Data(format!(
                "transform has {} columns, data has {}",
                self.means.len(),
                data.dim()
            )));
        }
        let rows: Vec<Vec<f64>> = data
            .rows()
            .map(|r| r.iter().enumerate().map(|(j, v)| (v - self.means[j]) / self.sds[j]).collect())
            .collect();
        Observations::from_rows(&rows)
    }

    /// Map a summary on the model scale back to the original scale of a
    /// univariate transform: `x ↦ x·sd + mean`, densities divided by `sd`.
    pub fn unscale_summary(&self, table: &PosteriorSummaryTable) -> Result<PosteriorSummaryTable> {
        if self.means.len() != 1 {
            return Err(Error::Config("original-scale summaries need univariate data".into()));
        }
        let (m, s) = (self.means[0], self.sds[0]);
        let d = |v: &Vec<f64>| v.iter().map(|x| x / s).collect();
        Ok(PosteriorSummaryTable {
            x: table.x.iter().map(|x| x * s + m).collect(),
            mean: d(&table.mean),
            median: d(&table.median),
            lower: d(&table.lower),
            upper: d(&table.upper),
            level: table.level,
        })
    }
}

/// Data read from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub columns: Vec<String>,
    pub data: Observations,
    pub transform: Option<Standardization>,
}

fn parse_cell(cell: &str, row: usize, col: &str) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Data(format!("row {row}, column `{col}`: `{cell}` is not a finite number")))
}

struct RawTable {
    headers: Vec<String>,
    records: Vec<csv::StringRecord>,
}

fn read_table(path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.iter().map(str::to_string).collect();
    let records = reader.records().collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(RawTable { headers, records })
}

fn select_rows(table: &RawTable, cols: &[usize], filter: impl Fn(usize) -> bool) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (r, rec) in table.records.iter().enumerate() {
        if !filter(r) {
            continue;
        }
        let row: Vec<f64> = cols
            .iter()
            .map(|&c| parse_cell(rec.get(c).unwrap_or(""), r + 1, &table.headers[c]))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Read the selected numeric columns of a CSV file with a header row.
///
/// Rows are numbered from 1 after the header in error messages. With
/// `scale`, every column is standardized and the transform returned.
pub fn ingest_csv(path: &Path, columns: &ColumnSpec, scale: bool) -> Result<Ingested> {
    let table = read_table(path)?;
    let cols = columns.resolve(&table.headers, None)?;
    let rows = select_rows(&table, &cols, |_| true)?;
    if rows.is_empty() {
        return Err(Error::Data(format!("{} contains no data rows", path.display())));
    }
    let data = Observations::from_rows(&rows)?;
    let names = cols.iter().map(|&c| table.headers[c].clone()).collect();
    finish_ingest(names, data, scale)
}

fn finish_ingest(columns: Vec<String>, data: Observations, scale: bool) -> Result<Ingested> {
    if scale {
        let t = Standardization::fit(&data)?;
        Ok(Ingested { columns, data: t.apply(&data)?, transform: Some(t) })
    } else {
        Ok(Ingested { columns, data, transform: None })
    }
}

/// Data split into groups by the value of `group_col`, in order of first
/// appearance. Standardization, if requested, uses the pooled data.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedIngest {
    pub columns: Vec<String>,
    pub group_names: Vec<String>,
    pub groups: Vec<Observations>,
    pub transform: Option<Standardization>,
}

pub fn ingest_grouped_csv(path: &Path, columns: &ColumnSpec, group_col: &str, scale: bool) -> Result<GroupedIngest> {
    let table = read_table(path)?;
    let g = resolve_column(group_col, &table.headers)?;
    let cols = columns.resolve(&table.headers, Some(g))?;
    if cols.contains(&g) {
        return Err(Error::Config("the group column cannot also be a data column".into()));
    }
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut member: Vec<usize> = Vec::with_capacity(table.records.len());
    for rec in &table.records {
        let key = rec.get(g).unwrap_or("").to_string();
        let next = names.len();
        let j = *index.entry(key.clone()).or_insert_with(|| {
            names.push(key);
            next
        });
        member.push(j);
    }
    if names.is_empty() {
        return Err(Error::Data(format!("{} contains no data rows", path.display())));
    }
    let mut transform = None;
    if scale {
        let pooled = Observations::from_rows(&select_rows(&table, &cols, |_| true)?)?;
        transform = Some(Standardization::fit(&pooled)?);
    }
    let mut groups = Vec::with_capacity(names.len());
    for j in 0..names.len() {
        let rows = select_rows(&table, &cols, |r| member[r] == j)?;
        let obs = Observations::from_rows(&rows)?;
        groups.push(match &transform {
            Some(t) => t.apply(&obs)?,
            None => obs,
        });
    }
    Ok(GroupedIngest {
        columns: cols.iter().map(|&c| table.headers[c].clone()).collect(),
        group_names: names,
        groups,
        transform,
    })
}

fn default_kernel() -> String {
    "gaussian".into()
}

fn default_prior() -> [f64; 2] {
    [2.0, 4.0]
}

fn default_one() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_m() -> usize {
    crate::dp::DEFAULT_AUXILIARY
}

/// Everything needed to reproduce a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    #[serde(default = "default_kernel")]
    pub kernel: String,
    /// Overrides the kernel's conjugacy class (e.g. a non-conjugate Gaussian).
    #[serde(default)]
    pub conjugacy: Option<Conjugacy>,
    #[serde(default)]
    pub g0_priors: Option<Vec<f64>>,
    #[serde(default)]
    pub mh_step_sizes: Option<Vec<f64>>,
    #[serde(default)]
    pub hyper_prior_parameters: Option<Vec<f64>>,
    #[serde(default)]
    pub fixed_constants: Option<Vec<f64>>,
    #[serde(default = "default_prior")]
    pub alpha_prior: [f64; 2],
    /// Prior on the top-level concentration `γ` (hierarchical fits).
    #[serde(default = "default_prior")]
    pub gamma_prior: [f64; 2],
    /// Hold `α` at this value instead of sampling it.
    #[serde(default)]
    pub fixed_alpha: Option<f64>,
    #[serde(default)]
    pub iterations: usize,
    #[serde(default = "default_one")]
    pub thinning: usize,
    #[serde(default = "default_true")]
    pub store_samples: bool,
    #[serde(default)]
    pub update_prior: bool,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_one")]
    pub mh_steps: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub scale: bool,
    #[serde(default)]
    pub columns: Vec<String>,
    #[serde(default)]
    pub group_col: Option<String>,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            kernel: default_kernel(),
            conjugacy: None,
            g0_priors: None,
            mh_step_sizes: None,
            hyper_prior_parameters: None,
            fixed_constants: None,
            alpha_prior: default_prior(),
            gamma_prior: default_prior(),
            fixed_alpha: None,
            iterations: 0,
            thinning: 1,
            store_samples: true,
            update_prior: false,
            m: default_m(),
            mh_steps: 1,
            seed: None,
            scale: false,
            columns: Vec::new(),
            group_col: None,
        }
    }
}

impl FitConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<u64> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.thinning == 0 {
            return Err(Error::Config("thinning must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if self.mh_steps == 0 {
            return Err(Error::Config("mh_steps must be at least 1".into()));
        }
        if let Some(a) = self.fixed_alpha {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::Config(format!("fixed_alpha must be finite and non-negative, got {a}")));
            }
        }
        let prior = |p: [f64; 2], what: &str| {
            AlphaPrior::new(p[0], p[1]).map_err(|_| Error::Config(format!("{what} needs two positive values")))
        };
        prior(self.alpha_prior, "alpha_prior")?;
        prior(self.gamma_prior, "gamma_prior")?;
        self.seed.ok_or_else(|| Error::Config("a seed is required".into()))
    }

    /// The kernel's default model for `dim` columns with this config's
    /// overrides applied.
    pub fn model(&self, registry: &KernelRegistry, dim: usize) -> Result<Model> {
        let kernel = registry.get(&self.kernel)?;
        let mut md = kernel.default_mixing(dim);
        if let Some(c) = self.conjugacy {
            md.conjugacy = c;
            if c == Conjugacy::Conjugate {
                md.mh_step_sizes.clear();
            }
        }
        if let Some(v) = &self.g0_priors {
            md.g0_priors = v.clone();
        }
        if let Some(v) = &self.mh_step_sizes {
            md.mh_step_sizes = v.clone();
        }
        if let Some(v) = &self.hyper_prior_parameters {
            md.hyper_prior_parameters = v.clone();
        }
        if let Some(v) = &self.fixed_constants {
            md.fixed_constants = v.clone();
        }
        Model::new(kernel, md)
    }

    fn alpha_prior(&self) -> AlphaPrior {
        AlphaPrior { a: self.alpha_prior[0], b: self.alpha_prior[1] }
    }

    fn gamma_prior(&self) -> AlphaPrior {
        AlphaPrior { a: self.gamma_prior[0], b: self.gamma_prior[1] }
    }
}

/// A fitted model on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format_version: u32,
    pub config: FitConfig,
    pub columns: Vec<String>,
    pub transform: Option<Standardization>,
    pub state: DpRecord,
}

/// A fitted hierarchical model on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HdpArtifact {
    pub format_version: u32,
    pub config: FitConfig,
    pub columns: Vec<String>,
    pub group_names: Vec<String>,
    pub transform: Option<Standardization>,
    pub state: HdpRecord,
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Config(format!("artifact format version {v} is not supported (expected {FORMAT_VERSION})")));
    }
    Ok(())
}

impl ModelArtifact {
    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let a: ModelArtifact = read_json(path)?;
        check_version(a.format_version)?;
        Ok(a)
    }

    /// Rebuild the sampler state with a fresh random source.
    pub fn state(&self, registry: &KernelRegistry, seed: u64) -> Result<DpState> {
        DpState::from_record(self.state.clone(), registry, RandomSource::new(seed))
    }
}

impl HdpArtifact {
    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let a: HdpArtifact = read_json(path)?;
        check_version(a.format_version)?;
        Ok(a)
    }

    pub fn state(&self, registry: &KernelRegistry, seed: u64) -> Result<HdpState> {
        HdpState::from_record(self.state.clone(), registry, RandomSource::new(seed))
    }
}

/// Outcome of a fit, for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub clusters: usize,
    pub alpha: Vec<f64>,
    pub gamma: Option<f64>,
    /// Metropolis–Hastings acceptance rate, for kernels that use it.
    pub acceptance_rate: Option<f64>,
    pub retained: usize,
}

impl FitReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("clusters: {}", self.clusters)];
        match self.alpha.as_slice() {
            [a] => out.push(format!("alpha: {a}")),
            many => out.push(format!(
                "alpha: {}",
                many.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
            )),
        }
        if let Some(g) = self.gamma {
            out.push(format!("gamma: {g}"));
        }
        out.push(format!("retained samples: {}", self.retained));
        if let Some(r) = self.acceptance_rate {
            out.push(format!(
                "metropolis-hastings acceptance rate: {r:.4} (target around {TARGET_ACCEPTANCE}; adjust mh_step_sizes to move it)"
            ));
        }
        out
    }
}

fn build_dp(config: &FitConfig, registry: &KernelRegistry, data: Observations) -> Result<DpState> {
    let seed = config.validate()?;
    let model = config.model(registry, data.dim())?;
    let mut state = DpState::initialise(data, model, config.alpha_prior(), RandomSource::new(seed))?
        .with_auxiliary(config.m)?
        .with_mh_steps(config.mh_steps)?;
    if let Some(a) = config.fixed_alpha {
        state.set_alpha(a)?;
    }
    Ok(state)
}

/// Fit a model to the CSV at `data_path` and write the artifact to `out`.
pub fn cmd_fit(
    config: &FitConfig,
    registry: &KernelRegistry,
    data_path: &Path,
    out: &Path,
    progress: impl FnMut(&str),
) -> Result<FitReport> {
    config.validate()?;
    let ingest = ingest_csv(data_path, &ColumnSpec(config.columns.clone()), config.scale)?;
    let mut state = build_dp(config, registry, ingest.data)?;
    let options = FitOptions {
        iterations: config.iterations,
        thinning: config.thinning,
        store_samples: config.store_samples,
        update_prior: config.update_prior,
        update_alpha: config.fixed_alpha.is_none(),
    };
    state.fit_with_progress(options, progress)?;
    let report = FitReport {
        clusters: state.num_clusters(),
        alpha: vec![state.alpha()],
        gamma: None,
        acceptance_rate: state.model().uses_mh().then(|| state.diagnostics().rate()).flatten(),
        retained: state.history().len(),
    };
    ModelArtifact {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        columns: ingest.columns,
        transform: ingest.transform,
        state: state.to_record(),
    }
    .save(out)?;
    Ok(report)
}

/// Evaluation grid: `min:max:count` or an explicit comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Range { min: f64, max: f64, count: usize },
    Points(Vec<f64>),
}

impl GridSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::Config(format!("malformed grid `{spec}`; use min:max:count or v1,v2,..."));
        if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
            let [min, max, count] = parts[..] else { return Err(bad()) };
            let (min, max): (f64, f64) = (min.parse().map_err(|_| bad())?, max.parse().map_err(|_| bad())?);
            let count: usize = count.parse().map_err(|_| bad())?;
            if count == 0 || !min.is_finite() || !max.is_finite() || max < min {
                return Err(bad());
            }
            Ok(GridSpec::Range { min, max, count })
        } else {
            let pts: Vec<f64> = spec
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if pts.is_empty() || pts.iter().any(|v| !v.is_finite()) {
                return Err(bad());
            }
            Ok(GridSpec::Points(pts))
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            GridSpec::Range { min, max, count } => linspace(*min, *max, *count),
            GridSpec::Points(p) => p.clone(),
        }
    }
}

/// Options shared by the summary commands.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryOptions {
    pub grid: GridSpec,
    pub burnin: usize,
    pub thinning: usize,
    pub level: f64,
    /// Emit on the original data scale when the fit was standardized.
    pub original_scale: bool,
}

fn write_summary(table: &PosteriorSummaryTable, path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    table.write_csv(BufWriter::new(file))
}

fn maybe_unscale(
    table: PosteriorSummaryTable,
    transform: &Option<Standardization>,
    original: bool,
) -> Result<PosteriorSummaryTable> {
    match (original, transform) {
        (true, Some(t)) => t.unscale_summary(&table),
        _ => Ok(table),
    }
}

/// Write the posterior summary table of a fitted artifact to `out` as CSV.
pub fn cmd_summarize(
    artifact_path: &Path,
    registry: &KernelRegistry,
    options: &SummaryOptions,
    out: &Path,
) -> Result<usize> {
    let artifact = ModelArtifact::load(artifact_path)?;
    let state = artifact.state(registry, 0)?;
    let table = posterior_summary(&state, &options.grid.points(), options.burnin, options.thinning, options.level)?;
    let table = maybe_unscale(table, &artifact.transform, options.original_scale)?;
    write_summary(&table, out)?;
    Ok(table.len())
}

/// Predict labels for the rows of `data_path` and write `row,label` CSV
/// (both 1-based). Returns the number of labels in use after prediction.
pub fn cmd_predict(
    artifact_path: &Path,
    registry: &KernelRegistry,
    data_path: &Path,
    seed: u64,
    out: &Path,
) -> Result<usize> {
    let artifact = ModelArtifact::load(artifact_path)?;
    let state = artifact.state(registry, seed)?;
    let ingest = ingest_csv(data_path, &ColumnSpec(artifact.columns.clone()), false)?;
    let data = match &artifact.transform {
        Some(t) => t.apply(&ingest.data)?,
        None => ingest.data,
    };
    let mut rng = RandomSource::new(seed);
    let pred = state.cluster_label_predict(&data, &mut rng)?;
    let mut w = csv::Writer::from_path(out)?;
    w.write_record(["row", "label"])?;
    for (i, l) in pred.labels.iter().enumerate() {
        w.write_record([(i + 1).to_string(), (l + 1).to_string()])?;
    }
    w.flush()?;
    Ok(pred.num_labels)
}

/// Fit a hierarchical model to grouped CSV data.
pub fn cmd_hdp_fit(
    config: &FitConfig,
    registry: &KernelRegistry,
    data_path: &Path,
    out: &Path,
    progress: impl FnMut(&str),
) -> Result<FitReport> {
    let seed = config.validate()?;
    let group_col = config
        .group_col
        .as_deref()
        .ok_or_else(|| Error::Config("hierarchical fits need a group column".into()))?;
    let ingest = ingest_grouped_csv(data_path, &ColumnSpec(config.columns.clone()), group_col, config.scale)?;
    let model = config.model(registry, ingest.groups[0].dim())?;
    let mut state = HdpState::initialise(
        ingest.groups,
        model,
        config.gamma_prior(),
        config.alpha_prior(),
        RandomSource::new(seed),
    )?
    .with_auxiliary(config.m)?
    .with_mh_steps(config.mh_steps)?;
    if let Some(a) = config.fixed_alpha {
        for j in 0..state.num_groups() {
            state.set_alpha(j, a)?;
        }
    }
    let options = HdpFitOptions {
        iterations: config.iterations,
        thinning: config.thinning,
        store_samples: config.store_samples,
        update_prior: config.update_prior,
        update_alpha: config.fixed_alpha.is_none(),
        update_gamma: true,
    };
    state.fit_with_progress(options, progress)?;
    let report = FitReport {
        clusters: state.num_dishes(),
        alpha: state.alphas().to_vec(),
        gamma: Some(state.gamma()),
        acceptance_rate: state.model().uses_mh().then(|| state.diagnostics().rate()).flatten(),
        retained: state.history(0)?.len(),
    };
    HdpArtifact {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        columns: ingest.columns,
        group_names: ingest.group_names,
        transform: ingest.transform,
        state: state.to_record(),
    }
    .save(out)?;
    Ok(report)
}

/// Write one summary CSV per group into `out_dir` (`group_1.csv`, ...).
pub fn cmd_hdp_summarize(
    artifact_path: &Path,
    registry: &KernelRegistry,
    options: &SummaryOptions,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let artifact = HdpArtifact::load(artifact_path)?;
    let state = artifact.state(registry, 0)?;
    fs::create_dir_all(out_dir)?;
    let grid = options.grid.points();
    let mut written = Vec::new();
    for j in 0..state.num_groups() {
        let table = hdp_posterior_summary(&state, j, &grid, options.burnin, options.thinning, options.level)?;
        let table = maybe_unscale(table, &artifact.transform, options.original_scale)?;
        let path = out_dir.join(format!("group_{}.csv", j + 1));
        write_summary(&table, &path)?;
        written.push(path);
    }
    Ok(written)
}

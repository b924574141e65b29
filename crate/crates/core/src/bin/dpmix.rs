use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dpmix::cli::{
    cmd_fit, cmd_hdp_fit, cmd_hdp_summarize, cmd_predict, cmd_summarize, FitConfig, GridSpec, SummaryOptions,
};
use dpmix::{Error, KernelRegistry, Result};

#[derive(Parser)]
#[command(name = "dpmix", version, about = "Dirichlet process mixture models from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a DP mixture to a CSV file and save the model artifact.
    Fit {
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Posterior density summary of a fitted model on a grid.
    Summarize {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        summary: SummaryArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict cluster labels for new observations.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a hierarchical DP mixture to grouped CSV data.
    HdpFit {
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma_prior: Option<Vec<f64>>,
    },
    /// One posterior density summary per group of a hierarchical fit.
    HdpSummarize {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        summary: SummaryArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Output artifact (JSON).
    #[arg(long)]
    out: PathBuf,
    /// JSON fit configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    thinning: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    update_prior: bool,
    /// Gamma(a, b) prior on alpha, shape and rate.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha_prior: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    g0_priors: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    mh_step_sizes: Option<Vec<f64>>,
    /// Auxiliary parameters per non-conjugate reassignment.
    #[arg(long)]
    m: Option<usize>,
    /// Standardize every column before fitting.
    #[arg(long)]
    scale: bool,
    /// Column names or 1-based indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    #[arg(long)]
    group_col: Option<String>,
    /// Print progress every 10% of iterations.
    #[arg(long)]
    progress: bool,
}

#[derive(Args)]
struct SummaryArgs {
    /// `min:max:count` or `v1,v2,...`
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[arg(long, default_value_t = 0)]
    burnin: usize,
    #[arg(long, default_value_t = 1)]
    thinning: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Map the grid and densities back to the unstandardized data scale.
    #[arg(long)]
    original_scale: bool,
}

impl FitArgs {
    fn config(&self) -> Result<FitConfig> {
        let mut c = match &self.config {
            Some(p) => FitConfig::from_json_file(p)?,
            None => FitConfig::default(),
        };
        if let Some(v) = &self.kernel {
            c.kernel = v.clone();
        }
        if let Some(v) = self.iterations {
            c.iterations = v;
        }
        if let Some(v) = self.thinning {
            c.thinning = v;
        }
        if let Some(v) = self.seed {
            c.seed = Some(v);
        }
        if self.update_prior {
            c.update_prior = true;
        }
        if let Some(v) = &self.alpha_prior {
            c.alpha_prior = pair(v, "--alpha-prior")?;
        }
        if let Some(v) = &self.g0_priors {
            c.g0_priors = Some(v.clone());
        }
        if let Some(v) = &self.mh_step_sizes {
            c.mh_step_sizes = Some(v.clone());
        }
        if let Some(v) = self.m {
            c.m = v;
        }
        if self.scale {
            c.scale = true;
        }
        if let Some(v) = &self.columns {
            c.columns = v.clone();
        }
        if let Some(v) = &self.group_col {
            c.group_col = Some(v.clone());
        }
        Ok(c)
    }
}

fn pair(v: &[f64], flag: &str) -> Result<[f64; 2]> {
    match v {
        [a, b] => Ok([*a, *b]),
        _ => Err(Error::Config(format!("{flag} takes two values a,b"))),
    }
}

impl SummaryArgs {
    fn options(&self) -> Result<SummaryOptions> {
        Ok(SummaryOptions {
            grid: GridSpec::parse(&self.grid)?,
            burnin: self.burnin,
            thinning: self.thinning,
            level: self.level,
            original_scale: self.original_scale,
        })
    }
}

fn progress_sink(enabled: bool) -> impl FnMut(&str) {
    move |line: &str| {
        if enabled {
            eprintln!("{line}");
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let registry = KernelRegistry::builtin();
    match cli.command {
        Command::Fit { fit } => {
            let config = fit.config()?;
            let report = cmd_fit(&config, &registry, &fit.data, &fit.out, progress_sink(fit.progress))?;
            report.lines().iter().for_each(|l| println!("{l}"));
        }
        Command::Summarize { model, summary, out } => {
            let rows = cmd_summarize(&model, &registry, &summary.options()?, &out)?;
            println!("wrote {rows} rows to {}", out.display());
        }
        Command::Predict { model, data, seed, out } => {
            let k = cmd_predict(&model, &registry, &data, seed, &out)?;
            println!("labels in use: {k}");
        }
        Command::HdpFit { fit, gamma_prior } => {
            let mut config = fit.config()?;
            if let Some(v) = gamma_prior {
                config.gamma_prior = pair(&v, "--gamma-prior")?;
            }
            let report = cmd_hdp_fit(&config, &registry, &fit.data, &fit.out, progress_sink(fit.progress))?;
            report.lines().iter().for_each(|l| println!("{l}"));
        }
        Command::HdpSummarize { model, summary, out_dir } => {
            let files = cmd_hdp_summarize(&model, &registry, &summary.options()?, &out_dir)?;
            for f in files {
                println!("wrote {}", f.display());
            }
        }
    }
    Ok(())
}

fn report(err: &Error) -> ExitCode {
    let class = err.class();
    eprintln!("error class={} code={}: {err}", class.as_str(), class.exit_code());
    ExitCode::from(class.exit_code() as u8)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

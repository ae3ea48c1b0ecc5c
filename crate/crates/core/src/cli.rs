//! Command-line surface: every command turns a [`RunConfig`] into a
//! [`Table`] and writes it as CSV or JSON.

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::dft::Path;
use crate::error::Result;
use crate::estimators::{self, DEFAULT_BINS};
use crate::montecarlo::{Study, DEFAULT_REPLICATES, DEFAULT_SEED};
use crate::output::{Format, Table};
use crate::sampler::{self, RngStream, GENERATOR_NAME};
use crate::spectral::SpectralModel;

#[derive(Debug, Parser)]
#[command(
    name = "longmem",
    version,
    about = "Long-memory series from circulant convolution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandLine,
}

#[derive(Debug, Subcommand)]
pub enum CommandLine {
    /// One realization: noise, series, cosine and standardized forms.
    Generate(RunArgs),
    /// Frequency grid, density and operator first row.
    Spectrum(RunArgs),
    /// Ranked eigenvalues with the eigenvalue-derived estimates.
    Eigen(RunArgs),
    /// Pooled histogram of standardized replicates.
    Hist(RunArgs),
    /// Eigenvalue estimates against measured means and CVs.
    Study(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Spectral slope, in [0, 10].
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Grid parameter; the series length is n (odd) or n + 1 (even).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file, or `-` for stdout.
    #[arg(long, default_value = "-")]
    pub output: String,
    #[arg(long, env = "LONGMEM_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Use the dense O(n^2) transform and convolution everywhere.
    #[arg(long)]
    pub dense_oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Generate,
    Spectrum,
    Eigen,
    Hist,
    Study,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Spectrum => "spectrum",
            Command::Eigen => "eigen",
            Command::Hist => "hist",
            Command::Study => "study",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub beta: f64,
    pub n: usize,
    pub seed: u64,
    pub replicates: usize,
    pub bins: usize,
    pub format: Format,
    pub output: String,
    pub workers: usize,
    pub path: Path,
}

impl RunConfig {
    pub fn new(command: Command, beta: f64, n: usize) -> Self {
        Self {
            command,
            beta,
            n,
            seed: DEFAULT_SEED,
            replicates: DEFAULT_REPLICATES,
            bins: DEFAULT_BINS,
            format: Format::Csv,
            output: "-".into(),
            workers: 1,
            path: Path::Fast,
        }
    }

    fn study(&self) -> Study {
        Study::new(self.beta, self.n)
            .replicates(self.replicates)
            .seed(self.seed)
            .workers(self.workers)
            .path(self.path)
    }

    fn table<S: Into<String>>(&self, columns: impl IntoIterator<Item = S>) -> Table {
        let mut t = Table::new(columns);
        t.meta("longmem", crate::output::FORMAT_VERSION)
            .meta("command", self.command.name())
            .meta("beta", self.beta)
            .meta("n", self.n)
            .meta("seed", self.seed)
            .meta("replicates", self.replicates)
            .meta("bins", self.bins)
            .meta("workers", self.workers)
            .meta(
                "path",
                if self.path == Path::Dense {
                    "dense"
                } else {
                    "fast"
                },
            )
            .meta("generator", GENERATOR_NAME);
        t
    }
}

impl From<CommandLine> for RunConfig {
    fn from(cmd: CommandLine) -> Self {
        let (command, args) = match cmd {
            CommandLine::Generate(a) => (Command::Generate, a),
            CommandLine::Spectrum(a) => (Command::Spectrum, a),
            CommandLine::Eigen(a) => (Command::Eigen, a),
            CommandLine::Hist(a) => (Command::Hist, a),
            CommandLine::Study(a) => (Command::Study, a),
        };
        Self {
            command,
            beta: args.beta,
            n: args.n,
            seed: args.seed,
            replicates: args.replicates,
            bins: args.bins,
            format: args.format,
            output: args.output,
            workers: args.workers as usize,
            path: if args.dense_oracle {
                Path::Dense
            } else {
                Path::Fast
            },
        }
    }
}

pub fn build_table(cfg: &RunConfig) -> Result<Table> {
    match cfg.command {
        Command::Generate => generate_table(cfg),
        Command::Spectrum => spectrum_table(cfg),
        Command::Eigen => eigen_table(cfg),
        Command::Hist => hist_table(cfg),
        Command::Study => study_table(cfg),
    }
}

pub fn execute(cfg: &RunConfig) -> Result<()> {
    build_table(cfg)?.write_to(&cfg.output, cfg.format)
}

fn generate_table(cfg: &RunConfig) -> Result<Table> {
    let model = SpectralModel::with_path(cfg.beta, cfg.n, cfg.path)?;
    let mut rng = RngStream::new(cfg.seed, 0);
    let s = sampler::generate_with(&model, &mut rng, cfg.path)?;
    let mut t = cfg.table(["index", "epsilon", "series", "cosvec", "standardized"]);
    for i in 0..s.series.len() {
        t.push_row(vec![
            i.into(),
            s.epsilon[i].into(),
            s.series[i].into(),
            s.cosvec[i].into(),
            s.standardized[i].into(),
        ]);
    }
    Ok(t)
}

fn spectrum_table(cfg: &RunConfig) -> Result<Table> {
    let model = SpectralModel::with_path(cfg.beta, cfg.n, cfg.path)?;
    let mut t = cfg.table(["frequency", "density", "first_row"]);
    let columns = model
        .grid()
        .frequencies()
        .iter()
        .zip(model.density())
        .zip(model.first_row());
    for ((&f, &d), &r) in columns {
        t.push_row(vec![f.into(), d.into(), r.into()]);
    }
    Ok(t)
}

fn eigen_table(cfg: &RunConfig) -> Result<Table> {
    let model = SpectralModel::with_path(cfg.beta, cfg.n, cfg.path)?;
    let mut t = cfg.table(["rank", "eigenvalue", "log10_rank", "log10_eigenvalue"]);
    t.summary = Some(json!(model.eigen_report()));
    for (i, &lambda) in model.eigenvalues().iter().enumerate() {
        let rank = i + 1;
        t.push_row(vec![
            rank.into(),
            lambda.into(),
            (rank as f64).log10().into(),
            lambda.log10().into(),
        ]);
    }
    Ok(t)
}

fn hist_table(cfg: &RunConfig) -> Result<Table> {
    let hist = cfg.study().histogram(cfg.bins)?;
    let mut t = cfg.table(["bin_left", "bin_right", "density"]);
    let fit = estimators::fit_alpha_from_histogram(&hist).ok();
    t.summary = Some(json!({ "sample_count": hist.sample_count(), "fit_alpha": fit }));
    for (w, d) in hist.edges().windows(2).zip(hist.densities()) {
        t.push_row(vec![w[0].into(), w[1].into(), d.into()]);
    }
    Ok(t)
}

fn study_table(cfg: &RunConfig) -> Result<Table> {
    let report = cfg.study().run()?;
    let mut t = cfg.table([
        "beta",
        "statistic",
        "eigenvalue_estimate",
        "measured_mean",
        "measured_cv",
    ]);
    t.summary = Some(json!({ "eigen": report.eigen }));
    let rows = [
        ("d", report.eigen.d_est, report.d),
        ("alpha", report.eigen.alpha_est, report.alpha),
        ("variance", report.eigen.var_est, report.variance),
    ];
    for (name, estimate, measured) in rows {
        t.push_row(vec![
            cfg.beta.into(),
            name.into(),
            estimate.into(),
            measured.mean.into(),
            measured.cv.into(),
        ]);
    }
    Ok(t)
}

//! Argument parsing and dispatch for the `rdos` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rdos_core::{BandwidthConvention, Method};

use crate::{
    open_output, run_eval, run_gen, run_graph_dump, run_score, run_sweep, run_validate_bound, run_validate_uniform,
    BoundGridConfig, CliError, CliResult, GenConfig, GenVariant, OutputMode, RunConfig, SweepConfig,
    UniformCheckConfig,
};

#[derive(Debug, Parser)]
#[command(name = "rdos", version, about = "Kernel-density outlier scoring on CSV data")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every point; with --tau, add a 0/1 flag column.
    Score(ScoreArgs),
    /// Write the top-n points in rank order.
    Rank(RankArgs),
    /// ROC curve and AUC on a labeled file.
    Eval(ScoreArgs),
    /// AUC for every (k, method) pair on a labeled file.
    Sweep(SweepArgs),
    /// Generate a synthetic dataset with planted outliers.
    Gen(GenArgs),
    /// Monte Carlo checks of the score's behavior.
    Validate(ValidateArgs),
    /// Dump the k-NN graph as `src dst distance` lines.
    GraphDump(GraphArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Rdos,
    Odin,
    Lof,
    Inflo,
    Mnn,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        use rdos_core::BaselineMethod as B;
        match m {
            MethodArg::Rdos => Method::Rdos,
            MethodArg::Odin => Method::Baseline(B::Odin),
            MethodArg::Lof => Method::Baseline(B::Lof),
            MethodArg::Inflo => Method::Baseline(B::Inflo),
            MethodArg::Mnn => Method::Baseline(B::Mnn),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Paper,
    Standard,
}

impl From<ConventionArg> for BandwidthConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => BandwidthConvention::Paper,
            ConventionArg::Standard => BandwidthConvention::Standard,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "rdos")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 21)]
    pub k: usize,
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
    #[arg(long, value_enum, default_value = "paper")]
    pub convention: ConventionArg,
    /// Min-max scale every feature to [0, 1] before scoring.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub normalize: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn config(&self, mode: OutputMode) -> RunConfig {
        RunConfig {
            input: self.input.clone(),
            method: self.method.into(),
            k: self.k,
            h: self.h,
            convention: self.convention.into(),
            mode,
            normalize: self.normalize,
            output: self.out.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub common: Common,
    /// Flag points whose score exceeds this; must be > 1.
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub top_n: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "rdos,lof,inflo,odin,mnn")]
    pub methods: Vec<MethodArg>,
    #[arg(long = "k-values", value_delimiter = ',', default_value = "5,10,15,20,25,30")]
    pub k_values: Vec<usize>,
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
    #[arg(long, value_enum, default_value = "paper")]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub normalize: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    TwoGaussians,
    Cosine,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points per cluster, or along the curve.
    #[arg(long)]
    pub n: Option<usize>,
    /// Noise variance.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Leave out the planted outliers.
    #[arg(long)]
    pub no_outliers: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(subcommand)]
    pub which: ValidateCommand,
}

#[derive(Debug, Subcommand)]
pub enum ValidateCommand {
    /// Mean interior score on uniform data, one row per seed.
    Uniform {
        #[arg(long, default_value_t = 5000)]
        n_points: usize,
        #[arg(long, default_value_t = 21)]
        k: usize,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, value_enum, default_value = "paper")]
        convention: ConventionArg,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// First seed; runs use seed, seed + 1, ...
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical false-alarm rate against its bound over a parameter grid.
    Bound {
        #[arg(long, value_delimiter = ',', default_value = "1.5,2,3")]
        gamma: Vec<f64>,
        #[arg(long = "s-size", value_delimiter = ',', default_value = "10,30")]
        s_size: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        d: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5")]
        h: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
        r: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 21)]
    pub k: usize,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub normalize: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn execute(cli: Cli) -> CliResult {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    }

    match cli.command {
        Command::Score(a) => {
            let mode = a.tau.map_or(OutputMode::Plain, OutputMode::Threshold);
            let cfg = a.common.config(mode);
            run_score(&cfg, &mut open_output(cfg.output.as_deref())?)
        }
        Command::Rank(a) => {
            let cfg = a.common.config(OutputMode::TopN(a.top_n));
            run_score(&cfg, &mut open_output(cfg.output.as_deref())?)
        }
        Command::Eval(a) => {
            if a.tau.is_some() {
                return Err(CliError::Usage("eval takes no --tau".into()));
            }
            let cfg = a.common.config(OutputMode::Plain);
            let auc = run_eval(&cfg, &mut open_output(cfg.output.as_deref())?)?;
            eprintln!("auc={}", crate::format_sig(auc));
            Ok(())
        }
        Command::Sweep(a) => {
            let cfg = SweepConfig {
                input: a.input,
                methods: a.methods.into_iter().map(Method::from).collect(),
                k_values: a.k_values,
                h: a.h,
                convention: a.convention.into(),
                normalize: a.normalize,
            };
            run_sweep(&cfg, &mut open_output(a.out.as_deref())?)
        }
        Command::Gen(a) => {
            let cfg = GenConfig {
                variant: match a.variant {
                    VariantArg::TwoGaussians => GenVariant::TwoGaussians,
                    VariantArg::Cosine => GenVariant::Cosine,
                },
                seed: a.seed,
                n: a.n,
                noise_sigma2: a.noise,
                outliers: !a.no_outliers,
            };
            run_gen(&cfg, &mut open_output(a.out.as_deref())?)
        }
        Command::Validate(v) => match v.which {
            ValidateCommand::Uniform {
                n_points,
                k,
                h,
                convention,
                seeds,
                seed,
                out,
            } => {
                let cfg = UniformCheckConfig {
                    n_points,
                    k,
                    h,
                    convention: convention.into(),
                    seeds,
                    first_seed: seed,
                };
                run_validate_uniform(&cfg, &mut open_output(out.as_deref())?)
            }
            ValidateCommand::Bound {
                gamma,
                s_size,
                d,
                h,
                r,
                trials,
                seed,
                out,
            } => {
                let cfg = BoundGridConfig {
                    gammas: gamma,
                    s_sizes: s_size,
                    dims: d,
                    hs: h,
                    rs: r,
                    trials,
                    seed,
                };
                let violations = run_validate_bound(&cfg, &mut open_output(out.as_deref())?)?;
                if violations > 0 {
                    eprintln!("{violations} cell(s) exceeded the bound");
                }
                Ok(())
            }
        },
        Command::GraphDump(a) => run_graph_dump(&a.input, a.k, a.normalize, &mut open_output(a.out.as_deref())?),
    }
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        // downstream closed early, as with `| head`
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

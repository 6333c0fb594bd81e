use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use junta_lab::harness::{
    exit_code, run_experiment, summary_json, write_csv, ExperimentConfig, ExperimentKind, Target,
};
use junta_lab::{Error, Result};

/// Monte Carlo experiments for Fourier-sampling junta testing and learning.
///
/// Rows are written as CSV (stdout unless --out is given) and the summary as
/// JSON (stderr, or a `.summary.json` sidecar next to --out).
#[derive(Parser, Debug)]
#[command(name = "junta-lab", version)]
struct Cli {
    /// TOML experiment config; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// CSV output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (1 = sequential).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Failure probability of the reported Chernoff interval.
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// FS junta tester against juntas, parities or addressing instances.
    TestJunta(Params),
    /// Two-stage FS + EX junta learner.
    LearnJunta(Params),
    /// Collision distinguisher between the accept and reject families.
    LbCollision(Params),
    /// Feature-histogram TV estimate between the two families.
    LbTv(Params),
    /// Scenario I vs II distinguisher.
    Scenario(Params),
    /// Chi-square check of the FS sampler against the exact spectrum.
    FsDist(Params),
}

#[derive(Args, Debug, Default)]
struct Params {
    #[arg(long)]
    target: Option<String>,
    #[arg(short, long)]
    k: Option<usize>,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(short, long)]
    r: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Transcript length N for lb-collision and lb-tv.
    #[arg(long)]
    draws: Option<usize>,
    /// Scenario distinguisher constant c.
    #[arg(short, long)]
    c: Option<f64>,
    /// Learner example-cap constant C.
    #[arg(long = "big-c")]
    big_c: Option<f64>,
    /// FS draws per fs-dist trial.
    #[arg(long)]
    fs_draws: Option<u64>,
    /// Significance level for fs-dist.
    #[arg(long)]
    alpha: Option<f64>,
}

impl Command {
    fn split(self) -> (ExperimentKind, Params) {
        match self {
            Command::TestJunta(p) => (ExperimentKind::TestJunta, p),
            Command::LearnJunta(p) => (ExperimentKind::LearnJunta, p),
            Command::LbCollision(p) => (ExperimentKind::LbCollision, p),
            Command::LbTv(p) => (ExperimentKind::LbTv, p),
            Command::Scenario(p) => (ExperimentKind::Scenario, p),
            Command::FsDist(p) => (ExperimentKind::FsDist, p),
        }
    }
}

fn build_config(cli: Cli) -> Result<ExperimentConfig> {
    let from_file = cli
        .config
        .as_deref()
        .map(ExperimentConfig::load)
        .transpose()?;
    let (mut cfg, params) = match (from_file, cli.command.map(Command::split)) {
        (Some(cfg), Some((kind, p))) => {
            if cfg.kind != kind {
                return Err(Error::InvalidParameter(format!(
                    "config is for `{}` but the subcommand is `{}`",
                    cfg.kind, kind
                )));
            }
            (cfg, p)
        }
        (Some(cfg), None) => (cfg, Params::default()),
        (None, Some((kind, p))) => (ExperimentConfig::new(kind), p),
        (None, None) => {
            return Err(Error::InvalidParameter(
                "give a subcommand or --config".into(),
            ))
        }
    };
    macro_rules! set {
        ($($field:ident <- $value:expr),* $(,)?) => {
            $(if let Some(v) = $value { cfg.$field = v; })*
        };
    }
    set!(seed <- cli.seed, trials <- cli.trials, delta <- cli.delta);
    set!(
        out <- cli.out.map(Some),
        threads <- cli.threads.map(Some),
        k <- params.k.map(Some),
        n <- params.n.map(Some),
        r <- params.r.map(Some),
        eps <- params.eps.map(Some),
        draws <- params.draws.map(Some),
        c <- params.c.map(Some),
        big_c <- params.big_c.map(Some),
        fs_draws <- params.fs_draws.map(Some),
        alpha <- params.alpha.map(Some),
    );
    if let Some(t) = params.target {
        cfg.target = Some(t.parse::<Target>()?);
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = build_config(cli)?;
    let out = run_experiment(&cfg)?;
    let summary = summary_json(&out.summary);
    if cfg.out.is_some() {
        io::stdout().write_all(summary.as_bytes())?;
    } else {
        write_csv(&out, io::stdout().lock())?;
        io::stderr().write_all(summary.as_bytes())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("junta-lab: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

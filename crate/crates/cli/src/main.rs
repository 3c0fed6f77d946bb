use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fracnoise_cli::{preset, run_experiment, Command, ExperimentSpec, PRESETS};

#[derive(Parser)]
#[command(name = "fracnoise", version, about = "Wave-packet carpets and fractal noise on tight-binding chains")]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Sub {
    /// Eigenvalues and on-site potential.
    Spectrum,
    /// Space-time carpet as a PGM image.
    Carpet,
    /// One slice of P(x, t) along --axis.
    Slice,
    /// Box-counting dimension of a slice.
    Fracdim,
    /// D1 and D2 from entropy and participation over Fibonacci sizes.
    Multifractal,
    /// Return probability P0(t) and its running time average C(t).
    ReturnProb,
    /// Mean-square displacement.
    Msd,
    /// Run a named preset; `--list` prints the catalog.
    Preset {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

/// Every flag maps onto the config key of the same name.
#[derive(Args, Default)]
struct Flags {
    /// key=value file applied before the other flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n: Option<String>,
    /// zero | quasiperiodic | file:<path> (two-column x, eps TSV)
    #[arg(long, global = true)]
    potential: Option<String>,
    /// Chain of F(k+1) sites with M = F(k).
    #[arg(long = "fib-index", global = true)]
    fib_index: Option<String>,
    /// Quasiperiodic numerator M.
    #[arg(long, global = true)]
    m: Option<String>,
    /// local:<x0> | uniform | eigen-uniform | gaussian:<sigma2>[@<center>]
    #[arg(long, global = true)]
    init: Option<String>,
    #[arg(long, global = true)]
    t0: Option<String>,
    #[arg(long, global = true)]
    tmax: Option<String>,
    #[arg(long, global = true)]
    dt: Option<String>,
    /// space:<t0> | time:<x0> | diagonal
    #[arg(long, global = true)]
    axis: Option<String>,
    #[arg(long = "box-a", global = true)]
    box_a: Option<String>,
    /// Comma-separated box multipliers.
    #[arg(long = "box-b", global = true)]
    box_b: Option<String>,
    /// linear | sqrt | log[:<floor>]
    #[arg(long, global = true)]
    mapping: Option<String>,
    /// 8 | 16
    #[arg(long, global = true)]
    depth: Option<String>,
    #[arg(long, global = true)]
    origin: Option<String>,
    /// Fit window <lo>,<hi>.
    #[arg(long, global = true)]
    fit: Option<String>,
    /// Admissible revival periods <lo>,<hi>.
    #[arg(long, global = true)]
    period: Option<String>,
    /// Comma-separated Fibonacci indices.
    #[arg(long, global = true)]
    sizes: Option<String>,
    /// Comma-separated t<value> | tN | tN2/4 | avg
    #[arg(long = "eval-time", global = true)]
    eval_time: Option<String>,
    #[arg(long, global = true)]
    hurst: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Prefix of artifact file names.
    #[arg(long = "name", id = "spec-name", global = true)]
    spec_name: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        [
            ("n", &self.n),
            ("potential", &self.potential),
            ("fib-index", &self.fib_index),
            ("m", &self.m),
            ("init", &self.init),
            ("t0", &self.t0),
            ("tmax", &self.tmax),
            ("dt", &self.dt),
            ("axis", &self.axis),
            ("box-a", &self.box_a),
            ("box-b", &self.box_b),
            ("mapping", &self.mapping),
            ("depth", &self.depth),
            ("origin", &self.origin),
            ("fit", &self.fit),
            ("period", &self.period),
            ("sizes", &self.sizes),
            ("eval-time", &self.eval_time),
            ("hurst", &self.hurst),
            ("seed", &self.seed),
            ("out", &self.out),
            ("threads", &self.threads),
            ("name", &self.spec_name),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }

    fn apply(&self, spec: &mut ExperimentSpec) -> Result<()> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            spec.apply_config(&text, path)?;
        }
        for (k, v) in self.pairs() {
            spec.set(k, v).with_context(|| format!("--{k}"))?;
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    let specs = match &cli.command {
        Sub::Preset { list: true, .. } => {
            let mut out = std::io::stdout().lock();
            for (name, what) in PRESETS {
                writeln!(out, "{name:<14} {what}")?;
            }
            return Ok(());
        }
        Sub::Preset { name: None, .. } => anyhow::bail!("preset needs a name; see `fracnoise preset --list`"),
        Sub::Preset { name: Some(name), .. } => {
            let mut specs = preset(name)?;
            for s in &mut specs {
                cli.flags.apply(s)?;
            }
            specs
        }
        other => {
            let command = match other {
                Sub::Spectrum => Command::Spectrum,
                Sub::Carpet => Command::Carpet,
                Sub::Slice => Command::Slice,
                Sub::Fracdim => Command::Fracdim,
                Sub::Multifractal => Command::Multifractal,
                Sub::ReturnProb => Command::ReturnProb,
                Sub::Msd => Command::Msd,
                Sub::Preset { .. } => unreachable!(),
            };
            let mut spec = ExperimentSpec::new(command);
            cli.flags.apply(&mut spec)?;
            spec.command = command;
            vec![spec]
        }
    };
    if let Some(t) = specs[0].threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring worker threads")?;
    }
    for spec in &specs {
        let summary = run_experiment(spec).with_context(|| format!("experiment '{}'", spec.name))?;
        let mut out = std::io::stdout().lock();
        write!(out, "{}", summary.render())?;
        for a in &summary.artifacts {
            writeln!(out, "  wrote {}", a.display())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // closed downstream pipe, e.g. `fracnoise preset --list | head`
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

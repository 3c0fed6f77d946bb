//! Experiment description shared by flags, config files and output headers.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use fracnoise_core::carpet::{BitDepth, Mapping};
use fracnoise_core::fractal::SliceAxis;
use fracnoise_core::io::read_potential_tsv;
use fracnoise_core::lattice::{fibonacci_pair, Chain, Recipe};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Carpet,
    Slice,
    Fracdim,
    Multifractal,
    ReturnProb,
    Msd,
    CalibrateFbm,
    OracleCheck,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Spectrum,
        Command::Carpet,
        Command::Slice,
        Command::Fracdim,
        Command::Multifractal,
        Command::ReturnProb,
        Command::Msd,
        Command::CalibrateFbm,
        Command::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Carpet => "carpet",
            Command::Slice => "slice",
            Command::Fracdim => "fracdim",
            Command::Multifractal => "multifractal",
            Command::ReturnProb => "return-prob",
            Command::Msd => "msd",
            Command::CalibrateFbm => "calibrate-fbm",
            Command::OracleCheck => "oracle-check",
        }
    }
}

impl FromStr for Command {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| anyhow!("unknown command '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PotentialSpec {
    Zero,
    Quasiperiodic,
    /// On-site energies read from a two-column `x eps` TSV; fixes the size.
    File(PathBuf),
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Zero => f.write_str("zero"),
            PotentialSpec::Quasiperiodic => f.write_str("quasiperiodic"),
            PotentialSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for PotentialSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(PotentialSpec::Zero),
            "quasiperiodic" => Ok(PotentialSpec::Quasiperiodic),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(PotentialSpec::File(path.into())),
                _ => bail!("unknown potential '{s}' (zero, quasiperiodic, file:<path>)"),
            },
        }
    }
}

/// Time at which a multifractal sample is taken, relative to the size `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalTime {
    Fixed(f64),
    /// `t = N`.
    LinearInN,
    /// `t = N^2 / 4`.
    QuarterSquare,
    /// Mean over 20 evenly spaced times in `[N, 2N]`.
    Averaged,
}

impl EvalTime {
    pub fn times(self, n: usize) -> Vec<f64> {
        let nf = n as f64;
        match self {
            EvalTime::Fixed(t) => vec![t],
            EvalTime::LinearInN => vec![nf],
            EvalTime::QuarterSquare => vec![nf * nf / 4.0],
            EvalTime::Averaged => (0..20).map(|k| nf + nf * k as f64 / 19.0).collect(),
        }
    }
}

impl fmt::Display for EvalTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalTime::Fixed(t) => write!(f, "t{t}"),
            EvalTime::LinearInN => write!(f, "tN"),
            EvalTime::QuarterSquare => write!(f, "tN2/4"),
            EvalTime::Averaged => write!(f, "avg"),
        }
    }
}

impl FromStr for EvalTime {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tN" => Ok(EvalTime::LinearInN),
            "tN2/4" => Ok(EvalTime::QuarterSquare),
            "avg" => Ok(EvalTime::Averaged),
            _ => match s.strip_prefix('t').map(str::parse::<f64>) {
                Some(Ok(t)) if t >= 0.0 => Ok(EvalTime::Fixed(t)),
                _ => bail!("unknown evaluation time '{s}' (t<value>, tN, tN2/4, avg)"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub command: Command,
    pub n: usize,
    pub potential: PotentialSpec,
    /// Chain of `F_{k+1}` sites with `M = F_k`; overrides `n`.
    pub fib_index: Option<usize>,
    /// Numerator of the quasiperiodic frequency `M / N`.
    pub m: Option<u64>,
    pub init: Recipe,
    pub t0: Option<f64>,
    pub tmax: Option<f64>,
    pub dt: f64,
    pub axis: SliceAxis,
    pub box_a: Option<f64>,
    pub box_b: Option<Vec<u64>>,
    pub mapping: Mapping,
    pub depth: BitDepth,
    pub origin: Option<usize>,
    /// Window for power-law fits of time series.
    pub fit: Option<(f64, f64)>,
    /// Window of admissible periods for the revival period.
    pub period: Option<(f64, f64)>,
    /// Fibonacci indices of the chain sizes in a multifractal scan.
    pub sizes: Vec<usize>,
    pub eval_times: Vec<EvalTime>,
    pub hurst: Vec<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(command: Command) -> Self {
        ExperimentSpec {
            name: command.name().to_string(),
            command,
            n: 100,
            potential: PotentialSpec::Zero,
            fib_index: None,
            m: None,
            init: Recipe::SpatialUniform,
            t0: None,
            tmax: None,
            dt: 1.0,
            axis: SliceAxis::Space { t0: 0.0 },
            box_a: None,
            box_b: None,
            mapping: Mapping::Sqrt,
            depth: BitDepth::Eight,
            origin: None,
            fit: None,
            period: None,
            sizes: (10..=15).collect(),
            eval_times: vec![EvalTime::LinearInN],
            hurst: vec![0.25, 0.5, 0.75],
            seed: 1,
            out: None,
            threads: None,
        }
    }

    /// Number of sites after applying `fib_index`.
    pub fn sites(&self) -> Result<usize> {
        if let PotentialSpec::File(path) = &self.potential {
            return Ok(read_potential_tsv(path)?.len());
        }
        match self.fib_index {
            Some(k) => Ok(fibonacci_pair(k)?.1 as usize),
            None => Ok(self.n),
        }
    }

    pub fn chain(&self) -> Result<Chain> {
        let n = self.sites()?;
        match &self.potential {
            PotentialSpec::File(path) => Ok(Chain::from_potential(read_potential_tsv(path)?)?),
            PotentialSpec::Zero => Ok(Chain::zero(n)?),
            PotentialSpec::Quasiperiodic => {
                let m = match (self.m, self.fib_index) {
                    (Some(m), _) => m,
                    (None, Some(k)) => fibonacci_pair(k)?.0,
                    (None, None) => preceding_fibonacci(n as u64).ok_or_else(|| {
                        anyhow!("n={n} is not a Fibonacci number; give m or fib-index for the quasiperiodic potential")
                    })?,
                };
                Ok(Chain::quasiperiodic(m, n as u64)?)
            }
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let ctx = || format!("invalid value '{v}' for key '{key}'");
        match key {
            "name" => self.name = v.to_string(),
            "command" => self.command = v.parse().with_context(ctx)?,
            "n" => self.n = v.parse().with_context(ctx)?,
            "potential" => self.potential = v.parse().with_context(ctx)?,
            "fib-index" => self.fib_index = Some(v.parse().with_context(ctx)?),
            "m" => self.m = Some(v.parse().with_context(ctx)?),
            "init" => self.init = v.parse().with_context(ctx)?,
            "t0" => self.t0 = Some(v.parse().with_context(ctx)?),
            "tmax" => self.tmax = Some(v.parse().with_context(ctx)?),
            "dt" => self.dt = v.parse().with_context(ctx)?,
            "axis" => self.axis = v.parse().with_context(ctx)?,
            "box-a" => self.box_a = Some(v.parse().with_context(ctx)?),
            "box-b" => self.box_b = Some(parse_list(v).with_context(ctx)?),
            "mapping" => self.mapping = v.parse().with_context(ctx)?,
            "depth" => {
                self.depth = match v {
                    "8" => BitDepth::Eight,
                    "16" => BitDepth::Sixteen,
                    _ => bail!("{}: depth must be 8 or 16", ctx()),
                }
            }
            "origin" => self.origin = Some(v.parse().with_context(ctx)?),
            "fit" => self.fit = Some(parse_pair(v).with_context(ctx)?),
            "period" => self.period = Some(parse_pair(v).with_context(ctx)?),
            "sizes" => self.sizes = parse_list(v).with_context(ctx)?,
            "eval-time" => self.eval_times = parse_list(v).with_context(ctx)?,
            "hurst" => self.hurst = parse_list(v).with_context(ctx)?,
            "seed" => self.seed = v.parse().with_context(ctx)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "threads" => self.threads = Some(v.parse().with_context(ctx)?),
            _ => bail!("unknown key '{key}'"),
        }
        Ok(())
    }

    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_config(&mut self, text: &str, origin: &Path) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key=value", origin.display(), i + 1))?;
            self.set(k.trim(), v)
                .with_context(|| format!("{}:{}", origin.display(), i + 1))?;
        }
        Ok(())
    }

    /// Every key that influences results, one `key=value` per line. Output
    /// location and worker count are left out so that they do not change
    /// artifact bytes.
    pub fn to_config(&self) -> String {
        let mut kv: Vec<(&str, String)> = vec![
            ("name", self.name.clone()),
            ("command", self.command.name().into()),
            ("n", self.n.to_string()),
            ("potential", self.potential.to_string()),
        ];
        if let Some(k) = self.fib_index {
            kv.push(("fib-index", k.to_string()));
        }
        if let Some(m) = self.m {
            kv.push(("m", m.to_string()));
        }
        kv.push(("init", self.init.to_string()));
        if let Some(t) = self.t0 {
            kv.push(("t0", t.to_string()));
        }
        if let Some(t) = self.tmax {
            kv.push(("tmax", t.to_string()));
        }
        kv.push(("dt", self.dt.to_string()));
        kv.push(("axis", self.axis.to_string()));
        if let Some(a) = self.box_a {
            kv.push(("box-a", format!("{a:e}")));
        }
        if let Some(b) = &self.box_b {
            kv.push(("box-b", join(b)));
        }
        kv.push(("mapping", self.mapping.to_string()));
        kv.push((
            "depth",
            match self.depth {
                BitDepth::Eight => "8",
                BitDepth::Sixteen => "16",
            }
            .into(),
        ));
        if let Some(o) = self.origin {
            kv.push(("origin", o.to_string()));
        }
        if let Some((lo, hi)) = self.fit {
            kv.push(("fit", format!("{lo},{hi}")));
        }
        if let Some((lo, hi)) = self.period {
            kv.push(("period", format!("{lo},{hi}")));
        }
        kv.push(("sizes", join(&self.sizes)));
        kv.push(("eval-time", join(&self.eval_times)));
        kv.push(("hurst", join(&self.hurst)));
        kv.push(("seed", self.seed.to_string()));
        kv.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn header(&self) -> Vec<String> {
        self.to_config().lines().map(str::to_string).collect()
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_list<T: FromStr>(v: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    v.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|e| anyhow!("'{s}': {e}")))
        .collect()
}

fn parse_pair(v: &str) -> Result<(f64, f64)> {
    match parse_list::<f64>(v)?.as_slice() {
        &[lo, hi] if lo < hi => Ok((lo, hi)),
        _ => bail!("expected '<lo>,<hi>' with lo < hi"),
    }
}

fn preceding_fibonacci(n: u64) -> Option<u64> {
    let (mut a, mut b) = (1u64, 2u64);
    while b < n {
        (a, b) = (b, a.checked_add(b)?);
    }
    (b == n).then_some(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let mut s = ExperimentSpec::new(Command::Fracdim);
        s.potential = PotentialSpec::Quasiperiodic;
        s.fib_index = Some(15);
        s.init = Recipe::gaussian(1.0);
        s.axis = SliceAxis::Time { x0: 500 };
        s.box_a = Some(1e-10);
        s.fit = Some((10.0, 500.0));
        s.eval_times = vec![EvalTime::Fixed(10.0), EvalTime::Averaged];
        let mut back = ExperimentSpec::new(Command::Spectrum);
        back.apply_config(&s.to_config(), Path::new("mem")).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bad_keys_are_named() {
        let mut s = ExperimentSpec::new(Command::Spectrum);
        let err = s.apply_config("n=12\nbogus=3\n", Path::new("c.cfg")).unwrap_err();
        assert!(format!("{err:#}").contains("bogus"), "{err:#}");
        let err = s.set("tmax", "soon").unwrap_err();
        assert!(format!("{err:#}").contains("tmax"));
    }

    #[test]
    fn quasiperiodic_numerator() {
        assert_eq!(preceding_fibonacci(987), Some(610));
        assert_eq!(preceding_fibonacci(2), Some(1));
        assert_eq!(preceding_fibonacci(1000), None);
        let mut s = ExperimentSpec::new(Command::Spectrum);
        s.potential = PotentialSpec::Quasiperiodic;
        s.n = 987;
        assert_eq!(s.chain().unwrap().n_sites(), 987);
        s.n = 1000;
        assert!(s.chain().is_err());
        s.m = Some(3);
        assert!(s.chain().is_ok());
    }

    #[test]
    fn potential_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("eps.tsv");
        let eps = [0.5, -1.25, 0.0, 3.0, 1e-3];
        fracnoise_core::io::write_potential_tsv(&eps, &path, &[]).unwrap();
        let mut s = ExperimentSpec::new(Command::Spectrum);
        s.set("potential", &format!("file:{}", path.display())).unwrap();
        s.n = 99;
        let chain = s.chain().unwrap();
        assert_eq!(s.sites().unwrap(), 5);
        assert_eq!(chain.potential(), &eps);
        assert!(s.to_config().contains(&format!("potential=file:{}", path.display())));
        assert!(s.set("potential", "file:").is_err());
    }
}

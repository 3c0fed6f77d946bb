//! One function per analysis. Each returns typed results; [`run_experiment`]
//! wraps them with artifact output and a printable summary.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use fracnoise_core::carpet::{render_carpet, write_pgm, RasterImage};
use fracnoise_core::evolution::{
    compute_field, diagonal_series, dominant_period, envelope_decay, evolve_at_time, integrated_correlation, msd_series,
    probability_at, project_to_eigenbasis, return_probability_overlap, return_probability_series, site_series,
    space_slice, time_scales, EigenCoefficients, ProbabilityField, TimeGrid, TimeScales,
};
use fracnoise_core::fit::{loglog_fit, LineFit};
use fracnoise_core::fractal::{
    measure_scaling_sample, scaling_dimension_fit, self_affine_dimension, BoxCountParams, DimensionEstimate,
    ScalingFit, ScalingKind, ScalingSample, SliceAxis,
};
use fracnoise_core::io::{
    counts_to_tsv, dimension_report, fmt_num, scaling_report, write_bytes, write_curve_tsv, write_potential_tsv,
};
use fracnoise_core::lattice::{make_initial_state, Chain, EigenSystem, InitialState, Recipe};
use fracnoise_core::oracle::oracle_evolve;
use fracnoise_core::synth::fbm;
use fracnoise_core::Curve;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::spec::{Command, EvalTime, ExperimentSpec, PotentialSpec};

/// Box height for space and time slices.
pub const BOX_A_SLICE: f64 = 1e-10;
/// Box height for the diagonal slice.
pub const BOX_A_DIAGONAL: f64 = 7e-8;

pub struct Prepared {
    pub chain: Chain,
    pub eigsys: EigenSystem,
    pub state: InitialState,
    pub coeffs: EigenCoefficients,
}

pub fn prepare(spec: &ExperimentSpec) -> Result<Prepared> {
    let chain = spec.chain()?;
    let eigsys = EigenSystem::for_chain(&chain)?;
    let state = make_initial_state(spec.init, &chain, &eigsys)?;
    let coeffs = project_to_eigenbasis(&state, &eigsys)?;
    Ok(Prepared {
        chain,
        eigsys,
        state,
        coeffs,
    })
}

/// `t0, t0 + dt, ...` up to `tmax`; the span defaults to two classical
/// periods `2 (N + 1)`.
pub fn time_grid(spec: &ExperimentSpec, n: usize, default_t0: f64) -> Result<TimeGrid> {
    let t0 = spec.t0.unwrap_or(default_t0);
    let tmax = spec.tmax.unwrap_or(2.0 * (n + 1) as f64);
    if !(tmax >= t0) {
        bail!("tmax={tmax} is before the grid start t0={t0}");
    }
    let count = ((tmax - t0) / spec.dt + 1e-9).floor() as usize + 1;
    Ok(TimeGrid::linear(t0, spec.dt, count)?)
}

pub fn spectrum(spec: &ExperimentSpec) -> Result<(Chain, EigenSystem)> {
    let chain = spec.chain()?;
    let eigsys = EigenSystem::for_chain(&chain)?;
    Ok((chain, eigsys))
}

pub fn carpet(spec: &ExperimentSpec) -> Result<(ProbabilityField, RasterImage)> {
    let p = prepare(spec)?;
    let grid = time_grid(spec, p.chain.n_sites(), 0.0)?;
    let field = compute_field(&p.coeffs, &p.eigsys, &grid)?;
    let image = render_carpet(&field, spec.mapping, spec.depth)?;
    Ok((field, image))
}

/// The requested slice, evaluated without materialising a field.
pub fn slice_curve(spec: &ExperimentSpec, p: &Prepared) -> Result<Curve> {
    Ok(match spec.axis {
        SliceAxis::Space { t0 } => space_slice(&p.coeffs, &p.eigsys, t0)?,
        SliceAxis::Time { x0 } => {
            let grid = time_grid(spec, p.chain.n_sites(), 1.0)?;
            site_series(&p.coeffs, &p.eigsys, x0, &grid)?
        }
        SliceAxis::Diagonal => diagonal_series(&p.coeffs, &p.eigsys)?,
    })
}

pub fn box_params(spec: &ExperimentSpec, curve: &Curve) -> Result<BoxCountParams> {
    let a = spec.box_a.unwrap_or(match spec.axis {
        SliceAxis::Diagonal => BOX_A_DIAGONAL,
        _ => BOX_A_SLICE,
    });
    let tau = curve.abscissa()[1] - curve.abscissa()[0];
    Ok(match &spec.box_b {
        Some(b) => BoxCountParams::new(tau, a, b.clone())?,
        None => BoxCountParams::for_curve(curve, tau, a)?,
    })
}

pub fn fracdim(spec: &ExperimentSpec) -> Result<(Curve, DimensionEstimate)> {
    let p = prepare(spec)?;
    let curve = slice_curve(spec, &p)?;
    let params = box_params(spec, &curve)?;
    let est = self_affine_dimension(&curve, &params)?;
    Ok((curve, est))
}

pub struct VariantFit {
    pub variant: EvalTime,
    pub samples: Vec<ScalingSample>,
    pub d1: ScalingFit,
    pub d2: ScalingFit,
}

pub fn multifractal(spec: &ExperimentSpec) -> Result<Vec<VariantFit>> {
    if spec.eval_times.is_empty() {
        bail!("eval-time lists no variants");
    }
    if let PotentialSpec::File(path) = &spec.potential {
        bail!("multifractal sweeps chain sizes; a fixed potential file ({}) has only one", path.display());
    }
    let per_size: Vec<Vec<Vec<ScalingSample>>> = spec
        .sizes
        .par_iter()
        .map(|&k| -> Result<Vec<Vec<ScalingSample>>> {
            let mut sub = spec.clone();
            sub.fib_index = Some(k);
            sub.m = None;
            let p = prepare(&sub)?;
            let n = p.chain.n_sites();
            spec.eval_times
                .iter()
                .map(|v| {
                    v.times(n)
                        .into_iter()
                        .map(|t| {
                            let prob = probability_at(&p.coeffs, &p.eigsys, t)?;
                            Ok(measure_scaling_sample(&prob, n, t)?)
                        })
                        .collect()
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    spec.eval_times
        .iter()
        .enumerate()
        .map(|(i, &variant)| {
            let samples: Vec<ScalingSample> = per_size.iter().flat_map(|s| s[i].iter().copied()).collect();
            Ok(VariantFit {
                variant,
                d1: scaling_dimension_fit(&samples, ScalingKind::D1)?,
                d2: scaling_dimension_fit(&samples, ScalingKind::D2)?,
                samples,
            })
        })
        .collect()
}

pub struct ReturnProb {
    pub p0: Curve,
    pub correlation: Curve,
    pub period: f64,
    pub envelope: Option<LineFit>,
    pub correlation_fit: Option<LineFit>,
    pub scales: TimeScales,
}

/// Bins of the envelope fit.
const ENVELOPE_BINS: usize = 16;

pub fn return_prob(spec: &ExperimentSpec) -> Result<ReturnProb> {
    let p = prepare(spec)?;
    let n = p.chain.n_sites();
    let grid = time_grid(spec, n, 0.0)?;
    let p0 = return_probability_series(&p.coeffs, &p.eigsys, &grid)?;
    let correlation = integrated_correlation(&p0)?;
    let (lo, hi) = spec.period.unwrap_or((2.0 * spec.dt, p0.span() / 2.0));
    let period = dominant_period(&p0, lo, hi)?;
    let (envelope, correlation_fit) = match spec.fit {
        Some((lo, hi)) => {
            let env = envelope_decay(&p0, lo, hi, ENVELOPE_BINS).context("P0 envelope fit")?;
            let w = correlation.window(lo, hi).context("C(t) fit window")?;
            (Some(env), Some(loglog_fit(w.abscissa(), w.ordinate())?))
        }
        None => (None, None),
    };
    let scales = time_scales(n, p.coeffs.central_label().clamp(1.0, n as f64))?;
    Ok(ReturnProb {
        p0,
        correlation,
        period,
        envelope,
        correlation_fit,
        scales,
    })
}

pub struct Msd {
    pub curve: Curve,
    pub origin: usize,
    pub fit: Option<LineFit>,
    /// Largest `|<x^2> / (2 t^2) - 1|` within the fit window.
    pub ballistic_deviation: Option<f64>,
}

pub fn msd(spec: &ExperimentSpec) -> Result<Msd> {
    let p = prepare(spec)?;
    let origin = spec.origin.unwrap_or_else(|| p.state.centroid_site());
    let grid = time_grid(spec, p.chain.n_sites(), 0.0)?;
    let curve = msd_series(&p.coeffs, &p.eigsys, origin, &grid)?;
    let (fit, ballistic_deviation) = match spec.fit {
        Some((lo, hi)) => {
            let w = curve.window(lo, hi).context("MSD fit window")?;
            let dev = w
                .points()
                .map(|(t, m)| (m / (2.0 * t * t) - 1.0).abs())
                .fold(0.0, f64::max);
            (Some(loglog_fit(w.abscissa(), w.ordinate())?), Some(dev))
        }
        None => (None, None),
    };
    Ok(Msd {
        curve,
        origin,
        fit,
        ballistic_deviation,
    })
}

/// Length of the synthetic calibration paths.
pub const CALIBRATION_STEPS: usize = 1 << 15;

/// `(H, D)` for each Hurst exponent; box height is `1e-7` of the path range.
pub fn calibrate_fbm(spec: &ExperimentSpec) -> Result<Vec<(f64, DimensionEstimate)>> {
    spec.hurst
        .iter()
        .map(|&h| {
            let y = fbm(CALIBRATION_STEPS, h, spec.seed)?;
            let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            let curve = Curve::unit_spaced(0.0, y, format!("fBm H={h}"))?;
            let a = spec.box_a.unwrap_or((hi - lo) * 1e-7);
            let params = BoxCountParams::for_curve(&curve, 1.0, a)?;
            Ok((h, self_affine_dimension(&curve, &params)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct OracleReport {
    pub cases: usize,
    pub max_amplitude_error: f64,
    pub max_return_probability_error: f64,
}

/// Random chains of 2 to 16 sites with random states, compared against the
/// dense exponential at random times.
pub fn oracle_check(spec: &ExperimentSpec) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut report = OracleReport {
        cases: 0,
        max_amplitude_error: 0.0,
        max_return_probability_error: 0.0,
    };
    for _ in 0..200 {
        let n = rng.random_range(2..=16);
        let chain = if rng.random_bool(0.25) {
            Chain::zero(n)?
        } else {
            Chain::from_potential((0..n).map(|_| rng.random_range(-3.0..3.0)).collect())?
        };
        let amps = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let state = InitialState::from_amplitudes(amps, Recipe::SpatialUniform)?;
        let eigsys = EigenSystem::for_chain(&chain)?;
        let coeffs = project_to_eigenbasis(&state, &eigsys)?;
        let times: Vec<f64> = {
            let mut t: Vec<f64> = (0..5).map(|_| rng.random_range(0.0..60.0)).collect();
            t.sort_by(f64::total_cmp);
            t.dedup();
            t
        };
        let grid = TimeGrid::explicit(times.clone())?;
        let a = return_probability_series(&coeffs, &eigsys, &grid)?;
        let b = return_probability_overlap(&state, &coeffs, &eigsys, &grid)?;
        for (x, y) in a.ordinate().iter().zip(b.ordinate()) {
            report.max_return_probability_error = report.max_return_probability_error.max((x - y).abs());
        }
        for &t in &times {
            let spectral = evolve_at_time(&coeffs, &eigsys, t)?;
            let dense = oracle_evolve(&chain, state.amplitudes(), t)?;
            for (u, v) in spectral.iter().zip(&dense) {
                report.max_amplitude_error = report.max_amplitude_error.max((u - v).norm());
            }
        }
        report.cases += 1;
    }
    Ok(report)
}

/// Printable outcome of one experiment.
#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub name: String,
    pub rows: Vec<(String, String)>,
    pub artifacts: Vec<PathBuf>,
}

impl Summary {
    fn row(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.rows.push((key.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = format!("== {} ==\n", self.name);
        for (k, v) in &self.rows {
            let _ = writeln!(out, "  {k:<width$}  {v}");
        }
        out
    }
}

fn fmt_fit(f: &LineFit) -> String {
    format!("{:.4} (stderr {:.4}, r2 {:.4})", f.slope, f.stderr, f.r_squared)
}

fn fmt_time(t: f64) -> String {
    if t.is_finite() {
        format!("{t:.2}")
    } else {
        "inf".into()
    }
}

/// Runs one experiment, writes its artifacts under `spec.out` if set, and
/// returns the summary.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Summary> {
    let mut s = Summary {
        name: format!("{} ({})", spec.name, spec.command.name()),
        ..Summary::default()
    };
    let header = spec.header();
    let out = spec.out.clone();
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let path = |suffix: &str| out.as_ref().map(|d| d.join(format!("{}-{suffix}", spec.name)));
    let mut artifacts = Vec::new();

    match spec.command {
        Command::Spectrum => {
            let (chain, eigsys) = spectrum(spec)?;
            s.row("chain", chain.describe());
            s.row("eigensystem", format!("{:?}", eigsys.source()));
            let (lo, hi) = eigsys
                .energies()
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
            s.row("E_min", format!("{lo:.12}"));
            s.row("E_max", format!("{hi:.12}"));
            if let Some(p) = path("spectrum.tsv") {
                let curve = Curve::unit_spaced(1.0, eigsys.energies().to_vec(), "E_j")?;
                write_curve_tsv(&curve, &p, &header, ("state", "E"))?;
                artifacts.push(p);
            }
            if let Some(p) = path("potential.tsv") {
                write_potential_tsv(chain.potential(), &p, &header)?;
                artifacts.push(p);
            }
        }
        Command::Carpet => {
            let (field, image) = carpet(spec)?;
            s.row("sites", field.n_sites().to_string());
            s.row("time samples", field.grid().len().to_string());
            s.row("grid", field.grid().to_string());
            s.row("mapping", spec.mapping.to_string());
            if let Some(p) = path("carpet.pgm") {
                write_pgm(&image, &p, &header)?;
                artifacts.push(p);
            }
        }
        Command::Slice => {
            let prepared = prepare(spec)?;
            let curve = slice_curve(spec, &prepared)?;
            let (k, v) = curve.argmax();
            s.row("axis", spec.axis.to_string());
            s.row("samples", curve.len().to_string());
            s.row("argmax", format!("{} (value {v:.6e})", curve.abscissa()[k]));
            if let Some(p) = path("slice.tsv") {
                write_curve_tsv(&curve, &p, &header, slice_columns(spec.axis))?;
                artifacts.push(p);
            }
        }
        Command::Fracdim => {
            let (curve, est) = fracdim(spec)?;
            s.row("axis", spec.axis.to_string());
            s.row("D", format!("{:.4}", est.dimension));
            s.row("stderr", format!("{:.4}", est.slope_stderr));
            s.row("r2", format!("{:.4}", est.r_squared));
            s.row("a", format!("{:e}", est.params.a));
            s.row(
                "b",
                format!(
                    "{}..{} ({} values)",
                    est.params.b_values[0],
                    est.params.b_values[est.params.b_values.len() - 1],
                    est.params.b_values.len()
                ),
            );
            if !est.in_range() {
                s.row("warning", "estimate outside [0.9, 2.1]; treat the fit as failed");
            }
            if let Some(p) = path("slice.tsv") {
                write_curve_tsv(&curve, &p, &header, slice_columns(spec.axis))?;
                artifacts.push(p);
            }
            if let Some(p) = path("counts.tsv") {
                write_bytes(&p, counts_to_tsv(&est, &header).as_bytes())?;
                artifacts.push(p);
            }
            if let Some(p) = path("dimension.txt") {
                write_bytes(&p, with_header(&header, &dimension_report(&est)).as_bytes())?;
                artifacts.push(p);
            }
        }
        Command::Multifractal => {
            let fits = multifractal(spec)?;
            let mut report = String::new();
            let mut table = String::new();
            for f in &fits {
                s.row(format!("D1 [{}]", f.variant), format!("{:.4} (r2 {:.4})", f.d1.dimension, f.d1.r_squared));
                s.row(format!("D2 [{}]", f.variant), format!("{:.4} (r2 {:.4})", f.d2.dimension, f.d2.r_squared));
                let _ = writeln!(report, "variant={}", f.variant);
                report.push_str(&scaling_report(&f.d1));
                report.push_str(&scaling_report(&f.d2));
                for smp in &f.samples {
                    let _ = writeln!(
                        table,
                        "{}\t{}\t{}\t{}\t{}",
                        f.variant,
                        smp.size,
                        fmt_num(smp.time_stamp),
                        fmt_num(smp.entropy),
                        fmt_num(smp.log_participation)
                    );
                }
            }
            if let Some(p) = path("samples.tsv") {
                let text = with_header(&header, &format!("# variant\tN\tt\tentropy\tln_sum_P2\n{table}"));
                write_bytes(&p, text.as_bytes())?;
                artifacts.push(p);
            }
            if let Some(p) = path("multifractal.txt") {
                write_bytes(&p, with_header(&header, &report).as_bytes())?;
                artifacts.push(p);
            }
        }
        Command::ReturnProb => {
            let r = return_prob(spec)?;
            s.row("dominant period", format!("{:.2}", r.period));
            s.row("T_cl", fmt_time(r.scales.t_classical));
            s.row("T_r", fmt_time(r.scales.t_revival));
            if let Some(f) = &r.envelope {
                s.row("P0 envelope slope", fmt_fit(f));
            }
            if let Some(f) = &r.correlation_fit {
                s.row("C(t) slope", fmt_fit(f));
            }
            if let Some(p) = path("p0.tsv") {
                write_curve_tsv(&r.p0, &p, &header, ("t", "P0"))?;
                artifacts.push(p);
            }
            if let Some(p) = path("correlation.tsv") {
                write_curve_tsv(&r.correlation, &p, &header, ("t", "C"))?;
                artifacts.push(p);
            }
        }
        Command::Msd => {
            let m = msd(spec)?;
            s.row("origin", m.origin.to_string());
            if let Some(f) = &m.fit {
                s.row("log-log slope", fmt_fit(f));
            }
            if let Some(d) = m.ballistic_deviation {
                s.row("max |<x^2>/(2t^2) - 1|", format!("{d:.5}"));
            }
            if let Some(p) = path("msd.tsv") {
                write_curve_tsv(&m.curve, &p, &header, ("t", "msd"))?;
                artifacts.push(p);
            }
        }
        Command::CalibrateFbm => {
            let rows = calibrate_fbm(spec)?;
            let mut table = String::from("# H\tD\texpected\n");
            for (h, est) in &rows {
                s.row(format!("H={h}"), format!("D={:.4} (expected {:.2})", est.dimension, 2.0 - h));
                let _ = writeln!(table, "{}\t{}\t{}", fmt_num(*h), fmt_num(est.dimension), fmt_num(2.0 - h));
            }
            if let Some(p) = path("calibration.tsv") {
                write_bytes(&p, with_header(&header, &table).as_bytes())?;
                artifacts.push(p);
            }
        }
        Command::OracleCheck => {
            let r = oracle_check(spec)?;
            s.row("cases", r.cases.to_string());
            s.row("max amplitude error", format!("{:.3e}", r.max_amplitude_error));
            s.row("max P0 route difference", format!("{:.3e}", r.max_return_probability_error));
            if let Some(p) = path("oracle.txt") {
                let body = format!(
                    "cases={}\nmax_amplitude_error={:e}\nmax_p0_difference={:e}\n",
                    r.cases, r.max_amplitude_error, r.max_return_probability_error
                );
                write_bytes(&p, with_header(&header, &body).as_bytes())?;
                artifacts.push(p);
            }
        }
    }
    s.artifacts = artifacts;
    Ok(s)
}

fn slice_columns(axis: SliceAxis) -> (&'static str, &'static str) {
    match axis {
        SliceAxis::Time { .. } => ("t", "P"),
        _ => ("x", "P"),
    }
}

fn with_header(header: &[String], body: &str) -> String {
    let mut out: String = header.iter().map(|h| format!("# {h}\n")).collect();
    out.push_str(body);
    out
}

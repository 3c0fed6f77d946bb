//! Named experiments. Where no span is otherwise fixed, carpets and time
//! slices cover two classical periods, `2 (N + 1)`.

use anyhow::{bail, Result};
use fracnoise_core::fractal::SliceAxis;
use fracnoise_core::lattice::Recipe;

use crate::spec::{Command, EvalTime, ExperimentSpec, PotentialSpec};

pub const PRESETS: [(&str, &str); 19] = [
    ("fig1a", "carpet, N=1000, local:1, t in [0, 2100]"),
    ("fig1b", "carpet, N=100, spatially uniform, t in [0, 1700]"),
    ("fig1c", "carpet, N=1000, eigen-uniform, t in [0, 3000]"),
    ("fig1d", "carpet, N=100, gaussian:1, t in [0, 1700]"),
    ("fig2a", "space slice at t0=100000, N=10000, uniform; box dimension"),
    ("fig2b", "time slice at x0=5000, N=10000, uniform, t=1..20002; box dimension"),
    ("fig2c", "diagonal slice x=t, N=10000, uniform, a=7e-8; box dimension"),
    ("fig3a", "time slice at x0=500, N=1000, gaussian:1, t=1..2002; box dimension"),
    ("fig3b", "time slice at x0=500, N=1000, eigen-uniform, t=1..2002; box dimension"),
    ("fig4a", "return probability, N=100, uniform, t in [0, 3264]; revival period"),
    ("fig4b", "return probability, N=1000, eigen-uniform, t in [0, 4004]; period and envelope"),
    ("fig5a", "carpet, quasiperiodic N=987, uniform, t in [0, 1976]"),
    ("fig5b", "carpet, quasiperiodic N=987, gaussian:1, t in [0, 1976]"),
    ("fig6a", "space slice at t0=10, quasiperiodic N=987, uniform; box dimension"),
    ("fig6b", "time slice at x0=500, quasiperiodic N=987, uniform, t=1..1976; box dimension"),
    ("fig7", "D1 and D2 over N=89..987, quasiperiodic, uniform and gaussian:1"),
    ("fig8", "return probability and C(t), quasiperiodic N=987, uniform, t in [0, 2000]"),
    ("calibrate-fbm", "box dimension of fractional Brownian paths, H=0.25, 0.5, 0.75"),
    ("oracle-check", "spectral vs dense-exponential propagation on 200 random chains, N<=16"),
];

fn base(name: &str, command: Command, n: usize, init: Recipe) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(command);
    s.name = name.to_string();
    s.n = n;
    s.init = init;
    s
}

fn quasiperiodic(mut s: ExperimentSpec) -> ExperimentSpec {
    s.potential = PotentialSpec::Quasiperiodic;
    s.fib_index = Some(15);
    s.n = 987;
    s
}

fn span(mut s: ExperimentSpec, t0: f64, tmax: f64) -> ExperimentSpec {
    s.t0 = Some(t0);
    s.tmax = Some(tmax);
    s
}

fn axis(mut s: ExperimentSpec, axis: SliceAxis) -> ExperimentSpec {
    s.axis = axis;
    s
}

pub fn preset(name: &str) -> Result<Vec<ExperimentSpec>> {
    use Command::*;
    let local1 = Recipe::Local { site: 1 };
    let uni = Recipe::SpatialUniform;
    let eig = Recipe::EigenUniform;
    let gauss = Recipe::gaussian(1.0);
    let specs = match name {
        "fig1a" => vec![span(base(name, Carpet, 1000, local1), 0.0, 2100.0)],
        "fig1b" => vec![span(base(name, Carpet, 100, uni), 0.0, 1700.0)],
        "fig1c" => vec![span(base(name, Carpet, 1000, eig), 0.0, 3000.0)],
        "fig1d" => vec![span(base(name, Carpet, 100, gauss), 0.0, 1700.0)],
        "fig2a" => vec![axis(base(name, Fracdim, 10000, uni), SliceAxis::Space { t0: 100000.0 })],
        "fig2b" => vec![axis(base(name, Fracdim, 10000, uni), SliceAxis::Time { x0: 5000 })],
        "fig2c" => vec![axis(base(name, Fracdim, 10000, uni), SliceAxis::Diagonal)],
        "fig3a" => vec![axis(base(name, Fracdim, 1000, gauss), SliceAxis::Time { x0: 500 })],
        "fig3b" => vec![axis(base(name, Fracdim, 1000, eig), SliceAxis::Time { x0: 500 })],
        "fig4a" => {
            let mut s = span(base(name, ReturnProb, 100, uni), 0.0, 3264.0);
            s.period = Some((100.0, 1700.0));
            vec![s]
        }
        "fig4b" => {
            let mut s = span(base(name, ReturnProb, 1000, eig), 0.0, 4004.0);
            s.period = Some((200.0, 2002.0));
            s.fit = Some((10.0, 500.0));
            vec![s]
        }
        "fig5a" => vec![quasiperiodic(base(name, Carpet, 987, uni))],
        "fig5b" => vec![quasiperiodic(base(name, Carpet, 987, gauss))],
        "fig6a" => vec![quasiperiodic(axis(base(name, Fracdim, 987, uni), SliceAxis::Space { t0: 10.0 }))],
        "fig6b" => vec![quasiperiodic(axis(base(name, Fracdim, 987, uni), SliceAxis::Time { x0: 500 }))],
        "fig7" => [("fig7-uniform", uni), ("fig7-gaussian", gauss)]
            .into_iter()
            .map(|(n, init)| {
                let mut s = quasiperiodic(base(n, Multifractal, 987, init));
                s.sizes = (10..=15).collect();
                s.eval_times = vec![
                    EvalTime::Fixed(10.0),
                    EvalTime::LinearInN,
                    EvalTime::QuarterSquare,
                    EvalTime::Averaged,
                ];
                s
            })
            .collect(),
        "fig8" => {
            let mut s = quasiperiodic(span(base(name, ReturnProb, 987, uni), 0.0, 2000.0));
            s.dt = 0.1;
            s.fit = Some((10.0, 1000.0));
            vec![s]
        }
        "calibrate-fbm" => vec![base(name, CalibrateFbm, 0, uni)],
        "oracle-check" => vec![base(name, OracleCheck, 0, uni)],
        _ => bail!(
            "unknown preset '{name}'; available: {}",
            PRESETS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        ),
    };
    Ok(specs)
}

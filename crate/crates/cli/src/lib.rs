//! Experiment specification, analysis pipelines and named presets behind the
//! `fracnoise` binary.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod pipeline;
pub mod presets;
pub mod spec;

pub use pipeline::{run_experiment, Summary};
pub use presets::{preset, PRESETS};
pub use spec::{Command, EvalTime, ExperimentSpec, PotentialSpec};

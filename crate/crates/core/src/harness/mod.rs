//! Sweep configs, surface evaluation, valley detection, file output and the
//! command-line front end.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod emit;
pub mod svg;
pub mod sweep;
pub mod valley;

pub use config::{Axis, OutputFormat, OutputSpec, RangeSpec, SweepConfig};
pub use emit::{curve_csv, curves_csv, emit_csv, emit_json, fmt_g17, sweep_csv};
pub use svg::{emit_curves_svg, emit_svg};
pub use sweep::{run_sweep, run_sweep_with_threads, Metadata, SweepResult};
pub use valley::{detect_valley, Valley, ValleyReport, ValleyRow};

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::echo::log_echo_from_modes;
use crate::error::{Error, Result};
use crate::harness::config::SweepConfig;
use crate::spectrum::{grid_modes, momentum_grid, GridConvention};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool_version: String,
    pub wall_time_s: f64,
    pub grid: GridConvention,
}

/// Echo surface `L(λ, t)`, row-major with `λ` outer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub lambdas: Vec<f64>,
    pub times: Vec<f64>,
    pub surface: Vec<f64>,
    pub metadata: Metadata,
}

impl SweepResult {
    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.times.len();
        &self.surface[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.surface.chunks(self.times.len())
    }
}

/// Evaluates the surface on the global rayon pool.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let start = Instant::now();
    let lambdas = config.lambda.points();
    let times = config.time.points();
    let base = config.base_params()?;

    let rows: Vec<Result<Vec<f64>>> = lambdas
        .par_iter()
        .map(|&lambda| {
            let params = base.set_lambda(lambda)?;
            let modes = grid_modes(&params, &momentum_grid(&params, config.grid));
            Ok(times
                .iter()
                .map(|&t| log_echo_from_modes(&modes, t).exp())
                .collect())
        })
        .collect();
    let mut surface = Vec::with_capacity(lambdas.len() * times.len());
    for row in rows {
        surface.extend(row?);
    }

    Ok(SweepResult {
        config: config.clone(),
        lambdas,
        times,
        surface,
        metadata: Metadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: start.elapsed().as_secs_f64(),
            grid: config.grid,
        },
    })
}

/// Same as [`run_sweep`] on a dedicated pool with `threads` workers.
pub fn run_sweep_with_threads(config: &SweepConfig, threads: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| run_sweep(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{Axis, RangeSpec};

    fn config(n: usize, delta: f64, lambda: Axis, time: Axis) -> SweepConfig {
        SweepConfig {
            n,
            j: 1.0,
            a: 1.0,
            delta,
            lambda,
            time,
            grid: GridConvention::PaperInteger,
            outputs: vec![],
        }
    }

    fn range(min: f64, max: f64, step: f64) -> Axis {
        Axis::Range(RangeSpec { min, max, step })
    }

    #[test]
    fn zero_delta_row_is_all_ones() {
        let r = run_sweep(&config(200, 0.0, Axis::Scalar(0.9), range(0.0, 27.0, 0.05))).unwrap();
        assert_eq!(r.lambdas, vec![0.9]);
        assert!(r.surface.iter().all(|&v| v == 1.0));
        assert_eq!(r.surface.len(), 541);
    }

    #[test]
    fn dimensions_and_range() {
        let r = run_sweep(&config(
            50,
            0.1,
            range(0.0, 2.0, 0.1),
            range(0.0, 10.0, 0.5),
        ))
        .unwrap();
        assert_eq!(r.lambdas.len(), 21);
        assert_eq!(r.times.len(), 21);
        assert_eq!(r.surface.len(), 21 * 21);
        assert!(r.surface.iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(r.rows().count(), 21);
        assert_eq!(r.row(3)[0], 1.0);
    }

    #[test]
    fn invalid_grid_rejected_up_front() {
        let c = config(50, 0.1, range(0.0, 2.0, -0.1), range(0.0, 10.0, 0.5));
        assert!(matches!(run_sweep(&c), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn worker_count_does_not_change_surface() {
        let c = config(100, 0.1, range(0.0, 2.0, 0.05), range(0.0, 20.0, 0.1));
        let a = run_sweep_with_threads(&c, 1).unwrap();
        let b = run_sweep_with_threads(&c, 4).unwrap();
        let bits = |r: &SweepResult| r.surface.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }
}

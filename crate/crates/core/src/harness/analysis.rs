//! Checks and reports behind the CLI's diagnostic subcommands.

use rayon::prelude::*;
use serde::Serialize;

use crate::echo::{
    find_revival_times, fit_quadratic_decay, fit_quadratic_quartic, log_echo_from_modes,
    quadratic_coefficient_from_modes, scaling_compare, uniform_times, EchoCurve,
};
use crate::error::{Error, Result};
use crate::oracle::{oracle_echo_product, pair_block_evolution, PairBlock, SpinEdEvolver};
use crate::spectrum::{
    grid_modes, mode_data, mode_factor, momentum_grid, ChainParams, GridConvention, Momentum,
};

pub const PAIR_BLOCK_TOLERANCE: f64 = 1e-12;
pub const PRODUCT_TOLERANCE: f64 = 1e-10;
pub const SPIN_ED_TOLERANCE: f64 = 1e-8;

/// Low-discrepancy points in `[0, 1)`.
fn golden_sequence(count: usize, offset: f64) -> impl Iterator<Item = f64> {
    const PHI_FRAC: f64 = 0.618_033_988_749_894_8;
    (0..count).map(move |i| (offset + i as f64 * PHI_FRAC).fract())
}

#[derive(Debug, Clone, Serialize)]
pub struct SpinEdRow {
    pub n: usize,
    pub sector_dim: usize,
    pub degenerate: bool,
    /// Max deviation from the product formula on the anti-periodic grid.
    pub antiperiodic_dev: f64,
    /// Same against the default integer grid; a finite-size convention gap.
    pub integer_grid_dev: f64,
    pub max_norm_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub pair_block_samples: usize,
    pub pair_block_max_dev: f64,
    pub pair_block_max_norm_dev: f64,
    pub product_samples: usize,
    pub product_max_dev: f64,
    pub spin_ed: Vec<SpinEdRow>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.pair_block_max_dev < PAIR_BLOCK_TOLERANCE
            && self.product_max_dev < PRODUCT_TOLERANCE
            && self
                .spin_ed
                .iter()
                .all(|r| r.antiperiodic_dev < SPIN_ED_TOLERANCE)
    }
}

/// Two-mode blocks against the closed-form factor at quasi-random
/// `(k, λ, δ, t)`.
pub fn pair_block_check(samples: usize) -> Result<(f64, f64)> {
    let ks = golden_sequence(samples, 0.1);
    let ls = golden_sequence(samples, 0.3).map(|u| 2.0 * u);
    let ds = golden_sequence(samples, 0.7).map(|u| 0.5 * u);
    let ts = golden_sequence(samples, 0.9).map(|u| 30.0 * u);
    let mut worst = (0.0f64, 0.0f64);
    for (((q, lambda), delta), t) in ks.zip(ls).zip(ds).zip(ts) {
        let p = ChainParams::new(8, lambda, delta)?;
        let k = Momentum::from_reduced(q.max(1e-6));
        let block = PairBlock::new(k, &p);
        let (overlap, norm_dev) = pair_block_evolution(&block, t);
        let analytic = mode_factor(&mode_data(k, &p), t);
        worst.0 = worst.0.max((overlap - analytic).abs());
        worst.1 = worst.1.max(norm_dev);
    }
    Ok(worst)
}

/// Oracle product against the analytic echo over a fixed parameter lattice.
pub fn product_check(times_per_point: usize) -> Result<(usize, f64)> {
    let mut cases = Vec::new();
    for n in [8, 50, 200] {
        for lambda in [0.5, 0.9, 1.0, 1.5] {
            for delta in [0.01, 0.1] {
                cases.push(ChainParams::new(n, lambda, delta)?);
            }
        }
    }
    let dev = cases
        .par_iter()
        .map(|p| {
            let grid = momentum_grid(p, GridConvention::PaperInteger);
            let modes = grid_modes(p, &grid);
            golden_sequence(times_per_point, 0.5)
                .map(|u| {
                    let t = 30.0 * u;
                    (oracle_echo_product(p, &grid, t) - log_echo_from_modes(&modes, t).exp()).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok((cases.len() * times_per_point, dev))
}

/// Exact diagonalization of the chain against the product formula on both grids.
pub fn spin_ed_row(params: &ChainParams, times: &[f64]) -> Result<SpinEdRow> {
    let ed = SpinEdEvolver::new(params)?;
    let anti = grid_modes(params, &momentum_grid(params, GridConvention::AntiPeriodic));
    let integer = grid_modes(params, &momentum_grid(params, GridConvention::PaperInteger));
    let mut row = SpinEdRow {
        n: params.n(),
        sector_dim: ed.sector_dim(),
        degenerate: ed.is_degenerate(),
        antiperiodic_dev: 0.0,
        integer_grid_dev: 0.0,
        max_norm_dev: 0.0,
    };
    for &t in times {
        let s = ed.sample(t);
        row.antiperiodic_dev = row
            .antiperiodic_dev
            .max((s.echo - log_echo_from_modes(&anti, t).exp()).abs());
        row.integer_grid_dev = row
            .integer_grid_dev
            .max((s.echo - log_echo_from_modes(&integer, t).exp()).abs());
        row.max_norm_dev = row.max_norm_dev.max(s.norm_deviation);
    }
    Ok(row)
}

/// Full oracle suite; the spin-chain comparison runs at each of `spin_sizes`.
pub fn oracle_check(spin_sizes: &[usize]) -> Result<OracleReport> {
    let pair_samples = 2000;
    let (pair_dev, pair_norm) = pair_block_check(pair_samples)?;
    let (product_samples, product_dev) = product_check(100)?;
    let times = uniform_times(0.0, 10.0, 0.1)?;
    let spin_ed = spin_sizes
        .par_iter()
        .map(|&n| spin_ed_row(&ChainParams::new(n, 0.9, 0.1)?, &times))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport {
        pair_block_samples: pair_samples,
        pair_block_max_dev: pair_dev,
        pair_block_max_norm_dev: pair_norm,
        product_samples,
        product_max_dev: product_dev,
        spin_ed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RevivalRow {
    pub n: usize,
    pub first_revival: Option<f64>,
    pub revivals: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RevivalTable {
    pub lambda: f64,
    pub delta: f64,
    pub threshold: f64,
    pub rows: Vec<RevivalRow>,
    /// Slope of `t_rev` against `N`, fitted through the origin.
    pub slope: Option<f64>,
    pub r_squared: Option<f64>,
}

/// First revivals for each size, sampled to `t_max = span · N`.
pub fn revival_table(
    sizes: &[usize],
    lambda: f64,
    delta: f64,
    threshold: f64,
    span: f64,
    dt: f64,
    convention: GridConvention,
) -> Result<RevivalTable> {
    let rows = sizes
        .par_iter()
        .map(|&n| {
            let p = ChainParams::new(n, lambda, delta)?;
            let curve = EchoCurve::uniform(p, momentum_grid(&p, convention), span * n as f64, dt)?;
            let r = find_revival_times(&curve, threshold)?;
            Ok(RevivalRow {
                n,
                first_revival: r.first(),
                revivals: r.times,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.first_revival.map(|t| (r.n as f64, t)))
        .collect();
    let (slope, r_squared) = if pts.len() >= 2 {
        let (sxy, sxx) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x * y, b + x * x));
        let slope = sxy / sxx;
        let mean = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let ss_res: f64 = pts.iter().map(|&(x, y)| (y - slope * x).powi(2)).sum();
        let ss_tot: f64 = pts.iter().map(|&(_, y)| (y - mean).powi(2)).sum();
        (Some(slope), Some(1.0 - ss_res / ss_tot))
    } else {
        (None, None)
    };
    Ok(RevivalTable {
        lambda,
        delta,
        threshold,
        rows,
        slope,
        r_squared,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussianReport {
    pub n: usize,
    pub lambda: f64,
    pub delta: f64,
    pub t_max: f64,
    pub samples: usize,
    /// Exact `t²` coefficient `Σ sin²(2α_k) ε_e(k)²`.
    pub gamma2: f64,
    /// `t²` coefficient of a two-term `t², t⁴` least-squares fit.
    pub fitted: f64,
    pub relative_error: f64,
    /// Slope of a pure `t²` fit over the same window.
    pub pure_quadratic_fit: f64,
}

/// Compares the short-time decay of `-ln L` with its exact `t²` coefficient.
pub fn gaussian_check(
    params: &ChainParams,
    t_max: f64,
    samples: usize,
    convention: GridConvention,
) -> Result<GaussianReport> {
    if samples < 2 || t_max.is_nan() || t_max <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "fit window needs t_max > 0 and at least 2 samples, got {t_max} and {samples}"
        )));
    }
    let modes = grid_modes(params, &momentum_grid(params, convention));
    let gamma2 = quadratic_coefficient_from_modes(&modes);
    let times: Vec<f64> = (1..=samples)
        .map(|i| t_max * i as f64 / samples as f64)
        .collect();
    let logs: Vec<f64> = times
        .iter()
        .map(|&t| log_echo_from_modes(&modes, t))
        .collect();
    let (fitted, _) = fit_quadratic_quartic(&times, &logs);
    Ok(GaussianReport {
        n: params.n(),
        lambda: params.lambda(),
        delta: params.delta(),
        t_max,
        samples,
        gamma2,
        fitted,
        relative_error: (fitted - gamma2) / gamma2,
        pure_quadratic_fit: fit_quadratic_decay(&times, &logs),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub n: usize,
    pub lambda: f64,
    pub delta: f64,
    pub alpha: f64,
    pub t_max: f64,
    pub dt: f64,
    pub max_deviation: f64,
}

pub fn scaling_report(
    params: &ChainParams,
    alpha: f64,
    t_max: f64,
    dt: f64,
    convention: GridConvention,
) -> Result<ScalingReport> {
    let times = uniform_times(0.0, t_max, dt)?;
    Ok(ScalingReport {
        n: params.n(),
        lambda: params.lambda(),
        delta: params.delta(),
        alpha,
        t_max,
        dt,
        max_deviation: scaling_compare(params, alpha, &times, convention)?,
    })
}

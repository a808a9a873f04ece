use rayon::prelude::*;

use crate::echo::log_echo_from_modes;
use crate::error::{Error, Result};
use crate::spectrum::{grid_modes, momentum_grid, ChainParams, GridConvention};

/// Parameters of the transformed run: `δ -> αδ`, `N -> N/α`, `λ` fixed.
pub fn scaled_params(base: &ChainParams, alpha: f64) -> Result<ChainParams> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidScaling(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let n = base.n() as f64 / alpha;
    let rounded = n.round();
    if (n - rounded).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::InvalidScaling(format!(
            "N/alpha = {} / {alpha} = {n} is not an integer",
            base.n()
        )));
    }
    let delta = if alpha == 1.0 {
        base.delta()
    } else {
        alpha * base.delta()
    };
    ChainParams::with_units(rounded as usize, base.j(), base.lambda(), delta, base.a())
        .map_err(|e| Error::InvalidScaling(format!("transformed chain invalid: {e}")))
}

/// Max over `times` of `|L(t; δ, N) - L(t/α; αδ, N/α)|`.
///
/// Both runs are evaluated exactly at their own sample points; nothing is
/// interpolated.
pub fn scaling_compare(
    base: &ChainParams,
    alpha: f64,
    times: &[f64],
    convention: GridConvention,
) -> Result<f64> {
    let scaled = scaled_params(base, alpha)?;
    let base_modes = grid_modes(base, &momentum_grid(base, convention));
    let scaled_modes = grid_modes(&scaled, &momentum_grid(&scaled, convention));
    let dev = times
        .par_iter()
        .map(|&t| {
            let l0 = log_echo_from_modes(&base_modes, t).exp();
            let l1 = log_echo_from_modes(&scaled_modes, t / alpha).exp();
            (l0 - l1).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(dev)
}

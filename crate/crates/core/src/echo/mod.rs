//! Loschmidt echo of the environment and its consequences for the qubit.
//!
//! The echo is a product of `N/2` mode factors. All products are
//! accumulated as sums of `ln F_k` and exponentiated once, so chains with
//! thousands of sites near criticality do not underflow.

mod revival;
mod scaling;
mod short_time;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{grid_modes, ChainParams, ModeData, MomentumGrid};

pub use revival::{find_revival_times, Revivals};
pub use scaling::{scaled_params, scaling_compare};
pub use short_time::{
    fit_quadratic_decay, fit_quadratic_quartic, short_time_model, DecayRate, ShortTimeModel,
};

/// `ln L(t)` for precomputed modes.
pub fn log_echo_from_modes(modes: &[ModeData], t: f64) -> f64 {
    modes.iter().map(|m| m.ln_factor(t)).sum()
}

/// `ln L(λ, t)` over the full grid.
pub fn log_loschmidt_echo(params: &ChainParams, grid: &MomentumGrid, t: f64) -> f64 {
    log_echo_from_modes(&grid_modes(params, grid), t)
}

/// `L(λ, t) = ∏_{k>0} F_k(t)`.
///
/// Exactly `0` only when some factor vanishes exactly.
pub fn loschmidt_echo(params: &ChainParams, grid: &MomentumGrid, t: f64) -> f64 {
    log_loschmidt_echo(params, grid, t).exp()
}

/// `L_c(λ, t)`: the echo product restricted to modes with `k <= k_cutoff`
/// (momentum in units of `1/a`). An empty selection gives `1`.
pub fn partial_echo(params: &ChainParams, grid: &MomentumGrid, k_cutoff: f64, t: f64) -> f64 {
    let limit = k_cutoff * (1.0 + 1e-12);
    grid.modes()
        .iter()
        .filter(|k| k.value(params.a()) <= limit)
        .map(|&k| crate::spectrum::mode_data(k, params).ln_factor(t))
        .sum::<f64>()
        .exp()
}

/// Exact small-time coefficient `Γ₂ = Σ_{k>0} sin²(2α_k) (ε_e^k)²`, so that
/// `-ln L(t) = Γ₂ t² + O(t⁴)`.
pub fn quadratic_decay_coefficient(params: &ChainParams, grid: &MomentumGrid) -> f64 {
    quadratic_coefficient_from_modes(&grid_modes(params, grid))
}

pub fn quadratic_coefficient_from_modes(modes: &[ModeData]) -> f64 {
    modes
        .iter()
        .map(|m| m.sin2_2alpha * m.eps_e * m.eps_e)
        .sum()
}

/// Central qubit state `c_g |g> + c_e |e>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    c_g: Complex64,
    c_e: Complex64,
}

impl QubitState {
    pub fn new(c_g: Complex64, c_e: Complex64) -> Result<Self> {
        let norm = c_g.norm_sqr() + c_e.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::UnnormalizedQubit(norm));
        }
        Ok(Self { c_g, c_e })
    }

    /// Equal-weight superposition `(|g> + |e>)/√2`.
    pub fn plus() -> Self {
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { c_g: c, c_e: c }
    }

    pub fn c_g(&self) -> Complex64 {
        self.c_g
    }

    pub fn c_e(&self) -> Complex64 {
        self.c_e
    }

    /// `|c_e c_g|²`, from populations renormalized to sum to one so that
    /// e.g. `|+>` gives exactly `1/4` despite its rounded amplitudes.
    pub fn coherence_weight(&self) -> f64 {
        let (pg, pe) = (self.c_g.norm_sqr(), self.c_e.norm_sqr());
        let total = pg + pe;
        (pg / total) * (pe / total)
    }
}

/// Slack allowed on `L` before [`purity_from_echo`] rejects it.
pub const ECHO_RANGE_TOLERANCE: f64 = 1e-12;

/// Qubit purity `P = 1 - 2|c_e c_g|² (1 - L)`.
pub fn purity_from_echo(q: &QubitState, echo: f64) -> Result<f64> {
    if !(-ECHO_RANGE_TOLERANCE..=1.0 + ECHO_RANGE_TOLERANCE).contains(&echo) {
        return Err(Error::EchoOutOfRange(echo));
    }
    let echo = echo.clamp(0.0, 1.0);
    Ok(1.0 - 2.0 * q.coherence_weight() * (1.0 - echo))
}

/// Echo sampled on a time grid.
#[derive(Debug, Clone, Serialize)]
pub struct EchoCurve {
    pub params: ChainParams,
    pub grid: MomentumGrid,
    pub times: Vec<f64>,
    pub log_values: Vec<f64>,
    pub values: Vec<f64>,
}

impl EchoCurve {
    /// Evaluates the echo at every time; samples are computed in parallel
    /// and stored in input order.
    pub fn compute(params: ChainParams, grid: MomentumGrid, times: Vec<f64>) -> Self {
        let modes = grid_modes(&params, &grid);
        let log_values: Vec<f64> = times
            .par_iter()
            .map(|&t| log_echo_from_modes(&modes, t))
            .collect();
        let values = log_values.iter().map(|l| l.exp()).collect();
        Self {
            params,
            grid,
            times,
            log_values,
            values,
        }
    }

    /// Uniform grid `0, dt, 2dt, ..` up to and including `t_max`.
    pub fn uniform(params: ChainParams, grid: MomentumGrid, t_max: f64, dt: f64) -> Result<Self> {
        Ok(Self::compute(params, grid, uniform_times(0.0, t_max, dt)?))
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `min, min + step, ..` up to `max` (inclusive within rounding).
pub fn uniform_times(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "time step must be positive, got {step}"
        )));
    }
    if !(min.is_finite() && max.is_finite() && min <= max) {
        return Err(Error::InvalidGrid(format!(
            "time range [{min}, {max}] is empty"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{mode_factor, momentum_grid, GridConvention};

    fn setup(n: usize, lambda: f64, delta: f64) -> (ChainParams, MomentumGrid) {
        let p = ChainParams::new(n, lambda, delta).unwrap();
        let g = momentum_grid(&p, GridConvention::PaperInteger);
        (p, g)
    }

    #[test]
    fn trivial_limits() {
        let (p, g) = setup(200, 0.9, 0.1);
        assert_eq!(loschmidt_echo(&p, &g, 0.0), 1.0);
        let (p, g) = setup(200, 0.9, 0.0);
        for t in [0.0, 0.3, 5.0, 27.0, -3.0] {
            assert_eq!(loschmidt_echo(&p, &g, t).to_bits(), 1.0f64.to_bits());
        }
    }

    #[test]
    fn exact_zero_only_from_vanishing_factor() {
        let (p, g) = setup(8, 0.5, 0.1);
        let mut modes = grid_modes(&p, &g);
        modes[1].sin2_2alpha = 1.0;
        let t = std::f64::consts::FRAC_PI_2 / modes[1].eps_e;
        let f = mode_factor(&modes[1], t);
        let l = log_echo_from_modes(&modes, t).exp();
        if f == 0.0 {
            assert_eq!(l, 0.0);
        } else {
            assert!(l > 0.0);
        }
    }

    #[test]
    fn no_underflow_for_large_critical_chain() {
        let (p, g) = setup(2500, 0.99, 0.01);
        let log_l: f64 = (0..540)
            .map(|i| log_loschmidt_echo(&p, &g, i as f64 * 0.05))
            .fold(0.0, f64::min);
        assert!(log_l.is_finite());
    }

    #[test]
    fn purity_examples() {
        let q = QubitState::plus();
        assert_eq!(purity_from_echo(&q, 1.0).unwrap(), 1.0);
        assert_eq!(purity_from_echo(&q, 0.0).unwrap(), 0.5);
        assert_eq!(q.coherence_weight(), 0.25);
        let q = QubitState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(purity_from_echo(&q, 0.0).unwrap(), 1.0);
        assert!(purity_from_echo(&q, 1.1).is_err());
        assert!(purity_from_echo(&q, -0.01).is_err());
        assert!(QubitState::new(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn partial_echo_examples() {
        let (p, g) = setup(200, 0.9, 0.1);
        let full = loschmidt_echo(&p, &g, 2.0);
        let all = partial_echo(&p, &g, std::f64::consts::PI, 2.0);
        assert!((all - full).abs() <= 1e-15 * full.max(1e-300));
        assert_eq!(
            partial_echo(&p, &g, 0.5 * std::f64::consts::PI / 100.0, 2.0),
            1.0
        );
        let kc = 3.0 * 2.0 * std::f64::consts::PI / 200.0;
        assert!(partial_echo(&p, &g, kc, 2.0) >= full);
    }

    #[test]
    fn partial_echo_cutoff_includes_boundary_mode() {
        let (p, g) = setup(200, 0.9, 0.1);
        let kc = 3.0 * 2.0 * std::f64::consts::PI / 200.0;
        let modes = grid_modes(&p, &g);
        let expect: f64 = modes[..3]
            .iter()
            .map(|m| m.ln_factor(2.0))
            .sum::<f64>()
            .exp();
        assert_eq!(partial_echo(&p, &g, kc, 2.0), expect);
    }

    #[test]
    fn quadratic_coefficient_examples() {
        let (p, g) = setup(8, 0.5, 0.0);
        assert_eq!(quadratic_decay_coefficient(&p, &g), 0.0);

        // central second difference of -ln L at t = 0, step 1e-4
        let (p, g) = setup(8, 0.5, 0.1);
        let h = 1e-4;
        let f = |t: f64| -log_loschmidt_echo(&p, &g, t);
        let second = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let gamma2 = quadratic_decay_coefficient(&p, &g);
        assert!(
            ((second / 2.0) - gamma2).abs() < 1e-6 * gamma2,
            "{second} vs {gamma2}"
        );

        let m = grid_modes(&p, &g)[1];
        assert_eq!(
            quadratic_coefficient_from_modes(&[m]),
            m.sin2_2alpha * m.eps_e * m.eps_e
        );
    }

    #[test]
    fn uniform_times_inclusive() {
        let t = uniform_times(0.0, 27.0, 0.05).unwrap();
        assert_eq!(t.len(), 541);
        assert!((t[540] - 27.0).abs() < 1e-12);
        assert_eq!(uniform_times(1.0, 1.0, 0.1).unwrap(), vec![1.0]);
        assert!(uniform_times(0.0, 1.0, 0.0).is_err());
        assert!(uniform_times(2.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn curve_matches_pointwise() {
        let (p, g) = setup(50, 1.5, 0.1);
        let c = EchoCurve::uniform(p, g.clone(), 5.0, 0.25).unwrap();
        assert_eq!(c.values[0], 1.0);
        for (i, &t) in c.times.iter().enumerate() {
            assert_eq!(c.values[i], loschmidt_echo(&p, &g, t));
            assert_eq!(c.values[i], c.log_values[i].exp());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn truncation_is_monotone(lambda in 0.0f64..2.0, delta in -0.2f64..0.2, t in 0.0f64..30.0, c1 in 1usize..50, c2 in 1usize..50) {
                let (p, g) = setup(100, lambda, delta);
                let (lo, hi) = (c1.min(c2), c1.max(c2));
                let k = |c: usize| c as f64 * 2.0 * std::f64::consts::PI / 100.0;
                let a = partial_echo(&p, &g, k(lo), t);
                let b = partial_echo(&p, &g, k(hi), t);
                let full = loschmidt_echo(&p, &g, t);
                prop_assert!(a >= b && b >= full);
            }

            #[test]
            fn log_domain_matches_direct_product(lambda in 0.0f64..2.0, delta in -0.2f64..0.2, t in 0.0f64..30.0) {
                let (p, g) = setup(50, lambda, delta);
                let modes = grid_modes(&p, &g);
                let direct: f64 = modes.iter().map(|m| mode_factor(m, t)).product();
                let log = log_echo_from_modes(&modes, t).exp();
                if direct > 1e-280 {
                    prop_assert!((log - direct).abs() <= 1e-12 * direct);
                }
            }

            #[test]
            fn even_in_time(lambda in 0.0f64..2.0, delta in -0.2f64..0.2, t in 0.0f64..30.0) {
                let (p, g) = setup(50, lambda, delta);
                prop_assert_eq!(loschmidt_echo(&p, &g, t), loschmidt_echo(&p, &g, -t));
            }

            #[test]
            fn small_time_law(lambda in 0.0f64..2.0, delta in 0.01f64..0.2, frac in 0.01f64..1.0) {
                let (p, g) = setup(50, lambda, delta);
                let gamma2 = quadratic_decay_coefficient(&p, &g);
                prop_assume!(gamma2 > 0.0);
                // keep every mode phase and the total decay small
                let eps_max = grid_modes(&p, &g).iter().map(|m| m.eps_e).fold(0.0, f64::max);
                let t = frac * (0.05 / eps_max).min(0.01 / gamma2.sqrt());
                let rate = -log_loschmidt_echo(&p, &g, t) / (t * t);
                prop_assert!((rate - gamma2).abs() <= 0.01 * gamma2);
            }

            #[test]
            fn purity_bounds(re_g in -1.0f64..1.0, im_g in -1.0f64..1.0, re_e in -1.0f64..1.0, im_e in -1.0f64..1.0, l1 in 0.0f64..=1.0, l2 in 0.0f64..=1.0) {
                let norm = (re_g * re_g + im_g * im_g + re_e * re_e + im_e * im_e).sqrt();
                prop_assume!(norm > 1e-3);
                let q = QubitState::new(
                    Complex64::new(re_g / norm, im_g / norm),
                    Complex64::new(re_e / norm, im_e / norm),
                ).unwrap();
                let w = q.coherence_weight();
                let p1 = purity_from_echo(&q, l1).unwrap();
                let p2 = purity_from_echo(&q, l2).unwrap();
                prop_assert!(p1 >= 1.0 - 2.0 * w - 1e-15 && p1 <= 1.0);
                if l1 < l2 {
                    prop_assert!(p1 <= p2);
                }
            }
        }
    }
}

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::ChainParams;

/// Gaussian decay rate of the cutoff echo. Singular at `λ = 1`, where the
/// `(1-λ)²` denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum DecayRate {
    Finite(f64),
    Singular,
}

impl DecayRate {
    pub fn value(self) -> Option<f64> {
        match self {
            DecayRate::Finite(g) => Some(g),
            DecayRate::Singular => None,
        }
    }
}

/// Small-momentum model of the echo below a cutoff `K_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShortTimeModel {
    pub k_c: f64,
    /// Integer nearest to `N K_c a / 2π`.
    pub n_c: usize,
    /// `E(K_c) = 4π² N_c (N_c+1)(2N_c+1) / (6N²)`, i.e. `Σ (ka)²` below the cutoff.
    pub e_kc: f64,
    pub gamma: DecayRate,
    params: ChainParams,
}

/// Builds the cutoff model; `k_c` is in units of `1/a` and must lie in
/// `(0, π/a]` and select at least one mode.
pub fn short_time_model(params: &ChainParams, k_c: f64) -> Result<ShortTimeModel> {
    let a = params.a();
    if !(k_c > 0.0 && k_c <= PI / a * (1.0 + 1e-12)) {
        return Err(Error::InvalidParams(format!(
            "cutoff K_c = {k_c} outside (0, pi/a]"
        )));
    }
    let n = params.n() as f64;
    let n_c = (n * k_c * a / (2.0 * PI)).round() as usize;
    if n_c == 0 {
        return Err(Error::EmptyCutoff { k_c });
    }
    let m = n_c as f64;
    let e_kc = 4.0 * PI * PI * m * (m + 1.0) * (2.0 * m + 1.0) / (6.0 * n * n);
    let one_minus = 1.0 - params.lambda();
    let gamma = if params.delta() == 0.0 {
        DecayRate::Finite(0.0)
    } else if one_minus == 0.0 {
        DecayRate::Singular
    } else {
        let jd = params.j() * params.delta();
        DecayRate::Finite(4.0 * jd * jd * e_kc / (one_minus * one_minus))
    };
    Ok(ShortTimeModel {
        k_c,
        n_c,
        e_kc,
        gamma,
        params: *params,
    })
}

impl ShortTimeModel {
    /// `exp(-γ t²)`; `None` at the singular point.
    pub fn gaussian(&self, t: f64) -> Option<f64> {
        self.gamma.value().map(|g| (-g * t * t).exp())
    }

    /// Small-`k` estimate of `S(λ, t) = ln L_c`:
    /// `-δ² E(K_c) sin²(2Jt|1-λ-δ|) / [(1-λ)² (1-λ-δ)²]`.
    pub fn partial_sum_approx(&self, t: f64) -> Option<f64> {
        let p = &self.params;
        let u = 1.0 - p.lambda();
        if u == 0.0 {
            return None;
        }
        let v = (u - p.delta()).abs();
        // sin²(2Jtv)/v² -> (2Jt)² as v -> 0
        let w = 2.0 * p.j() * t;
        let ratio = if v == 0.0 {
            w * w
        } else {
            let s = (w * v).sin() / v;
            s * s
        };
        Some(-p.delta() * p.delta() * self.e_kc * ratio / (u * u))
    }
}

/// Least-squares slope of `-ln L` against `t²` through the origin.
pub fn fit_quadratic_decay(times: &[f64], log_values: &[f64]) -> f64 {
    let (num, den) = times
        .iter()
        .zip(log_values)
        .fold((0.0, 0.0), |(num, den), (&t, &l)| {
            let x = t * t;
            (num + x * (-l), den + x * x)
        });
    num / den
}

/// Least-squares fit of `-ln L ≈ a t² + b t⁴`; returns `(a, b)`.
///
/// The quartic term absorbs the leading curvature so that `a` stays close
/// to the exact `t²` coefficient over windows where the pure fit drifts.
pub fn fit_quadratic_quartic(times: &[f64], log_values: &[f64]) -> (f64, f64) {
    let (mut s44, mut s46, mut s88, mut r2, mut r4) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &l) in times.iter().zip(log_values) {
        let x = t * t;
        let y = x * x;
        s44 += x * x;
        s46 += x * y;
        s88 += y * y;
        r2 += x * (-l);
        r4 += y * (-l);
    }
    let det = s44 * s88 - s46 * s46;
    ((r2 * s88 - r4 * s46) / det, (s44 * r4 - s46 * r2) / det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::echo::{log_loschmidt_echo, partial_echo};
    use crate::spectrum::{momentum_grid, GridConvention};

    fn cutoff(n_c: usize, n: usize) -> f64 {
        n_c as f64 * 2.0 * PI / n as f64
    }

    #[test]
    fn cutoff_energy_examples() {
        let p = ChainParams::new(200, 0.9, 0.1).unwrap();
        let m = short_time_model(&p, cutoff(1, 200)).unwrap();
        assert_eq!(m.n_c, 1);
        assert!((m.e_kc - PI * PI * 1e-4).abs() < 1e-18);
        assert!((m.e_kc - 9.8696e-4).abs() < 1e-8);
        let g = m.gamma.value().unwrap();
        assert!((g - 4.0 * m.e_kc).abs() < 1e-15, "{g}");
    }

    #[test]
    fn cutoff_energy_is_sum_of_squared_momenta() {
        let p = ChainParams::new(200, 0.5, 0.1).unwrap();
        let grid = momentum_grid(&p, GridConvention::PaperInteger);
        for n_c in [1, 2, 5, 17] {
            let m = short_time_model(&p, cutoff(n_c, 200)).unwrap();
            let direct: f64 = grid.modes()[..n_c].iter().map(|k| k.ka().powi(2)).sum();
            assert!((m.e_kc - direct).abs() < 1e-12 * direct);
        }
    }

    #[test]
    fn zero_delta_means_zero_rate() {
        let p = ChainParams::new(200, 0.9, 0.0).unwrap();
        assert_eq!(
            short_time_model(&p, cutoff(3, 200)).unwrap().gamma,
            DecayRate::Finite(0.0)
        );
        let p = ChainParams::new(200, 1.0, 0.0).unwrap();
        assert_eq!(
            short_time_model(&p, cutoff(3, 200)).unwrap().gamma,
            DecayRate::Finite(0.0)
        );
    }

    #[test]
    fn critical_rate_is_flagged() {
        let p = ChainParams::new(200, 1.0, 0.1).unwrap();
        let m = short_time_model(&p, cutoff(2, 200)).unwrap();
        assert_eq!(m.gamma, DecayRate::Singular);
        assert_eq!(m.gaussian(1.0), None);
        let json = serde_json::to_string(&m.gamma).unwrap();
        assert_eq!(json, r#"{"kind":"singular"}"#);
    }

    #[test]
    fn rejects_bad_cutoffs() {
        let p = ChainParams::new(200, 0.5, 0.1).unwrap();
        assert!(short_time_model(&p, 0.0).is_err());
        assert!(short_time_model(&p, 4.0).is_err());
        assert!(matches!(
            short_time_model(&p, 0.01),
            Err(Error::EmptyCutoff { .. })
        ));
        assert!(short_time_model(&p, PI).is_ok());
    }

    #[test]
    fn gaussian_tracks_partial_echo_near_criticality() {
        // λ close to 1, cutoff well inside the small-k regime, short times
        let p = ChainParams::new(2000, 0.95, 0.01).unwrap();
        let grid = momentum_grid(&p, GridConvention::PaperInteger);
        let kc = cutoff(2, 2000);
        let m = short_time_model(&p, kc).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let exact = partial_echo(&p, &grid, kc, t).ln();
            let approx = m.gaussian(t).unwrap().ln();
            assert!(
                (exact / approx - 1.0).abs() < 0.05,
                "t={t}: {exact} vs {approx}"
            );
            let s = m.partial_sum_approx(t).unwrap();
            assert!((exact / s - 1.0).abs() < 0.05, "t={t}: {exact} vs {s}");
        }
    }

    #[test]
    fn partial_sum_handles_gapless_excited_branch() {
        let p = ChainParams::new(200, 0.5, 0.5).unwrap();
        let m = short_time_model(&p, cutoff(1, 200)).unwrap();
        let s = m.partial_sum_approx(0.3).unwrap();
        let expect = -0.25 * m.e_kc * (2.0f64 * 0.3).powi(2) / 0.25;
        assert!((s - expect).abs() < 1e-15);
    }

    #[test]
    fn fit_recovers_exact_quadratic() {
        let times: Vec<f64> = (1..=20).map(|i| i as f64 * 0.01).collect();
        let logs: Vec<f64> = times.iter().map(|t| -3.5 * t * t).collect();
        assert!((fit_quadratic_decay(&times, &logs) - 3.5).abs() < 1e-14);

        let p = ChainParams::new(50, 0.7, 0.05).unwrap();
        let grid = momentum_grid(&p, GridConvention::PaperInteger);
        let logs: Vec<f64> = times
            .iter()
            .map(|&t| log_loschmidt_echo(&p, &grid, t))
            .collect();
        assert!(fit_quadratic_decay(&times, &logs) > 0.0);
    }

    #[test]
    fn two_term_fit_recovers_polynomial() {
        let times: Vec<f64> = (1..=40).map(|i| i as f64 * 0.005).collect();
        let logs: Vec<f64> = times
            .iter()
            .map(|t| -(2.0 * t * t - 0.7 * t.powi(4)))
            .collect();
        let (a, b) = fit_quadratic_quartic(&times, &logs);
        assert!((a - 2.0).abs() < 1e-9, "{a}");
        assert!((b + 0.7).abs() < 1e-6, "{b}");
    }

    #[test]
    fn two_term_fit_matches_gamma2_n200() {
        use crate::echo::quadratic_decay_coefficient;
        let p = ChainParams::new(200, 0.9, 0.1).unwrap();
        let grid = momentum_grid(&p, GridConvention::PaperInteger);
        let times: Vec<f64> = (1..=40).map(|i| i as f64 * 0.005).collect();
        let logs: Vec<f64> = times
            .iter()
            .map(|&t| log_loschmidt_echo(&p, &grid, t))
            .collect();
        let g2 = quadratic_decay_coefficient(&p, &grid);
        let (a, _) = fit_quadratic_quartic(&times, &logs);
        assert!(((a - g2) / g2).abs() < 0.01, "{a} vs {g2}");
    }
}

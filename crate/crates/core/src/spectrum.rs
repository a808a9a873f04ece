//! Free-fermion spectrum of the transverse-field Ising chain.
//!
//! Everything here is a pure function of [`ChainParams`]: momentum grids,
//! quasiparticle dispersions, Bogoliubov angles and the single-mode echo
//! factors. Energies are in units of `J`, times in units of `1/J`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical configuration of the environment chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainParams {
    n: usize,
    j: f64,
    lambda: f64,
    delta: f64,
    a: f64,
}

impl ChainParams {
    /// Chain with `J = 1` and `a = 1`.
    pub fn new(n: usize, lambda: f64, delta: f64) -> Result<Self> {
        Self::with_units(n, 1.0, lambda, delta, 1.0)
    }

    pub fn with_units(n: usize, j: f64, lambda: f64, delta: f64, a: f64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidSiteCount(n));
        }
        if !(j.is_finite() && j > 0.0) {
            return Err(Error::InvalidParams(format!(
                "J must be positive and finite, got {j}"
            )));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParams(format!(
                "a must be positive and finite, got {a}"
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidParams(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "delta must be finite, got {delta}"
            )));
        }
        Ok(Self {
            n,
            j,
            lambda,
            delta,
            a,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Transverse field felt by the chain in the excited branch.
    pub fn lambda_excited(&self) -> f64 {
        self.lambda + self.delta
    }

    pub fn set_lambda(self, lambda: f64) -> Result<Self> {
        Self::with_units(self.n, self.j, lambda, self.delta, self.a)
    }

    pub fn set_delta(self, delta: f64) -> Result<Self> {
        Self::with_units(self.n, self.j, self.lambda, delta, self.a)
    }

    pub fn set_n(self, n: usize) -> Result<Self> {
        Self::with_units(n, self.j, self.lambda, self.delta, self.a)
    }
}

/// A lattice momentum stored as the reduced value `q = k a / π`.
///
/// Keeping the rational grid value (rather than `k` itself) lets the
/// trigonometric functions hit `ka = π/2` and `ka = π` exactly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Momentum(f64);

impl Momentum {
    pub fn from_reduced(q: f64) -> Self {
        Momentum(q)
    }

    pub fn from_ka(ka: f64) -> Self {
        Momentum(ka / PI)
    }

    /// `k a / π`.
    pub fn reduced(self) -> f64 {
        self.0
    }

    pub fn ka(self) -> f64 {
        PI * self.0
    }

    /// Momentum in units of `1/a`.
    pub fn value(self, a: f64) -> f64 {
        PI * self.0 / a
    }

    /// `(sin ka, cos ka)` with exact zeros at multiples of `π/2`.
    pub fn sin_cos(self) -> (f64, f64) {
        sin_cos_pi(self.0)
    }
}

fn sin_cos_pi(q: f64) -> (f64, f64) {
    let r = q.rem_euclid(2.0);
    if r > 1.0 {
        let (s, c) = sin_cos_pi_unit(r - 1.0);
        return (-s, -c);
    }
    sin_cos_pi_unit(r)
}

// r in [0, 1]
fn sin_cos_pi_unit(r: f64) -> (f64, f64) {
    if r > 0.5 {
        let (s, c) = sin_cos_pi_half(1.0 - r);
        return (s, -c);
    }
    sin_cos_pi_half(r)
}

// r in [0, 1/2]
fn sin_cos_pi_half(r: f64) -> (f64, f64) {
    if r > 0.25 {
        let u = PI * (0.5 - r);
        (u.cos(), u.sin())
    } else {
        (PI * r).sin_cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridConvention {
    /// `k = 2πn/(Na)`, `n = 1..N/2`.
    #[default]
    #[serde(rename = "paper")]
    PaperInteger,
    /// `k = (2n-1)π/(Na)`, `n = 1..N/2`: the even-parity fermion sector.
    AntiPeriodic,
}

impl GridConvention {
    pub fn label(self) -> &'static str {
        match self {
            GridConvention::PaperInteger => "paper",
            GridConvention::AntiPeriodic => "antiperiodic",
        }
    }
}

impl std::str::FromStr for GridConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(GridConvention::PaperInteger),
            "antiperiodic" => Ok(GridConvention::AntiPeriodic),
            other => Err(Error::Config(format!(
                "unknown grid convention {other:?} (expected \"paper\" or \"antiperiodic\")"
            ))),
        }
    }
}

/// The `N/2` positive momenta of a chain, strictly increasing in `(0, π/a]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumGrid {
    convention: GridConvention,
    a: f64,
    modes: Vec<Momentum>,
}

impl MomentumGrid {
    pub fn convention(&self) -> GridConvention {
        self.convention
    }

    pub fn modes(&self) -> &[Momentum] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Momenta in units of `1/a`.
    pub fn values(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.value(self.a)).collect()
    }
}

pub fn momentum_grid(params: &ChainParams, convention: GridConvention) -> MomentumGrid {
    let n = params.n();
    let modes = (1..=n / 2)
        .map(|i| {
            let numer = match convention {
                GridConvention::PaperInteger => 2 * i,
                GridConvention::AntiPeriodic => 2 * i - 1,
            };
            // Neither convention contains k = 0, so the gap closing at
            // |g| = 1 is never sampled exactly.
            Momentum::from_reduced(numer as f64 / n as f64)
        })
        .collect();
    MomentumGrid {
        convention,
        a: params.a(),
        modes,
    }
}

/// Quasiparticle energy `ε(k; g) = 2J sqrt(1 + g² - 2g cos ka)`.
pub fn dispersion(k: Momentum, coupling: f64, params: &ChainParams) -> f64 {
    let (_, c) = k.sin_cos();
    let radicand = 1.0 + coupling * coupling - 2.0 * coupling * c;
    2.0 * params.j() * radicand.max(0.0).sqrt()
}

/// Bogoliubov angle `θ(k; g) = atan2(-sin ka, cos ka - g)` in `(-π, π]`.
///
/// At the gapless point (`|g| = 1` with `sin ka = 0`) the direction is
/// undefined; the limit approached along the grid is `-π/2`.
pub fn bogoliubov_angle(k: Momentum, coupling: f64, _params: &ChainParams) -> f64 {
    let (s, c) = k.sin_cos();
    let x = c - coupling;
    if s == 0.0 && x == 0.0 {
        return -FRAC_PI_2;
    }
    // keeps θ = +π rather than -π when sin ka is an exact zero
    let y = if s == 0.0 { 0.0 } else { -s };
    y.atan2(x)
}

/// Per-momentum spectral data for the ground (`λ`) and excited (`λ + δ`)
/// branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeData {
    pub k: Momentum,
    pub theta_g: f64,
    pub theta_e: f64,
    pub eps_g: f64,
    pub eps_e: f64,
    /// `(θ_g - θ_e) / 2`.
    pub alpha: f64,
    /// `sin²(2α)`.
    pub sin2_2alpha: f64,
}

pub fn mode_data(k: Momentum, params: &ChainParams) -> ModeData {
    let g = params.lambda();
    let ge = params.lambda_excited();
    let theta_g = bogoliubov_angle(k, g, params);
    let theta_e = bogoliubov_angle(k, ge, params);
    let two_alpha = theta_g - theta_e;
    let s = two_alpha.sin();
    ModeData {
        k,
        theta_g,
        theta_e,
        eps_g: dispersion(k, g, params),
        eps_e: dispersion(k, ge, params),
        alpha: 0.5 * two_alpha,
        sin2_2alpha: s * s,
    }
}

/// Mode data for every momentum of `grid`.
pub fn grid_modes(params: &ChainParams, grid: &MomentumGrid) -> Vec<ModeData> {
    grid.modes().iter().map(|&k| mode_data(k, params)).collect()
}

impl ModeData {
    /// `sin²(2α) sin²(ε_e t)`: the amount by which this mode's factor drops below 1.
    pub fn suppression(&self, t: f64) -> f64 {
        let s = (self.eps_e * t).sin();
        self.sin2_2alpha * (s * s)
    }

    /// `ln F_k(t)`, accurate when the suppression is tiny.
    pub fn ln_factor(&self, t: f64) -> f64 {
        (-self.suppression(t)).ln_1p()
    }
}

/// Single-mode echo factor `F_k(t) = 1 - sin²(2α_k) sin²(ε_e t)`.
pub fn mode_factor(mode: &ModeData, t: f64) -> f64 {
    1.0 - mode.suppression(t)
}

/// Leading small-`k` approximant of `sin²(2α_k)`:
/// `(δ ka)² / [(1-λ)² (1-λ-δ)²]`. Valid for `ka ≪ |1-λ-δ|` and `|1-λ|`.
pub fn small_k_sin2_2alpha(k: Momentum, params: &ChainParams) -> f64 {
    let ka = k.ka();
    let d = params.delta();
    let u = 1.0 - params.lambda();
    let v = u - d;
    (d * ka).powi(2) / (u * u * v * v)
}

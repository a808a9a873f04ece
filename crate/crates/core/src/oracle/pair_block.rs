//! Brute-force evolution inside each `(k, -k)` pair block.
//!
//! Each block is the two-level space {vacuum, pair-excited}. The echo factor
//! is obtained by literally evolving the ground state of `h_g` under both
//! Hamiltonians and taking the squared overlap; no Bogoliubov angle is used.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::spectrum::{ChainParams, Momentum, MomentumGrid};

pub type Mat2 = Matrix2<Complex64>;
pub type Vec2 = Vector2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

fn pauli_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// `h = 2J [(g - cos ka) Z + sin ka X]` in the pair basis.
pub fn pair_block_hamiltonian(k: Momentum, coupling: f64, params: &ChainParams) -> Mat2 {
    let (s, c) = k.sin_cos();
    let two_j = 2.0 * params.j();
    pauli_z() * real(two_j * (coupling - c)) + pauli_x() * real(two_j * s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairBlock {
    pub k: Momentum,
    pub h_g: Mat2,
    pub h_e: Mat2,
}

impl PairBlock {
    pub fn new(k: Momentum, params: &ChainParams) -> Self {
        Self {
            k,
            h_g: pair_block_hamiltonian(k, params.lambda(), params),
            h_e: pair_block_hamiltonian(k, params.lambda_excited(), params),
        }
    }
}

/// Pauli decomposition `h = h0 I + r (n · σ)` with unit `n` and `r >= 0`.
struct BlochForm {
    h0: f64,
    r: f64,
    n: [f64; 3],
}

fn bloch_form(h: &Mat2) -> BlochForm {
    let h0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let hz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    // h01 = hx - i hy
    let hx = h[(0, 1)].re;
    let hy = -h[(0, 1)].im;
    let r = (hx * hx + hy * hy + hz * hz).sqrt();
    let n = if r > 0.0 {
        [hx / r, hy / r, hz / r]
    } else {
        [0.0, 0.0, 1.0]
    };
    BlochForm { h0, r, n }
}

/// Eigenvalues `(low, high)` of a Hermitian 2×2 matrix.
pub fn eigenvalues(h: &Mat2) -> (f64, f64) {
    let b = bloch_form(h);
    (b.h0 - b.r, b.h0 + b.r)
}

/// Normalized lower eigenvector, i.e. the `-1` eigenvector of `n · σ`.
pub fn ground_state(h: &Mat2) -> Vec2 {
    let [nx, ny, nz] = bloch_form(h).n;
    // two algebraically equivalent choices; take the better-conditioned one
    let v = if nz <= 0.0 {
        Vec2::new(real(1.0 - nz), -Complex64::new(nx, ny))
    } else {
        Vec2::new(-Complex64::new(nx, -ny), real(1.0 + nz))
    };
    let norm = v.norm();
    v / real(norm)
}

/// `exp(-i h t) = e^{-i h0 t} [cos(rt) I - i sin(rt) n·σ]`.
pub fn propagator(h: &Mat2, t: f64) -> Mat2 {
    let b = bloch_form(h);
    let [nx, ny, nz] = b.n;
    let n_sigma = Mat2::new(
        real(nz),
        Complex64::new(nx, -ny),
        Complex64::new(nx, ny),
        real(-nz),
    );
    let (s, c) = (b.r * t).sin_cos();
    let phase = Complex64::from_polar(1.0, -b.h0 * t);
    (Mat2::identity() * real(c) - n_sigma * (I * s)) * phase
}

/// Squared overlap `|<g| e^{+i h_g t} e^{-i h_e t} |g>|²` together with the
/// largest norm deviation of the two evolved states.
pub fn pair_block_evolution(block: &PairBlock, t: f64) -> (f64, f64) {
    let g = ground_state(&block.h_g);
    let phi_g = propagator(&block.h_g, t) * g;
    let phi_e = propagator(&block.h_e, t) * g;
    let overlap = phi_g.dotc(&phi_e).norm_sqr();
    let norm_dev = (phi_g.norm() - 1.0).abs().max((phi_e.norm() - 1.0).abs());
    (overlap, norm_dev)
}

pub fn pair_block_echo_factor(block: &PairBlock, t: f64) -> f64 {
    pair_block_evolution(block, t).0
}

/// Product of pair-block factors over the grid, accumulated in the log domain.
pub fn oracle_echo_product(params: &ChainParams, grid: &MomentumGrid, t: f64) -> f64 {
    grid.modes()
        .iter()
        .map(|&k| pair_block_echo_factor(&PairBlock::new(k, params), t).ln())
        .sum::<f64>()
        .exp()
}

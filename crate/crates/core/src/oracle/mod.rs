//! Independent brute-force checks of the analytic echo.

mod pair_block;
mod spin_chain;

pub use pair_block::{
    eigenvalues, ground_state, oracle_echo_product, pair_block_echo_factor, pair_block_evolution,
    pair_block_hamiltonian, propagator, Mat2, PairBlock, Vec2,
};
pub use spin_chain::{
    spin_ed_echo, spin_hamiltonian_dense, FlipParity, SpinEdEvolver, SpinEdSample, DEGENERACY_GAP,
    MAX_DENSE_SITES,
};

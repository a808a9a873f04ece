//! Exact diagonalization of the periodic spin chain
//! `H = -J Σ_j (σ^z_j σ^z_{j+1} + g σ^x_j)`.
//!
//! Basis states are bit strings; bit `j` set means site `j` points down
//! (`σ^z = -1`). The echo is evaluated in the sector that is invariant under
//! lattice translations and has spin-flip parity `Π = ∏ σ^x_j = +1`: the
//! ground state of `H_g` lives there and both Hamiltonians preserve it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::ChainParams;

/// Largest chain for which dense matrices are built.
pub const MAX_DENSE_SITES: usize = 14;

/// Ground-state splitting below which the ground space counts as degenerate
/// (units of `J`).
pub const DEGENERACY_GAP: f64 = 1e-10;

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_SITES {
        return Err(Error::TooManySites {
            n,
            max: MAX_DENSE_SITES,
        });
    }
    Ok(())
}

fn zz_energy(state: usize, n: usize, j: f64) -> f64 {
    let bonds: i64 = (0..n)
        .map(|site| {
            let a = (state >> site) & 1;
            let b = (state >> ((site + 1) % n)) & 1;
            if a == b {
                1
            } else {
                -1
            }
        })
        .sum();
    -j * bonds as f64
}

/// Full `2^N × 2^N` Hamiltonian in the `σ^z` basis (real symmetric).
pub fn spin_hamiltonian_dense(params: &ChainParams, coupling: f64) -> Result<DMatrix<f64>> {
    let n = params.n();
    check_size(n)?;
    let dim = 1usize << n;
    let j = params.j();
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        h[(s, s)] = zz_energy(s, n, j);
        for site in 0..n {
            h[(s ^ (1 << site), s)] += -j * coupling;
        }
    }
    Ok(h)
}

/// Global spin-flip parity eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipParity {
    Even,
    Odd,
}

/// Orbit bookkeeping for the group generated by translations and the global flip.
struct Orbits {
    n: usize,
    /// canonical representative of every basis state
    rep: Vec<usize>,
    /// whether the map from the state to its representative involves the flip
    flipped: Vec<bool>,
    /// orbit size, indexed by representative
    orbit_size: Vec<usize>,
    /// representative reachable from itself through a flipping element
    self_flip: Vec<bool>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        let dim = 1usize << n;
        let mask = dim - 1;
        let rotate = |s: usize, by: usize| ((s << by) | (s >> (n - by))) & mask;
        let mut rep = vec![0; dim];
        let mut flipped = vec![false; dim];
        let mut orbit_size = vec![0; dim];
        let mut self_flip = vec![false; dim];
        let mut members = Vec::with_capacity(2 * n);
        for s in 0..dim {
            members.clear();
            let mut best = usize::MAX;
            let mut best_plain = false;
            let mut best_flip = false;
            for by in 0..n {
                let plain = if by == 0 { s } else { rotate(s, by) };
                for (image, is_flip) in [(plain, false), (plain ^ mask, true)] {
                    members.push(image);
                    if image < best {
                        best = image;
                        best_plain = !is_flip;
                        best_flip = is_flip;
                    } else if image == best {
                        best_plain |= !is_flip;
                        best_flip |= is_flip;
                    }
                }
            }
            rep[s] = best;
            flipped[s] = !best_plain;
            if s == best {
                members.sort_unstable();
                members.dedup();
                orbit_size[s] = members.len();
                self_flip[s] = best_flip;
            }
        }
        Self {
            n,
            rep,
            flipped,
            orbit_size,
            self_flip,
        }
    }
}

/// Hamiltonian restricted to the translation-invariant sector of the given
/// flip parity, in the basis of normalized symmetrized orbit states.
fn sector_hamiltonian(orbits: &Orbits, j: f64, coupling: f64, parity: FlipParity) -> DMatrix<f64> {
    let n = orbits.n;
    let dim = 1usize << n;
    let basis: Vec<usize> = (0..dim)
        .filter(|&s| orbits.rep[s] == s && !(parity == FlipParity::Odd && orbits.self_flip[s]))
        .collect();
    let mut index = vec![usize::MAX; dim];
    for (i, &s) in basis.iter().enumerate() {
        index[s] = i;
    }
    let size = basis.len();
    let mut h = DMatrix::zeros(size, size);
    for (col, &s) in basis.iter().enumerate() {
        let os = orbits.orbit_size[s] as f64;
        let mut add = |b: usize, amp: f64| {
            let r = orbits.rep[b];
            let row = index[r];
            if row == usize::MAX {
                return;
            }
            let sign = if parity == FlipParity::Odd && orbits.flipped[b] {
                -1.0
            } else {
                1.0
            };
            let or = orbits.orbit_size[r] as f64;
            h[(row, col)] += amp * sign * (os / or).sqrt();
        };
        add(s, zz_energy(s, n, j));
        for site in 0..n {
            add(s ^ (1 << site), -j * coupling);
        }
    }
    h
}

struct Spectrum {
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn diagonalize(h: DMatrix<f64>) -> Spectrum {
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Spectrum { energies, vectors }
}

/// One echo evaluation from the spin-chain oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinEdSample {
    pub echo: f64,
    /// Largest `| ||φ(t)|| - 1 |` over the two branches.
    pub norm_deviation: f64,
    /// Ground state of `H_g` is (nearly) degenerate with its odd-parity partner.
    pub degenerate: bool,
}

/// Spectral decompositions of both branch Hamiltonians, reusable across times.
pub struct SpinEdEvolver {
    ground_energy: f64,
    parity_gap: f64,
    psi0: DVector<f64>,
    spec_g: Spectrum,
    spec_e: Spectrum,
    coeff_g: DVector<f64>,
    coeff_e: DVector<f64>,
}

impl SpinEdEvolver {
    pub fn new(params: &ChainParams) -> Result<Self> {
        let n = params.n();
        check_size(n)?;
        let orbits = Orbits::new(n);
        let j = params.j();
        let spec_g = diagonalize(sector_hamiltonian(
            &orbits,
            j,
            params.lambda(),
            FlipParity::Even,
        ));
        let odd_g = diagonalize(sector_hamiltonian(
            &orbits,
            j,
            params.lambda(),
            FlipParity::Odd,
        ));
        let spec_e = diagonalize(sector_hamiltonian(
            &orbits,
            j,
            params.lambda_excited(),
            FlipParity::Even,
        ));
        let psi0: DVector<f64> = spec_g.vectors.column(0).into_owned();
        let coeff_g = spec_g.vectors.tr_mul(&psi0);
        let coeff_e = spec_e.vectors.tr_mul(&psi0);
        Ok(Self {
            ground_energy: spec_g.energies[0],
            parity_gap: odd_g.energies[0] - spec_g.energies[0],
            psi0,
            spec_g,
            spec_e,
            coeff_g,
            coeff_e,
        })
    }

    /// Ground energy of `H_g`.
    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    /// `E_0(Π = -1) - E_0(Π = +1)` for `H_g`.
    pub fn parity_gap(&self) -> f64 {
        self.parity_gap
    }

    pub fn is_degenerate(&self) -> bool {
        self.parity_gap.abs() < DEGENERACY_GAP
    }

    /// Dimension of the symmetric sector the evolution runs in.
    pub fn sector_dim(&self) -> usize {
        self.psi0.len()
    }

    fn evolve(spec: &Spectrum, coeff: &DVector<f64>, t: f64) -> DVector<Complex64> {
        let phased = DVector::from_iterator(
            coeff.len(),
            spec.energies
                .iter()
                .zip(coeff.iter())
                .map(|(&e, &c)| Complex64::from_polar(c, -e * t)),
        );
        let v = spec.vectors.map(|x| Complex64::new(x, 0.0));
        v * phased
    }

    /// `|φ_g(t)> = e^{-i H_g t} |G_g>`.
    pub fn evolve_ground_branch(&self, t: f64) -> DVector<Complex64> {
        Self::evolve(&self.spec_g, &self.coeff_g, t)
    }

    /// `|φ_e(t)> = e^{-i H_e t} |G_g>`.
    pub fn evolve_excited_branch(&self, t: f64) -> DVector<Complex64> {
        Self::evolve(&self.spec_e, &self.coeff_e, t)
    }

    pub fn sample(&self, t: f64) -> SpinEdSample {
        let phi_g = self.evolve_ground_branch(t);
        let phi_e = self.evolve_excited_branch(t);
        let norm_deviation = (phi_g.norm() - 1.0).abs().max((phi_e.norm() - 1.0).abs());
        SpinEdSample {
            echo: phi_g.dotc(&phi_e).norm_sqr(),
            norm_deviation,
            degenerate: self.is_degenerate(),
        }
    }

    pub fn echo(&self, t: f64) -> f64 {
        self.sample(t).echo
    }
}

/// `L = |<φ_g(t)|φ_e(t)>|²` by exact diagonalization (`N <= 14`).
pub fn spin_ed_echo(params: &ChainParams, t: f64) -> Result<SpinEdSample> {
    Ok(SpinEdEvolver::new(params)?.sample(t))
}

//! Seeded random states and local unitaries for property checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matkit::{kron, ComplexMatrix};
use crate::states::DensityMatrix;

pub type StateRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random normalized two-qubit amplitudes.
pub fn pure_amplitudes<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 4] {
    let v: [Complex64; 4] = std::array::from_fn(|_| gaussian_complex(rng));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / norm)
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    DensityMatrix::validate(ComplexMatrix::outer(&pure_amplitudes(rng))).expect("pure state")
}

/// G G† / Tr with G a 4×`rank` complex Ginibre matrix.
pub fn mixed_state_of_rank<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> DensityMatrix {
    assert!((1..=4).contains(&rank));
    let g = ComplexMatrix::from_fn(4, rank, |_, _| gaussian_complex(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::validate(m.scale(1.0 / tr).hermitian_part()).expect("Ginibre state")
}

/// Mixed state with rank drawn uniformly from 1..=4.
pub fn mixed_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let rank = rng.random_range(1..=4);
    mixed_state_of_rank(rng, rank)
}

/// Haar-random element of SU(2).
pub fn qubit_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    ComplexMatrix::from_vec(
        2,
        2,
        vec![
            Complex64::new(a, b),
            Complex64::new(c, d),
            Complex64::new(-c, d),
            Complex64::new(a, -b),
        ],
    )
    .expect("finite")
}

/// U₁ ⊗ U₂ with independent Haar factors.
pub fn local_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    kron(&qubit_unitary(rng), &qubit_unitary(rng))
}

/// U ρ U†, re-validated.
pub fn conjugate(rho: &DensityMatrix, u: &ComplexMatrix) -> DensityMatrix {
    let m = &(u * rho.matrix()) * &u.adjoint();
    DensityMatrix::validate(m.hermitian_part()).expect("unitary image of a state")
}

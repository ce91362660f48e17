//! Seeded random inputs for the verification suites.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::AlgebraElement;
use crate::linalg::{eigh, CMatrix};
use crate::multiplier::Multiplier;

pub const DEFAULT_SEED: u64 = 0x5eed_2c0c_7c1e;

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Element with `terms` random coefficients on random group elements
/// (uniform for finite groups, in the box `[−radius, radius]ᵏ` on `ℤᵏ`).
pub fn random_element<R: Rng + ?Sized>(m: &Arc<Multiplier>, rng: &mut R, terms: usize, radius: i64) -> AlgebraElement {
    let group = m.group();
    let t: Vec<_> = (0..terms)
        .map(|_| (group.random_element(rng, radius), random_complex(rng)))
        .collect();
    AlgebraElement::from_terms(m.clone(), t).expect("sampled elements belong to the group")
}

/// `B + B*` with uniform complex entries of `B`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let b = CMatrix::from_fn(n, n, |_, _| random_complex(rng));
    b.add(&b.adjoint()).expect("square")
}

/// Eigenvector matrix of a random Hermitian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    eigh(&random_hermitian(n, rng)).expect("Hermitian by construction").vectors
}

/// Hermitian matrix with the given spectrum in a random eigenbasis.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> CMatrix {
    let u = random_unitary(values.len(), rng);
    let d = CMatrix::diag(values);
    u.matmul(&d).and_then(|x| x.matmul(&u.adjoint())).expect("square").hermitian_part()
}

/// Odd operator `[[0, B*], [B, 0]]` for the grading with `n_even` even then
/// `n_odd` odd basis vectors, where `B = XY` has generic rank `rank`.
pub fn random_graded<R: Rng + ?Sized>(n_even: usize, n_odd: usize, rank: usize, rng: &mut R) -> (CMatrix, Vec<i8>) {
    let x = CMatrix::from_fn(n_odd, rank, |_, _| random_complex(rng));
    let y = CMatrix::from_fn(rank, n_even, |_, _| random_complex(rng));
    let b = x.matmul(&y).expect("conformable");
    let n = n_even + n_odd;
    let d = CMatrix::from_fn(n, n, |i, j| match (i < n_even, j < n_even) {
        (false, true) => b[(i - n_even, j)],
        (true, false) => b[(j - n_even, i)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let grading = (0..n).map(|i| if i < n_even { 1 } else { -1 }).collect();
    (d, grading)
}

//! Seeded random sampling of vectors, matrices and unitaries.
//!
//! Every stochastic routine takes an explicit seed. Independent streams are
//! derived from `(seed, index)` so concurrent execution never changes results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{c, ComplexMatrix, ComplexVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream number `index` under master `seed`.
pub fn stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn random_vector(n: usize, rng: &mut impl Rng) -> ComplexVector {
    ComplexVector::from_fn(n, |_, _| gaussian_c64(rng))
}

/// Haar-ish random unit vector.
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> ComplexVector {
    loop {
        let v = random_vector(n, rng);
        let norm = v.norm();
        if norm > 1e-8 {
            return v / c(norm, 0.0);
        }
    }
}

/// Random real unit vector (all entries real).
pub fn random_real_unit_vector(n: usize, rng: &mut impl Rng) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(n, |_, _| c(rng.sample(StandardNormal), 0.0));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / c(norm, 0.0);
        }
    }
}

/// Haar random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / c(d.norm(), 0.0) } else { c(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Hermitian matrix with Gaussian entries (GUE-like).
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Random PSD matrix `G* G` with `G` of shape `rank × n`.
pub fn random_psd(n: usize, rank: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(rank, n, rng);
    g.adjoint() * g
}

/// Random density matrix (trace one, full rank with probability one).
pub fn random_state(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let p = random_psd(n, n, rng);
    let tr = crate::matrix::trace(&p).re;
    p / c(tr, 0.0)
}

//! Generators for each cone. All are seeded and return assembled operators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::library::ChoiNonDecomposable;
use crate::channels::LinearMap;
use crate::matrix::{self, c, identity, pt_unchecked, trace, ComplexMatrix, PSD_TOL};
use crate::random::{ginibre, random_psd, random_unitary};

use super::{ConeId, TensorElement};

/// `Σ_i a_i ⊗ b_i` with random PSD factors.
pub fn sample_cp_element(d: usize, terms: usize, rng: &mut impl Rng) -> TensorElement {
    let factors = (0..terms.max(1))
        .map(|_| {
            let a = random_psd(d, rng.random_range(1..=d), rng);
            let b = random_psd(d, rng.random_range(1..=d), rng);
            (a, b)
        })
        .collect();
    TensorElement::new(d, factors).expect("d x d factors")
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct SamplerStats {
    pub attempts: usize,
}

/// Acceptance rule of [`sample_cd`]: PSD with strictly positive partial transpose.
pub fn cd_accepts(x: &ComplexMatrix, d: usize) -> bool {
    matrix::is_psd(x, PSD_TOL).is_psd && matrix::is_psd(&pt_unchecked(x, d, d), PSD_TOL).min_eigenvalue > 1e-9
}

/// Full-rank Gram matrices accepted when the partial transpose is PSD.
/// The Gram width grows with the number of rejections, which raises the
/// acceptance rate without leaving the cone.
pub fn sample_cd(d: usize, rng: &mut impl Rng) -> (ComplexMatrix, SamplerStats) {
    let n = d * d;
    let mut attempts = 0;
    loop {
        attempts += 1;
        let width = n + n * (attempts / 8);
        let g = random_psd(n, width, rng);
        let g = &g / c(trace(&g).re, 0.0);
        if cd_accepts(&g, d) {
            return (g, SamplerStats { attempts });
        }
    }
}

/// `a ↦ K S(L a L*) K*` for a positive `S`; positive whenever `S` is.
struct Sandwich<'a> {
    k: ComplexMatrix,
    l: ComplexMatrix,
    inner: &'a dyn LinearMap,
}

impl LinearMap for Sandwich<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn image(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &self.k * self.inner.image(&(&self.l * a * self.l.adjoint())) * self.k.adjoint()
    }
}

struct Seed {
    d: usize,
    kind: u32,
}

impl LinearMap for Seed {
    fn dim(&self) -> usize {
        self.d
    }
    fn image(&self, a: &ComplexMatrix) -> ComplexMatrix {
        match self.kind {
            0 => a.clone(),
            1 => a.transpose(),
            2 => identity(self.d) * (matrix::trace(a) / c(self.d as f64, 0.0)),
            _ => ChoiNonDecomposable.image(a),
        }
    }
}

/// Choi matrix of a random positive map generated from the identity, the
/// transposition, the depolarising map and, for `d = 3`, Choi's map.
pub fn sample_positive_choi(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let kinds = if d == 3 { 4 } else { 3 };
    let kind = rng.random_range(0..kinds);
    let seed = Seed { d, kind };
    let (k, l) = if kind == 3 {
        (random_unitary(d, rng), random_unitary(d, rng))
    } else {
        (ginibre(d, d, rng), ginibre(d, d, rng))
    };
    Sandwich { k, l, inner: &seed }.choi().into_matrix()
}

fn sample_ci(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let n = d * d;
    let parts = rng.random_range(1..=3);
    let mut out = ComplexMatrix::zeros(n, n);
    for _ in 0..parts {
        let w: f64 = rng.random_range(0.05..1.0);
        let m = if rng.random_bool(0.25) {
            sample_cp_element(d, rng.random_range(1..=n), rng).assemble()
        } else {
            sample_positive_choi(d, rng)
        };
        let s = matrix::frobenius(&m).max(f64::MIN_POSITIVE);
        out += m * c(w / s, 0.0);
    }
    out
}

/// Random element of `cone` on `C^d ⊗ C^d`.
pub fn sample(cone: ConeId, d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let n = d * d;
    match cone {
        ConeId::Cp => sample_cp_element(d, rng.random_range(1..=2 * n), rng).assemble(),
        ConeId::Cd => sample_cd(d, rng).0,
        ConeId::Ccp => random_psd(n, rng.random_range(1..=n), rng),
        ConeId::Cppt => {
            let p = random_psd(n, rng.random_range(1..=n), rng);
            let q = random_psd(n, rng.random_range(1..=n), rng);
            matrix::hermitian_part(&(p + pt_unchecked(&q, d, d)))
        }
        ConeId::Ci => sample_ci(d, rng),
    }
}

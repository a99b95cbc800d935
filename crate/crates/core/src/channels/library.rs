//! Named maps used as ground truths.

use crate::error::{Error, Result};
use crate::matrix::{c, identity, matrix_unit, trace, ComplexMatrix, ComplexVector};

use super::{ChoiMap, KrausChannel, LinearMap, TransposeMap};

pub fn identity_channel(d: usize) -> KrausChannel {
    KrausChannel::new(vec![identity(d)]).expect("non-empty")
}

/// Completely depolarising channel `a ↦ Tr(a) 1/d`, Kraus operators `e_ij/√d`.
pub fn depolarizing(d: usize) -> KrausChannel {
    let s = c(1.0 / (d as f64).sqrt(), 0.0);
    let ops = (0..d).flat_map(|i| (0..d).map(move |j| matrix_unit(d, i, j) * s)).collect();
    KrausChannel::new(ops).expect("non-empty")
}

pub fn transpose_map(d: usize) -> TransposeMap {
    TransposeMap { dim: d }
}

/// Reduction map `a ↦ Tr(a) 1 - a`.
#[derive(Clone, Copy, Debug)]
pub struct ReductionMap {
    pub dim: usize,
}

impl LinearMap for ReductionMap {
    fn dim(&self) -> usize {
        self.dim
    }
    fn image(&self, a: &ComplexMatrix) -> ComplexMatrix {
        identity(self.dim) * trace(a) - a
    }
}

/// Choi's positive, non-decomposable map on `M_3`:
/// diagonal `(x11 + x33, x22 + x11, x33 + x22)`, off-diagonals negated.
#[derive(Clone, Copy, Debug)]
pub struct ChoiNonDecomposable;

impl LinearMap for ChoiNonDecomposable {
    fn dim(&self) -> usize {
        3
    }
    fn image(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let mut out = -a.clone();
        for i in 0..3 {
            let prev = (i + 2) % 3;
            out[(i, i)] = a[(i, i)] + a[(prev, prev)];
        }
        out
    }
}

pub fn choi_map_d3() -> ChoiMap {
    ChoiMap::from_map(&ChoiNonDecomposable)
}

/// `(1, i)/2`, the vector for which [`conjugate_pair_channel`] is unital.
pub fn conjugate_pair_unital_vector() -> ComplexVector {
    ComplexVector::from_vec(vec![c(0.5, 0.0), c(0.0, 0.5)])
}

/// Channel on `M_2` with Kraus operators `[v, v̄]` and `[v̄, v]` (columns).
/// `T(1) = 2(vv* + v̄v̄*)`.
pub fn conjugate_pair_channel(v: &ComplexVector) -> Result<KrausChannel> {
    if v.len() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a vector in C^2, got length {}", v.len())));
    }
    let vb = v.map(|z| z.conj());
    let v1 = ComplexMatrix::from_columns(&[v.clone(), vb.clone()]);
    let v2 = ComplexMatrix::from_columns(&[vb, v.clone()]);
    KrausChannel::new(vec![v1, v2])
}

/// Entrywise expansion of the conjugate-pair channel:
/// `a_00 + a_11` multiplies `vv* + v̄v̄*` and `a_01 + a_10` multiplies `v v̄* + v̄ v*`.
pub fn conjugate_pair_expansion(v: &ComplexVector, a: &ComplexMatrix) -> ComplexMatrix {
    let vb = v.map(|z| z.conj());
    let diag = v * v.adjoint() + &vb * vb.adjoint();
    let off = v * vb.adjoint() + &vb * v.adjoint();
    diag * (a[(0, 0)] + a[(1, 1)]) + off * (a[(0, 1)] + a[(1, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{eigenvalues_hermitian, max_abs_diff, operator_rank};
    use crate::random::{ginibre, seeded};

    #[test]
    fn choi_map_formula() {
        let mut rng = seeded(11);
        let a = ginibre(3, 3, &mut rng);
        let out = ChoiNonDecomposable.image(&a);
        assert!((out[(0, 0)] - (a[(0, 0)] + a[(2, 2)])).norm() < 1e-15);
        assert!((out[(1, 1)] - (a[(1, 1)] + a[(0, 0)])).norm() < 1e-15);
        assert!((out[(2, 2)] - (a[(2, 2)] + a[(1, 1)])).norm() < 1e-15);
        assert!((out[(0, 2)] + a[(0, 2)]).norm() < 1e-15);
        let ch = choi_map_d3().choi();
        let ev = eigenvalues_hermitian(ch.matrix());
        assert!((ev[0] + 1.0).abs() < 1e-12);
        let pt = eigenvalues_hermitian(ch.partial_transpose().matrix());
        assert!((pt[0] - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn conjugate_pair_structure() {
        let t = conjugate_pair_channel(&conjugate_pair_unital_vector()).unwrap();
        assert!(max_abs_diff(&t.image(&identity(2)), &identity(2)) < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t2 = conjugate_pair_channel(&ComplexVector::from_vec(vec![c(s, 0.0), c(0.0, s)])).unwrap();
        assert!(max_abs_diff(&t2.image(&identity(2)), &(identity(2) * c(2.0, 0.0))) < 1e-14);
        for v in t.kraus_ops() {
            assert_eq!(operator_rank(v, 1e-12), 2);
        }
        assert!(conjugate_pair_channel(&ComplexVector::zeros(3)).is_err());
    }

    #[test]
    fn conjugate_pair_expansion_matches_oracle() {
        // T(a) expanded over the entries a_ij
        let v = conjugate_pair_unital_vector();
        let vb = v.map(|z| z.conj());
        let t = conjugate_pair_channel(&v).unwrap();
        let mut rng = seeded(12);
        let a = ginibre(2, 2, &mut rng);
        let outer = |x: &ComplexVector, y: &ComplexVector| x * y.adjoint();
        let expected = outer(&v, &v) * a[(0, 0)]
            + outer(&v, &vb) * a[(0, 1)]
            + outer(&vb, &v) * a[(1, 0)]
            + outer(&vb, &vb) * a[(1, 1)]
            + outer(&vb, &vb) * a[(0, 0)]
            + outer(&vb, &v) * a[(0, 1)]
            + outer(&v, &vb) * a[(1, 0)]
            + outer(&v, &v) * a[(1, 1)];
        assert!(max_abs_diff(&t.image(&a), &expected) < 1e-14);
        assert!(max_abs_diff(&conjugate_pair_expansion(&v, &a), &expected) < 1e-14);
    }

    #[test]
    fn reduction_and_depolarizing() {
        let r = ReductionMap { dim: 3 };
        assert!(max_abs_diff(&r.image(&identity(3)), &(identity(3) * c(2.0, 0.0))) < 1e-15);
        let mut rng = seeded(13);
        let a = ginibre(3, 3, &mut rng);
        let out = depolarizing(3).image(&a);
        assert!(max_abs_diff(&out, &(identity(3) * (trace(&a) / c(3.0, 0.0)))) < 1e-14);
    }
}

//! Seeded generators of random channels and labelled positive maps.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blockpos::{m1_m2_split, BlockMatrix2};
use crate::error::Result;
use crate::matrix::{self, c, identity, kron, pt_unchecked, trace, ComplexMatrix, PINV_CUTOFF};
use crate::random::{ginibre, random_hermitian, random_psd, random_unit_vector, random_unitary};
use crate::spectrahedron::{project_ppt, DykstraOptions};

use super::library::ChoiNonDecomposable;
use super::{kraus_from_choi, ChoiBlockMatrix, ChoiMap, KrausChannel, LinearMap};

/// `k` Ginibre Kraus operators scaled so that `Tr T(1) = d`.
pub fn random_cp_channel(d: usize, k: usize, rng: &mut impl Rng) -> KrausChannel {
    let ops: Vec<ComplexMatrix> = (0..k.max(1)).map(|_| ginibre(d, d, rng)).collect();
    let total: f64 = ops.iter().map(|v| matrix::frobenius(v).powi(2)).sum();
    let s = c((d as f64 / total).sqrt(), 0.0);
    KrausChannel::new(ops.into_iter().map(|v| v * s).collect()).expect("non-empty")
}

/// Rank-one Kraus operators `x yᵀ`: entanglement breaking by construction.
pub fn random_eb_channel(d: usize, k: usize, rng: &mut impl Rng) -> KrausChannel {
    let ops = (0..k.max(1))
        .map(|_| {
            let x = random_unit_vector(d, rng);
            let y = random_unit_vector(d, rng);
            &x * y.transpose()
        })
        .collect();
    KrausChannel::new(ops).expect("non-empty")
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PptSamplerOptions {
    pub dykstra: DykstraOptions,
    /// Weight of `1/d²·Tr` mixed in after projection to land strictly inside.
    pub interior_mix: f64,
    /// Kraus rank cut-off relative to the largest Choi eigenvalue.
    pub kraus_tol: f64,
}

impl Default for PptSamplerOptions {
    fn default() -> Self {
        Self { dykstra: DykstraOptions::default(), interior_mix: 1e-6, kraus_tol: 1e-12 }
    }
}

/// A sampled PPT channel with the state of its projection.
#[derive(Clone, Debug)]
pub struct PptSample {
    pub channel: KrausChannel,
    pub projection_residual: f64,
    pub projection_iterations: usize,
}

/// Random PPT channel: Gram-random Choi matrix, Dykstra projection onto
/// `PSD ∩ Γ PSD`, a small identity admixture, trace normalised to `d`.
/// `None` when the projection does not converge.
pub fn random_ppt_channel(d: usize, rng: &mut impl Rng, opts: &PptSamplerOptions) -> Result<Option<KrausChannel>> {
    Ok(random_ppt_sample(d, rng, opts)?.map(|s| s.channel))
}

/// [`random_ppt_channel`] together with the projection diagnostics.
pub fn random_ppt_sample(d: usize, rng: &mut impl Rng, opts: &PptSamplerOptions) -> Result<Option<PptSample>> {
    let n = d * d;
    let rank = rng.random_range(1..=n);
    let g = ginibre(rank, n, rng);
    let shift = rng.random_range(-0.5..0.5) * (rank as f64);
    let start = g.adjoint() * g + identity(n) * c(shift, 0.0);
    let out = project_ppt(&start, d, d, opts.dykstra)?;
    if !out.converged {
        return Ok(None);
    }
    let p = out.point;
    let tr = trace(&p).re;
    if tr <= 1e-12 {
        return Ok(None);
    }
    let mixed = &p / c(tr, 0.0) * c(1.0 - opts.interior_mix, 0.0) + identity(n) * c(opts.interior_mix / n as f64, 0.0);
    let choi = ChoiBlockMatrix::new(mixed * c(d as f64, 0.0), d)?;
    Ok(Some(PptSample {
        channel: kraus_from_choi(&choi, opts.kraus_tol)?,
        projection_residual: out.residual,
        projection_iterations: out.iterations,
    }))
}

/// Construction label of a sampled positive map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositiveLabel {
    /// `Φ_1 + t∘Φ_2` with `Φ_i` completely positive.
    Decomposable,
    /// Choi's map conjugated by local unitaries plus a small CP part; positive, not decomposable.
    ChoiType,
    /// Block grid `[[A, X], [X, B]] = M_1 + M_2` with Hermitian `X` and PSD
    /// Schur-split parts; equal to its blockwise transpose, hence PPT.
    BlockSplit,
}

/// A positive map together with the reason it is positive.
#[derive(Clone, Debug)]
pub struct LabelledMap {
    pub label: PositiveLabel,
    pub map: ChoiMap,
}

fn choi_of(m: ComplexMatrix, d: usize) -> ChoiMap {
    ChoiMap::from_choi(ChoiBlockMatrix::new(m, d).expect("d² × d²"))
}

/// Samples from the library of positive maps, labelled by construction.
pub fn random_positive_map(d: usize, rng: &mut impl Rng) -> LabelledMap {
    let n = d * d;
    let pick = rng.random_range(0..3u32);
    match (pick, d) {
        (0, 3) => {
            let u = random_unitary(3, rng);
            let v = random_unitary(3, rng);
            let base = ChoiNonDecomposable.choi().into_matrix();
            let uv = kron(&u, &v);
            let rotated = &uv * base * uv.adjoint();
            let eps: f64 = rng.random_range(0.0..0.05);
            let m = rotated + random_psd(n, 1, rng) * c(eps, 0.0);
            LabelledMap { label: PositiveLabel::ChoiType, map: choi_of(m, d) }
        }
        (1, 2) => {
            let a = random_psd(2, 2, rng);
            let x = random_hermitian(2, rng);
            let corner = x.adjoint() * matrix::pinv_hermitian(&a, PINV_CUTOFF) * &x;
            let b = matrix::hermitian_part(&(corner + random_psd(2, rng.random_range(1..=2), rng)));
            let grid = BlockMatrix2::new(a, b, x).expect("Hermitian blocks");
            let split = m1_m2_split(&grid, PINV_CUTOFF).expect("A is PSD");
            let m = split.m1.assemble() + split.m2.assemble();
            let choi = matrix::swap_factors(&m, d, d).expect("4x4");
            LabelledMap { label: PositiveLabel::BlockSplit, map: choi_of(choi, d) }
        }
        _ => {
            let p = random_psd(n, rng.random_range(1..=n), rng);
            let q = random_psd(n, rng.random_range(1..=n), rng);
            let w: f64 = rng.random_range(0.0..1.0);
            let m = p * c(w, 0.0) + pt_unchecked(&q, d, d) * c(1.0 - w, 0.0);
            LabelledMap { label: PositiveLabel::Decomposable, map: choi_of(m, d) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{is_cp, is_positive_map, is_ppt_map, PositivityParams};
    use crate::random::stream;
    use crate::verdict::Status;

    #[test]
    fn ppt_sampler_is_valid() {
        for d in [2usize, 3] {
            for i in 0..20 {
                let mut rng = stream(5, i);
                let ch = random_ppt_channel(d, &mut rng, &PptSamplerOptions::default()).unwrap().expect("converged");
                assert_eq!(is_ppt_map(&ch).status, Status::CertifiedYes);
                let tr = trace(&ch.choi().into_matrix()).re;
                assert!((tr - d as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eb_and_cp_samplers() {
        let mut rng = stream(6, 0);
        let eb = random_eb_channel(3, 4, &mut rng);
        for v in eb.kraus_ops() {
            assert_eq!(matrix::operator_rank(v, 1e-10), 1);
        }
        let cp = random_cp_channel(3, 2, &mut rng);
        assert_eq!(is_cp(&cp).status, Status::CertifiedYes);
        assert!((trace(&cp.image(&identity(3))).re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn positive_library_is_positive() {
        for d in [2usize, 3] {
            for i in 0..12 {
                let mut rng = stream(7, i);
                let m = random_positive_map(d, &mut rng);
                let v = is_positive_map(&m.map, &PositivityParams::default());
                assert!(v.is_yes(), "{:?} at d={d}: {v:?}", m.label);
                if m.label == PositiveLabel::BlockSplit {
                    assert_eq!(is_ppt_map(&m.map).status, Status::CertifiedYes);
                }
            }
        }
    }
}

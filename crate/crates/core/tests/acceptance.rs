//! Acceptance criteria 1 through 9, one PASS/FAIL line each.
//!
//! Library results are checked against oracles computed here from raw index
//! arithmetic and nalgebra decompositions.

use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use posmap::blockpos::{psd_equivalence_report, random_block_matrix, two_dim_cd_eq_cp_experiment};
use posmap::channels::library::{choi_map_d3, depolarizing, identity_channel, transpose_map};
use posmap::channels::sampling::{random_cp_channel, random_ppt_channel, PptSamplerOptions};
use posmap::channels::{classify, compose, compose_maps, is_decomposable, kraus_from_choi, ClassifyParams, LinearMap};
use posmap::cones::{blockwise_selfduality_check, dual_cone_spotcheck, dual_pairing_assembled, sample, ConeId};
use posmap::lab::{
    conjugate_pair_report, duality_check, fuzz_ppt2, image_experiment, noncommuting_quadruple_search,
    two_dimensional_block_report, ExperimentConfig,
};
use posmap::matrix::{conj_j, partial_transpose};
use posmap::random::{ginibre, random_hermitian, random_psd, random_unit_vector, random_vector, seeded};
use posmap::spectrahedron::SdpParams;
use posmap::verdict::{Certificate, Status};

type M = DMatrix<Complex64>;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit(d: usize, k: usize, l: usize) -> M {
    let mut m = M::zeros(d, d);
    m[(k, l)] = cx(1.0, 0.0);
    m
}

/// `Σ_kl T(e_kl) ⊗ e_kl`, entry `(i d + k, j d + l) = T(e_kl)_ij`.
fn choi_oracle(map: &dyn LinearMap) -> M {
    let d = map.dim();
    let mut out = M::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            let t = map.image(&unit(d, k, l));
            for i in 0..d {
                for j in 0..d {
                    out[(i * d + k, j * d + l)] = t[(i, j)];
                }
            }
        }
    }
    out
}

/// Transpose on the second factor of `C^{d1} ⊗ C^{d2}`.
fn pt_oracle(m: &M, d1: usize, d2: usize) -> M {
    M::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        m[(i * d2 + l, j * d2 + k)]
    })
}

/// `F m F` for the flip `F` of `C^d ⊗ C^d`.
fn flip_oracle(m: &M, d: usize) -> M {
    M::from_fn(d * d, d * d, |r, c| m[((r % d) * d + r / d, (c % d) * d + c / d)])
}

fn min_eig(m: &M) -> f64 {
    let h = (m + m.adjoint()) * cx(0.5, 0.0);
    h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn spectral(m: &M) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn rank(m: &M, tol: f64) -> usize {
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * top).count()
}

struct Line {
    passed: bool,
    detail: String,
}

fn line(passed: bool, detail: String) -> Line {
    Line { passed, detail }
}

fn criterion_1() -> Line {
    let mut worst: f64 = 0.0;
    for d in 2..=4 {
        let tt = compose_maps(&transpose_map(d), &transpose_map(d)).unwrap();
        worst = worst.max(max_diff(&choi_oracle(&tt), &choi_oracle(&identity_channel(d))));
    }
    let mut rng = seeded(101);
    let mut pt_err: f64 = 0.0;
    let mut j_err: f64 = 0.0;
    for _ in 0..200 {
        let d = rng.random_range(2..=4);
        let m = ginibre(d * d, d * d, &mut rng);
        let once = partial_transpose(&m, d, d).unwrap();
        pt_err = pt_err.max(max_diff(&once, &pt_oracle(&m, d, d)));
        pt_err = pt_err.max(max_diff(&partial_transpose(&once, d, d).unwrap(), &m));
        let v = random_vector(d, &mut rng);
        j_err = j_err.max((conj_j(&conj_j(&v)) - &v).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let mut round_trip: f64 = 0.0;
    let mut choi_err: f64 = 0.0;
    let mut kraus_count_ok = true;
    for d in [2usize, 3] {
        for _ in 0..500 {
            let k = rng.random_range(1..=d * d);
            let t = random_cp_channel(d, k, &mut rng);
            let oracle = choi_oracle(&t);
            choi_err = choi_err.max(max_diff(t.choi().matrix(), &oracle));
            let back = kraus_from_choi(&t.choi(), 1e-12).unwrap();
            round_trip = round_trip.max(max_diff(&choi_oracle(&back), &oracle));
            kraus_count_ok &= back.kraus_ops().len() == rank(&oracle, 1e-10);
        }
    }
    let passed =
        worst == 0.0 && pt_err == 0.0 && j_err == 0.0 && choi_err <= 1e-12 && round_trip <= 1e-10 && kraus_count_ok;
    line(
        passed,
        format!(
            "t∘t err {worst:.1e}, (id⊗t)² err {pt_err:.1e}, J² err {j_err:.1e}, Choi round trip {round_trip:.1e} on 1000 maps, Kraus counts match rank {kraus_count_ok}"
        ),
    )
}

fn criterion_2() -> Line {
    let report = conjugate_pair_report(&ExperimentConfig::new(2, 1, 0), None).unwrap();
    let s = &report.summary;
    let v = &s.v;
    let jv = conj_j(v);
    let expected = (v * v.adjoint() + &jv * jv.adjoint()) * cx(2.0, 0.0);
    let id = M::identity(2, 2);
    let t_id = s.channel.image(&id);
    let oracle_err = max_diff(&t_id, &expected);
    let unital_err = max_diff(&t_id, &id);

    let mut rng = seeded(202);
    let mut transpose_err: f64 = 0.0;
    for _ in 0..50 {
        let a = ginibre(2, 2, &mut rng);
        let t = s.channel.image(&a);
        transpose_err = transpose_err.max(max_diff(&t.transpose(), &t));
    }
    let ops = s.channel.kraus_ops();
    let mut ranks = ops.iter().map(|k| rank(k, 1e-10)).collect::<Vec<_>>();
    for a in ops {
        for b in ops {
            ranks.push(rank(&(a * b), 1e-10));
        }
    }
    let choi = choi_oracle(&s.channel);
    let ppt = min_eig(&choi).min(min_eig(&pt_oracle(&choi, 2, 2)));
    let eb = s.entanglement_breaking.status == Status::CertifiedYes;
    let passed = report.records.iter().all(|c| c.passed)
        && oracle_err <= 1e-14
        && unital_err <= 1e-14
        && transpose_err <= 1e-13
        && ranks.iter().all(|&r| r == 2)
        && ppt >= -1e-12
        && eb;
    line(
        passed,
        format!(
            "T(1) err {unital_err:.1e}, expansion err {oracle_err:.1e}, t∘T err {transpose_err:.1e}, ranks {ranks:?}, Choi PPT min eig {ppt:.1e}, EB {}",
            s.entanglement_breaking.status
        ),
    )
}

fn criterion_3() -> Line {
    let report = noncommuting_quadruple_search(&ExperimentConfig::new(4, 1, 7)).unwrap();
    let s = &report.summary;
    let Some(q) = &s.quadruple else {
        return line(false, format!("no quadruple within {} attempts", s.attempts));
    };
    let n = q.d.len();
    let dd = &q.d * q.d.adjoint();
    let ff = &q.f * q.f.adjoint();
    let block = |k: usize, l: usize| &dd * (q.g[k] * q.g[l].conj()) + &ff * (q.h[k] * q.h[l].conj());
    let m = q.g.len();
    let mut grid = M::zeros(m * n, m * n);
    let mut transposed = M::zeros(m * n, m * n);
    for k in 0..m {
        for l in 0..m {
            grid.view_mut((k * n, l * n), (n, n)).copy_from(&block(k, l));
            transposed.view_mut((k * n, l * n), (n, n)).copy_from(&block(l, k));
        }
    }
    let (a00, a01) = (block(0, 0), block(0, 1));
    let comm = (&a00 * &a01 - &a01 * &a00).norm();
    let frame = M::from_columns(&[q.d.clone(), q.f.clone(), q.g.clone(), q.h.clone()]);
    let (e1, e2) = (min_eig(&grid), min_eig(&transposed));
    let passed = s.passed
        && s.attempts <= 100
        && rank(&frame, 1e-10) == 4
        && e1 >= -1e-10
        && e2 >= -1e-10
        && comm > 1e-6
        && (comm - s.commutator).abs() <= 1e-9 * comm.max(1.0);
    line(
        passed,
        format!(
            "found after {} attempts; oracle min eigenvalues {e1:.1e}, {e2:.1e}; ‖[A00, A01]‖ {comm:.3e}",
            s.attempts
        ),
    )
}

fn criterion_4() -> Line {
    let cd = two_dim_cd_eq_cp_experiment(1000, 4);
    let mut rng = seeded(404);
    let mut disagreements = 0;
    let mut oracle_mismatch = 0;
    let mut psd_cases = 0;
    for i in 0..500 {
        let m = random_block_matrix(2, &mut rng);
        let r = psd_equivalence_report(&m, 16, i);
        let assembled = m.assemble();
        let oracle = min_eig(&assembled) >= -1e-9 * (1.0 + spectral(&assembled));
        disagreements += !r.agree as usize;
        oracle_mismatch += (r.direct != oracle) as usize;
        psd_cases += oracle as usize;
    }
    let passed =
        cd.passed && cd.max_distance < 1e-5 && cd.failures.is_empty() && disagreements == 0 && oracle_mismatch == 0;
    line(
        passed,
        format!(
            "{} C_d samples, max distance {:.2e}, {} failures; block criteria disagree on {disagreements}/500 ({psd_cases} PSD), oracle mismatches {oracle_mismatch}",
            cd.n,
            cd.max_distance,
            cd.failures.len()
        ),
    )
}

fn criterion_5() -> Line {
    let pairs = [(ConeId::Cp, ConeId::Ci), (ConeId::Cd, ConeId::Cppt), (ConeId::Ccp, ConeId::Ccp)];
    let mut min_pairing = f64::INFINITY;
    let mut all_passed = true;
    let mut oracle_err: f64 = 0.0;
    let mut oracle_min = f64::INFINITY;
    for d in [2usize, 3] {
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let r = dual_cone_spotcheck(a, b, d, 1000, 500 + k as u64, 1e-10);
            all_passed &= r.passed() && r.n_samples == 1000;
            min_pairing = min_pairing.min(r.min_pairing);
            let mut rng = seeded(550 + k as u64);
            for _ in 0..100 {
                let (x, y) = (sample(a, d, &mut rng), sample(b, d, &mut rng));
                let p = (&x * flip_oracle(&y, d)).trace();
                let lib = dual_pairing_assembled(&x, &y, d).unwrap();
                oracle_err = oracle_err.max((p - lib).norm() / (1.0 + p.norm()));
                oracle_min = oracle_min.min(p.re / (x.norm() * y.norm()));
            }
        }
    }
    let passed = all_passed && min_pairing >= -1e-10 && oracle_err <= 1e-12 && oracle_min >= -1e-10;
    line(
        passed,
        format!("min pairing {min_pairing:.3e} over 6×1000 pairs; oracle Tr(x F y F) min {oracle_min:.3e}, max deviation {oracle_err:.1e}"),
    )
}

fn criterion_6() -> Line {
    let mut rng = seeded(606);
    let mut disagreements = 0;
    let (mut psd_inputs, mut indefinite_inputs) = (0, 0);
    for i in 0..500u64 {
        let (k, d) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let n = k * d;
        let r =
            if i % 2 == 0 { random_psd(n, rng.random_range(1..=n), &mut rng) } else { random_hermitian(n, &mut rng) };
        let oracle = min_eig(&r) >= -1e-9 * (1.0 + spectral(&r));
        psd_inputs += oracle as usize;
        indefinite_inputs += !oracle as usize;
        let rep = blockwise_selfduality_check(&r, d, 32, i).unwrap();
        disagreements += (rep.verdict.is_yes() != oracle || !rep.agrees) as usize;
    }
    let (mut detected, mut random_probe_detected, mut adversarial) = (0, 0, 0);
    while adversarial < 500 {
        let (k, d) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let n = k * d;
        let g = random_psd(n, rng.random_range(1..n), &mut rng);
        let w = random_unit_vector(n, &mut rng);
        let delta = spectral(&g) * 10f64.powf(rng.random_range(-6.0..-1.0));
        let r = &g - &w * w.adjoint() * cx(delta, 0.0);
        let threshold = -1e-9 * (1.0 + spectral(&r));
        if min_eig(&r) >= threshold {
            continue;
        }
        adversarial += 1;
        let rep = blockwise_selfduality_check(&r, d, 32, 10_000 + adversarial as u64).unwrap();
        detected += (rep.verdict.status == Status::CertifiedNo) as usize;
        random_probe_detected += (rep.rank_one_min < threshold) as usize;
    }
    let rate = detected as f64 / adversarial as f64;
    let passed = disagreements == 0 && rate >= 0.99;
    line(
        passed,
        format!(
            "disagreements {disagreements}/500 ({psd_inputs} PSD, {indefinite_inputs} indefinite); adversarial detection {detected}/500 (random rank-one probes alone {random_probe_detected}/500)"
        ),
    )
}

fn criterion_7() -> Line {
    let params = ClassifyParams::default();
    let mut failures = Vec::new();
    for d in [2usize, 3] {
        let t = classify(&transpose_map(d), &params);
        if !(t.cp.is_no() && t.ccp.is_yes() && t.decomposable.is_yes()) {
            failures.push(format!("transpose d={d}"));
        }
        let id = classify(&identity_channel(d), &params);
        if !(id.cp.is_yes() && id.entanglement_breaking.is_no()) {
            failures.push(format!("identity d={d}"));
        }
        let dep = classify(&depolarizing(d), &params);
        if !dep.rows().iter().all(|(_, v)| v.is_yes()) {
            failures.push(format!("depolarizing d={d}"));
        }
    }
    let choi_map = choi_map_d3();
    let v = is_decomposable(&choi_map, &SdpParams::default());
    let mut witness_detail = String::from("no witness");
    let mut witness_ok = false;
    if let (Status::CertifiedNo, Some(Certificate::ConeWitness { witness, .. })) = (v.status, &v.certificate) {
        let c = choi_oracle(&choi_map);
        let pairing = (&c * witness).trace().re / witness.norm();
        let scale = 1e-9 * (1.0 + spectral(witness));
        let (e1, e2) = (min_eig(witness), min_eig(&pt_oracle(witness, 3, 3)));
        witness_ok = pairing < -1e-8 && e1 >= -scale && e2 >= -scale;
        witness_detail = format!("witness pairing {pairing:.4e}, witness min eigenvalues {e1:.1e} / {e2:.1e}");
    }
    if !witness_ok {
        failures.push("Choi map witness".into());
    }
    line(failures.is_empty(), format!("{witness_detail}; failures {failures:?}"))
}

fn criterion_8() -> Line {
    let r2 = fuzz_ppt2(&ExperimentConfig::new(2, 1000, 0)).unwrap();
    let s2 = &r2.summary;
    let all_eb = s2.conjecture.certified_yes == s2.completed;
    let valid = s2.valid_inputs == 2 * s2.completed;

    let mut rng = seeded(808);
    let mut oracle_min = f64::INFINITY;
    let mut oracle_n = 0;
    while oracle_n < 100 {
        let opts = PptSamplerOptions::default();
        let (Some(a), Some(b)) =
            (random_ppt_channel(2, &mut rng, &opts).unwrap(), random_ppt_channel(2, &mut rng, &opts).unwrap())
        else {
            continue;
        };
        let c = choi_oracle(&compose(&a, &b).unwrap());
        oracle_min = oracle_min.min(min_eig(&pt_oracle(&c, 2, 2)) / c.trace().re);
        oracle_n += 1;
    }

    let r3 = fuzz_ppt2(&ExperimentConfig::new(3, 200, 0)).unwrap();
    let s3 = &r3.summary;
    let passed = all_eb
        && valid
        && s2.invariant_violations.is_empty()
        && oracle_min >= -1e-12
        && s3.completed + s3.skipped.len() == 200
        && s3.invariant_violations.is_empty()
        && s3.conjecture.certified_no == 0;
    line(
        passed,
        format!(
            "d=2: {}/{} compositions certified EB, {} skipped by projection, valid inputs {}/{}, oracle PT min eig {oracle_min:.1e}; d=3: {} completed, violations {}, verdicts {:?}",
            s2.conjecture.certified_yes,
            s2.completed,
            s2.skipped.len(),
            s2.valid_inputs,
            2 * s2.completed,
            s3.completed,
            s3.invariant_violations.len(),
            s3.conjecture
        ),
    )
}

fn cli(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_posmap-lab"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs");
    out.stdout
}

fn criterion_9() -> Line {
    let twice = |f: &dyn Fn() -> String| f() == f();
    let mut same = vec![
        ("fuzz primal", twice(&|| fuzz_ppt2(&ExperimentConfig::new(3, 20, 9)).unwrap().to_json())),
        ("fuzz dual", twice(&|| fuzz_ppt2(&ExperimentConfig::new(3, 10, 9).with_mode("dual")).unwrap().to_json())),
        ("image", twice(&|| image_experiment(&ExperimentConfig::new(3, 20, 9)).unwrap().to_json())),
        ("duality", twice(&|| duality_check(&ExperimentConfig::new(3, 50, 9)).unwrap().to_json())),
        ("conjugate pair", twice(&|| conjugate_pair_report(&ExperimentConfig::new(2, 1, 9), None).unwrap().to_json())),
        ("quadruple", twice(&|| noncommuting_quadruple_search(&ExperimentConfig::new(4, 1, 9)).unwrap().to_json())),
        (
            "two-dimensional",
            twice(&|| two_dimensional_block_report(&ExperimentConfig::new(2, 50, 9)).unwrap().to_json()),
        ),
    ];
    let args = ["fuzz-ppt2", "--dim", "3", "--trials", "16", "--seed", "5"];
    let one = cli(&args, "1");
    same.push(("cli threads 1 vs 3", !one.is_empty() && one == cli(&args, "3")));
    let args = ["image-exp", "--dim", "3", "--trials", "8", "--seed", "5", "--format", "csv"];
    same.push(("cli csv", cli(&args, "1") == cli(&args, "2")));
    let differing: Vec<&str> = same.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    line(differing.is_empty(), format!("{} report pairs compared, differing {differing:?}", same.len()))
}

type Criterion = (&'static str, Duration, fn() -> Line);

fn main() {
    let criteria: [Criterion; 9] = [
        ("involutions and Choi/Kraus round trip", Duration::from_secs(10), criterion_1),
        ("conjugate-pair channel", Duration::from_secs(1), criterion_2),
        ("noncommuting quadruple", Duration::from_secs(5), criterion_3),
        ("2D C_d = C_p and block criteria", Duration::from_secs(60), criterion_4),
        ("cone duality", Duration::from_secs(60), criterion_5),
        ("blockwise self-duality of C_cp", Duration::from_secs(60), criterion_6),
        ("classification ground truths", Duration::from_secs(30), criterion_7),
        ("PPT-square fuzz", Duration::from_secs(300), criterion_8),
        ("determinism", Duration::from_secs(300), criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let passed = result.passed && elapsed <= *budget;
        failed += !passed as usize;
        println!(
            "{} criterion {}: {name} ({:.2} s, budget {} s) {}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            result.detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

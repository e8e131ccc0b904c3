mod common;

use common::*;
use kcenter::centering::{center_data, double_center, mean_norm_sq_from_gram};
use kcenter::datasets::{banana, read_csv, write_csv, Dataset, SplitMix64};
use kcenter::kernels::{euclidean_distances, gram_matrix};
use kcenter::methods::{keca_decompose, mds_embed, rank_one_trace};
use kcenter::spectral::{
    check_courant_fischer, check_mean_norm_formulas, check_ones_completeness, check_schur_horn, full_report,
    EigenPairSet, EigenSource,
};
use kcenter::{sym_eigen, CenteringScheme, DataMatrix, KernelSpec, SymmetricMatrix, WeightVector};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use std::path::Path;

fn dataset() -> impl Strategy<Value = DataMatrix> {
    (1usize..=5, 2usize..=20, any::<u64>()).prop_map(|(d, n, seed)| random_data(&mut rng(seed), d, n))
}

fn kernel() -> impl Strategy<Value = OracleKernel> {
    prop_oneof![
        Just(OracleKernel::Linear),
        Just(OracleKernel::Poly(1.0, 2)),
        Just(OracleKernel::Poly(0.5, 3)),
        (0.3f64..3.0).prop_map(OracleKernel::Gaussian),
    ]
}

fn symmetric(max_n: usize) -> impl Strategy<Value = SymmetricMatrix> {
    (1usize..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut r = rng(seed);
        let scale = 10f64.powi(r.gen_range(-3..=3));
        let m = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0) * scale);
        let s = &m + m.transpose();
        SymmetricMatrix::from_upper_fn(n, |i, j| s[(i, j)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigensolver_residual_reconstruction_and_trace(m in symmetric(12)) {
        let e = sym_eigen(&m).unwrap();
        let mn = to_na(&m);
        for k in 0..m.n() {
            let v = nalgebra::DVector::from_vec(e.eigenvector(k));
            let l = e.eigenvalues[k];
            prop_assert!((&mn * &v - &v * l).norm() <= 1e-8 * l.abs().max(1.0));
        }
        prop_assert!(to_na(&e.reconstruct()).metric_distance(&mn) <= 1e-7 * mn.norm().max(f64::MIN_POSITIVE));
        let sum: f64 = e.eigenvalues.iter().sum();
        prop_assert!((m.trace() - sum).abs() <= 1e-9 * m.trace().abs().max(1.0));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(max_abs_diff(&e.eigenvalues, &eigvals_desc(&mn)) <= 1e-9 * mn.norm().max(1.0));
    }

    #[test]
    fn psd_gram_has_no_negative_eigenvalues(x in dataset(), k in kernel()) {
        let g = gram_matrix(&x, &k.spec()).unwrap();
        let l = sym_eigen(&g.matrix).unwrap().eigenvalues;
        prop_assert!(l.iter().all(|&v| v >= -1e-8 * l[0].abs()));
    }

    #[test]
    fn delta_properties(x in dataset(), xi in 0.05f64..20.0, seed in any::<u64>()) {
        let delta = gram_matrix(&x, &KernelSpec::NegativeHalfSqDist).unwrap();
        prop_assert_eq!(delta.matrix.trace(), 0.0);
        let l = sym_eigen(&delta.matrix).unwrap().eigenvalues;
        let fro = delta.matrix.frobenius_norm();
        prop_assert!(l.iter().sum::<f64>().abs() <= 1e-9 * fro.max(f64::MIN_POSITIVE));
        let n = l.len();
        prop_assert!((l[n - 1] + l[..n - 1].iter().sum::<f64>()).abs() <= 1e-9 * fro.max(f64::MIN_POSITIVE));

        let mut r = rng(seed);
        let probes: Vec<Vec<f64>> = (0..100).map(|_| {
            let b: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let m = b.iter().sum::<f64>() / n as f64;
            b.iter().map(|v| v - m).collect()
        }).collect();
        prop_assert!(delta.min_probe_margin(&probes).unwrap() >= -1e-8);

        // Rounding in ξxᵢ − ξxⱼ is relative to the coordinates, not to their
        // difference, so compare against the largest entry.
        let scaled = gram_matrix(&x.scaled(xi), &KernelSpec::NegativeHalfSqDist).unwrap();
        let max = xi * xi * delta.matrix.as_slice().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..n {
                let want = xi * xi * delta.matrix.get(i, j);
                prop_assert!((scaled.matrix.get(i, j) - want).abs() <= 1e-12 * max);
            }
        }
    }

    #[test]
    fn projection_identities(m in symmetric(10)) {
        let k = kcenter::GramMatrix::new(m.clone(), kcenter::GramKind::Psd);
        let kc = double_center(&k, &CenteringScheme::Mean).unwrap();
        let fro = m.frobenius_norm().max(f64::MIN_POSITIVE);
        // (I − P₁)1 = 0 shows up as zero row sums.
        prop_assert!(kc.matrix.row_sums().iter().all(|s| s.abs() <= 1e-10 * fro));
        let n = m.n() as f64;
        prop_assert!((kc.matrix.trace() - (m.trace() - m.grand_sum() / n)).abs() <= 1e-10 * fro);
        // P₁MP₁ = (1ᵀM1/n)P₁, i.e. M − Mc minus the rank-two terms.
        let mn = to_na(&m);
        let p = DMatrix::from_element(m.n(), m.n(), 1.0 / n);
        let lhs = &p * &mn * &p;
        let rhs = &p * (m.grand_sum() / n);
        prop_assert!(lhs.metric_distance(&rhs) <= 1e-10 * fro);
    }

    #[test]
    fn two_path_consistency(x in dataset()) {
        let k = gram_matrix(&x, &KernelSpec::Linear).unwrap();
        let a = double_center(&k, &CenteringScheme::Mean).unwrap();
        let b = gram_matrix(&center_data(&x, &CenteringScheme::Mean).unwrap(), &KernelSpec::Linear).unwrap();
        let dist = to_na(&a.matrix).metric_distance(&to_na(&b.matrix));
        prop_assert!(dist <= 1e-9 * k.matrix.frobenius_norm());
    }

    #[test]
    fn gram_side_identities(x in dataset(), k in kernel()) {
        let g = gram_matrix(&x, &k.spec()).unwrap();
        let kc = double_center(&g, &CenteringScheme::Mean).unwrap();
        let raw = EigenPairSet::from_gram(&g, EigenSource::GramRaw).unwrap();
        let cen = EigenPairSet::from_gram(&kc, EigenSource::GramCentered).unwrap();
        prop_assert!(check_mean_norm_formulas(&g, &raw).passed());
        prop_assert!(check_ones_completeness(&raw).passed());
        prop_assert!(check_courant_fischer(&g, &raw).passed());
        prop_assert!(check_schur_horn("raw", &g.matrix, &raw.lambdas()).passed());
        prop_assert!(check_schur_horn("centered", &kc.matrix, &cen.lambdas()).passed());
        let l1 = raw.lambda_max();
        prop_assert!(l1 >= g.matrix.grand_sum() / x.n() as f64 - 1e-9 * l1);
    }

    #[test]
    fn every_report_check_passes(x in dataset(), k in kernel()) {
        let r = full_report("random", &x, &k.spec(), &CenteringScheme::Mean).unwrap();
        let failed: Vec<&str> = r.failed().map(|c| c.name()).collect();
        prop_assert!(failed.is_empty(), "{:?} failed: {:?}", k, failed);
    }

    #[test]
    fn weighted_report_checks_pass(x in dataset(), k in kernel(), seed in any::<u64>()) {
        let w = WeightVector::new(random_weights(&mut rng(seed), x.n())).unwrap();
        let r = full_report("random", &x, &k.spec(), &CenteringScheme::Weighted(w)).unwrap();
        let failed: Vec<&str> = r.failed().map(|c| c.name()).collect();
        prop_assert!(failed.is_empty(), "{:?} failed: {:?}", k, failed);
    }

    #[test]
    fn entropy_total_two_ways(x in dataset(), k in kernel()) {
        let g = gram_matrix(&x, &k.spec()).unwrap();
        let e = keca_decompose(&g, 1).unwrap();
        let grand = mean_norm_sq_from_gram(&g);
        prop_assert!((e.total - grand).abs() <= 1e-10 * grand.abs().max(f64::MIN_POSITIVE));
        let c = keca_decompose(&double_center(&g, &CenteringScheme::Mean).unwrap(), 1).unwrap();
        prop_assert!(c.total.abs() <= 1e-10);
        prop_assert!(c.null_density);
    }

    #[test]
    fn mds_round_trip_and_diagonal_covariance(x in dataset()) {
        let d = euclidean_distances(&x);
        let dim = x.dim().min(x.n() - 1).max(1);
        let emb = mds_embed(&d, dim).unwrap();
        prop_assert!(emb.round_trip_error(&d).unwrap() <= 1e-7);
        let n = emb.n() as f64;
        let lc1 = emb.retained_eigenvalues.first().copied().unwrap_or(0.0);
        for a in 0..emb.dim() {
            for b in 0..emb.dim() {
                let c: f64 = (0..emb.n()).map(|j| emb.points.get(a, j) * emb.points.get(b, j)).sum::<f64>() / n;
                if a == b {
                    prop_assert!((c - emb.retained_eigenvalues[a] / n).abs() <= 1e-8 * (lc1 / n).max(1e-300));
                } else {
                    prop_assert!(c.abs() <= 1e-8 * (lc1 / n).max(1e-300));
                }
            }
        }
    }

    #[test]
    fn rank_one_relations_hold_at_every_step(seed in any::<u64>(), steps in 1usize..6) {
        let mut r = rng(seed);
        let d = 4;
        let a = DMatrix::from_fn(d, d, |_, _| r.gen_range(-1.0..1.0));
        let c = &a * a.transpose();
        let c0 = SymmetricMatrix::from_upper_fn(d, |i, j| c[(i, j)]).unwrap();
        let updates: Vec<(Vec<f64>, f64)> = (0..steps)
            .map(|_| ((0..d).map(|_| r.gen_range(-2.0..2.0)).collect(), r.gen_range(0.01..0.99)))
            .collect();
        let t = rank_one_trace(&c0, &updates).unwrap();
        for s in &t.steps {
            prop_assert!(s.trace_law.passed());
            prop_assert!(s.lower_bound.passed());
        }
    }

    #[test]
    fn banana_points_follow_the_stream(n in 1usize..200, noise in 0.0f64..1.0, seed in any::<u64>()) {
        let b = banana(n, noise, seed).unwrap();
        let mut g = SplitMix64::new(seed);
        for s in b.x.samples() {
            let zeta = 2.0 * g.next_f64() - 1.0;
            let u1 = 1.0 - g.next_f64();
            let u2 = g.next_f64();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            prop_assert!((-1.0..=1.0).contains(&s[0]));
            prop_assert_eq!(s[0], zeta);
            prop_assert_eq!(s[1], zeta * zeta + noise * z);
        }
    }

    #[test]
    fn csv_round_trip_is_exact(
        rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..20),
        labelled in any::<bool>(),
    ) {
        let x = DataMatrix::from_samples(&rows).unwrap();
        let labels = labelled.then(|| (0..rows.len() as i64).collect());
        let ds = Dataset::new("t", x, labels).unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), Path::new("t.csv"), "t", labelled, b',').unwrap();
        prop_assert_eq!(back.x, ds.x);
        prop_assert_eq!(back.labels, ds.labels);
    }
}

#[test]
fn noiseless_banana_lies_on_the_parabola() {
    let b = banana(500, 0.0, 42).unwrap();
    assert!(b.x.samples().all(|s| s[1] == s[0] * s[0]));
}

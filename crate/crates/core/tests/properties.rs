use nalgebra::DMatrix;
use proptest::prelude::*;

use specfluct::moments::MomentSet;
use specfluct::paths::{
    canonicalize, count_paths_bruteforce, count_paths_closed, two_flat_total, MultiIndex,
};
use specfluct::polyspace::{decompose, inner_product, perp_basis, q_polynomial};
use specfluct::predictor::{cov_even, m_entry, predict, sigma_e, sigma_qperp, Sector};
use specfluct::simulator::{
    expand_trace_symbolic, run_experiment, trace_poly_with, ExperimentConfig, SizeCoupling,
    TraceEngine,
};
use specfluct::{Distribution, Polynomial};

fn rad() -> MomentSet {
    Distribution::rademacher(1.0).unwrap().moments()
}

fn unif() -> MomentSet {
    Distribution::uniform(1.0).unwrap().moments()
}

fn beta_strategy() -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec((0i64..4, 1u32..3), 0..3).prop_map(MultiIndex::from_pairs)
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..=max_len)
}

fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_are_shift_invariant(k in 1usize..11, beta in beta_strategy(), s in -5i64..6) {
        let a = count_paths_bruteforce(k, &beta).unwrap();
        let b = count_paths_bruteforce(k, &beta.shifted(s)).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(canonicalize(&beta.shifted(s)), canonicalize(&beta));
    }

    #[test]
    fn counts_respect_parity(k in 1usize..13, beta in beta_strategy()) {
        if (k + beta.order() as usize) % 2 == 1 {
            prop_assert_eq!(count_paths_bruteforce(k, &beta).unwrap(), 0);
        }
    }

    #[test]
    fn closed_forms_match_enumeration(k in 1usize..15, j in 0i64..16, which in 0usize..4) {
        let beta = match which {
            0 => MultiIndex::zero(),
            1 => MultiIndex::delta(0),
            2 => MultiIndex::from_pairs([(0, 2)]),
            _ => &MultiIndex::delta(0) + &MultiIndex::delta(j),
        };
        let closed = count_paths_closed(k, &beta).unwrap().unwrap();
        prop_assert_eq!(closed, count_paths_bruteforce(k, &beta).unwrap());
    }

    #[test]
    fn three_flat_support_bound(k in 3usize..14, s in 1i64..8, t in 1i64..8) {
        if 2 * (s + t) > k as i64 - 3 {
            let beta = MultiIndex::from_pairs([(0, 1), (s, 1), (s + t, 1)]);
            prop_assert_eq!(count_paths_bruteforce(k, &beta).unwrap(), 0);
        }
    }

    #[test]
    fn direct_sum(c in coeffs(12)) {
        let p = Polynomial::new(c);
        let d = decompose(&p).unwrap();
        let back = d.reconstruct();
        for k in 0..p.coeffs().len() {
            prop_assert!((back.coeff(k) - p.coeff(k)).abs() <= 1e-12);
        }
        prop_assert!(inner_product(&d.q_part, &d.qperp_part).abs() <= 1e-10);
        prop_assert!(inner_product(&d.q_part, &d.even_part).abs() <= 1e-10);
        prop_assert!(inner_product(&d.qperp_part, &d.even_part).abs() <= 1e-10);
    }

    #[test]
    fn decomposition_is_idempotent(c in coeffs(12)) {
        let d = decompose(&Polynomial::new(c)).unwrap();
        let scale = d.q_part.norm() + d.qperp_part.norm() + d.even_part.norm() + 1.0;
        let dq = decompose(&d.q_part).unwrap();
        prop_assert!(dq.qperp_part.norm() <= 1e-12 * scale && dq.even_part.norm() == 0.0);
        prop_assert!(dq.q_part.sub(&d.q_part).norm() <= 1e-12 * scale);
        let dp = decompose(&d.qperp_part).unwrap();
        prop_assert!(dp.q_part.norm() <= 1e-12 * scale && dp.even_part.norm() == 0.0);
        let de = decompose(&d.even_part).unwrap();
        prop_assert!(de.q_part.norm() == 0.0 && de.qperp_part.norm() == 0.0);
        prop_assert_eq!(de.even_part, d.even_part.clone());
    }

    #[test]
    fn banded_equals_dense(
        v in prop::collection::vec(-1.5f64..1.5, 1..=32),
        c in coeffs(9),
    ) {
        let p = Polynomial::new(c);
        let a = trace_poly_with(&v, &p, TraceEngine::Banded).unwrap();
        let b = trace_poly_with(&v, &p, TraceEngine::DenseOracle).unwrap();
        // Relative to the size of the individual power traces, which bounds cancellation.
        let mut scale = 1.0f64;
        for k in 0..p.coeffs().len() {
            let t = trace_poly_with(&v, &Polynomial::monomial(k, 1.0), TraceEngine::DenseOracle).unwrap();
            scale += (p.coeff(k) * t).abs();
        }
        prop_assert!((a - b).abs() <= 1e-9 * scale, "{} vs {}", a, b);
    }

    #[test]
    fn symmetric_predictor_entries(k in 1usize..7, l in 1usize..7, uniform in any::<bool>()) {
        let mom = if uniform { unif() } else { rad() };
        let (ke, le) = (2 * k, 2 * l);
        prop_assert_eq!(cov_even(ke, le, &mom).unwrap(), cov_even(le, ke, &mom).unwrap());
        let (ko, lo) = (2 * k + 1, 2 * l + 1);
        if ko <= 13 && lo <= 13 {
            prop_assert_eq!(m_entry(ko, lo, &mom).unwrap(), m_entry(lo, ko, &mom).unwrap());
        }
    }

    #[test]
    fn predicted_variances_nonnegative(c in coeffs(10), alpha in 0.01f64..1.0, uniform in any::<bool>()) {
        let p = Polynomial::new(c);
        prop_assume!(!p.is_constant());
        let mom = if uniform { unif() } else { rad() };
        let r = predict(&p, alpha, &mom).unwrap();
        prop_assert!(r.sigma_sq >= 0.0);
    }

    #[test]
    fn atoms_reject_invalid(v in prop::collection::vec(-2.0f64..2.0, 2..5), shift in 0.01f64..1.0) {
        let n = v.len();
        let probs = vec![1.0 / n as f64; n];
        let mean: f64 = v.iter().sum::<f64>() / n as f64;
        let centred: Vec<f64> = v.iter().map(|x| x - mean + shift).collect();
        prop_assert!(Distribution::atoms(centred, probs.clone()).is_err());
        let mut bad = probs;
        bad[0] += shift;
        let centred: Vec<f64> = v.iter().map(|x| x - mean).collect();
        prop_assert!(Distribution::atoms(centred, bad).is_err());
    }
}

#[test]
fn aggregation_identity() {
    for k in (2..=14).step_by(2) {
        let total: u128 = (0..=k as i64)
            .map(|j| {
                count_paths_bruteforce(k, &(&MultiIndex::delta(0) + &MultiIndex::delta(j))).unwrap()
            })
            .sum();
        assert_eq!(total, two_flat_total(k).unwrap(), "k={k}");
    }
}

#[test]
fn orthogonality_of_perp_basis() {
    for m in (3..=11).step_by(2) {
        let q = q_polynomial(m).unwrap();
        for pk in perp_basis(m).unwrap() {
            assert!(inner_product(&pk, &q).abs() <= 1e-12);
        }
    }
}

#[test]
fn q_coefficients_are_path_counts() {
    let q = q_polynomial(13).unwrap();
    for j in (1..=13).step_by(2) {
        let want = count_paths_bruteforce(j, &MultiIndex::delta(0)).unwrap() as f64;
        assert_eq!(q.coeff(j), want, "j={j}");
    }
}

#[test]
fn var_of_square_values() {
    for c in [0.5, 1.0, 3.0] {
        assert_eq!(
            Distribution::rademacher(c)
                .unwrap()
                .moments()
                .var_of_square(),
            0.0
        );
        let u = Distribution::uniform(c).unwrap().moments().var_of_square();
        assert!((u - c.powi(4) * (1.0 / 5.0 - 1.0 / 9.0)).abs() <= 1e-14 * c.powi(4));
    }
}

#[test]
fn covariance_matrices_are_psd() {
    for mom in [rad(), unif()] {
        let even: Vec<usize> = vec![2, 4, 6, 8, 10];
        for size in 1..=5 {
            for start in 0..=(even.len() - size) {
                let idx = &even[start..start + size];
                let m =
                    DMatrix::from_fn(size, size, |a, b| cov_even(idx[a], idx[b], &mom).unwrap());
                assert!(min_eigenvalue(m) >= -1e-10, "cov_even {idx:?}");
            }
        }
        let odd: Vec<usize> = vec![3, 5, 7, 9, 11];
        for size in 1..=5 {
            for start in 0..=(odd.len() - size) {
                let idx = &odd[start..start + size];
                let m = DMatrix::from_fn(size, size, |a, b| m_entry(idx[a], idx[b], &mom).unwrap());
                // Entries reach ~1e9 at degree 11; compare eigenvalues on the matrix scale.
                let scale = m.abs().max().max(1.0);
                assert!(min_eigenvalue(m) >= -1e-10 * scale, "m_entry {idx:?}");
            }
        }
    }
}

#[test]
fn even_sector_positivity() {
    let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
    for mom in [rad(), unif()] {
        for &a2 in &grid {
            for &a4 in &grid {
                for &a6 in &grid {
                    let p = Polynomial::new(vec![0.0, 0.0, a2, 0.0, a4, 0.0, a6]);
                    if p.is_constant() {
                        continue;
                    }
                    let s = sigma_e(&p, &mom).unwrap();
                    let deg = p.degree().unwrap();
                    if deg >= 4 || mom.var_of_square() > 0.0 {
                        assert!(s > 0.0, "P={p} sigma={s}");
                    } else {
                        assert_eq!(s, 0.0, "P={p}");
                    }
                }
            }
        }
    }
}

#[test]
fn perp_degeneracy_only_for_the_quintic() {
    let basis = perp_basis(5).unwrap();
    for (mom, two_point) in [(rad(), true), (unif(), false)] {
        for a in -30i32..=30 {
            for b in -3i32..=3 {
                if a == 0 && b == 0 {
                    continue;
                }
                let p = basis[0]
                    .scale(f64::from(a))
                    .add(&basis[1].scale(f64::from(b) / 5.0));
                let s = sigma_qperp(&p, &mom).unwrap();
                // x^5/5 - 4x^3 + 18x = P_5/5 - 4 P_3.
                let degenerate = two_point && a == -4 * b;
                assert_eq!(s == 0.0, degenerate, "a={a} b={b} sigma={s}");
            }
        }
    }
}

#[test]
fn symbolic_expansion_parity() {
    for k in 0..=8 {
        for beta in expand_trace_symbolic(14, k).unwrap().keys() {
            assert_eq!((beta.order() as usize + k) % 2, 0, "k={k} {beta}");
        }
    }
}

fn small_config(p: Vec<f64>, alpha: f64, dist: Distribution, workers: usize) -> ExperimentConfig {
    ExperimentConfig {
        polynomial: Polynomial::new(p),
        alpha,
        dist,
        sizes: vec![40, 160],
        replicates: 400,
        master_seed: 77,
        workers: Some(workers),
        trace_engine: TraceEngine::Banded,
        size_coupling: SizeCoupling::Nested,
    }
}

#[test]
fn determinism_across_workers() {
    for coupling in [SizeCoupling::Nested, SizeCoupling::Independent] {
        let mut a = small_config(
            vec![1.0, -2.0, 0.5, 1.0],
            0.2,
            Distribution::uniform(1.0).unwrap(),
            1,
        );
        a.size_coupling = coupling;
        let mut b = a.clone();
        b.workers = Some(5);
        let (ra, rb) = (run_experiment(&a).unwrap(), run_experiment(&b).unwrap());
        for (x, y) in ra.rows.iter().zip(&rb.rows) {
            let mut y = y.clone();
            y.wall_time_ms = x.wall_time_ms;
            assert_eq!(x, &y);
            assert_eq!(x.samples, y.samples);
        }
    }
}

#[test]
fn mean_oracle_small_runs() {
    let cases = [
        (vec![0.0, 1.0], 0.3, Distribution::rademacher(1.0).unwrap()),
        (
            vec![0.0, 0.0, 1.0],
            0.2,
            Distribution::uniform(1.0).unwrap(),
        ),
        (
            vec![2.0, -1.0, 0.0, 1.0, 0.5],
            0.15,
            Distribution::uniform(2.0).unwrap(),
        ),
        (
            vec![0.0, 0.0, 0.0, 0.0, 1.0],
            0.25,
            Distribution::atoms(vec![-2.0, 1.0], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap(),
        ),
    ];
    for (p, alpha, dist) in cases {
        let r = run_experiment(&small_config(p, alpha, dist, 2)).unwrap();
        for row in &r.rows {
            let exact = row.exact_mean.unwrap();
            let bound = 4.0 * (row.empirical_variance / row.replicates as f64).sqrt();
            assert!(
                (row.empirical_mean - exact).abs() <= bound,
                "N={} mean {} exact {} bound {}",
                row.n,
                row.empirical_mean,
                exact,
                bound
            );
        }
    }
}

#[test]
fn even_and_perp_sector_selection() {
    let p = predict(&Polynomial::new(vec![0.0, 0.0, 1.0]), 0.2, &unif()).unwrap();
    assert_eq!(p.sector, Sector::E);
    let p = predict(&Polynomial::new(vec![0.0, -6.0, 0.0, 1.0]), 0.125, &rad()).unwrap();
    assert_eq!(p.sector, Sector::Qperp);
    assert_eq!(p.sigma_sq, 1.0);
}

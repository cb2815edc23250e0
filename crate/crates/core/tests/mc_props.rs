use proptest::prelude::*;
use skewtail_core::mc::{
    binomial_se, empirical_upper, ks_distance, sample_skew_gaussian, simulate, singular_planes,
    singular_values, top_plane, SampleStream, KERNEL_TOLERANCE,
};
use skewtail_core::rmtdist::largest_sv_upper;
use skewtail_core::SkewMatrix;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn random_skew(p: usize, seed: u64) -> SkewMatrix {
    sample_skew_gaussian(p, &mut SampleStream::new(seed)).unwrap()
}

#[test]
fn entries_are_standard_normal() {
    let p = 8;
    let mut stream = SampleStream::new(11);
    let (mut s1, mut s2, mut s4, mut n) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..20_000 {
        for &x in sample_skew_gaussian(p, &mut stream).unwrap().upper() {
            s1 += x;
            s2 += x * x;
            s4 += x.powi(4);
            n += 1.0;
        }
    }
    let (mean, var, kurt) = (s1 / n, s2 / n, s4 / n);
    // n = 560 000: s.e. of the mean is about 0.0013, of the variance 0.0019
    assert!(mean.abs() < 0.006, "mean {mean}");
    assert!((var - 1.0).abs() < 0.01, "variance {var}");
    assert!((kurt - 3.0).abs() < 0.05, "fourth moment {kurt}");
}

#[test]
fn half_trace_has_expected_mean() {
    // tr(AᵀA)/2 is a sum of p(p-1)/2 unit chi-squares
    let p = 7;
    let values = simulate(p, 50_000, 5, 4, |a| Ok(a.half_trace_gram())).unwrap();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let df = (p * (p - 1) / 2) as f64;
    let se = (2.0 * df / values.len() as f64).sqrt();
    assert!((mean - df).abs() < 5.0 * se, "mean {mean}");
}

#[test]
fn singular_values_carry_the_frobenius_mass() {
    for p in 2..=12 {
        for seed in 0..20 {
            let a = random_skew(p, 1000 * p as u64 + seed);
            let s = singular_values(&a).unwrap();
            assert_eq!(s.sigma.len(), p / 2);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
            let total = a.half_trace_gram();
            assert!(
                (s.sum_of_squares() - total).abs() < 1e-10 * total,
                "p = {p}"
            );
        }
    }
}

#[test]
fn planes_reconstruct_the_matrix() {
    for seed in 0..50 {
        for p in [5, 6] {
            let a = random_skew(p, seed);
            let planes = singular_planes(&a).unwrap();
            assert_eq!(planes.len(), p / 2);
            let mut worst: f64 = 0.0;
            for i in 0..p {
                for j in 0..p {
                    let rebuilt: f64 = planes
                        .iter()
                        .map(|pl| pl.sigma * (pl.u[i] * pl.v[j] - pl.v[i] * pl.u[j]))
                        .sum();
                    worst = worst.max((rebuilt - a.get(i, j)).abs());
                }
            }
            assert!(worst < 1e-8, "p = {p}, seed {seed}: {worst}");
            for (k, pk) in planes.iter().enumerate() {
                for pl in &planes[k + 1..] {
                    for (x, y) in [
                        (&pk.u, &pl.u),
                        (&pk.u, &pl.v),
                        (&pk.v, &pl.u),
                        (&pk.v, &pl.v),
                    ] {
                        assert!(dot(x, y).abs() < 1e-8);
                    }
                }
            }
        }
    }
}

fn check_top_plane(a: &SkewMatrix) {
    let p = a.order();
    let plane = top_plane(a).unwrap();
    let s = plane.sigma1;
    assert!((s - singular_values(a).unwrap().largest()).abs() < 1e-10 * s);
    assert!((dot(&plane.u, &plane.u) - 1.0).abs() < 1e-12);
    assert!((dot(&plane.v, &plane.v) - 1.0).abs() < 1e-12);
    assert!(dot(&plane.u, &plane.v).abs() < 1e-10);
    let av = a.mul_vec(&plane.v);
    let au = a.mul_vec(&plane.u);
    for i in 0..p {
        assert!((av[i] - s * plane.u[i]).abs() < 1e-9 * s.max(1.0));
        assert!((au[i] + s * plane.v[i]).abs() < 1e-9 * s.max(1.0));
    }
    // gauge: at the anchor coordinate u is positive and v vanishes
    let anchor = (0..p)
        .max_by(|&i, &j| {
            plane.u[i]
                .hypot(plane.v[i])
                .total_cmp(&plane.u[j].hypot(plane.v[j]))
        })
        .unwrap();
    assert!(plane.u[anchor] > 0.0);
    assert!(plane.v[anchor].abs() < 1e-12);
    if p % 2 == 1 {
        // u and v are orthogonal to the kernel of A
        let gram = a.to_dense().transpose() * a.to_dense();
        let eig = gram.symmetric_eigen();
        let k = (0..p)
            .min_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]))
            .unwrap();
        assert!(eig.eigenvalues[k].abs() < KERNEL_TOLERANCE * s * s);
        let kernel: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        assert!(dot(&kernel, &plane.u).abs() < 1e-8);
        assert!(dot(&kernel, &plane.v).abs() < 1e-8);
    }
}

#[test]
fn top_plane_invariants() {
    for p in 3..=9 {
        for seed in 0..30 {
            check_top_plane(&random_skew(p, 77 + 31 * seed + p as u64));
        }
    }
}

#[test]
fn top_plane_is_gauge_invariant_under_scaling() {
    let a = random_skew(7, 3);
    let scaled = SkewMatrix::new(7, a.upper().iter().map(|x| 4.5 * x).collect()).unwrap();
    let (pa, ps) = (top_plane(&a).unwrap(), top_plane(&scaled).unwrap());
    assert!((ps.sigma1 - 4.5 * pa.sigma1).abs() < 1e-10 * ps.sigma1);
    for i in 0..7 {
        assert!((pa.u[i] - ps.u[i]).abs() < 1e-9);
        assert!((pa.v[i] - ps.v[i]).abs() < 1e-9);
    }
}

#[test]
fn small_orders_keep_the_top_pair_dominant() {
    for p in [4, 5] {
        let ratios = simulate(p, 50_000, 2024, 4, |a| {
            let s = singular_values(a)?;
            let (s1, s2) = (s.sigma[0], s.sigma[1]);
            Ok(s1 * s1 / (s1 * s1 + s2 * s2))
        })
        .unwrap();
        assert!(ratios.iter().all(|&r| r >= 0.5), "p = {p}");
        assert!(ratios.iter().all(|&r| r > 0.5 || r.is_nan()), "p = {p}");
    }
}

#[test]
fn empirical_tail_matches_exact_tail() {
    let n = 200_000;
    let sigma1 = simulate(6, n, 42, 4, |a| Ok(singular_values(a)?.largest())).unwrap();
    let f = empirical_upper(&sigma1, 3.0).unwrap();
    let exact = largest_sv_upper(6, 3.0).unwrap().value();
    let se = binomial_se(exact, n);
    assert!(
        (f - exact).abs() < 3.0 * se,
        "empirical {f}, exact {exact}, se {se}"
    );
}

#[test]
fn ks_distance_is_small_for_moderate_runs() {
    let sigma1 = simulate(5, 20_000, 9, 4, |a| Ok(singular_values(a)?.largest())).unwrap();
    let d = ks_distance(&sigma1, |x| {
        Ok(skewtail_core::rmtdist::largest_sv_cdf(5, x)?.value())
    })
    .unwrap();
    // the 1% critical value at n = 20 000 is 1.63/sqrt(n) ≈ 0.0115
    assert!(d < 0.0115, "{d}");
}

#[test]
fn simulation_is_deterministic_across_threads() {
    let run = |threads| {
        simulate(9, 3_000, 123, threads, |a| {
            let s = singular_values(a)?;
            Ok((s.largest(), s.standardized_largest()))
        })
        .unwrap()
    };
    let serial = run(1);
    for threads in [2, 3, 8] {
        let parallel = run(threads);
        assert!(serial
            .iter()
            .zip(&parallel)
            .all(|(a, b)| a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits()));
    }
    assert_ne!(
        serial,
        simulate(9, 3_000, 124, 1, |a| {
            let s = singular_values(a)?;
            Ok((s.largest(), s.standardized_largest()))
        })
        .unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn standardized_largest_lies_in_range(p in 2usize..12, seed in any::<u64>()) {
        let s = singular_values(&random_skew(p, seed)).unwrap();
        let r = s.standardized_largest();
        let lower = 1.0 / ((p / 2) as f64).sqrt();
        prop_assert!(r <= 1.0 + 1e-12);
        prop_assert!(r >= lower - 1e-12);
    }

    #[test]
    fn negation_keeps_the_spectrum(p in 2usize..10, seed in any::<u64>()) {
        let a = random_skew(p, seed);
        let neg = SkewMatrix::new(p, a.upper().iter().map(|x| -x).collect()).unwrap();
        let (s, t) = (singular_values(&a).unwrap(), singular_values(&neg).unwrap());
        for (x, y) in s.sigma.iter().zip(&t.sigma) {
            prop_assert!((x - y).abs() < 1e-10 * s.largest());
        }
    }
}

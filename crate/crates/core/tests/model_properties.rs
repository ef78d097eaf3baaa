use gridlsh::mc::mc_estimate_p;
use gridlsh::model::*;
use gridlsh::Exec;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Fraction of (cells, point) draws where a uniform point of the query cube
/// lies in at least `ell` of `m` uniform cells. Shares no code with the crate.
fn point_sampling_oracle(m: usize, ell: usize, d: usize, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..n {
        let p: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
        let mut covering = 0;
        for _ in 0..m {
            let inside = p.iter().all(|&pj| {
                let x = rng.random::<f64>() - 0.5;
                (pj - x).abs() <= 0.5
            });
            covering += inside as usize;
        }
        hits += (covering >= ell) as usize;
    }
    let mean = hits as f64 / n as f64;
    (mean, (mean * (1.0 - mean) / n as f64).sqrt())
}

#[test]
fn q4_closed_form_matches_orthant_sum_and_sampling() {
    // frozen from the orthant sum and an independent point-sampling run
    assert_eq!(per_dim_coverage_q(4).unwrap(), r(31, 80));
    assert_eq!(quadrant_sum_p1(4).unwrap(), r(31, 80));
    let est = mc_estimate_p(4, 4, 1, 200_000, 17, Exec::default()).unwrap();
    assert!(est.z_score(31.0 / 80.0) <= 4.0, "{est:?}");
    let (mean, se) = point_sampling_oracle(4, 4, 1, 400_000, 3);
    assert!((mean - 0.3875).abs() <= 4.0 * se, "{mean} ± {se}");
}

#[test]
fn at_least_two_of_three_in_two_dimensions() {
    let exact = p_at_least(3, 2, 2).unwrap();
    assert_eq!(exact, r(893, 1536));
    let est = mc_estimate_p(3, 2, 2, 1_000_000, 5, Exec::default()).unwrap();
    assert!(est.z_score(to_f64(&exact)) <= 4.0, "{est:?}");
    let (mean, se) = point_sampling_oracle(3, 2, 2, 400_000, 9);
    assert!((mean - to_f64(&exact)).abs() <= 4.0 * se);
}

#[test]
fn union_examples_against_sampling() {
    assert_eq!(p_union(2, 1).unwrap(), r(11, 12));
    let exact = p_union(3, 4).unwrap();
    assert_eq!(exact, r(18_406_235, 28_311_552));
    for (m, d, value) in [(2, 1, 11.0 / 12.0), (3, 4, to_f64(&exact))] {
        let est = mc_estimate_p(m, 1, d, 200_000, 23, Exec::default()).unwrap();
        assert!(est.z_score(value) <= 4.0, "m={m} d={d} {est:?}");
    }
}

#[test]
fn orthant_sum_equals_closed_form_up_to_twelve() {
    for ell in 1..=12 {
        assert_eq!(
            quadrant_sum_p1(ell).unwrap(),
            per_dim_coverage_q(ell).unwrap(),
            "ell={ell}"
        );
    }
}

#[test]
fn coverage_factor_decreases() {
    let three_quarters = r(3, 4);
    let mut prev = per_dim_coverage_q(1).unwrap();
    assert_eq!(prev, three_quarters);
    for ell in 2..=40 {
        let q = per_dim_coverage_q(ell).unwrap();
        assert!(q < prev && q > r(0, 1) && q <= three_quarters);
        prev = q;
    }
}

fn direct_float_at_least(m: u32, ell: u32, d: u32) -> f64 {
    let binom = |n: u32, k: u32| -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    };
    let q = |j: u32| (2f64.powi(j as i32 + 2) - 2.0) / ((j + 1) as f64 * 2f64.powi(j as i32 + 1));
    (ell..=m)
        .map(|j| {
            let sign = if (j - ell).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * binom(j - 1, ell - 1) * binom(m, j) * q(j).powi(d as i32)
        })
        .sum()
}

#[test]
fn exact_and_float_evaluations_agree() {
    for m in 1..=10 {
        for ell in 1..=m {
            for d in 1..=16 {
                let exact = to_f64(&p_at_least(m, ell, d).unwrap());
                let float = direct_float_at_least(m, ell, d);
                let rel = (exact - float).abs() / exact.abs().max(f64::MIN_POSITIVE);
                assert!(rel <= 1e-12, "m={m} ell={ell} d={d}: {exact} vs {float}");
            }
        }
    }
}

proptest! {
    #[test]
    fn union_bounds_and_monotonicity(m in 1u32..12, d in 1u32..12) {
        let p = p_union(m, d).unwrap();
        let single = p_intersection(1, d).unwrap();
        let upper = std::cmp::min(Rational::from(BigInt::from(1)), Rational::from(BigInt::from(m)) * &single);
        prop_assert!(p >= single);
        prop_assert!(p <= upper);
        prop_assert!(p_union(m + 1, d).unwrap() >= p);
        prop_assert!(p_union(m, d + 1).unwrap() < p);
    }

    #[test]
    fn at_least_is_nonincreasing_in_ell(m in 1u32..10, d in 1u32..10) {
        let mut prev = p_at_least(m, 1, d).unwrap();
        for ell in 2..=m {
            let next = p_at_least(m, ell, d).unwrap();
            prop_assert!(next <= prev);
            prev = next;
        }
        prop_assert_eq!(prev, p_intersection(m, d).unwrap());
    }

    #[test]
    fn binomial_pascal_rule(n in 1u64..60, k in 1u64..60) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
    }

    #[test]
    fn rendered_rationals_parse_back(m in 1u32..8, d in 1u32..8) {
        let p = p_union(m, d).unwrap();
        prop_assert_eq!(parse_rational(&render(&p)).unwrap(), p);
    }
}

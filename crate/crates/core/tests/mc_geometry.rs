use gridlsh::mc::*;
use gridlsh::model::{p_at_least, to_f64};
use gridlsh::seed::{purpose_key, unit_rng, Purpose};
use gridlsh::Exec;
use proptest::prelude::*;

fn random_sample(m: usize, d: usize, seed: u64, i: u64) -> CellSample {
    sample_cells(
        m,
        d,
        &mut unit_rng(purpose_key(seed, Purpose::CellSample, 0), i),
    )
    .unwrap()
}

fn arb_sample() -> impl Strategy<Value = CellSample> {
    (1usize..=6, 1usize..=4).prop_flat_map(|(m, d)| {
        prop::collection::vec(prop::collection::vec(-0.5f64..=0.5, d), m).prop_map(|rows| {
            let cells = rows
                .into_iter()
                .map(|r| CellOffset::new(r).unwrap())
                .collect();
            CellSample::new(cells).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn coverage_is_nested(sample in arb_sample()) {
        let m = sample.m();
        let mut prev = 1.0;
        for ell in 1..=m {
            let c = coverage_at_least(&sample, ell).unwrap();
            prop_assert!((0.0..=prev + 1e-12).contains(&c));
            prev = c;
        }
    }

    #[test]
    fn layer_cake_identities(sample in arb_sample()) {
        let m = sample.m();
        let exactly: Vec<f64> = (1..=m).map(|l| coverage_exactly(&sample, l).unwrap()).collect();
        let union = union_volume(&sample).unwrap();
        let singles: Vec<f64> = (0..m).map(|i| intersection_volume(&sample, &[i]).unwrap()).collect();
        let layered: f64 = exactly.iter().sum();
        let weighted: f64 = exactly.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v).sum();
        prop_assert!((layered - union).abs() <= 1e-9);
        prop_assert!((weighted - singles.iter().sum::<f64>()).abs() <= 1e-9);
        let max_single = singles.iter().copied().fold(0.0, f64::max);
        prop_assert!(union >= max_single - 1e-12);
        prop_assert!(union <= singles.iter().sum::<f64>().min(1.0) + 1e-12);
    }
}

#[test]
fn single_cell_coverage_mean_is_three_quarters() {
    let key = purpose_key(77, Purpose::CellSample, 1);
    let n = 1_000_000u64;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for i in 0..n {
        let s = sample_cells(1, 1, &mut unit_rng(key, i)).unwrap();
        let c = 1.0 - s.cells()[0].offsets()[0].abs();
        sum += c;
        sum_sq += c * c;
    }
    let mean = sum / n as f64;
    let stderr = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((mean - 0.75).abs() <= 4.0 * stderr, "{mean} ± {stderr}");
}

#[test]
fn two_cells_at_zero_and_quarter() {
    let s = CellSample::from_offsets(&[&[0.0], &[0.25]]).unwrap();
    assert_eq!(intersection_volume(&s, &[0, 1]).unwrap(), 0.75);
    assert_eq!(coverage_at_least(&s, 2).unwrap(), 0.75);
    let r = raster_oracle(&s, 2, 4096).unwrap();
    assert!((r.fraction - 0.75).abs() <= 2.0 / 4096.0);
}

#[test]
fn union_and_coverage_match_raster() {
    for i in 0..20 {
        let s = random_sample(3, 2, 8, i);
        let r = raster_oracle(&s, 1, 1024).unwrap();
        assert!((union_volume(&s).unwrap() - r.fraction).abs() <= r.error_bound + 1e-9);
        let s = random_sample(4, 2, 8, 100 + i);
        let r = raster_oracle(&s, 2, 1024).unwrap();
        assert!((coverage_at_least(&s, 2).unwrap() - r.fraction).abs() <= r.error_bound + 1e-9);
    }
}

#[test]
fn raster_is_identical_across_worker_counts() {
    let s = random_sample(3, 3, 2, 0);
    let a = raster_oracle_with(&s, 2, 128, Exec::SEQUENTIAL).unwrap();
    let b = raster_oracle_with(&s, 2, 128, Exec::with_workers(4)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn estimates_match_paper_values() {
    for (m, ell, d, exact) in [(1, 1, 2, 0.5625), (2, 2, 1, 7.0 / 12.0), (3, 3, 1, 0.46875)] {
        let est = mc_estimate_p(m, ell, d, 1_000_000, 2024, Exec::default()).unwrap();
        assert!(est.z_score(exact) <= 4.0, "({m},{ell},{d}) {est:?}");
        assert!(est.stderr > 0.0 && (0.0..=1.0).contains(&est.mean));
    }
}

#[test]
fn estimates_are_bit_identical_across_worker_counts() {
    let a = mc_estimate_p(5, 2, 4, 20_000, 99, Exec::SEQUENTIAL).unwrap();
    let b = mc_estimate_p(5, 2, 4, 20_000, 99, Exec::with_workers(3)).unwrap();
    let c = mc_estimate_p(5, 2, 4, 20_000, 99, Exec::default()).unwrap();
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    assert_eq!(a.mean.to_bits(), c.mean.to_bits());
    let other = mc_estimate_p(5, 2, 4, 20_000, 100, Exec::default()).unwrap();
    assert_ne!(a.mean.to_bits(), other.mean.to_bits());
}

#[test]
fn estimate_tracks_at_least_closed_form() {
    let exact = to_f64(&p_at_least(5, 2, 2).unwrap());
    let est = mc_estimate_p(5, 2, 2, 100_000, 4, Exec::default()).unwrap();
    assert!(est.z_score(exact) <= 4.0, "{est:?} vs {exact}");
}

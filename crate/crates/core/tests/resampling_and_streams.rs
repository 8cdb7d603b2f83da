mod common;

use common::*;
use gramcov::applications::{
    group_panel, panel_within_cov, panel_within_cov_all, sandwich_score_cov, PanelBlock,
};
use gramcov::estimators::{cov_bariance, delta_max};
use gramcov::weighted::{
    bootstrap_covariances, cov_weighted, multinomial_weights, replicate_weights,
};
use gramcov::{DenseMatrix, Error, StreamState, WeightVector};
use proptest::prelude::*;

fn matrix_strategy(min_n: usize, max_n: usize, max_p: usize) -> impl Strategy<Value = DenseMatrix> {
    (min_n..=max_n, 1..=max_p).prop_flat_map(|(n, p)| {
        prop::collection::vec(-10.0f64..10.0, n * p)
            .prop_map(move |data| DenseMatrix::new(n, p, data).unwrap())
    })
}

fn stream_of(x: &DenseMatrix) -> StreamState {
    let mut s = StreamState::new(x.cols()).unwrap();
    s.extend(x).unwrap();
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn every_prefix_matches_textbook(x in matrix_strategy(2, 60, 6)) {
        let mut s = StreamState::new(x.cols()).unwrap();
        s.update(x.row(0)).unwrap();
        for t in 1..x.rows() {
            s.update(x.row(t)).unwrap();
            let want = textbook_cov(&x.slice_rows(0, t + 1));
            let got = s.covariance().unwrap();
            prop_assert!(max_abs_diff(got.as_slice(), &want) <= 1e-10 * max_abs(&want).max(1.0));
        }
    }

    #[test]
    fn merge_is_associative(x in matrix_strategy(6, 40, 4), cut in (1usize..5, 1usize..5)) {
        let n = x.rows();
        let a = cut.0.min(n - 2);
        let b = (a + cut.1).min(n - 1);
        let sa = stream_of(&x.slice_rows(0, a));
        let sb = stream_of(&x.slice_rows(a, b));
        let sc = stream_of(&x.slice_rows(b, n));
        let left = sa.merge(&sb).unwrap().merge(&sc).unwrap();
        let right = sa.merge(&sb.merge(&sc).unwrap()).unwrap();
        prop_assert_eq!(left.count(), right.count());
        let cl = left.covariance().unwrap();
        let cr = right.covariance().unwrap();
        prop_assert!(delta_max(&cl, &cr).unwrap() <= 1e-12 * cl.max_abs().max(1.0));
        let whole = stream_of(&x).covariance().unwrap();
        prop_assert!(delta_max(&cl, &whole).unwrap() <= 1e-12 * whole.max_abs().max(1.0));
    }

    #[test]
    fn shifted_stream_tracks_large_offsets(x in matrix_strategy(2, 40, 3), offset in 1e4f64..1e6) {
        let rows: Vec<Vec<f64>> = x.row_iter().map(|r| r.iter().map(|v| v + offset).collect()).collect();
        let far = DenseMatrix::from_rows(&rows).unwrap();
        let mut s = StreamState::with_shift(x.cols(), Some(far.row(0).to_vec())).unwrap();
        s.extend(&far).unwrap();
        let want = textbook_cov(&x);
        let got = s.covariance().unwrap();
        prop_assert!(max_abs_diff(got.as_slice(), &want) <= 1e-9 * max_abs(&want).max(1.0));
    }

    #[test]
    fn weighted_equals_expanded_resample(
        (x, w) in matrix_strategy(1, 20, 4).prop_flat_map(|x| {
            let n = x.rows();
            (Just(x), prop::collection::vec(0u64..4, n))
        })
    ) {
        let w = WeightVector::new(w);
        prop_assume!(w.n_star() >= 2);
        let got = cov_weighted(&x, &w).unwrap();
        let want = textbook_cov(&w.expand(&x).unwrap());
        prop_assert!(max_abs_diff(got.as_slice(), &want) <= 1e-10 * max_abs(&want).max(1.0));
    }

    #[test]
    fn unit_weights_are_bit_identical(x in matrix_strategy(2, 30, 5)) {
        let got = cov_weighted(&x, &WeightVector::ones(x.rows())).unwrap();
        let want = cov_bariance(&x).unwrap();
        prop_assert_eq!(got.as_slice(), want.as_slice());
    }

    #[test]
    fn multinomial_weights_sum_to_n(n in 1usize..200, seed in any::<u64>()) {
        let w = multinomial_weights(n, seed).unwrap();
        prop_assert_eq!(w.len(), n);
        prop_assert_eq!(w.n_star(), n as u64);
        prop_assert_eq!(w.as_slice().iter().sum::<u64>(), n as u64);
    }

    #[test]
    fn sandwich_is_bariance(x in matrix_strategy(2, 40, 5)) {
        let a = sandwich_score_cov(&x).unwrap();
        let b = cov_bariance(&x).unwrap();
        prop_assert!(a.as_slice().iter().zip(b.as_slice()).all(|(u, v)| u.to_bits() == v.to_bits()));
    }

    #[test]
    fn panel_block_matches_explicit_annihilator(x in matrix_strategy(2, 64, 4)) {
        let got = panel_within_cov(&PanelBlock::new("u", x.clone())).unwrap();
        let want = explicit_within_cov(&x);
        prop_assert!(max_abs_diff(got.as_slice(), &want) <= 1e-12 * max_abs(&want).max(1.0));
    }
}

#[test]
fn weights_are_reproducible_and_distinct_per_replicate() {
    assert_eq!(
        replicate_weights(50, 7, 3).unwrap(),
        replicate_weights(50, 7, 3).unwrap()
    );
    assert_ne!(
        replicate_weights(50, 7, 3).unwrap(),
        replicate_weights(50, 7, 4).unwrap()
    );
    let x = uniform_matrix(&mut rng(2), 30, 3, -1.0, 1.0);
    let a = bootstrap_covariances(&x, 5, 11);
    let b = bootstrap_covariances(&x, 5, 11);
    assert_eq!(a.len(), 5);
    for (u, v) in a.iter().zip(&b) {
        assert_eq!(u.as_ref().unwrap(), v.as_ref().unwrap());
    }
}

#[test]
fn degenerate_weight_vectors_are_rejected() {
    let x = DenseMatrix::from_rows(&[[1.0], [2.0], [3.0]]).unwrap();
    let one = WeightVector::new(vec![0, 1, 0]);
    assert!(matches!(
        cov_weighted(&x, &one),
        Err(Error::TooFewObservations { got: 1 })
    ));
    assert!(cov_weighted(&x, &WeightVector::new(vec![1, 1])).is_err());
}

#[test]
fn panel_grouping_handles_interleaved_rows() {
    let ids = ["b", "a", "b", "a", "b"];
    let x = DenseMatrix::from_rows(&[[1.0, 0.0], [5.0, 1.0], [2.0, 1.0], [7.0, 2.0], [4.0, 5.0]])
        .unwrap();
    let blocks = group_panel(&ids, &x).unwrap();
    assert_eq!(
        blocks
            .iter()
            .map(|b| b.unit_id.as_str())
            .collect::<Vec<_>>(),
        ["b", "a"]
    );
    let all = panel_within_cov_all(&blocks).unwrap();
    let b = DenseMatrix::from_rows(&[[1.0, 0.0], [2.0, 1.0], [4.0, 5.0]]).unwrap();
    assert!(max_abs_diff(all["b"].as_slice(), &explicit_within_cov(&b)) <= 1e-12);
    let single = PanelBlock::new("c", DenseMatrix::from_rows(&[[1.0]]).unwrap());
    assert!(matches!(
        panel_within_cov(&single),
        Err(Error::TooFewPeriods { .. })
    ));
}

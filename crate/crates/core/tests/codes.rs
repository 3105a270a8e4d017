use hgp_optim::alist::{parse_matrix, write_matrix};
use hgp_optim::gf2::BitMatrix;
use hgp_optim::hgp::build_hgp;
use hgp_optim::tanner::TannerState;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn family_parameters() {
    for (m, n, expected) in [
        (15, 20, (625, 25)),
        (24, 32, (1600, 64)),
        (27, 36, (2025, 81)),
    ] {
        let s = TannerState::random_regular_full_rank(m, n, 3, 4, 1, 10_000).unwrap();
        assert_eq!(s.binary_matrix().rank(), m);
        let code = build_hgp(&s.binary_matrix()).unwrap();
        assert_eq!(code.parameters(), expected);
        assert_eq!(expected.1 * 25, expected.0);
    }
}

#[test]
fn swaps_keep_css_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut saw_parallel = false;
    for i in 0..100 {
        let mut s = TannerState::random_regular(6, 8, 3, 4, i).unwrap();
        for _ in 0..50 {
            let a = s.random_action(&mut rng);
            s.swap_in_place(a).unwrap();
        }
        saw_parallel |= s.has_parallel_edges();
        let code = build_hgp(&s.binary_matrix()).unwrap();
        assert!(code.hx().mul(&code.hz().transpose()).unwrap().is_zero());
        let k = code.num_qubits() - code.rank_hx() - code.rank_hz();
        assert_eq!(code.num_logical(), k);
    }
    assert!(saw_parallel);
}

proptest! {
    #[test]
    fn alist_round_trip(rows in 1usize..8, cols in 1usize..10, bits in any::<u128>()) {
        let mut h = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                h.set(r, c, bits >> ((r * cols + c) % 128) & 1 == 1);
            }
        }
        let text = write_matrix(&h);
        prop_assert_eq!(parse_matrix(&text).unwrap(), h.clone());
        let state = TannerState::from_alist(&text).unwrap();
        prop_assert_eq!(state.binary_matrix(), h);
    }

    #[test]
    fn degrees_bound_collapsed_weights(seed in any::<u64>(), swaps in 0usize..40) {
        let mut s = TannerState::random_regular(9, 12, 3, 4, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..swaps {
            let a = s.random_action(&mut rng);
            s = s.apply_swap(a).unwrap();
        }
        prop_assert!(s.check_degrees().iter().all(|&d| d == 4));
        prop_assert!(s.bit_degrees().iter().all(|&d| d == 3));
        let h = s.binary_matrix();
        let full = (0..h.rows()).all(|r| h.row_weight(r) == 4) && (0..h.cols()).all(|c| h.col_weight(c) == 3);
        prop_assert_eq!(full, !s.has_parallel_edges());
    }
}

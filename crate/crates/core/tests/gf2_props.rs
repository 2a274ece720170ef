mod common;

use common::{naive_rank, naive_solvable};
use proptest::prelude::*;
use rhg_core::gf2::{self, analyze};
use rhg_core::{BitMatrix, BitVector};

fn matrix() -> impl Strategy<Value = Vec<Vec<u8>>> {
    (1usize..=64, 1usize..=64, 0.0f64..0.7).prop_flat_map(|(r, c, p)| {
        let cell = prop::bool::weighted(p).prop_map(u8::from);
        prop::collection::vec(prop::collection::vec(cell, c), r)
    })
}

fn with_rhs() -> impl Strategy<Value = (Vec<Vec<u8>>, Vec<u8>)> {
    matrix().prop_flat_map(|m| {
        let r = m.len();
        (Just(m), prop::collection::vec(0u8..=1, r))
    })
}

fn bits(b: &[u8]) -> BitVector {
    BitVector::from_bools(&b.iter().map(|&x| x == 1).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_equals_transpose_rank(rows in matrix()) {
        let m = BitMatrix::from_rows(&rows);
        prop_assert_eq!(gf2::rank(&m), gf2::rank(&m.transpose()));
        prop_assert_eq!(gf2::rank(&m), naive_rank(&rows));
    }

    #[test]
    fn solutions_reproduce_rhs((rows, b) in with_rhs()) {
        let m = BitMatrix::from_rows(&rows);
        let b = bits(&b);
        if let Some(x) = gf2::solve(&m, &b).unwrap() {
            prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
        } else {
            prop_assert!(!gf2::solvable(&m, &b).unwrap());
        }
    }

    #[test]
    fn solvable_matches_reference((rows, b) in with_rhs()) {
        let m = BitMatrix::from_rows(&rows);
        prop_assert_eq!(gf2::solvable(&m, &bits(&b)).unwrap(), naive_solvable(&rows, &b));
    }

    #[test]
    fn rank_survives_row_operations(rows in matrix(), ops in prop::collection::vec((any::<bool>(), any::<usize>(), any::<usize>()), 0..40)) {
        let mut m = BitMatrix::from_rows(&rows);
        let before = gf2::rank(&m);
        let n = m.rows();
        for (swap, a, b) in ops {
            let (a, b) = (a % n, b % n);
            if swap {
                m.swap_rows(a, b);
            } else if a != b {
                m.add_row(a, b);
            }
        }
        prop_assert_eq!(gf2::rank(&m), before);
    }

    #[test]
    fn augmented_rank_grows_by_at_most_one((rows, b) in with_rhs()) {
        let m = BitMatrix::from_rows(&rows);
        let s = &analyze(&m, &[bits(&b)], false).unwrap()[0];
        prop_assert!(s.aug_rank == s.rank || s.aug_rank == s.rank + 1);
        prop_assert_eq!(s.rank, gf2::rank(&m));
    }

    #[test]
    fn batched_answers_match_single_queries(rows in matrix(), seeds in prop::collection::vec(any::<u64>(), 1..6)) {
        let m = BitMatrix::from_rows(&rows);
        let targets: Vec<BitVector> = seeds
            .iter()
            .map(|s| BitVector::from_bools(&(0..m.rows()).map(|i| (s >> (i % 64)) & 1 == 1).collect::<Vec<_>>()))
            .collect();
        let batch = analyze(&m, &targets, true).unwrap();
        for (t, s) in targets.iter().zip(&batch) {
            prop_assert_eq!(s.is_solvable(), gf2::solvable(&m, t).unwrap());
            if let Some(x) = &s.solution {
                prop_assert_eq!(&m.mul_vec(x).unwrap(), t);
            }
        }
    }
}

use std::collections::BTreeMap;

use mwss_core::exactalg::{Matrix, WeightedSpace};
use mwss_core::monodromy::{
    bigraded_dims, gr_dims, monodromy_filtration, mw_purity_check, verify_monodromy_axioms,
    NilpotentOperator,
};
use mwss_core::sample::{
    jordan_matrix, jump_perturbations, random_invertible, random_jordan_type, random_nilpotent,
};
use mwss_core::{Field, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A block of size `k` contributes one dimension to each of `k-1, k-3, .., 1-k`.
fn expected_gr(sizes: &[usize]) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for &k in sizes {
        let k = k as i64;
        for j in 0..k {
            *out.entry(k - 1 - 2 * j).or_insert(0) += 1;
        }
    }
    out
}

fn nonzero(dims: Vec<(i64, usize)>) -> BTreeMap<i64, usize> {
    dims.into_iter().filter(|&(_, d)| d > 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn filtration_satisfies_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, _) = random_nilpotent::<Q, _>(&mut rng, 7);
        let fil = monodromy_filtration(&n);
        prop_assert!(fil.is_exhaustive_and_separated());
        let report = verify_monodromy_axioms(&n, &fil);
        prop_assert!(report.holds(), "{:?}", report.failure);
    }

    #[test]
    fn perturbed_filtrations_fail(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, _) = random_nilpotent::<Q, _>(&mut rng, 6);
        let fil = monodromy_filtration(&n);
        let perturbed = jump_perturbations(&fil);
        prop_assert!(perturbed.len() >= 2);
        for other in perturbed {
            prop_assert!(!verify_monodromy_axioms(&n, &other).holds());
        }
    }

    #[test]
    fn graded_pieces_follow_jordan_type(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, sizes) = random_nilpotent::<Q, _>(&mut rng, 8);
        prop_assert_eq!(nonzero(gr_dims(&monodromy_filtration(&n))), expected_gr(&sizes));
    }

    #[test]
    fn bigraded_pieces_refine_the_grading(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, _) = random_nilpotent::<Q, _>(&mut rng, 7);
        let fil = monodromy_filtration(&n);
        let bg = bigraded_dims(&n);
        prop_assert_eq!(bg.total(), n.dim());
        let (lo, hi) = fil.support();
        for a in lo - 1..=hi + 1 {
            prop_assert_eq!(bg.diagonal_sum(a), fil.gr_dim(a), "a = {}", a);
        }
    }

    #[test]
    fn scaling_leaves_the_filtration_unchanged(seed in any::<u64>(), c in prop_oneof![-5i64..=-1, 1i64..=5]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, _) = random_nilpotent::<Q, _>(&mut rng, 6);
        let fil = monodromy_filtration(&n);
        let scaled = monodromy_filtration(&n.scaled(&Q::from_i64(c)));
        let (lo, hi) = fil.support();
        for a in lo - 1..=hi + 1 {
            prop_assert_eq!(fil.step(a), scaled.step(a));
        }
    }

    #[test]
    fn conjugation_transports_the_filtration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = random_jordan_type(&mut rng, 6);
        let dim: usize = sizes.iter().sum();
        let j = NilpotentOperator::new(jordan_matrix::<Q>(&sizes)).unwrap();
        let p = random_invertible::<Q, _>(&mut rng, dim);
        let pinv = p.inverse().unwrap();
        let n = NilpotentOperator::new(&(&p * j.matrix()) * &pinv).unwrap();
        let (fj, fn_) = (monodromy_filtration(&j), monodromy_filtration(&n));
        let (lo, hi) = fj.support();
        for a in lo - 1..=hi + 1 {
            prop_assert_eq!(fj.step(a).map(&p).unwrap(), fn_.step(a));
        }
    }
}

#[test]
fn zero_operator_is_pure_of_weight_zero() {
    let n = NilpotentOperator::new(Matrix::<Q>::zeros(3, 3)).unwrap();
    assert_eq!(
        nonzero(gr_dims(&monodromy_filtration(&n))),
        BTreeMap::from([(0, 3)])
    );
}

#[test]
fn single_block_is_pure_for_the_centered_weights() {
    let n = NilpotentOperator::new(jordan_matrix::<Q>(&[3])).unwrap();
    assert_eq!(
        nonzero(gr_dims(&monodromy_filtration(&n))),
        BTreeMap::from([(-2, 1), (0, 1), (2, 1)])
    );
    let space = WeightedSpace::new([(1, 1), (3, 1), (5, 1)]);
    assert!(mw_purity_check(&space, &n, 3).unwrap().pure);
    assert!(!mw_purity_check(&space, &n, 1).unwrap().pure);
    assert!(mw_purity_check(&WeightedSpace::pure(3, 3), &n, 3).is_err());
}

#[test]
fn non_nilpotent_matrix_is_rejected() {
    let m = Matrix::<Q>::from_i64_rows(&[&[1, 0], &[0, 0]]);
    assert!(NilpotentOperator::new(m).is_err());
}

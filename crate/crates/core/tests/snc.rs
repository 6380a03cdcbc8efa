use std::collections::{BTreeMap, BTreeSet};

use mwss_core::sample::random_dual_complex;
use mwss_core::snc::{connected_components, koszul, support_filtration_ranks, DualComplexData};
use mwss_core::{Fp, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complex(seed: u64) -> DualComplexData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 1 + (seed % 6) as usize;
    let n = 1 + (seed / 7 % 3) as usize;
    let density = [0.4, 0.7, 1.0][(seed / 31 % 3) as usize];
    random_dual_complex(&mut rng, s, n, density)
}

/// Connected components of the 1-skeleton by depth-first search.
fn component_count(dc: &DualComplexData) -> usize {
    let s = dc.num_components();
    let mut adj = vec![Vec::new(); s];
    for (f, _) in dc.faces() {
        if f.len() == 2 {
            adj[f[0]].push(f[1]);
            adj[f[1]].push(f[0]);
        }
    }
    let mut seen = vec![false; s];
    let mut count = 0;
    for start in 0..s {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(a, &d)| if a % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn theta_squares_to_zero(seed in any::<u64>()) {
        let dc = complex(seed);
        prop_assert!(koszul::<Q>(&dc).is_complex());
        prop_assert!(koszul::<Fp<3>>(&dc).is_complex());
    }

    #[test]
    fn euler_characteristic_counts_faces(seed in any::<u64>()) {
        let dc = complex(seed);
        let k = koszul::<Q>(&dc);
        let by_faces: i64 = dc.faces().map(|(f, c)| if f.len() % 2 == 1 { c as i64 } else { -(c as i64) }).sum();
        prop_assert_eq!(k.euler_characteristic(), by_faces);
        prop_assert_eq!(dc.euler_characteristic(), by_faces);
        prop_assert_eq!(alternating(&k.cohomology_dims()), by_faces);
    }

    #[test]
    fn degree_zero_counts_connected_components(seed in any::<u64>()) {
        let dc = complex(seed);
        let h = koszul::<Q>(&dc).cohomology_dims();
        let cc = component_count(&dc);
        prop_assert_eq!(h[0], cc);
        prop_assert_eq!(connected_components(&dc).len(), cc);
        let cover: BTreeSet<usize> = connected_components(&dc).into_iter().flatten().collect();
        prop_assert_eq!(cover.len(), dc.num_components());
    }

    #[test]
    fn graphs_have_first_betti_number_of_a_graph(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = 1 + (seed % 6) as usize;
        let dc = random_dual_complex(&mut rng, s, 1, 0.6);
        let edges = dc.faces().filter(|(f, _)| f.len() == 2).count();
        let h = koszul::<Q>(&dc).cohomology_dims();
        prop_assert_eq!(h.get(1).copied().unwrap_or(0), edges + component_count(&dc) - s);
    }

    #[test]
    fn support_filtration_is_a_running_total(seed in any::<u64>()) {
        let dc = complex(seed);
        let r = support_filtration_ranks(&dc);
        prop_assert_eq!(&r.gr, &dc.lambda_ranks());
        prop_assert_eq!(r.fil[0], r.gr.iter().sum::<usize>());
        for a in 1..r.gr.len() {
            prop_assert_eq!(r.fil[a - 1] - r.fil[a], r.gr[a - 1]);
        }
    }
}

#[test]
fn full_simplex_is_acyclic() {
    let faces: Vec<Vec<usize>> = (1u32..16)
        .map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    let dc = DualComplexData::new(4, 3, faces).unwrap();
    assert_eq!(koszul::<Q>(&dc).cohomology_dims(), vec![1, 0, 0, 0]);
}

#[test]
fn cycle_and_chain() {
    assert_eq!(
        koszul::<Q>(&DualComplexData::cycle(4, 1).unwrap()).cohomology_dims(),
        vec![1, 1, 0, 0]
    );
    assert_eq!(
        koszul::<Q>(&DualComplexData::chain(4, 1).unwrap()).cohomology_dims(),
        vec![1, 0, 0, 0]
    );
    assert_eq!(
        koszul::<Q>(&DualComplexData::smooth(2)).cohomology_dims(),
        vec![1]
    );
}

#[test]
fn two_components_meeting_twice_form_a_loop() {
    let dc = DualComplexData::with_components(
        2,
        1,
        [(vec![0], 1), (vec![1], 1), (vec![0, 1], 2)],
        BTreeMap::new(),
    )
    .unwrap();
    let k = koszul::<Q>(&dc);
    assert_eq!(k.terms, vec![2, 2]);
    assert_eq!(k.cohomology_dims(), vec![1, 1]);
}

#[test]
fn invalid_complexes_are_rejected() {
    assert!(DualComplexData::new(3, 1, [vec![0], vec![1], vec![2], vec![0, 1, 2]]).is_err());
    assert!(DualComplexData::new(2, 1, [vec![0], vec![1], vec![0, 1], vec![0, 1]]).is_err());
}

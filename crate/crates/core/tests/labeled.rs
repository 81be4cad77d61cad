mod common;

use common::random_graph;
use cyclesieve::io::{load_graph, load_labels, Format};
use cyclesieve::labeled::{
    brute_force_labeled_cycles, brute_force_labeled_paths, labeled_cycle_sequences,
    labeled_path_sequences,
};
use cyclesieve::{count_cycles, count_paths, Graph};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: [&str; 3] = ["A", "B", "C"];

fn labelled(g: Graph, alphabet: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let labels = (0..g.n_vertices())
        .map(|_| ALPHABET[rng.gen_range(0..alphabet)].to_string())
        .collect();
    g.with_labels(labels).unwrap()
}

#[test]
fn fixture_square_with_chord() {
    let g = load_graph(common::fixture("labeled4.txt"), Format::EdgeList, false).unwrap();
    let g = load_labels(g, common::fixture("labels4.txt")).unwrap();
    let c = labeled_cycle_sequences(&g, 4).unwrap();
    // triangles 0-1-2 (A A B) and 0-2-3 (A B C), both orientations
    assert_eq!(c.get(3, &["A", "A", "B"]), BigInt::from(2));
    assert_eq!(c.get(3, &["A", "B", "C"]), BigInt::from(1));
    assert_eq!(c.get(3, &["A", "C", "B"]), BigInt::from(1));
    assert_eq!(
        c.marginals(),
        count_cycles(&g, 4).unwrap().counts.exact().unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycle_sequences_match_oracle_and_marginals(
        n in 1usize..=7,
        p in 0.15f64..0.8,
        directed: bool,
        alphabet in 1usize..=3,
        seed: u64,
    ) {
        let g = labelled(random_graph(n, p, 0.2, directed, seed), alphabet, seed);
        let counts = labeled_cycle_sequences(&g, n).unwrap();
        prop_assert_eq!(&counts, &brute_force_labeled_cycles(&g, n).unwrap());
        prop_assert_eq!(
            counts.marginals(),
            count_cycles(&g, n).unwrap().counts.exact().unwrap().to_vec()
        );
        for (k, bucket) in counts.per_length.iter().enumerate() {
            prop_assert!(bucket.keys().all(|s| s.0.len() == k + 1));
        }
    }

    #[test]
    fn path_sequences_match_oracle_and_marginals(
        n in 2usize..=7,
        p in 0.15f64..0.8,
        directed: bool,
        alphabet in 1usize..=3,
        seed: u64,
        a in 0usize..7,
        b in 0usize..7,
    ) {
        let g = labelled(random_graph(n, p, 0.0, directed, seed), alphabet, seed);
        let (from, to) = (a % n, b % n);
        prop_assume!(from != to);
        let ell = n - 1;
        let counts = labeled_path_sequences(&g, from, to, ell).unwrap();
        prop_assert_eq!(&counts, &brute_force_labeled_paths(&g, from, to, ell).unwrap());
        prop_assert_eq!(
            counts.marginals(),
            count_paths(&g, from, to, ell).unwrap().counts.exact().unwrap().to_vec()
        );
        for (k, bucket) in counts.per_length.iter().enumerate() {
            prop_assert!(bucket.keys().all(|s| s.0.len() == k + 2));
        }
    }
}

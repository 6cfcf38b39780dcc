mod common;

use common::*;
use ofs_core::generalise::{cluster_partition, dendrogram, generalise, similarity_matrix};
use ofs_core::numeric::{parse_grid, parse_tau, Rational};
use proptest::prelude::*;
use rand::Rng;

fn tau_from(r: &mut rand_chacha::ChaCha8Rng) -> Rational {
    let d: u64 = r.gen_range(1..=40);
    Rational::new(r.gen_range(1..=d), d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generalising_only_adds_words(seed in any::<u64>()) {
        let m = small_models(seed, 1).pop().unwrap();
        let tau = tau_from(&mut rng(seed));
        let (g, _) = generalise(&m, tau).unwrap();
        prop_assert!(language(&m, MAX_WORD).is_subset(&language(&g, MAX_WORD)));
    }

    #[test]
    fn higher_thresholds_refine(seed in any::<u64>()) {
        let m = small_models(seed, 1).pop().unwrap();
        let matrix = similarity_matrix(&m).unwrap();
        let grid = parse_grid("0.05:1:0.05").unwrap();
        let parts: Vec<_> = grid.iter().map(|&t| cluster_partition(&matrix, t)).collect();
        for w in parts.windows(2) {
            prop_assert!(w[1].refines(&w[0]));
        }
        let tree = dendrogram(&matrix);
        for (&t, p) in grid.iter().zip(&parts) {
            prop_assert_eq!(&tree.cut(t), p);
        }
    }

    #[test]
    fn generalise_is_deterministic(seed in any::<u64>()) {
        let m = small_models(seed, 1).pop().unwrap();
        let tau = tau_from(&mut rng(seed));
        prop_assert_eq!(generalise(&m, tau).unwrap(), generalise(&m, tau).unwrap());
    }

    #[test]
    fn percolation_reaches_a_fixpoint(seed in any::<u64>()) {
        let m = small_models(seed, 1).pop().unwrap();
        let tau = tau_from(&mut rng(seed));
        let (once, _) = generalise(&m, tau).unwrap();
        let (twice, records) = generalise(&once, tau).unwrap();
        if records.iter().all(|r| r.level > 0) {
            prop_assert!(records.is_empty());
            prop_assert_eq!(twice, once);
        }
    }
}

#[test]
fn exact_thresholds_decide_the_worked_example() {
    let m = ofs_core::ofs::parse_model(&golden("english_syllable.ofs")).unwrap();
    let matrix = similarity_matrix(&m).unwrap();
    assert_eq!(matrix.get("Onset", "Coda"), Some(Rational::new(7, 37)));
    let merged = cluster_partition(&matrix, parse_tau("7/37").unwrap());
    assert_eq!(merged.to_string(), "{Coda,Onset} {Peak}");
    let apart = cluster_partition(&matrix, parse_tau("0.19").unwrap());
    assert_eq!(apart.blocks.len(), 3);
}

mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use common::*;
use typed_kge::eval::{average_precision, pr_curve, roc_auc, roc_curve};
use typed_kge::graph::{
    corrupt_for_training, derive_lcwa, lcwa_semantics, partition, sample_negatives, split_dataset, CorruptionMode,
    Side, NEGATIVES_PER_POSITIVE,
};
use typed_kge::rng;
use typed_kge::synth::{generate, SyntheticSpec};
use typed_kge::{RelationSemantics, Triple, TripleStore};

fn scored() -> impl Strategy<Value = Vec<(f64, bool)>> {
    prop::collection::vec((0u8..6, any::<bool>()), 2..40).prop_map(|mut v| {
        v[0].1 = true;
        v[1].1 = false;
        v.into_iter().map(|(s, y)| (f64::from(s) * 0.5, y)).collect()
    })
}

fn store() -> impl Strategy<Value = TripleStore> {
    (2usize..15, 1usize..4).prop_flat_map(|(n, m)| {
        prop::collection::vec((0..n, 0..m, 0..n), 1..60).prop_map(move |raw| {
            TripleStore::new(n, m, raw.into_iter().map(|(s, p, o)| Triple::new(s, p, o)))
                .unwrap()
                .0
        })
    })
}

proptest! {
    #[test]
    fn metrics_match_oracles(examples in scored()) {
        prop_assert!((average_precision(&examples).unwrap() - ap_oracle(&examples)).abs() <= 1e-12);
        prop_assert_eq!(roc_auc(&examples).unwrap(), auroc_oracle(&examples));
    }

    #[test]
    fn metrics_in_unit_interval(examples in scored()) {
        let ap = average_precision(&examples).unwrap();
        let auc = roc_auc(&examples).unwrap();
        prop_assert!((0.0..=1.0).contains(&ap) && ap > 0.0);
        prop_assert!((0.0..=1.0).contains(&auc));
    }

    #[test]
    fn metrics_ignore_input_order(examples in scored(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = examples.clone();
        shuffled.shuffle(&mut rng::seeded(seed));
        prop_assert_eq!(average_precision(&examples).unwrap(), average_precision(&shuffled).unwrap());
        prop_assert_eq!(roc_auc(&examples).unwrap(), roc_auc(&shuffled).unwrap());
    }

    #[test]
    fn metrics_invariant_under_monotone_rescaling(examples in scored(), a in 0.1f64..10.0, b in -5.0f64..5.0) {
        let moved: Vec<_> = examples.iter().map(|&(s, y)| (a * s + b, y)).collect();
        prop_assert!((average_precision(&examples).unwrap() - average_precision(&moved).unwrap()).abs() < 1e-15);
        prop_assert_eq!(roc_auc(&examples).unwrap(), roc_auc(&moved).unwrap());
    }

    #[test]
    fn curves_are_monotone(examples in scored()) {
        let roc = roc_curve(&examples).unwrap();
        prop_assert_eq!(roc[0], (0.0, 0.0));
        prop_assert_eq!(*roc.last().unwrap(), (1.0, 1.0));
        prop_assert!(roc.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
        let pr = pr_curve(&examples).unwrap();
        prop_assert!(pr.windows(2).all(|w| w[0].0 <= w[1].0));
        prop_assert_eq!(pr.last().unwrap().0, 1.0);
    }

    #[test]
    fn partition_is_exhaustive_and_disjoint(store in store(), seed in any::<u64>()) {
        let part = partition(&store, seed);
        let n = store.len();
        prop_assert_eq!(part.holdout.len(), n / 5);
        prop_assert_eq!(part.validation.len(), n / 10);
        let all: HashSet<Triple> =
            part.train.iter().chain(&part.validation).chain(&part.holdout).copied().collect();
        prop_assert_eq!(all.len(), n);
        prop_assert!(all.iter().all(|t| store.contains(t)));
    }

    #[test]
    fn split_negatives_are_sound(store in store(), seed in any::<u64>()) {
        let sem = RelationSemantics::unconstrained(store.num_entities(), store.num_relations());
        let split = split_dataset(&store, &sem, seed).unwrap();
        let pools = [&split.holdout_negatives, &split.validation_negatives, &split.probe_negatives];
        let mut seen = HashSet::new();
        for pool in pools {
            for t in pool.iter() {
                prop_assert!(!store.contains(t));
                prop_assert!(seen.insert(*t), "pools overlap at {:?}", t);
            }
        }
        let requested = NEGATIVES_PER_POSITIVE
            * (split.holdout.len() + split.validation.len() + split.early_stop_probe.len());
        prop_assert_eq!(seen.len() + split.negative_shortfall, requested);
        prop_assert_eq!(split.early_stop_probe.len(), split.train.len().div_ceil(20));
        let train: HashSet<_> = split.train.iter().collect();
        prop_assert!(split.early_stop_probe.iter().all(|t| train.contains(t)));
    }

    #[test]
    fn lcwa_sets_are_observed_entities(store in store()) {
        let sem = lcwa_semantics(&store);
        for p in 0..store.num_relations() {
            let subjects: HashSet<usize> = store.relation_triples(p).iter().map(|t| t.s).collect();
            let objects: HashSet<usize> = store.relation_triples(p).iter().map(|t| t.o).collect();
            prop_assert_eq!(sem.domain(p).iter().copied().collect::<HashSet<_>>(), subjects);
            prop_assert_eq!(sem.range(p).iter().copied().collect::<HashSet<_>>(), objects);
            prop_assert!(store.relation_triples(p).iter().all(|t| sem.admits(t)));
        }
    }

    #[test]
    fn training_corruptions_keep_one_side(store in store(), count in 1usize..4, seed in any::<u64>()) {
        let sem = lcwa_semantics(&store);
        let batch = store.triples();
        let out = corrupt_for_training(batch, &sem, CorruptionMode::SubjectAndObject, count, &mut rng::seeded(seed));
        prop_assert_eq!(out.corruptions.len() + out.skipped, 2 * count * batch.len());
        for c in &out.corruptions {
            let pos = batch[c.positive];
            prop_assert!(sem.admits(&c.triple));
            prop_assert_eq!(c.triple.p, pos.p);
            match c.side {
                Side::Subject => prop_assert_eq!(c.triple.o, pos.o),
                Side::Object => prop_assert_eq!(c.triple.s, pos.s),
            }
        }
        let out = corrupt_for_training(batch, &sem, CorruptionMode::ObjectOnly, count, &mut rng::seeded(seed));
        prop_assert!(out.corruptions.iter().all(|c| c.side == Side::Object));
    }

    #[test]
    fn sampled_negatives_respect_forbidden(store in store(), k in 1usize..5, seed in any::<u64>()) {
        let sem = RelationSemantics::unconstrained(store.num_entities(), store.num_relations());
        let sample = sample_negatives(store.triples(), &sem, k, store.members(), seed).unwrap();
        let distinct: HashSet<_> = sample.triples.iter().collect();
        prop_assert_eq!(distinct.len(), sample.triples.len());
        prop_assert!(sample.triples.iter().all(|t| !store.contains(t)));
        prop_assert_eq!(sample.triples.len() + sample.shortfall, k * store.len());
    }
}

#[test]
fn noiseless_synthetic_lcwa_within_planted_signatures() {
    for seed in 0..3 {
        let spec = SyntheticSpec::new(3, 20, 6, 60, 0.0, seed);
        let corpus = generate(&spec).unwrap();
        let graph = typed_kge::graph::load_graph(corpus.triples.iter().cloned()).unwrap();
        for p in 0..graph.store.num_relations() {
            let k: usize = graph.vocab.relation_label(p)[1..].parse().unwrap();
            let (dom, ran) = spec.signatures[k];
            let lcwa = derive_lcwa(&graph.store, p);
            let class_of = |e: usize| graph.vocab.entity_label(e)[1..].split('_').next().unwrap().parse::<usize>().unwrap();
            assert!(lcwa.domain.iter().all(|&e| class_of(e) == dom));
            assert!(lcwa.range.iter().all(|&e| class_of(e) == ran));
        }
    }
}

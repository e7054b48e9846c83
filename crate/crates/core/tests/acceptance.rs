//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use typed_kge::eval::{average_precision, roc_auc, ComparisonRow};
use typed_kge::graph::{
    corrupt_for_training, lcwa_semantics, split_dataset, CorruptionMode, Provenance, RelationConstraint,
    NEGATIVES_PER_POSITIVE,
};
use typed_kge::models::{mwnn_score, rescal_score, transe_score, Distance, MwnnParams, TransEParams};
use typed_kge::pipeline::{cmd_grid, cmd_prepare, cmd_synth, run_pipeline, GridSpec, Regime, RunConfig};
use typed_kge::rng;
use typed_kge::synth::{CorpusFiles, SyntheticSpec};
use typed_kge::train::{
    als_sweep, mwnn_batch_step, mwnn_loss_and_gradient, rescal_loss, transe_batch_step, transe_loss_and_gradient,
    AdaGrad, AlsState,
};
use typed_kge::{Hyperparams, ModelKind, RelationSemantics, Triple, TripleStore};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn acceptance_corpus(dir: &Path, seed: u64) -> CorpusFiles {
    cmd_synth(&SyntheticSpec::new(3, 50, 6, 500, 0.05, seed), &dir.join(format!("corpus-{seed}"))).unwrap()
}

fn metric_oracles() -> Outcome {
    let mut rng = rng::seeded(11);
    let mut worst_ap: f64 = 0.0;
    let mut auroc_mismatch = 0;
    for _ in 0..1000 {
        let len = rng.random_range(2..=12);
        // few distinct levels so that ties are common
        let levels = rng.random_range(1..=len);
        let mut examples: Vec<(f64, bool)> = (0..len)
            .map(|_| (rng.random_range(0..levels) as f64 * 0.25, rng.random_bool(0.5)))
            .collect();
        examples[0].1 = true;
        examples[1].1 = false;
        examples.shuffle(&mut rng);
        worst_ap = worst_ap.max((average_precision(&examples).unwrap() - ap_oracle(&examples)).abs());
        if roc_auc(&examples).unwrap() != auroc_oracle(&examples) {
            auroc_mismatch += 1;
        }
    }
    outcome(
        worst_ap <= 1e-12 && auroc_mismatch == 0,
        format!("max |auprc - oracle| = {worst_ap:.2e}, auroc mismatches = {auroc_mismatch}"),
    )
}

fn scoring_oracles() -> Outcome {
    let mut rng = rng::seeded(12);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (n, m, d) = (rng.random_range(1..=6), rng.random_range(1..=3), rng.random_range(1..=8));
        let t = random_triple(&mut rng, n, m);
        let r = random_rescal(&mut rng, n, m, d);
        worst = worst.max(relative_error(rescal_score(&r, t.s, t.p, t.o), rescal_oracle(&r, t.s, t.p, t.o)));
        for distance in [Distance::L1, Distance::L2] {
            let p = random_transe(&mut rng, n, m, d, distance);
            worst = worst.max(relative_error(transe_score(&p, t.s, t.p, t.o), transe_oracle(&p, t.s, t.p, t.o)));
        }
        let h = rng.random_range(1..=8);
        let w = random_mwnn(&mut rng, n, m, d, h, 0.7);
        let mask: Vec<f64> = (0..h * 3 * d).map(|_| f64::from(u8::from(rng.random_bool(0.7)))).collect();
        worst = worst.max(relative_error(mwnn_score(&w, t.s, t.p, t.o, None), mwnn_oracle(&w, t.s, t.p, t.o, None, 1.0)));
        worst = worst.max(relative_error(
            mwnn_score(&w, t.s, t.p, t.o, Some(&mask)),
            mwnn_oracle(&w, t.s, t.p, t.o, Some(&mask), 1.0),
        ));
        let eval = typed_kge::ModelParams::Mwnn(w.clone()).score(&t);
        worst = worst.max(relative_error(eval, mwnn_oracle(&w, t.s, t.p, t.o, None, 1.0 - w.dropconnect)));
    }
    outcome(worst <= 1e-10, format!("max relative error = {worst:.2e}"))
}

const FD_STEP: f64 = 1e-5;

/// Central differences of `loss` with respect to every coordinate exposed
/// by `coord`.
fn finite_differences<P: Clone>(
    params: &P,
    coords: usize,
    coord: impl Fn(&mut P, usize) -> &mut f64,
    loss: impl Fn(&P) -> f64,
) -> Vec<f64> {
    (0..coords)
        .map(|i| {
            let mut plus = params.clone();
            *coord(&mut plus, i) += FD_STEP;
            let mut minus = params.clone();
            *coord(&mut minus, i) -= FD_STEP;
            (loss(&plus) - loss(&minus)) / (2.0 * FD_STEP)
        })
        .collect()
}

fn transe_coord(p: &mut TransEParams, i: usize) -> &mut f64 {
    let ne = p.entities.as_slice().len();
    if i < ne {
        &mut p.entities.as_mut_slice()[i]
    } else {
        &mut p.relations.as_mut_slice()[i - ne]
    }
}

fn mwnn_coord(p: &mut MwnnParams, i: usize) -> &mut f64 {
    let sizes = [p.entities.as_slice().len(), p.relations.as_slice().len(), p.hidden.as_slice().len()];
    if i < sizes[0] {
        &mut p.entities.as_mut_slice()[i]
    } else if i < sizes[0] + sizes[1] {
        &mut p.relations.as_mut_slice()[i - sizes[0]]
    } else if i < sizes[0] + sizes[1] + sizes[2] {
        &mut p.hidden.as_mut_slice()[i - sizes[0] - sizes[1]]
    } else {
        &mut p.output[i - sizes[0] - sizes[1] - sizes[2]]
    }
}

fn dense_rows(map: &std::collections::BTreeMap<usize, Vec<f64>>, rows: usize, d: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * d];
    for (&r, g) in map {
        out[r * d..(r + 1) * d].copy_from_slice(g);
    }
    out
}

/// True when every hinge and every L1 residual coordinate is at least
/// `margin` away from its kink.
fn transe_kink_free(p: &TransEParams, pairs: &[(Triple, Triple)], gamma: f64, margin: f64) -> bool {
    pairs.iter().all(|(pos, neg)| {
        let (vp, vn) = (p.residual(pos.s, pos.p, pos.o), p.residual(neg.s, neg.p, neg.o));
        let hinge = gamma - transe_oracle(p, pos.s, pos.p, pos.o) + transe_oracle(p, neg.s, neg.p, neg.o);
        let smooth = |v: &[f64]| match p.distance {
            Distance::L1 => v.iter().all(|x| x.abs() > margin),
            Distance::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt() > margin,
        };
        hinge.abs() > margin && smooth(&vp) && smooth(&vn)
    })
}

fn gradient_checks() -> Outcome {
    let mut rng = rng::seeded(13);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        // TransE
        let (n, m, d) = (rng.random_range(2..=8), rng.random_range(1..=3), rng.random_range(1..=8));
        let distance = if trial % 2 == 0 { Distance::L1 } else { Distance::L2 };
        let gamma = rng.random_range(0.5..3.0);
        let (params, pairs) = loop {
            let params = random_transe(&mut rng, n, m, d, distance);
            let pairs: Vec<(Triple, Triple)> = (0..rng.random_range(1..=6))
                .map(|_| {
                    let pos = random_triple(&mut rng, n, m);
                    // a corruption equal to its positive contributes nothing
                    let subject = rng.random_bool(0.5);
                    let kept = if subject { pos.s } else { pos.o };
                    let e = (kept + rng.random_range(1..n)) % n;
                    let neg = if subject { Triple::new(e, pos.p, pos.o) } else { Triple::new(pos.s, pos.p, e) };
                    (pos, neg)
                })
                .collect();
            // relative error needs a gradient that does not cancel to zero
            let (_, grad) = transe_loss_and_gradient(&params, &pairs, gamma);
            let norm: f64 = grad.entities.values().chain(grad.relations.values()).flatten().map(|g| g * g).sum();
            if norm.sqrt() > 1e-6 && transe_kink_free(&params, &pairs, gamma, 1e-3) {
                break (params, pairs);
            }
        };
        let (_, grad) = transe_loss_and_gradient(&params, &pairs, gamma);
        let mut analytic = dense_rows(&grad.entities, n, d);
        analytic.extend(dense_rows(&grad.relations, m, d));
        let numeric = finite_differences(&params, (n + m) * d, transe_coord, |p| {
            transe_loss_and_gradient(p, &pairs, gamma).0
        });
        worst = worst.max(vector_relative_error(&analytic, &numeric));

        // mwNN with a frozen DropConnect mask
        let (n, m, d, h) = (rng.random_range(2..=6), rng.random_range(1..=3), rng.random_range(1..=6), rng.random_range(1..=6));
        let (l1, l2) = (rng.random_range(0.0..0.01), rng.random_range(0.0..0.01));
        let params = loop {
            let p = random_mwnn(&mut rng, n, m, d, h, 0.6);
            if p.hidden.as_slice().iter().chain(&p.output).all(|w| w.abs() > 1e-3) {
                break p;
            }
        };
        let examples: Vec<(Triple, bool)> =
            (0..rng.random_range(2..=8)).map(|_| (random_triple(&mut rng, n, m), rng.random_bool(0.4))).collect();
        let mask: Vec<f64> = (0..h * 3 * d).map(|_| f64::from(u8::from(rng.random_bool(0.8)))).collect();
        let (_, grad) = mwnn_loss_and_gradient(&params, &examples, Some(&mask), l1, l2);
        let mut analytic = dense_rows(&grad.entities, n, d);
        analytic.extend(dense_rows(&grad.relations, m, d));
        analytic.extend(&grad.hidden);
        analytic.extend(&grad.output);
        let coords = analytic.len();
        let numeric = finite_differences(&params, coords, mwnn_coord, |p| {
            mwnn_loss_and_gradient(p, &examples, Some(&mask), l1, l2).0
        });
        worst = worst.max(vector_relative_error(&analytic, &numeric));
    }
    outcome(
        worst <= 1e-4,
        format!("max relative error = {worst:.2e} over 100 TransE and 100 mwNN instances"),
    )
}

fn als_instance(rng: &mut impl Rng, exact: bool) -> (TripleStore, RelationSemantics, Hyperparams) {
    let n = rng.random_range(5..=30);
    let m = rng.random_range(1..=5);
    let d = rng.random_range(1..=5);
    let mut hp = Hyperparams {
        dim: d,
        seed: rng.random(),
        init_std: 0.5,
        ..Hyperparams::defaults_for(ModelKind::Rescal)
    };
    if exact {
        // X_k = G B_k Gᵀ for a group indicator G with d groups: rank d exactly
        let mut triples = Vec::new();
        for k in 0..m {
            let block: Vec<bool> = (0..d * d).map(|_| rng.random_bool(0.4)).collect();
            for s in 0..n {
                for o in 0..n {
                    if block[(s % d) * d + o % d] {
                        triples.push(Triple::new(s, k, o));
                    }
                }
            }
        }
        let store = TripleStore::new(n, m, triples).unwrap().0;
        hp.lambda_a = 0.0;
        hp.lambda_r = 0.0;
        let sem = RelationSemantics::unconstrained(n, m);
        return (store, sem, hp);
    }
    let triples: Vec<Triple> = (0..rng.random_range(1..=4 * n)).map(|_| random_triple(rng, n, m)).collect();
    let store = TripleStore::new(n, m, triples).unwrap().0;
    hp.lambda_a = rng.random_range(0.0..0.5);
    hp.lambda_r = rng.random_range(0.0..0.5);
    let sem = if rng.random_bool(0.5) {
        RelationSemantics::unconstrained(n, m)
    } else {
        let relations = (0..m)
            .map(|k| {
                let mut domain: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                let mut range: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                domain.extend(store.subjects_of(k));
                range.extend(store.objects_of(k));
                RelationConstraint {
                    domain,
                    range,
                    provenance: Provenance::Schema,
                }
            })
            .collect();
        RelationSemantics::from_constraints(n, relations)
    };
    (store, sem, hp)
}

fn als_monotonicity() -> Outcome {
    let mut rng = rng::seeded(14);
    let mut worst_increase = f64::NEG_INFINITY;
    let mut worst_exact: f64 = 0.0;
    for i in 0..50 {
        let exact = i % 2 == 1;
        let (store, sem, hp) = als_instance(&mut rng, exact);
        let typed_kge::ModelParams::Rescal(init) =
            typed_kge::models::init_params(ModelKind::Rescal, store.num_entities(), store.num_relations(), &hp).unwrap()
        else {
            unreachable!()
        };
        let mut prev = rescal_loss(&init, &store, &sem, &hp).unwrap();
        let mut state = AlsState::new(init);
        for _ in 0..20 {
            state = als_sweep(state, &store, &sem, &hp).unwrap();
            worst_increase = worst_increase.max(state.loss - prev);
            prev = state.loss;
        }
        if exact {
            worst_exact = worst_exact.max(state.loss);
        }
    }
    outcome(
        worst_increase <= 1e-9 && worst_exact <= 1e-6,
        format!("largest per-sweep increase = {worst_increase:.2e}, worst exact-rank final loss = {worst_exact:.2e}"),
    )
}

fn constraint_soundness(dir: &Path) -> Outcome {
    let files = acceptance_corpus(dir, 0);
    let mut violations = 0usize;
    let mut collisions = 0usize;
    let mut corruptions = 0usize;
    let mut negatives = 0usize;
    let mut rng = rng::seeded(15);
    for regime in [Regime::Schema, Regime::Lcwa] {
        let mut cfg = RunConfig::new(ModelKind::TransE, regime, &files.triples, dir.join(format!("sound-{regime}")));
        cfg.types = Some(files.types.clone());
        cfg.constraints = Some(files.constraints.clone());
        let prepared = cmd_prepare(&cfg).unwrap();
        let sem = &prepared.semantics;
        let expected = if regime == Regime::Schema { Provenance::Schema } else { Provenance::Lcwa };
        violations += (0..sem.num_relations()).filter(|&p| sem.provenance(p) != expected).count();

        let train = prepared.split.train.clone();
        let mut drawn = 0;
        while drawn < 100_000 {
            let start = rng.random_range(0..train.len());
            let batch = &train[start..(start + 64).min(train.len())];
            let mode = if drawn % 2 == 0 { CorruptionMode::SubjectAndObject } else { CorruptionMode::ObjectOnly };
            let out = corrupt_for_training(batch, sem, mode, 5, &mut rng);
            violations += out.corruptions.iter().filter(|c| !sem.admits(&c.triple)).count();
            drawn += out.corruptions.len();
        }
        corruptions += drawn;

        // evaluation negatives are drawn once under the schema and shared
        // by every regime
        let schema_cfg = RunConfig {
            regime: Regime::Schema,
            out: dir.join("sound-eval"),
            ..cfg.clone()
        };
        let eval_sem = cmd_prepare(&schema_cfg).unwrap().semantics;
        let split = &prepared.split;
        let mut check = |pool: &[Triple], sem: &RelationSemantics, store: &TripleStore| {
            negatives += pool.len();
            violations += pool.iter().filter(|t| !sem.admits(t)).count();
            collisions += pool.iter().filter(|t| store.contains(t)).count();
            let distinct: HashSet<&Triple> = pool.iter().collect();
            collisions += pool.len() - distinct.len();
        };
        for pool in [&split.holdout_negatives, &split.validation_negatives, &split.probe_negatives] {
            check(pool, &eval_sem, &prepared.store);
        }
        // negatives drawn directly under the regime's own semantics
        let own = split_dataset(&prepared.store, sem, 3).unwrap();
        for pool in [&own.holdout_negatives, &own.validation_negatives, &own.probe_negatives] {
            check(pool, sem, &prepared.store);
        }
        let lcwa = lcwa_semantics(&prepared.train_store());
        let own = split_dataset(&prepared.store, &lcwa, 4).unwrap();
        check(&own.holdout_negatives, &lcwa, &prepared.store);
        let requested = NEGATIVES_PER_POSITIVE * split.holdout.len();
        if split.holdout_negatives.len() + split.negative_shortfall < requested {
            violations += 1;
        }
    }
    outcome(
        violations == 0 && collisions == 0 && corruptions >= 200_000,
        format!(
            "{corruptions} corruptions and {negatives} evaluation negatives: {violations} violations, {collisions} collisions"
        ),
    )
}

fn unconstrained_reduction() -> Outcome {
    let mut rng = rng::seeded(16);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (n, m, d) = (rng.random_range(3..=10), rng.random_range(1..=3), rng.random_range(1..=5));
        let triples: Vec<Triple> = (0..rng.random_range(1..=3 * n)).map(|_| random_triple(&mut rng, n, m)).collect();
        let store = TripleStore::new(n, m, triples).unwrap().0;
        let full = all_entities(n, m);
        let plain = RelationSemantics::unconstrained(n, m);

        // RESCAL: block loss over domain × range against the full tensor
        let hp = Hyperparams {
            lambda_a: rng.random_range(0.0..0.5),
            lambda_r: rng.random_range(0.0..0.5),
            ..Hyperparams::defaults_for(ModelKind::Rescal)
        };
        let r = random_rescal(&mut rng, n, m, d);
        let reference = rescal_full_loss(&r, &store, hp.lambda_a, hp.lambda_r);
        worst = worst.max(relative_error(rescal_loss(&r, &store, &full, &hp).unwrap(), reference));
        worst = worst.max(relative_error(rescal_loss(&r, &store, &plain, &hp).unwrap(), reference));

        // TransE: expected margin loss over every admissible corruption
        // against every-entity corruption
        let gamma = 1.0;
        let p = random_transe(&mut rng, n, m, d, Distance::L2);
        let mut constrained = Vec::new();
        let mut reference = 0.0;
        for pos in store.triples() {
            for &e in full.domain(pos.p) {
                constrained.push((*pos, Triple::new(e, pos.p, pos.o)));
            }
            for &e in full.range(pos.p) {
                constrained.push((*pos, Triple::new(pos.s, pos.p, e)));
            }
            for e in 0..n {
                for neg in [Triple::new(e, pos.p, pos.o), Triple::new(pos.s, pos.p, e)] {
                    let margin = gamma - transe_oracle(&p, pos.s, pos.p, pos.o) + transe_oracle(&p, neg.s, neg.p, neg.o);
                    reference += margin.max(0.0);
                }
            }
        }
        worst = worst.max(relative_error(transe_loss_and_gradient(&p, &constrained, gamma).0, reference));

        // mwNN: Bernoulli loss over every admissible object corruption
        let w = MwnnParams {
            dropconnect: 0.0,
            ..random_mwnn(&mut rng, n, m, d, d, 0.5)
        };
        let mut examples: Vec<(Triple, bool)> = store.triples().iter().map(|&t| (t, true)).collect();
        let mut reference = 0.0;
        for pos in store.triples() {
            reference -= mwnn_oracle(&w, pos.s, pos.p, pos.o, None, 1.0).ln();
            for &e in full.range(pos.p) {
                examples.push((Triple::new(pos.s, pos.p, e), false));
            }
            for e in 0..n {
                reference -= (1.0 - mwnn_oracle(&w, pos.s, pos.p, e, None, 1.0)).ln();
            }
        }
        worst = worst.max(relative_error(mwnn_loss_and_gradient(&w, &examples, None, 0.0, 0.0).0, reference));

        // sampled training steps: all-entity domain/range sets draw exactly
        // what unconstrained semantics draw
        let seed = rng.random();
        let batch: Vec<Triple> = store.triples().to_vec();
        let hp = Hyperparams::defaults_for(ModelKind::TransE);
        let step = |sem: &RelationSemantics| {
            let mut q = p.clone();
            let out = transe_batch_step(&mut q, &batch, sem, &hp, &mut rng::seeded(seed));
            (out.loss, q)
        };
        let ((la, qa), (lb, qb)) = (step(&full), step(&plain));
        worst = worst.max(relative_error(la, lb));
        if qa != qb {
            worst = f64::INFINITY;
        }
        let hp = Hyperparams { dropconnect: 0.0, ..Hyperparams::defaults_for(ModelKind::Mwnn) };
        let step = |sem: &RelationSemantics| {
            let mut q = w.clone();
            let mut opt = AdaGrad::new(&q, hp.learning_rate, hp.adagrad_eps);
            mwnn_batch_step(&mut q, &mut opt, &batch, sem, &hp, &mut rng::seeded(seed)).loss
        };
        worst = worst.max(relative_error(step(&full), step(&plain)));
    }
    outcome(worst <= 1e-12, format!("max relative difference = {worst:.2e}"))
}

fn transe_norm_invariant(dir: &Path) -> Outcome {
    let files = acceptance_corpus(dir, 0);
    let mut cfg = RunConfig::new(ModelKind::TransE, Regime::Schema, &files.triples, dir.join("norms"));
    cfg.types = Some(files.types.clone());
    cfg.constraints = Some(files.constraints.clone());
    let prepared = cmd_prepare(&cfg).unwrap();
    let hp = &cfg.hyperparams;
    let typed_kge::ModelParams::TransE(mut params) = typed_kge::models::init_params(
        ModelKind::TransE,
        prepared.store.num_entities(),
        prepared.store.num_relations(),
        hp,
    )
    .unwrap() else {
        unreachable!()
    };
    let worst_norm = |p: &TransEParams| {
        (0..p.entities.rows())
            .map(|i| (p.entities.row(i).iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs())
            .fold(0.0f64, f64::max)
    };
    let mut worst = worst_norm(&params);
    let mut rng = rng::seeded(17);
    let mut order = prepared.split.train.clone();
    let mut steps = 0;
    for _ in 0..5 {
        order.shuffle(&mut rng);
        for batch in order.chunks(hp.batch_size) {
            transe_batch_step(&mut params, batch, &prepared.semantics, hp, &mut rng);
            worst = worst.max(worst_norm(&params));
            steps += 1;
        }
    }
    outcome(worst <= 1e-6, format!("{steps} steps, max | ||a_i|| - 1 | = {worst:.2e}"))
}

fn directional(dir: &Path) -> Outcome {
    let mut lines = Vec::new();
    let mut passed = true;
    for model in ModelKind::ALL {
        let mut wins = [0usize; 2];
        let mut means = [0.0f64; 3];
        for seed in 0..5 {
            let files = acceptance_corpus(dir, seed);
            let mut auprc = [0.0f64; 3];
            for (i, regime) in Regime::ALL.into_iter().enumerate() {
                let mut cfg =
                    RunConfig::new(model, regime, &files.triples, dir.join(format!("dir-{model}-{regime}-{seed}")));
                cfg.types = Some(files.types.clone());
                cfg.constraints = Some(files.constraints.clone());
                cfg.hyperparams.dim = 10;
                cfg.hyperparams.seed = seed;
                auprc[i] = run_pipeline(&cfg).unwrap().auprc;
                means[i] += auprc[i] / 5.0;
            }
            wins[0] += usize::from(auprc[1] > auprc[0]);
            wins[1] += usize::from(auprc[2] > auprc[0]);
        }
        passed &= wins[0] >= 4 && wins[1] >= 4;
        lines.push(format!(
            "{model}: schema>none {}/5, lcwa>none {}/5 (mean {:.3}/{:.3}/{:.3})",
            wins[0], wins[1], means[0], means[1], means[2]
        ));
    }
    outcome(passed, lines.join("; "))
}

fn end_to_end_grid(dir: &Path) -> Outcome {
    let files = acceptance_corpus(dir, 0);
    let spec = GridSpec {
        triples: files.triples,
        types: Some(files.types),
        constraints: Some(files.constraints),
        out: dir.join("grid"),
        models: ModelKind::ALL.to_vec(),
        regimes: Regime::ALL.to_vec(),
        dims: vec![10],
        overrides: Vec::new(),
        workers: 0,
    };
    let result = cmd_grid(&spec).unwrap();
    let text = std::fs::read_to_string(spec.out.join("grid.csv")).unwrap();
    let mut lines = text.lines();
    let header_ok = lines.next() == Some(ComparisonRow::HEADER);
    let rows: Vec<_> = lines.map(ComparisonRow::parse_csv).collect();
    let well_formed = rows
        .iter()
        .filter(|r| match r {
            Ok(r) => (0.0..=1.0).contains(&r.auprc) && (0.0..=1.0).contains(&r.auroc) && r.d == 10,
            Err(_) => false,
        })
        .count();
    let cells: HashSet<(String, String)> =
        rows.iter().flatten().map(|r| (r.model.clone(), r.regime.clone())).collect();
    outcome(
        header_ok && rows.len() == 9 && well_formed == 9 && cells.len() == 9 && result.failures.is_empty(),
        format!("{} rows, {well_formed} well-formed, {} failed cells", rows.len(), result.failures.len()),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    type Check<'a> = (&'a str, f64, Box<dyn Fn() -> Outcome + 'a>);
    let checks: Vec<Check> = vec![
        ("metric oracles", 10.0, Box::new(metric_oracles)),
        ("scoring oracles", 10.0, Box::new(scoring_oracles)),
        ("gradient checks", 60.0, Box::new(gradient_checks)),
        ("ALS monotonicity", 120.0, Box::new(als_monotonicity)),
        ("constraint soundness", 60.0, Box::new(|| constraint_soundness(dir.path()))),
        ("unconstrained reduction", f64::INFINITY, Box::new(unconstrained_reduction)),
        ("TransE norm invariant", f64::INFINITY, Box::new(|| transe_norm_invariant(dir.path()))),
        ("directional reproduction", 900.0, Box::new(|| directional(dir.path()))),
        ("end-to-end grid", f64::INFINITY, Box::new(|| end_to_end_grid(dir.path()))),
    ];
    let mut failed = 0;
    for (name, budget, check) in &checks {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let passed = result.passed && secs < *budget;
        failed += usize::from(!passed);
        let limit = if budget.is_finite() { format!(" (limit {budget:.0}s)") } else { String::new() };
        println!(
            "{} {name}: {} [{secs:.1}s{limit}]",
            if passed { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

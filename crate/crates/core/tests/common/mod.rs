//! Naive reference implementations and random instance builders shared by
//! the integration tests.

#![allow(dead_code)]

use rand::Rng;
use typed_kge::graph::{Provenance, RelationConstraint};
use typed_kge::linalg::Matrix;
use typed_kge::models::{Activation, Distance, MwnnParams, RescalParams, TransEParams};
use typed_kge::{RelationSemantics, Triple, TripleStore};

/// Average precision by definition: every positive is credited the
/// precision among all examples scoring at least as high as it does.
pub fn ap_oracle(examples: &[(f64, bool)]) -> f64 {
    let positives: Vec<f64> = examples.iter().filter(|e| e.1).map(|e| e.0).collect();
    let mut total = 0.0;
    for &s in &positives {
        let above = examples.iter().filter(|e| e.0 >= s).count();
        let hits = positives.iter().filter(|&&p| p >= s).count();
        total += hits as f64 / above as f64;
    }
    total / positives.len() as f64
}

/// Pairwise AUROC: wins count 2, ties 1, over twice the pair count.
pub fn auroc_oracle(examples: &[(f64, bool)]) -> f64 {
    let (mut twice, mut pairs) = (0u64, 0u64);
    for p in examples.iter().filter(|e| e.1) {
        for n in examples.iter().filter(|e| !e.1) {
            pairs += 1;
            twice += if p.0 > n.0 {
                2
            } else if p.0 == n.0 {
                1
            } else {
                0
            };
        }
    }
    twice as f64 / (2 * pairs) as f64
}

pub fn rescal_oracle(p: &RescalParams, s: usize, k: usize, o: usize) -> f64 {
    let d = p.entities.cols();
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            total += p.entities[(s, i)] * p.relations[k][(i, j)] * p.entities[(o, j)];
        }
    }
    total
}

pub fn transe_oracle(p: &TransEParams, s: usize, k: usize, o: usize) -> f64 {
    let d = p.entities.cols();
    let mut l1 = 0.0;
    let mut sq = 0.0;
    for i in 0..d {
        let x = p.entities[(s, i)] + p.relations[(k, i)] - p.entities[(o, i)];
        l1 += x.abs();
        sq += x * x;
    }
    match p.distance {
        Distance::L1 => -l1,
        Distance::L2 => -sq.sqrt(),
    }
}

/// `W` entries multiplied by `mask[j][i]` (or `scale`) before the tanh layer.
pub fn mwnn_oracle(p: &MwnnParams, s: usize, k: usize, o: usize, mask: Option<&[f64]>, scale: f64) -> f64 {
    let d = p.entities.cols();
    let mut x = Vec::new();
    for i in 0..d {
        x.push(p.entities[(s, i)]);
    }
    for i in 0..d {
        x.push(p.relations[(k, i)]);
    }
    for i in 0..d {
        x.push(p.entities[(o, i)]);
    }
    let mut logit = 0.0;
    for j in 0..p.hidden.rows() {
        let mut z = 0.0;
        for i in 0..3 * d {
            let m = mask.map_or(1.0, |m| m[j * 3 * d + i]);
            z += p.hidden[(j, i)] * m * scale * x[i];
        }
        logit += p.output[j] * z.tanh();
    }
    1.0 / (1.0 + (-logit).exp())
}

/// Unconstrained RESCAL objective over the full adjacency tensor.
pub fn rescal_full_loss(p: &RescalParams, store: &TripleStore, lambda_a: f64, lambda_r: f64) -> f64 {
    let n = store.num_entities();
    let mut total = 0.0;
    for k in 0..store.num_relations() {
        for s in 0..n {
            for o in 0..n {
                let x = if store.contains(&Triple::new(s, k, o)) { 1.0 } else { 0.0 };
                total += (x - rescal_oracle(p, s, k, o)).powi(2);
            }
        }
    }
    let sq = |m: &Matrix| m.as_slice().iter().map(|v| v * v).sum::<f64>();
    total + lambda_a * sq(&p.entities) + lambda_r * p.relations.iter().map(sq).sum::<f64>()
}

pub fn normal(rng: &mut impl Rng, std: f64) -> f64 {
    // Box-Muller keeps the oracles free of the crate's own samplers
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random();
    std * (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, std: f64) -> Matrix {
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| normal(rng, std)).collect())
}

pub fn random_rescal(rng: &mut impl Rng, n: usize, m: usize, d: usize) -> RescalParams {
    RescalParams {
        entities: random_matrix(rng, n, d, 1.0),
        relations: (0..m).map(|_| random_matrix(rng, d, d, 1.0)).collect(),
    }
}

pub fn random_transe(rng: &mut impl Rng, n: usize, m: usize, d: usize, distance: Distance) -> TransEParams {
    TransEParams {
        entities: random_matrix(rng, n, d, 1.0),
        relations: random_matrix(rng, m, d, 1.0),
        distance,
    }
}

pub fn random_mwnn(rng: &mut impl Rng, n: usize, m: usize, d: usize, h: usize, std: f64) -> MwnnParams {
    MwnnParams {
        entities: random_matrix(rng, n, d, std),
        relations: random_matrix(rng, m, d, std),
        hidden: random_matrix(rng, h, 3 * d, std),
        output: (0..h).map(|_| normal(rng, std)).collect(),
        activation: Activation::Tanh,
        dropconnect: rng.random_range(0.0..0.5),
    }
}

pub fn random_triple(rng: &mut impl Rng, n: usize, m: usize) -> Triple {
    Triple::new(rng.random_range(0..n), rng.random_range(0..m), rng.random_range(0..n))
}

/// Schema-style semantics in which every relation admits every entity.
pub fn all_entities(n: usize, m: usize) -> RelationSemantics {
    let all: Vec<usize> = (0..n).collect();
    RelationSemantics::from_constraints(
        n,
        (0..m)
            .map(|_| RelationConstraint {
                domain: all.clone(),
                range: all.clone(),
                provenance: Provenance::Schema,
            })
            .collect(),
    )
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `‖a − b‖ / max(‖a‖, ‖b‖)`
pub fn vector_relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = na.max(nb);
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

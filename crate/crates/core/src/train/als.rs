//! Alternating least squares for RESCAL, with optional per-relation
//! domain/range blocks.
//!
//! Each relation `k` only regresses the block `domain_k × range_k` of its
//! adjacency slice (1 for observed triples, 0 elsewhere). A sweep first
//! solves every `R_k` exactly for the current `A`, then proposes the
//! classic RESCAL update for `A` (each row solved against the other side
//! held fixed) and accepts it, with `R` re-solved, only if the loss does not
//! increase; otherwise the step is halved. The loss is therefore
//! non-increasing from sweep to sweep.

use std::collections::HashMap;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::{EarlyStopping, LogRecord, TrainingLog};
use crate::clock::Stopwatch;
use crate::graph::{RelationSemantics, TripleStore};
use crate::linalg::Matrix;
use crate::models::{init_params, Hyperparams, ModelKind, ModelParams, RescalParams};
use crate::{Error, Result, SplitBundle};

/// Step sizes tried for the `A` update before giving up on the sweep.
const LINE_SEARCH_STEPS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct AlsState {
    pub params: RescalParams,
    pub sweep: usize,
    /// Loss after the last sweep (`NaN` before the first).
    pub loss: f64,
    pub loss_history: Vec<f64>,
    pub probe_auprc: Vec<f64>,
}

impl AlsState {
    pub fn new(params: RescalParams) -> Self {
        Self {
            params,
            sweep: 0,
            loss: f64::NAN,
            loss_history: Vec::new(),
            probe_auprc: Vec::new(),
        }
    }
}

/// Observed entries of one relation inside its domain × range block.
struct Block<'a> {
    domain: &'a [usize],
    range: &'a [usize],
    observed: Vec<(usize, usize)>,
}

struct Problem<'a> {
    blocks: Vec<Block<'a>>,
    num_entities: usize,
    lambda_a: f64,
    lambda_r: f64,
}

impl<'a> Problem<'a> {
    fn new(store: &TripleStore, semantics: &'a RelationSemantics, hp: &Hyperparams) -> Result<Self> {
        if semantics.num_relations() != store.num_relations()
            || semantics.num_entities() != store.num_entities()
        {
            return Err(Error::Config("semantics do not match the triple store".into()));
        }
        let blocks = (0..store.num_relations())
            .map(|k| {
                let rc = semantics.relation(k);
                let observed = store
                    .relation_triples(k)
                    .iter()
                    .filter(|t| rc.admits_subject(t.s) && rc.admits_object(t.o))
                    .map(|t| (t.s, t.o))
                    .collect();
                Block {
                    domain: &rc.domain,
                    range: &rc.range,
                    observed,
                }
            })
            .collect();
        Ok(Self {
            blocks,
            num_entities: store.num_entities(),
            lambda_a: hp.lambda_a,
            lambda_r: hp.lambda_r,
        })
    }

    fn check_shapes(&self, params: &RescalParams) -> Result<()> {
        let d = params.dim();
        if params.entities.rows() != self.num_entities
            || params.relations.len() != self.blocks.len()
            || params.relations.iter().any(|r| r.rows() != d || r.cols() != d)
        {
            return Err(Error::Config("RESCAL parameter shapes do not match the data".into()));
        }
        Ok(())
    }
}

fn row_vector(a: &Matrix, i: usize) -> DVector<f64> {
    DVector::from_column_slice(a.row(i))
}

/// Gram matrices `A_[idx]ᵀ A_[idx]`, sharing the full-index one.
struct Grams {
    per_block: Vec<(DMatrix<f64>, DMatrix<f64>)>,
}

fn gram(a: &Matrix, idx: impl Iterator<Item = usize>) -> DMatrix<f64> {
    let d = a.cols();
    let mut g = DMatrix::zeros(d, d);
    for i in idx {
        let row = a.row(i);
        for p in 0..d {
            let rp = row[p];
            if rp == 0.0 {
                continue;
            }
            for q in 0..d {
                g[(p, q)] += rp * row[q];
            }
        }
    }
    g
}

impl Grams {
    fn new(a: &Matrix, problem: &Problem<'_>) -> Self {
        let full = gram(a, 0..a.rows());
        let pick = |idx: &[usize]| {
            if idx.len() == a.rows() {
                full.clone()
            } else {
                gram(a, idx.iter().copied())
            }
        };
        let per_block = problem
            .blocks
            .iter()
            .map(|b| (pick(b.domain), pick(b.range)))
            .collect();
        Self { per_block }
    }
}

/// Residual term of one relation: `‖X̂_k − A_D R_k A_Rᵀ‖²_F`.
fn block_loss(a: &Matrix, r: &Matrix, block: &Block<'_>, g_dom: &DMatrix<f64>, g_rng: &DMatrix<f64>) -> f64 {
    let rn = r.to_nalgebra();
    let cross: f64 = block
        .observed
        .iter()
        .map(|&(s, o)| row_vector(a, s).dot(&(&rn * row_vector(a, o))))
        .sum();
    // ‖A_D R A_Rᵀ‖² = tr(Rᵀ G_D R G_R)
    let fit = (g_dom * &rn).component_mul(&(&rn * g_rng)).sum();
    block.observed.len() as f64 - 2.0 * cross + fit
}

fn total_loss(params: &RescalParams, problem: &Problem<'_>, grams: &Grams) -> f64 {
    let residual: f64 = problem
        .blocks
        .iter()
        .zip(&params.relations)
        .zip(&grams.per_block)
        .map(|((b, r), (gd, gr))| block_loss(&params.entities, r, b, gd, gr))
        .sum();
    let reg_a = problem.lambda_a * params.entities.frobenius_sq();
    let reg_r: f64 = problem.lambda_r * params.relations.iter().map(Matrix::frobenius_sq).sum::<f64>();
    residual + reg_a + reg_r
}

/// Regularized constrained RESCAL loss. With unconstrained semantics this
/// is the plain RESCAL objective over full adjacency slices.
pub fn rescal_loss(
    params: &RescalParams,
    store: &TripleStore,
    semantics: &RelationSemantics,
    hp: &Hyperparams,
) -> Result<f64> {
    let problem = Problem::new(store, semantics, hp)?;
    problem.check_shapes(params)?;
    let grams = Grams::new(&params.entities, &problem);
    Ok(total_loss(params, &problem, &grams))
}

/// The unregularized residual of relation `k` alone.
pub fn rescal_relation_loss(
    params: &RescalParams,
    store: &TripleStore,
    semantics: &RelationSemantics,
    k: usize,
) -> Result<f64> {
    let hp = Hyperparams::defaults_for(ModelKind::Rescal);
    let problem = Problem::new(store, semantics, &hp)?;
    problem.check_shapes(params)?;
    let b = &problem.blocks[k];
    let a = &params.entities;
    let gd = gram(a, b.domain.iter().copied());
    let gr = gram(a, b.range.iter().copied());
    Ok(block_loss(a, &params.relations[k], b, &gd, &gr))
}

/// Exact minimizer of `‖X̂ − A_D R A_Rᵀ‖² + λ‖R‖²` over `R`.
///
/// Solves `G_D R G_R + λ R = A_Dᵀ X̂ A_R` in the eigenbases of the two Gram
/// matrices. Modes whose coefficient vanishes (possible only for λ = 0)
/// are given the minimum-norm solution.
fn solve_relation(a: &Matrix, block: &Block<'_>, g_dom: &DMatrix<f64>, g_rng: &DMatrix<f64>, lambda: f64) -> Matrix {
    let d = a.cols();
    let mut rhs = DMatrix::<f64>::zeros(d, d);
    for &(s, o) in &block.observed {
        let (rs, ro) = (a.row(s), a.row(o));
        for p in 0..d {
            for q in 0..d {
                rhs[(p, q)] += rs[p] * ro[q];
            }
        }
    }
    let eig_d = SymmetricEigen::new(g_dom.clone());
    let eig_r = SymmetricEigen::new(g_rng.clone());
    let mut core = eig_d.eigenvectors.transpose() * rhs * &eig_r.eigenvectors;
    let max_d = eig_d.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x));
    let max_r = eig_r.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x));
    let floor = 1e-12 * (max_d * max_r).max(f64::MIN_POSITIVE);
    let mut dropped = 0;
    for i in 0..d {
        for j in 0..d {
            let coeff = eig_d.eigenvalues[i].max(0.0) * eig_r.eigenvalues[j].max(0.0) + lambda;
            if coeff <= floor {
                core[(i, j)] = 0.0;
                dropped += 1;
            } else {
                core[(i, j)] /= coeff;
            }
        }
    }
    if dropped > 0 {
        log::debug!("relation solve: {dropped} singular modes set to the minimum-norm solution");
    }
    Matrix::from_nalgebra(&(&eig_d.eigenvectors * core * eig_r.eigenvectors.transpose()))
}

fn solve_relations(params: &mut RescalParams, problem: &Problem<'_>, grams: &Grams) {
    for (k, block) in problem.blocks.iter().enumerate() {
        let (gd, gr) = &grams.per_block[k];
        params.relations[k] = solve_relation(&params.entities, block, gd, gr, problem.lambda_r);
    }
}

fn cholesky_with_ridge(m: DMatrix<f64>, lambda: f64) -> Cholesky<f64, nalgebra::Dyn> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return c;
    }
    let d = m.nrows();
    let mut ridge = lambda.max(1e-8);
    loop {
        log::debug!("entity normal equations singular; adding ridge {ridge:e}");
        if let Some(c) = Cholesky::new(&m + DMatrix::identity(d, d) * ridge) {
            return c;
        }
        ridge *= 10.0;
    }
}

/// Row-wise RESCAL update of `A` with `R` and the opposite-side `A` fixed.
fn propose_entities(params: &RescalParams, problem: &Problem<'_>, grams: &Grams) -> Matrix {
    let a = &params.entities;
    let (n, d) = (a.rows(), a.cols());
    let m = problem.blocks.len();
    // subject-side and object-side curvature per relation
    let mut subj_curv = Vec::with_capacity(m);
    let mut obj_curv = Vec::with_capacity(m);
    let mut membership = vec![vec![0u8; m]; n];
    let mut rhs = vec![DVector::<f64>::zeros(d); n];
    for (k, block) in problem.blocks.iter().enumerate() {
        let r = params.relations[k].to_nalgebra();
        let (gd, gr) = &grams.per_block[k];
        subj_curv.push(&r * gr * r.transpose());
        obj_curv.push(r.transpose() * gd * &r);
        for &i in block.domain {
            membership[i][k] |= 1;
        }
        for &i in block.range {
            membership[i][k] |= 2;
        }
        let rt = r.transpose();
        for &(s, o) in &block.observed {
            rhs[s] += &r * row_vector(a, o);
            rhs[o] += &rt * row_vector(a, s);
        }
    }
    let mut factors: HashMap<&[u8], Cholesky<f64, nalgebra::Dyn>> = HashMap::new();
    let mut out = Matrix::zeros(n, d);
    for i in 0..n {
        let sig = membership[i].as_slice();
        let chol = factors.entry(sig).or_insert_with(|| {
            let mut lhs = DMatrix::identity(d, d) * problem.lambda_a;
            for (k, &bits) in sig.iter().enumerate() {
                if bits & 1 != 0 {
                    lhs += &subj_curv[k];
                }
                if bits & 2 != 0 {
                    lhs += &obj_curv[k];
                }
            }
            cholesky_with_ridge(lhs, problem.lambda_a)
        });
        let row = chol.solve(&rhs[i]);
        out.row_mut(i).copy_from_slice(row.as_slice());
    }
    out
}

/// Solves R for the current A, then takes a safeguarded A step. Returns
/// the loss after the sweep.
fn sweep(params: &mut RescalParams, problem: &Problem<'_>) -> f64 {
    let grams = Grams::new(&params.entities, problem);
    solve_relations(params, problem, &grams);
    let base_loss = total_loss(params, problem, &grams);
    let proposal = propose_entities(params, problem, &grams);

    let mut step = 1.0;
    for _ in 0..LINE_SEARCH_STEPS {
        let mut candidate = params.clone();
        let (old, new) = (params.entities.as_slice(), proposal.as_slice());
        for (c, (&x, &y)) in candidate.entities.as_mut_slice().iter_mut().zip(old.iter().zip(new)) {
            *c = x + step * (y - x);
        }
        let cand_grams = Grams::new(&candidate.entities, problem);
        solve_relations(&mut candidate, problem, &cand_grams);
        let loss = total_loss(&candidate, problem, &cand_grams);
        if loss.is_finite() && loss <= base_loss {
            *params = candidate;
            return loss;
        }
        step *= 0.5;
    }
    log::debug!("ALS entity step rejected at every step size; keeping A");
    base_loss
}

/// One full alternating pass. The loss after the sweep never exceeds the
/// loss before it (up to rounding).
pub fn als_sweep(
    mut state: AlsState,
    store: &TripleStore,
    semantics: &RelationSemantics,
    hp: &Hyperparams,
) -> Result<AlsState> {
    let problem = Problem::new(store, semantics, hp)?;
    problem.check_shapes(&state.params)?;
    let loss = sweep(&mut state.params, &problem);
    state.sweep += 1;
    state.loss = loss;
    state.loss_history.push(loss);
    Ok(state)
}

/// Trains RESCAL on `train` with probe-AUPRC early stopping and returns the
/// parameters with the best probe AUPRC.
pub fn fit_rescal(
    train: &TripleStore,
    semantics: &RelationSemantics,
    split: &SplitBundle,
    hp: &Hyperparams,
) -> Result<(RescalParams, TrainingLog)> {
    hp.validate()?;
    let ModelParams::Rescal(init) =
        init_params(ModelKind::Rescal, train.num_entities(), train.num_relations(), hp)?
    else {
        unreachable!("init_params returns the requested kind")
    };
    fit_rescal_from(init, train, semantics, split, hp)
}

pub(crate) fn fit_rescal_from(
    init: RescalParams,
    train: &TripleStore,
    semantics: &RelationSemantics,
    split: &SplitBundle,
    hp: &Hyperparams,
) -> Result<(RescalParams, TrainingLog)> {
    let problem = Problem::new(train, semantics, hp)?;
    problem.check_shapes(&init)?;
    let clock = Stopwatch::start();
    let mut log = TrainingLog::default();
    let mut stopper = EarlyStopping::new(hp.patience, hp.tolerance);
    let mut best = init.clone();
    let mut current = ModelParams::Rescal(init);
    for epoch in 1..=hp.max_epochs {
        let ModelParams::Rescal(p) = &mut current else { unreachable!() };
        let loss = sweep(p, &problem);
        let auprc = super::probe_auprc(&current, split)?;
        log.records.push(LogRecord {
            epoch,
            loss,
            probe_auprc: auprc,
            wall_time_s: clock.elapsed_secs(),
        });
        if stopper.observe(epoch, auprc) {
            let ModelParams::Rescal(p) = &current else { unreachable!() };
            best = p.clone();
            log.best_epoch = epoch;
        }
        if stopper.should_stop() {
            log.stopped_early = epoch < hp.max_epochs;
            break;
        }
    }
    Ok((best, log))
}

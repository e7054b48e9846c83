//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Everything runs in memory on a synthetic typed graph; results are
//! returned to JavaScript as JSON strings.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use typed_kge::eval::{average_precision, evaluate, pr_curve, roc_auc, roc_curve, EvalSplit, RunMeta};
use typed_kge::graph::{lcwa_semantics, load_graph, resolve_schema_constraints, split_dataset, LoadedGraph};
use typed_kge::io::{constraint_declarations, type_assignment};
use typed_kge::pipeline::Regime;
use typed_kge::synth::{generate, SyntheticCorpus, SyntheticSpec};
use typed_kge::train::fit_model;
use typed_kge::{Hyperparams, ModelKind, RelationSemantics};

struct Graph {
    corpus: SyntheticCorpus,
    loaded: LoadedGraph,
    schema: RelationSemantics,
}

fn build(classes: usize, entities_per_class: usize, relations: usize, triples_per_relation: usize, noise: f64, seed: u64) -> typed_kge::Result<Graph> {
    let spec = SyntheticSpec::new(classes, entities_per_class, relations, triples_per_relation, noise, seed);
    let corpus = generate(&spec)?;
    let loaded = load_graph(corpus.triples.iter().cloned())?;
    let types = type_assignment(&loaded.vocab, &corpus.types);
    let declarations = constraint_declarations(&loaded.vocab, &corpus.constraints);
    let schema = resolve_schema_constraints(&loaded.store, &types, &declarations);
    Ok(Graph { corpus, loaded, schema })
}

/// Trains `model` under every regime on one synthetic graph and reports
/// holdout metrics. Evaluation negatives follow the schema and are shared
/// by the three runs.
pub fn regime_comparison(
    model: &str,
    dim: usize,
    max_epochs: usize,
    classes: usize,
    entities_per_class: usize,
    relations: usize,
    triples_per_relation: usize,
    noise: f64,
    seed: u64,
) -> typed_kge::Result<Value> {
    let model: ModelKind = model.parse()?;
    let g = build(classes, entities_per_class, relations, triples_per_relation, noise, seed)?;
    let store = &g.loaded.store;
    let split = split_dataset(store, &g.schema, seed)?;
    let train = split.train_store(store);
    let hp = Hyperparams {
        dim,
        max_epochs,
        seed,
        ..Hyperparams::defaults_for(model)
    };
    let mut rows = Vec::new();
    for regime in Regime::ALL {
        let semantics = match regime {
            Regime::None => RelationSemantics::unconstrained(store.num_entities(), store.num_relations()),
            Regime::Schema => g.schema.clone(),
            Regime::Lcwa => lcwa_semantics(&train),
        };
        let (params, log) = fit_model(model, &train, &semantics, &split, &hp)?;
        let meta = RunMeta { regime: regime.to_string(), seed };
        let report = evaluate(&params, &split, EvalSplit::Holdout, &meta)?;
        let probe: Vec<f64> = log.records.iter().map(|r| r.probe_auprc).collect();
        rows.push(json!({
            "regime": regime.as_str(),
            "auprc": report.auprc,
            "auroc": report.auroc,
            "epochs": log.records.len(),
            "best_epoch": log.best_epoch,
            "probe_auprc": probe,
        }));
    }
    Ok(json!({
        "model": model.as_str(),
        "dim": dim,
        "triples": store.len(),
        "entities": store.num_entities(),
        "holdout_positives": split.holdout.len(),
        "holdout_negatives": split.holdout_negatives.len(),
        "results": rows,
    }))
}

/// Parses `score,label` lines (label `1`/`0`, `true`/`false`, `pos`/`neg`).
pub fn parse_scores(text: &str) -> Result<Vec<(f64, bool)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || format!("line {}: expected `score,label`, got {line:?}", i + 1);
        let (score, label) = line.split_once([',', '\t', ' ']).ok_or_else(bad)?;
        let score: f64 = score.trim().parse().map_err(|_| bad())?;
        let label = match label.trim().to_ascii_lowercase().as_str() {
            "1" | "true" | "pos" | "+" => true,
            "0" | "false" | "neg" | "-" => false,
            _ => return Err(bad()),
        };
        out.push((score, label));
    }
    Ok(out)
}

/// AUPRC, AUROC and both curves for user-supplied scores.
pub fn metric_curves(text: &str) -> Result<Value, String> {
    let examples = parse_scores(text)?;
    let e = |err: typed_kge::Error| err.to_string();
    Ok(json!({
        "n": examples.len(),
        "auprc": average_precision(&examples).map_err(e)?,
        "auroc": roc_auc(&examples).map_err(e)?,
        "pr": pr_curve(&examples).map_err(e)?,
        "roc": roc_curve(&examples).map_err(e)?,
    }))
}

/// Domain and range sizes per relation under each regime.
pub fn semantics_summary(
    classes: usize,
    entities_per_class: usize,
    relations: usize,
    triples_per_relation: usize,
    noise: f64,
    seed: u64,
) -> typed_kge::Result<Value> {
    let g = build(classes, entities_per_class, relations, triples_per_relation, noise, seed)?;
    let store = &g.loaded.store;
    let split = split_dataset(store, &g.schema, seed)?;
    let lcwa = lcwa_semantics(&split.train_store(store));
    let n = store.num_entities();
    let rows: Vec<Value> = (0..store.num_relations())
        .map(|p| {
            let label = g.loaded.vocab.relation_label(p);
            let decl = g.corpus.constraints.iter().find(|c| c.relation == label);
            json!({
                "relation": label,
                "domain_classes": decl.map(|d| d.domain_classes.clone()),
                "range_classes": decl.map(|d| d.range_classes.clone()),
                "triples": store.relation_triples(p).len(),
                "none": [n, n],
                "schema": [g.schema.domain(p).len(), g.schema.range(p).len()],
                "lcwa": [lcwa.domain(p).len(), lcwa.range(p).len()],
            })
        })
        .collect();
    Ok(json!({ "entities": n, "relations": rows }))
}

fn to_js(result: Result<Value, String>) -> Result<String, JsValue> {
    result.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = compareRegimes)]
#[allow(clippy::too_many_arguments)]
pub fn compare_regimes(
    model: &str,
    dim: usize,
    max_epochs: usize,
    classes: usize,
    entities_per_class: usize,
    relations: usize,
    triples_per_relation: usize,
    noise: f64,
    seed: u32,
) -> Result<String, JsValue> {
    to_js(
        regime_comparison(
            model,
            dim,
            max_epochs,
            classes,
            entities_per_class,
            relations,
            triples_per_relation,
            noise,
            u64::from(seed),
        )
        .map_err(|e| e.to_string()),
    )
}

#[wasm_bindgen(js_name = metricCurves)]
pub fn metric_curves_js(text: &str) -> Result<String, JsValue> {
    to_js(metric_curves(text))
}

#[wasm_bindgen(js_name = semanticsSummary)]
pub fn semantics_summary_js(
    classes: usize,
    entities_per_class: usize,
    relations: usize,
    triples_per_relation: usize,
    noise: f64,
    seed: u32,
) -> Result<String, JsValue> {
    to_js(
        semantics_summary(classes, entities_per_class, relations, triples_per_relation, noise, u64::from(seed))
            .map_err(|e| e.to_string()),
    )
}

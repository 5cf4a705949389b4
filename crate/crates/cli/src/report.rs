//! JSON and CSV rendering. Motif rows carry `(class_id, canonical_code)`;
//! the canonical code is the permutation-minimal adjacency bitmask under
//! the bit order listed by `motifs tables`.

use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use serde_json::json;

use motif_census::estimator::SampledCensus;
use motif_census::{arrcode, koef_table, ExactCensus, Family, FrameKind, FrameTotals, Graph};

use crate::RunConfig;

#[derive(Serialize)]
struct ExactRow {
    class_id: usize,
    canonical_code: u16,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'static str>,
    count: u64,
}

fn exact_rows(census: &ExactCensus) -> Vec<ExactRow> {
    let table = arrcode(census.size, census.directed).expect("census size is valid");
    table
        .connected_classes()
        .map(|c| ExactRow {
            class_id: c.class_id,
            canonical_code: c.canonical_code,
            name: c.name,
            count: census.count(c.class_id),
        })
        .collect()
}

fn to_json(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn exact_json(config: &RunConfig, g: &Graph, census: &ExactCensus) -> Result<String> {
    to_json(&json!({
        "config": config,
        "graph": g.load_report(),
        "size": census.size,
        "directed": census.directed,
        "total": census.total(),
        "motifs": exact_rows(census),
        "elapsed_secs": census.elapsed.as_secs_f64(),
    }))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn name(n: Option<&str>) -> &str {
    n.unwrap_or("")
}

pub fn exact_csv(census: &ExactCensus) -> String {
    let mut s = String::from("class_id,canonical_code,name,count\n");
    for r in exact_rows(census) {
        let _ = writeln!(s, "{},{},{},{}", r.class_id, r.canonical_code, name(r.name), r.count);
    }
    s
}

pub fn sample_json(config: &RunConfig, g: &Graph, census: &SampledCensus) -> Result<String> {
    to_json(&json!({
        "config": config,
        "graph": g.load_report(),
        "census": census,
    }))
}

/// One row per connected class with the combined estimate followed by each
/// experiment's koef, detections, experiments, partial estimate, and
/// partial variance.
pub fn sample_csv(census: &SampledCensus) -> String {
    let kinds = FrameKind::for_size(census.size);
    let mut s = String::from("class_id,canonical_code,name,n_hat,variance,cv,lambda");
    for k in kinds {
        for col in ["koef", "detections", "experiments", "n_hat", "variance"] {
            let _ = write!(s, ",{k}_{col}");
        }
    }
    s.push('\n');
    for m in &census.motifs {
        let _ = write!(
            s,
            "{},{},{},{},{},{},{}",
            m.class_id,
            m.canonical_code,
            name(m.name),
            m.n_hat,
            m.variance,
            opt(m.cv),
            opt(m.lambda)
        );
        for &k in kinds {
            match m.tally(k) {
                Some(t) => {
                    let _ = write!(s, ",{},{},{},{},{}", t.koef, t.detections, t.experiments, t.n_hat, t.variance);
                }
                None => s.push_str(",0,,,,"),
            }
        }
        s.push('\n');
    }
    s
}

pub fn frames_json(config: &RunConfig, g: &Graph, totals: &FrameTotals) -> Result<String> {
    to_json(&json!({
        "config": config,
        "graph": g.load_report(),
        "totals": totals,
    }))
}

pub fn frames_csv(totals: &FrameTotals) -> String {
    let mut s = String::from("frame,total\n");
    for k in FrameKind::ALL {
        let _ = writeln!(s, "{k},{}", totals.get(k));
    }
    s
}

pub fn tables_json() -> Result<String> {
    let families: Vec<_> = Family::all()
        .iter()
        .map(|f| {
            let table = arrcode(f.size, f.directed).expect("valid family");
            let koef = koef_table(f.size, f.directed).expect("valid family");
            let classes: Vec<_> = table
                .classes()
                .iter()
                .map(|c| {
                    let mut v = serde_json::to_value(c).expect("class serializes");
                    let k: serde_json::Map<_, _> = FrameKind::for_size(f.size)
                        .iter()
                        .map(|&kind| (kind.name().to_string(), json!(koef.get(c.class_id, kind))))
                        .collect();
                    v["koef"] = k.into();
                    v
                })
                .collect();
            let (total, connected) = table.class_counts();
            json!({
                "family": f,
                "bit_order": f.pairs(),
                "length": table.len(),
                "class_count": total,
                "connected_class_count": connected,
                "entries": table.entries(),
                "classes": classes,
            })
        })
        .collect();
    to_json(&json!({
        "bit_order_note": "bit b of a code is the b-th pair of bit_order; bit 0 is least significant",
        "families": families,
    }))
}

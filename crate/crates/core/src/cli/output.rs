use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use super::config::{BoardSpec, Route};
use super::{AsymptKind, Format};
use crate::asymptotics::{
    characteristic_expansion, mean_coefficient, noncrossing_mean_report,
    poisson_convergence_report, rational_to_f64, variance_coefficient, ReportKind,
};
use crate::diagram::Diagram;
use crate::memory::{
    connected_k_subgraphs, exhaustive_distribution, mean_polyominoes, sample_placements,
};
use crate::table::{CountTable, TableKind};
use crate::{Error, ExactInteger, Result};

/// `n,value,count` with one line per nonzero entry of rows `from..=to`.
pub fn table_csv(table: &CountTable, from: usize, to: usize) -> String {
    let mut out = String::from("n,value,count\n");
    for n in from..=to {
        for (v, c) in table.row(n).iter().enumerate() {
            if !c.is_zero() {
                out.push_str(&format!("{n},{v},{c}\n"));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct TableRowJson {
    n: usize,
    counts: Vec<String>,
}

#[derive(Serialize)]
struct TableJson {
    k: usize,
    stat: &'static str,
    route: &'static str,
    rows: Vec<TableRowJson>,
}

/// `{k, stat, route, rows: [{n, counts}]}` with `counts[v]` a decimal string
/// and trailing zeros dropped.
pub fn table_json(table: &CountTable, route: Route, from: usize, to: usize) -> Result<String> {
    let doc = TableJson {
        k: table.k,
        stat: table.kind.as_str(),
        route: route.as_str(),
        rows: (from..=to)
            .map(|n| TableRowJson {
                n,
                counts: table
                    .trimmed_row(n)
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string(&doc)? + "\n")
}

/// Rows `from..=to` read left to right, each up to its last nonzero entry.
/// Non-crossing rows start at one short chord.
pub fn linearize(table: &CountTable, from: usize, to: usize) -> Vec<ExactInteger> {
    let skip = usize::from(table.kind == TableKind::NoncrossingShort);
    let mut out = Vec::new();
    for n in from..=to {
        out.extend(table.trimmed_row(n).iter().skip(skip).cloned());
    }
    out
}

pub fn table_bfile(table: &CountTable, from: usize, to: usize, offset: i64) -> String {
    bfile(&linearize(table, from, to), offset)
}

/// `index value` lines.
pub fn bfile(values: &[BigInt], offset: i64) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{} {}\n", offset + i as i64, v));
    }
    out
}

pub(super) fn memory_report(
    spec: &BoardSpec,
    k: usize,
    n: Option<usize>,
    samples: u64,
    seed: u64,
    exhaustive: bool,
    budget: u64,
) -> Result<String> {
    let board = spec.build()?;
    let vertices = board.vertex_count();
    let n = match n {
        Some(n) => n,
        None if vertices % k == 0 => vertices / k,
        None => {
            return Err(Error::SizeMismatch {
                vertices,
                expected: k * (vertices / k + 1),
            })
        }
    };
    if exhaustive {
        return Ok(exhaustive_distribution(&board, k, n, budget)?.to_csv());
    }
    let mean = mean_polyominoes(&board, k, n)?;
    let sample = if samples > 0 {
        let s = sample_placements(&board, k, n, samples, seed)?;
        json!({
            "samples": s.samples,
            "seed": s.seed,
            "rng": s.rng,
            "mean": s.mean,
            "standard_error": s.standard_error,
            "histogram": s.histogram.iter().map(|(p, c)| (p.to_string(), *c)).collect::<std::collections::BTreeMap<_, _>>(),
        })
    } else {
        serde_json::Value::Null
    };
    let doc = json!({
        "vertices": vertices,
        "edges": board.edge_count(),
        "k": k,
        "n": n,
        "connected_subgraphs": connected_k_subgraphs(&board, k).to_string(),
        "mean_polyominoes": mean.to_string(),
        "mean_polyominoes_f64": rational_to_f64(&mean),
        "sample": sample,
    });
    Ok(serde_json::to_string(&doc)? + "\n")
}

pub(super) fn asympt_report(
    k: usize,
    kind: AsymptKind,
    n: &[usize],
    format: Format,
) -> Result<String> {
    let report = match kind {
        AsymptKind::Short => poisson_convergence_report(k, ReportKind::ShortChords, n)?,
        AsymptKind::Components => poisson_convergence_report(k, ReportKind::Components, n)?,
        AsymptKind::NcMean => noncrossing_mean_report(k, n)?,
        AsymptKind::Characteristic => {
            let e = characteristic_expansion(k)?;
            let (mu, var) = (mean_coefficient(k), variance_coefficient(k));
            let (mu_e, var_e) = (e.mean_coefficient(), e.variance_coefficient());
            let agree = mu == mu_e && var == var_e;
            return Ok(match format {
                Format::Csv => format!(
                    "source,mean_coefficient,variance_coefficient\nclosed-form,{mu},{var}\ncharacteristic,{mu_e},{var_e}\n"
                ),
                _ => {
                    let doc = json!({
                        "k": k,
                        "closed_form": {"mean": mu.to_string(), "variance": var.to_string()},
                        "characteristic": {
                            "tau": e.tau.iter().map(ToString::to_string).collect::<Vec<_>>(),
                            "rho": e.rho.iter().map(ToString::to_string).collect::<Vec<_>>(),
                            "mean": mu_e.to_string(),
                            "variance": var_e.to_string(),
                        },
                        "agree": agree,
                    });
                    serde_json::to_string(&doc)? + "\n"
                }
            });
        }
    };
    Ok(match format {
        Format::Csv => report.to_csv(),
        _ => serde_json::to_string(&report.to_json())? + "\n",
    })
}

pub(super) fn stats_report(k: usize, word: &str) -> Result<String> {
    let d = Diagram::parse(k, word)?;
    let s = d.stats();
    let path = d.encode_lattice_path().ok().map(|p| p.to_string());
    let doc = json!({
        "k": k,
        "n": d.n(),
        "word": d.to_string(),
        "short_chords": s.short_chords,
        "components": s.components,
        "noncrossing": s.noncrossing,
        "crossing_pairs": s.crossing_pairs,
        "lattice_path": path,
    });
    Ok(serde_json::to_string(&doc)? + "\n")
}

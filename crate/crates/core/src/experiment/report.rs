//! CSV output shared by `solve` and `factor-screen`.
//!
//! Every row has the same columns. `kind` is `run` or `summary`; fields that
//! do not apply to a row kind are empty. Reliabilities and fitness values use
//! 10 decimals. The timing columns come last and are the only ones that vary
//! between runs with the same seed.

use std::io::Write;

use super::Batch;
use crate::error::Result;
use crate::optim::RunResult;

pub const CSV_HEADER: [&str; 18] = [
    "kind",
    "algorithm",
    "combination",
    "factors",
    "run",
    "seed",
    "best_fitness",
    "counts",
    "rels",
    "evaluations",
    "vw_violations",
    "runs",
    "f_avg",
    "f_max",
    "f_min",
    "f_stdev",
    "wall_time",
    "t_avg",
];

fn dec(v: f64) -> String {
    format!("{v:.10}")
}

fn run_row(batch: &Batch, combination: &str, k: usize, r: &RunResult) -> Vec<String> {
    let counts: Vec<String> = r.best.counts.iter().map(u32::to_string).collect();
    let rels: Vec<String> = r.best.rels.iter().map(|&v| dec(v)).collect();
    vec![
        "run".into(),
        batch.algorithm.to_string(),
        combination.into(),
        batch.factors.map(|f| f.to_string()).unwrap_or_default(),
        k.to_string(),
        r.seed.to_string(),
        dec(r.best_fitness),
        counts.join(" "),
        rels.join(" "),
        r.diagnostics.evaluations.to_string(),
        r.diagnostics.volume_weight_violations.to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        format!("{:.6}", r.wall_time),
        String::new(),
    ]
}

fn summary_row(batch: &Batch, combination: &str) -> Vec<String> {
    let s = &batch.summary;
    let mut row = vec![String::new(); CSV_HEADER.len()];
    row[0] = "summary".into();
    row[1] = batch.algorithm.to_string();
    row[2] = combination.into();
    row[3] = batch.factors.map(|f| f.to_string()).unwrap_or_default();
    row[5] = batch
        .runs
        .first()
        .map(|r| r.seed.to_string())
        .unwrap_or_default();
    row[11] = s.runs.to_string();
    row[12] = dec(s.f_avg);
    row[13] = dec(s.f_max);
    row[14] = dec(s.f_min);
    row[15] = dec(s.f_stdev);
    row[17] = format!("{:.6}", s.t_avg);
    row
}

/// Per batch: one row per run in run order, then its summary row.
pub fn write_solve_csv<W: Write>(out: W, batches: &[Batch]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for b in batches {
        for (k, r) in b.runs.iter().enumerate() {
            w.write_record(run_row(b, "", k, r))?;
        }
        w.write_record(summary_row(b, ""))?;
    }
    w.flush()?;
    Ok(())
}

/// One summary row per design row, numbered from 1. Run rows follow each
/// summary when `with_runs` is set.
pub fn write_screen_csv<W: Write>(out: W, batches: &[Batch], with_runs: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (i, b) in batches.iter().enumerate() {
        let comb = (i + 1).to_string();
        w.write_record(summary_row(b, &comb))?;
        if with_runs {
            for (k, r) in b.runs.iter().enumerate() {
                w.write_record(run_row(b, &comb, k, r))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

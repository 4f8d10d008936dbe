//! `sbc bench`: one CSV row per (file, configuration) cell.
//!
//! Columns, in order: file, pipeline, k, c, epsilon, model, n, sigma,
//! h0..h4, size_bits, passes, sort_passes, peak_mem_bits, wall_time_ms.
//! `k` is the order stored in the container; `c` and `epsilon` are empty
//! except for block-kth.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use sbc_core::entropy::report;
use sbc_core::pipelines::{compress, PipelineId};
use sbc_core::ModelKind;

use crate::commands::Settings;
use crate::error::CliError;
use crate::io::{json_line, write_output};
use crate::{BenchArgs, Cli, KChoice};

pub const HEADER: [&str; 18] = [
    "file",
    "pipeline",
    "k",
    "c",
    "epsilon",
    "model",
    "n",
    "sigma",
    "h0",
    "h1",
    "h2",
    "h3",
    "h4",
    "size_bits",
    "passes",
    "sort_passes",
    "peak_mem_bits",
    "wall_time_ms",
];

/// Every compatible configuration of the matrix, in row order.
fn matrix(args: &BenchArgs) -> Vec<Settings> {
    let pipelines = if args.pipeline.is_empty() {
        PipelineId::ALL.to_vec()
    } else {
        args.pipeline.clone()
    };
    let mut cells = Vec::new();
    for &pipeline in &pipelines {
        let ks: Vec<Option<KChoice>> = match pipeline {
            PipelineId::StDcAc | PipelineId::KthOrder if !args.k.is_empty() => {
                args.k.iter().copied().map(Some).collect()
            }
            _ => vec![None],
        };
        let plans: Vec<(f64, f64)> = if pipeline == PipelineId::BlockKth {
            args.c
                .iter()
                .flat_map(|&c| args.epsilon.iter().map(move |&e| (c, e)))
                .collect()
        } else {
            vec![(f64::NAN, f64::NAN)]
        };
        let models: Vec<Option<ModelKind>> = if args.model.is_empty() {
            vec![None]
        } else {
            args.model.iter().copied().map(Some).collect()
        };
        for &k in &ks {
            for &(c, epsilon) in &plans {
                for &model in &models {
                    let cell = Settings {
                        pipeline,
                        k,
                        c,
                        epsilon,
                        memory_budget_bits: args.memory_budget_bits,
                        model,
                        sigma: None,
                        unknown_n: false,
                        trace: false,
                    };
                    if pipeline == PipelineId::StDcAc && !cell.model().can_sort() {
                        continue;
                    }
                    if pipeline == PipelineId::KthOrder && k == Some(KChoice::Auto) {
                        continue;
                    }
                    cells.push(cell);
                }
            }
        }
    }
    cells
}

fn corpus_files(dir: &PathBuf) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(format!("reading {}", dir.display()), e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| CliError::io(format!("reading {}", dir.display()), e))?;
        if !entry.file_type().map(|t| t.is_dir()).unwrap_or(false) {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

pub fn run(cli: &Cli, args: &BenchArgs) -> Result<(), CliError> {
    let cells = matrix(args);
    for cell in &cells {
        cell.options()?;
    }
    let files = corpus_files(&args.corpus)?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Failed(format!("writing CSV: {e}"));
    csv.write_record(HEADER).map_err(csv_err)?;
    let mut skipped = 0usize;
    let mut failed = 0usize;
    let mut rows = 0usize;
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let data = match std::fs::read(path) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("sbc: warning: skipping {}: {e}", path.display());
                skipped += 1;
                continue;
            }
        };
        let entropy = report(&data, 4);
        for cell in &cells {
            let opts = cell.options()?;
            let start = Instant::now();
            let c = match compress(&data, &opts) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("sbc: warning: {name} with {}: {e}", cell.pipeline);
                    failed += 1;
                    continue;
                }
            };
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let mut record = vec![
                name.clone(),
                cell.pipeline.name().to_string(),
                c.header.k.to_string(),
                fmt_f64(cell.c),
                fmt_f64(cell.epsilon),
                cell.model().name().to_string(),
                c.header.n.to_string(),
                c.header.sigma.to_string(),
            ];
            record.extend(entropy.h.iter().map(|h| format!("{h:.6}")));
            record.extend([
                (8 * c.bytes.len() as u64).to_string(),
                c.ledger.passes.to_string(),
                c.ledger.sort_passes.to_string(),
                c.ledger.peak_memory_bits.to_string(),
                format!("{wall:.3}"),
            ]);
            csv.write_record(&record).map_err(csv_err)?;
            rows += 1;
        }
    }
    let bytes = csv
        .into_inner()
        .map_err(|e| CliError::Failed(e.to_string()))?;
    write_output(args.output.as_deref(), &bytes)?;
    if cli.json {
        json_line(&json!({
            "command": "bench",
            "files": files.len(),
            "cells": cells.len(),
            "rows": rows,
            "skipped_files": skipped,
            "failed_cells": failed,
        }));
    }
    if skipped + failed > 0 {
        return Err(CliError::Failed(format!(
            "{skipped} unreadable file(s), {failed} failed cell(s)"
        )));
    }
    Ok(())
}

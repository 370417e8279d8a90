//! Deterministic CSV emission for run reports and contour tables.
//!
//! Every file starts with comment lines carrying the tool version, master
//! seed, and the fully resolved configuration as one JSON object. Floats
//! are printed with 17 significant digits; rows are sorted by key.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use skarc_core::protocol::{CellReport, ContourRow, DmRow, RunReport};
use skarc_core::su2::trace_distance;

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn preamble(version: &str, seed: u64, config_json: &str) -> String {
    format!("# skarc {version}\n# seed: {seed}\n# config: {config_json}\n")
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Emit the CSV tables for a report into `dir`, returning the files written.
///
/// `sweep.csv` always has one row per cell. The per-sequence tables
/// (`vectors.csv`, `projection.csv`) and `dm_curve.csv` have no cell key
/// column, so they are only written for single-cell reports.
pub fn write_tables(report: &RunReport, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let config_json = serde_json::to_string(&report.config)?;
    let head = preamble(&report.version, report.config.seed, &config_json);
    let mut manifest = Vec::new();

    let mut cells: Vec<&CellReport> = report.cells.iter().collect();
    cells.sort_by(|a, b| a.bits.cmp(&b.bits).then(a.delta.total_cmp(&b.delta)));

    let mut sweep = head.clone();
    sweep.push_str("bits,delta,shots,d_mean_vector,d_fewest_h,errbar\n");
    for cell in &cells {
        let _ = writeln!(
            sweep,
            "{},{},{},{},{},{}",
            cell.bits,
            fmt_f64(cell.delta),
            cell.shots,
            fmt_f64(cell.d_mean),
            fmt_f64(cell.d_fewest_h),
            fmt_f64(cell.errbar)
        );
    }
    let sweep_path = dir.join("sweep.csv");
    write_file(&sweep_path, &sweep)?;
    manifest.push(sweep_path);

    if report.cells.len() == 1 {
        let cell = &report.cells[0];
        let vectors_path = dir.join("vectors.csv");
        write_file(&vectors_path, &vectors_csv(cell, &head))?;
        manifest.push(vectors_path);

        let dm_path = dir.join("dm_curve.csv");
        write_file(&dm_path, &dm_csv(&cell.dm, &head))?;
        manifest.push(dm_path);

        let projection_path = dir.join("projection.csv");
        write_file(&projection_path, &projection_csv(cell, &head))?;
        manifest.push(projection_path);
    }
    Ok(manifest)
}

fn vectors_csv(cell: &CellReport, head: &str) -> String {
    let mut out = head.to_string();
    out.push_str("sequence_id,word,h_count,t_count,x,y,z,trace_distance\n");
    for (i, estimate) in cell.estimates.iter().enumerate() {
        let v = estimate.vector;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            i,
            cell.words[i],
            cell.counts[i].h_count,
            cell.counts[i].t_count,
            fmt_f64(v.x),
            fmt_f64(v.y),
            fmt_f64(v.z),
            fmt_f64(trace_distance(&v, &cell.target))
        );
    }
    out
}

pub fn dm_csv(rows: &[DmRow], head: &str) -> String {
    let mut out = head.to_string();
    out.push_str("m,d_mean,d_std,draws\n");
    let mut sorted: Vec<&DmRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.m);
    for row in sorted {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.m,
            fmt_f64(row.d_mean),
            fmt_f64(row.d_std),
            row.draws
        );
    }
    out
}

fn projection_csv(cell: &CellReport, head: &str) -> String {
    let mut out = head.to_string();
    out.push_str("sequence_id,u,v\n");
    for (i, p) in cell.projection.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i, fmt_f64(p[0]), fmt_f64(p[1]));
    }
    out
}

/// Write a D(m) table as a standalone CSV with the report's provenance.
pub fn write_dm_csv(rows: &[DmRow], report: &RunReport, path: &Path) -> anyhow::Result<()> {
    let config_json = serde_json::to_string(&report.config)?;
    let head = preamble(&report.version, report.config.seed, &config_json);
    write_file(path, &dm_csv(rows, &head))
}

/// Write a projection table as a standalone CSV.
pub fn write_projection_csv(
    cell: &CellReport,
    report: &RunReport,
    path: &Path,
) -> anyhow::Result<()> {
    let config_json = serde_json::to_string(&report.config)?;
    let head = preamble(&report.version, report.config.seed, &config_json);
    write_file(path, &projection_csv(cell, &head))
}

/// Write contour rows sorted by (bits, shots), with the reference N = 4^b.
pub fn write_contour_csv(
    rows: &[ContourRow],
    config_json: &str,
    version: &str,
    seed: u64,
    path: &Path,
) -> anyhow::Result<()> {
    let mut out = preamble(version, seed, config_json);
    out.push_str("bits,shots,d_mean,d_std,n_ref\n");
    let mut sorted: Vec<&ContourRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.bits, r.shots));
    for row in sorted {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.bits,
            row.shots,
            fmt_f64(row.d_mean),
            fmt_f64(row.d_std),
            fmt_f64(row.n_ref)
        );
    }
    write_file(path, &out)
}

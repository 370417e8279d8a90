//! Subcommand implementations: one capability each, composed via files.

use std::path::Path;

use anyhow::Context;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use skarc_core::ensemble::{generate_ensemble, verify_ensemble, Ensemble, EnsembleFile};
use skarc_core::protocol::{
    precision_sweep, run_cell, sampling_contour, subensemble_distance_curve, RunReport, SkarcConfig,
};
use skarc_core::sim::{NoiseModel, Shots};
use skarc_core::synth::{synthesize_rz, SynthOptions};

use crate::tables;
use crate::Command;

pub enum CliError {
    /// Malformed arguments; exit code 2.
    Usage(String),
    /// Domain or I/O failure; exit code 1.
    Failure(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Failure(e.into())
    }
}

type CliResult = Result<(), CliError>;

pub fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Synth {
            theta,
            bits,
            max_h,
            max_depth,
            seed,
        } => synth(theta, bits, SynthOptions { max_h, max_depth }, seed),
        Command::Ensemble {
            theta,
            bits,
            count,
            seed,
            max_h,
            max_depth,
            out,
        } => ensemble(
            theta,
            bits,
            count,
            seed,
            SynthOptions { max_h, max_depth },
            &out,
        ),
        Command::Run {
            ensemble,
            delta,
            shots,
            seed,
            m_range,
            q_cap,
            out,
            tables_dir,
        } => run(
            &ensemble,
            delta,
            shots,
            seed,
            m_range.as_deref(),
            q_cap,
            &out,
            tables_dir.as_deref(),
        ),
        Command::Curve {
            report,
            cell,
            m_range,
            q_cap,
            seed,
            out,
        } => curve(&report, cell, &m_range, q_cap, seed, &out),
        Command::Sweep {
            config,
            theta,
            b_list,
            delta_list,
            count,
            shots,
            seed,
            m_range,
            q_cap,
            max_h,
            max_depth,
            out_dir,
        } => {
            let file = load_file_config(config.as_deref())?;
            let defaults = SkarcConfig::default();
            let resolved = SkarcConfig {
                theta: theta.or(file.theta).unwrap_or(defaults.theta),
                b_list: resolve_list(b_list.as_deref(), file.b_list, "bits", None)?,
                delta_list: resolve_list(
                    delta_list.as_deref(),
                    file.delta_list,
                    "delta",
                    Some(vec![0.0]),
                )?,
                r: count.or(file.count).unwrap_or(defaults.r),
                shots: shots.or(file.shots).unwrap_or(defaults.shots),
                m_range: match m_range.as_deref() {
                    Some(text) => parse_m_range(text)?,
                    None => file.m_range.unwrap_or_default(),
                },
                q_cap: q_cap.or(file.q_cap).unwrap_or(defaults.q_cap),
                seed: seed.or(file.seed).unwrap_or(defaults.seed),
                synth: SynthOptions {
                    max_h: max_h.or(file.max_h).unwrap_or(defaults.synth.max_h),
                    max_depth: max_depth
                        .or(file.max_depth)
                        .unwrap_or(defaults.synth.max_depth),
                },
                contour_seeds: file.contour_seeds.unwrap_or(defaults.contour_seeds),
            };
            sweep(resolved, &out_dir)
        }
        Command::Contour {
            config,
            theta,
            b_list,
            shots_list,
            randomized,
            count,
            seeds,
            seed,
            max_h,
            max_depth,
            out,
        } => {
            let file = load_file_config(config.as_deref())?;
            let defaults = SkarcConfig::default();
            let shots_grid: Vec<u64> =
                resolve_list(shots_list.as_deref(), file.shots_list, "shots", None)?;
            let resolved = SkarcConfig {
                theta: theta.or(file.theta).unwrap_or(defaults.theta),
                b_list: resolve_list(b_list.as_deref(), file.b_list, "bits", None)?,
                r: count.or(file.count).unwrap_or(defaults.r),
                seed: seed.or(file.seed).unwrap_or(defaults.seed),
                synth: SynthOptions {
                    max_h: max_h.or(file.max_h).unwrap_or(defaults.synth.max_h),
                    max_depth: max_depth
                        .or(file.max_depth)
                        .unwrap_or(defaults.synth.max_depth),
                },
                contour_seeds: seeds
                    .or(file.contour_seeds)
                    .unwrap_or(defaults.contour_seeds),
                ..SkarcConfig::default()
            };
            contour(resolved, &shots_grid, randomized, &out)
        }
        Command::Project { report, cell, out } => project(&report, cell, &out),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Optional parameters loadable from a `--config` JSON file. Unknown keys
/// are rejected, mirroring the strict flag handling.
#[derive(Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    theta: Option<f64>,
    b_list: Option<Vec<u32>>,
    delta_list: Option<Vec<f64>>,
    count: Option<usize>,
    shots: Option<Shots>,
    m_range: Option<Vec<usize>>,
    q_cap: Option<u64>,
    seed: Option<u64>,
    max_h: Option<u8>,
    max_depth: Option<u8>,
    contour_seeds: Option<u32>,
    shots_list: Option<Vec<u64>>,
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid config file {}: {e}", path.display())))
}

/// Flag (as text) beats the config file; otherwise fall back to a default,
/// if one exists.
fn resolve_list<T: std::str::FromStr>(
    flag: Option<&str>,
    file: Option<Vec<T>>,
    what: &str,
    default: Option<Vec<T>>,
) -> Result<Vec<T>, CliError> {
    if let Some(text) = flag {
        return parse_list(text, what);
    }
    file.or(default)
        .ok_or_else(|| usage(format!("missing {what} list: pass a flag or a config file")))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    let items: Result<Vec<T>, _> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(usage(format!("could not parse {what} list '{text}'"))),
    }
}

/// "LO..HI" (inclusive) or a comma-separated list of sizes.
fn parse_m_range(text: &str) -> Result<Vec<usize>, CliError> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad m-range start in '{text}'")))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad m-range end in '{text}'")))?;
        if lo < 1 || hi < lo {
            return Err(usage(format!("empty or invalid m-range '{text}'")));
        }
        Ok((lo..=hi).collect())
    } else {
        parse_list::<usize>(text, "m-range")
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
    text.push('\n');
    std::fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(CliError::from)
}

fn load_ensemble(path: &Path) -> Result<Ensemble, CliError> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: EnsembleFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let ensemble = file.into_ensemble().map_err(anyhow::Error::from)?;
    let violations = verify_ensemble(&ensemble);
    if !violations.is_empty() {
        return Err(CliError::Failure(anyhow::anyhow!(
            "ensemble file {} fails verification: {} violation(s), first: {:?}",
            path.display(),
            violations.len(),
            violations[0]
        )));
    }
    Ok(ensemble)
}

fn load_report(path: &Path) -> Result<RunReport, CliError> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let report: RunReport =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(report)
}

#[derive(Serialize)]
struct SynthOutput {
    word: String,
    distance: f64,
    depth: u8,
    total: usize,
    t_count: usize,
    h_count: usize,
}

fn synth(theta: f64, bits: u32, opts: SynthOptions, seed: Option<u64>) -> CliResult {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let result = synthesize_rz(theta, bits, &opts, rng.as_mut()).map_err(anyhow::Error::from)?;
    let out = SynthOutput {
        word: result.word.to_string(),
        distance: result.achieved_distance,
        depth: result.depth_used,
        total: result.counts.total,
        t_count: result.counts.t_count,
        h_count: result.counts.h_count,
    };
    println!(
        "{}",
        serde_json::to_string(&out).map_err(anyhow::Error::from)?
    );
    Ok(())
}

fn ensemble(
    theta: f64,
    bits: u32,
    count: usize,
    seed: u64,
    opts: SynthOptions,
    out: &Path,
) -> CliResult {
    let e = generate_ensemble(theta, bits, count, seed, &opts).map_err(anyhow::Error::from)?;
    write_json(&EnsembleFile::from(&e), out)
}

#[allow(clippy::too_many_arguments)]
fn run(
    ensemble_path: &Path,
    delta: f64,
    shots: Shots,
    seed: u64,
    m_range: Option<&str>,
    q_cap: u64,
    out: &Path,
    tables_dir: Option<&Path>,
) -> CliResult {
    let ensemble = load_ensemble(ensemble_path)?;
    let noise = NoiseModel::new(delta).map_err(anyhow::Error::from)?;
    let m_range = match m_range {
        Some(text) => parse_m_range(text)?,
        None => Vec::new(),
    };
    let cell =
        run_cell(&ensemble, &noise, shots, seed, &m_range, q_cap).map_err(anyhow::Error::from)?;

    let config = SkarcConfig {
        theta: ensemble.theta,
        b_list: vec![ensemble.bits],
        delta_list: vec![delta],
        r: ensemble.len(),
        shots,
        m_range,
        q_cap,
        seed,
        synth: ensemble.opts,
        ..SkarcConfig::default()
    };
    let report = RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        cells: vec![cell],
    };
    write_json(&report, out)?;
    if let Some(dir) = tables_dir {
        tables::write_tables(&report, dir)?;
    }
    Ok(())
}

fn curve(
    report_path: &Path,
    cell_index: usize,
    m_range: &str,
    q_cap: u64,
    seed: u64,
    out: &Path,
) -> CliResult {
    let report = load_report(report_path)?;
    let cell = report
        .cells
        .get(cell_index)
        .ok_or_else(|| usage(format!("report has no cell {cell_index}")))?;
    let m_range = parse_m_range(m_range)?;
    let rows = subensemble_distance_curve(&cell.estimates, &cell.target, &m_range, q_cap, seed)
        .map_err(anyhow::Error::from)?;
    tables::write_dm_csv(&rows, &report, out)?;
    Ok(())
}

fn log_resolved(config: &SkarcConfig) -> Result<(), CliError> {
    let json = serde_json::to_string(config).map_err(anyhow::Error::from)?;
    eprintln!("skarc: resolved config: {json}");
    Ok(())
}

fn sweep(config: SkarcConfig, out_dir: &Path) -> CliResult {
    log_resolved(&config)?;
    let report = precision_sweep(&config).map_err(anyhow::Error::from)?;
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write_json(&report, &out_dir.join("report.json"))?;
    tables::write_tables(&report, out_dir)?;
    Ok(())
}

fn contour(config: SkarcConfig, shots_grid: &[u64], randomized: bool, out: &Path) -> CliResult {
    log_resolved(&config)?;
    let rows = sampling_contour(&config.b_list.clone(), shots_grid, randomized, &config)
        .map_err(anyhow::Error::from)?;
    let config_json = serde_json::to_string(&config).map_err(anyhow::Error::from)?;
    tables::write_contour_csv(
        &rows,
        &config_json,
        env!("CARGO_PKG_VERSION"),
        config.seed,
        out,
    )?;
    Ok(())
}

fn project(report_path: &Path, cell_index: usize, out: &Path) -> CliResult {
    let report = load_report(report_path)?;
    let cell = report
        .cells
        .get(cell_index)
        .ok_or_else(|| usage(format!("report has no cell {cell_index}")))?;
    tables::write_projection_csv(cell, &report, out)?;
    Ok(())
}

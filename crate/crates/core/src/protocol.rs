//! The SKARC randomization protocol and its derived statistics: ensemble
//! means, fewest-H baselines, sub-ensemble D(m) curves, precision/noise
//! sweeps, sampling contours, and 2D target-plot projections.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{generate_ensemble, Ensemble};
use crate::error::{Error, Result};
use crate::seeds::{derive, stream_rng, tag};
use crate::sim::{run_circuit, BlochEstimate, NoiseModel, Shots};
use crate::su2::{apply, bloch_of_state, rotation_z, trace_distance, BlochVector, State2};
use crate::synth::SynthOptions;
use crate::word::WordCounts;

/// Full parameter set for a protocol run. Embedded verbatim in every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkarcConfig {
    pub theta: f64,
    pub b_list: Vec<u32>,
    pub delta_list: Vec<f64>,
    pub r: usize,
    pub shots: Shots,
    /// Sub-ensemble sizes for the D(m) table; empty skips the curve.
    pub m_range: Vec<usize>,
    pub q_cap: u64,
    pub seed: u64,
    pub synth: SynthOptions,
    /// Seeds averaged per sampling-contour cell.
    pub contour_seeds: u32,
}

impl Default for SkarcConfig {
    fn default() -> Self {
        SkarcConfig {
            theta: 1.0,
            b_list: (2..=12).collect(),
            delta_list: vec![0.0],
            r: 100,
            shots: Shots::Exact,
            m_range: Vec::new(),
            q_cap: 1000,
            seed: 0,
            synth: SynthOptions::default(),
            contour_seeds: 5,
        }
    }
}

impl SkarcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::Domain("r must be at least 1".into()));
        }
        if self.q_cap < 1 {
            return Err(Error::Domain("q_cap must be at least 1".into()));
        }
        if self.b_list.is_empty() {
            return Err(Error::Domain("b_list must not be empty".into()));
        }
        if self.delta_list.is_empty() {
            return Err(Error::Domain("delta_list must not be empty".into()));
        }
        for &m in &self.m_range {
            if m < 1 || m > self.r {
                return Err(Error::Domain(format!(
                    "m = {m} outside the valid sub-ensemble range 1..={}",
                    self.r
                )));
            }
        }
        if !self.theta.is_finite() {
            return Err(Error::Domain("theta must be finite".into()));
        }
        for &d in &self.delta_list {
            NoiseModel::new(d)?;
        }
        Ok(())
    }

    /// Bloch vector of the ideal circuit: R_Z(theta) applied to |+⟩.
    pub fn target_vector(&self) -> BlochVector {
        ideal_target(self.theta)
    }
}

/// Bloch vector of R_Z(theta)|+⟩, the noiseless continuous reference.
pub fn ideal_target(theta: f64) -> BlochVector {
    bloch_of_state(&apply(&rotation_z(theta), &State2::plus()))
}

/// One row of the D(m) table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DmRow {
    pub m: usize,
    pub d_mean: f64,
    pub d_std: f64,
    pub draws: u64,
}

/// Everything measured for one (bits, delta) setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub bits: u32,
    pub delta: f64,
    pub shots: Shots,
    pub theta: f64,
    pub words: Vec<String>,
    pub counts: Vec<WordCounts>,
    pub estimates: Vec<BlochEstimate>,
    pub target: BlochVector,
    pub mean: BlochVector,
    pub fewest_h: usize,
    pub d_mean: f64,
    pub d_fewest_h: f64,
    /// Componentwise ensemble variance propagated to the mean's distance.
    pub errbar: f64,
    pub dm: Vec<DmRow>,
    pub projection: Vec<[f64; 2]>,
}

/// A full protocol run: resolved configuration plus one cell per setting,
/// ordered by (bits, delta) as listed in the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub config: SkarcConfig,
    pub cells: Vec<CellReport>,
}

/// One sampling-contour cell, averaged over seeds. `n_ref = 4^b` is the
/// sample count matching the sequence's approximation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourRow {
    pub bits: u32,
    pub shots: u64,
    pub d_mean: f64,
    pub d_std: f64,
    pub n_ref: f64,
}

/// Arithmetic mean of the selected vectors; repeated indices count multiply.
pub fn mean_vector(estimates: &[BlochEstimate], subset: &[usize]) -> Result<BlochVector> {
    if subset.is_empty() {
        return Err(Error::Domain("mean over an empty subset".into()));
    }
    let mut sum = BlochVector::new(0.0, 0.0, 0.0);
    for &i in subset {
        let v = estimates
            .get(i)
            .ok_or_else(|| Error::Domain(format!("subset index {i} out of range")))?
            .vector;
        sum = sum.add(&v);
    }
    Ok(sum.scale(1.0 / subset.len() as f64))
}

/// Index of the member with the fewest H gates; ties fall to fewest T, then
/// fewest total gates, then the lexicographically least word.
pub fn select_fewest_h(e: &Ensemble) -> usize {
    (0..e.words.len())
        .min_by_key(|&i| {
            let c = e.words[i].counts();
            (c.h_count, c.t_count, c.total, e.words[i].to_string())
        })
        .expect("ensemble is never empty")
}

/// Number of size-m multisets from r elements, saturated at `cap`.
fn feasible_multisets(r: usize, m: usize, cap: u64) -> u64 {
    let mut acc: u128 = 1;
    for i in 1..=m as u128 {
        acc = acc * (r as u128 - 1 + i) / i;
        if acc >= cap as u128 {
            return cap;
        }
    }
    acc as u64
}

/// D(m): mean and spread of the trace distance between size-m sub-ensemble
/// averages and the target, over multisets drawn with replacement.
///
/// Each m gets min(q_cap, number of multisets) draws from its own stream.
/// The m = r row is the deterministic full-ensemble value with one draw.
pub fn subensemble_distance_curve(
    estimates: &[BlochEstimate],
    target: &BlochVector,
    m_range: &[usize],
    q_cap: u64,
    seed: u64,
) -> Result<Vec<DmRow>> {
    use rand::Rng;
    let r = estimates.len();
    if r == 0 {
        return Err(Error::Domain("no estimates to sample from".into()));
    }
    if q_cap < 1 {
        return Err(Error::Domain("q_cap must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(m_range.len());
    for &m in m_range {
        if m < 1 || m > r {
            return Err(Error::Domain(format!(
                "m = {m} outside the valid sub-ensemble range 1..={r}"
            )));
        }
        if m == r {
            let full: Vec<usize> = (0..r).collect();
            let d = trace_distance(&mean_vector(estimates, &full)?, target);
            rows.push(DmRow {
                m,
                d_mean: d,
                d_std: 0.0,
                draws: 1,
            });
            continue;
        }
        let draws = feasible_multisets(r, m, q_cap);
        let mut rng = stream_rng(seed, m as u64);
        let mut distances = Vec::with_capacity(draws as usize);
        let mut subset = vec![0usize; m];
        for _ in 0..draws {
            for slot in subset.iter_mut() {
                *slot = rng.gen_range(0..r);
            }
            distances.push(trace_distance(&mean_vector(estimates, &subset)?, target));
        }
        let mean = distances.iter().sum::<f64>() / draws as f64;
        let var = distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / draws as f64;
        rows.push(DmRow {
            m,
            d_mean: mean,
            d_std: var.sqrt(),
            draws,
        });
    }
    Ok(rows)
}

/// Orthonormal frame (n̂, ê₁, ê₂) around the target direction.
fn projection_frame(target: &BlochVector) -> Result<(BlochVector, BlochVector, BlochVector)> {
    let norm = target.norm();
    if norm <= 1e-9 {
        return Err(Error::Domain("projection target has zero norm".into()));
    }
    let n = target.scale(1.0 / norm);
    let z_cross = BlochVector::new(0.0, 0.0, 1.0).cross(&n);
    let e1 = if z_cross.norm() < 1e-6 {
        BlochVector::new(1.0, 0.0, 0.0)
    } else {
        z_cross.scale(1.0 / z_cross.norm())
    };
    let e2 = n.cross(&e1);
    Ok((n, e1, e2))
}

/// Project vectors onto the plane orthogonal to the target direction.
/// The target itself maps to (0, 0).
pub fn project_to_disk(vectors: &[BlochVector], target: &BlochVector) -> Result<Vec<[f64; 2]>> {
    let (_, e1, e2) = projection_frame(target)?;
    Ok(vectors.iter().map(|p| [p.dot(&e1), p.dot(&e2)]).collect())
}

/// Componentwise ensemble variance propagated to the mean's trace distance.
fn propagated_errbar(vectors: &[BlochVector], mean: &BlochVector, target: &BlochVector) -> f64 {
    let n = vectors.len() as f64;
    let mut var = [0.0f64; 3];
    for v in vectors {
        for (c, slot) in var.iter_mut().enumerate() {
            *slot += (v.component(c) - mean.component(c)).powi(2);
        }
    }
    for slot in var.iter_mut() {
        *slot /= n;
    }
    let diff = mean.sub(target);
    let dist = diff.norm();
    if dist < 1e-15 {
        return (var.iter().sum::<f64>()).sqrt() / 2.0;
    }
    let mut acc = 0.0;
    for (c, &v) in var.iter().enumerate() {
        let grad = diff.component(c) / (2.0 * dist);
        acc += grad * grad * v;
    }
    acc.sqrt()
}

/// Execute every member of an ensemble at one noise setting and assemble the
/// cell statistics. Circuit seeds are keyed by (bits, delta, member).
pub fn run_cell(
    ensemble: &Ensemble,
    noise: &NoiseModel,
    shots: Shots,
    master_seed: u64,
    m_range: &[usize],
    q_cap: u64,
) -> Result<CellReport> {
    let target = ideal_target(ensemble.theta);
    let estimates: Vec<BlochEstimate> = ensemble
        .words
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let seed = derive(
                master_seed,
                &[
                    tag::CIRCUIT,
                    ensemble.bits as u64,
                    noise.delta.to_bits(),
                    i as u64,
                ],
            );
            run_circuit(w, noise, shots, seed)
        })
        .collect::<Result<_>>()?;

    let all: Vec<usize> = (0..estimates.len()).collect();
    let mean = mean_vector(&estimates, &all)?;
    let fewest_h = select_fewest_h(ensemble);
    let vectors: Vec<BlochVector> = estimates.iter().map(|e| e.vector).collect();
    let dm = if m_range.is_empty() {
        Vec::new()
    } else {
        let dm_seed = derive(
            master_seed,
            &[tag::DM_CURVE, ensemble.bits as u64, noise.delta.to_bits()],
        );
        subensemble_distance_curve(&estimates, &target, m_range, q_cap, dm_seed)?
    };

    Ok(CellReport {
        bits: ensemble.bits,
        delta: noise.delta,
        shots,
        theta: ensemble.theta,
        words: ensemble.words.iter().map(|w| w.to_string()).collect(),
        counts: ensemble.words.iter().map(|w| w.counts()).collect(),
        d_mean: trace_distance(&mean, &target),
        d_fewest_h: trace_distance(&vectors[fewest_h], &target),
        errbar: propagated_errbar(&vectors, &mean, &target),
        projection: project_to_disk(&vectors, &target)?,
        estimates,
        target,
        mean,
        fewest_h,
        dm,
    })
}

/// Sweep every (bits, delta) pair in the config: one ensemble per precision,
/// reused across noise settings, executed and scored per cell.
pub fn precision_sweep(config: &SkarcConfig) -> Result<RunReport> {
    config.validate()?;
    let ensembles: Vec<Ensemble> = config
        .b_list
        .par_iter()
        .map(|&b| {
            generate_ensemble(
                config.theta,
                b,
                config.r,
                derive(config.seed, &[tag::ENSEMBLE, b as u64]),
                &config.synth,
            )
        })
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, usize)> = (0..config.b_list.len())
        .flat_map(|bi| (0..config.delta_list.len()).map(move |di| (bi, di)))
        .collect();
    let cells: Vec<CellReport> = pairs
        .par_iter()
        .map(|&(bi, di)| {
            let noise = NoiseModel::new(config.delta_list[di])?;
            run_cell(
                &ensembles[bi],
                &noise,
                config.shots,
                config.seed,
                &config.m_range,
                config.q_cap,
            )
        })
        .collect::<Result<_>>()?;

    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        cells,
    })
}

/// Noiseless sampling study over a (bits, shots) grid.
///
/// Randomized cells split the budget N over the full ensemble and score the
/// mean vector; non-randomized cells spend all N shots on the nominal
/// sequence synthesized directly at the cell's precision. Every cell is
/// averaged over `config.contour_seeds` seeds.
pub fn sampling_contour(
    b_grid: &[u32],
    shots_grid: &[u64],
    randomized: bool,
    config: &SkarcConfig,
) -> Result<Vec<ContourRow>> {
    config.validate()?;
    if b_grid.is_empty() || shots_grid.is_empty() {
        return Err(Error::Domain("contour grids must not be empty".into()));
    }
    if shots_grid.contains(&0) {
        return Err(Error::Domain("shot counts must be positive".into()));
    }
    let noise = NoiseModel::noiseless();
    let target = config.target_vector();

    let words_per_b: Vec<Vec<crate::word::GateWord>> = b_grid
        .par_iter()
        .map(|&b| {
            if randomized {
                let ensemble = generate_ensemble(
                    config.theta,
                    b,
                    config.r,
                    derive(config.seed, &[tag::ENSEMBLE, b as u64]),
                    &config.synth,
                )?;
                Ok(ensemble.words)
            } else {
                let nominal = crate::synth::synthesize_rz(config.theta, b, &config.synth, None)?;
                Ok(vec![nominal.word])
            }
        })
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, u64)> = (0..b_grid.len())
        .flat_map(|bi| shots_grid.iter().map(move |&n| (bi, n)))
        .collect();
    cells
        .par_iter()
        .map(|&(bi, n)| {
            let words = &words_per_b[bi];
            let b = b_grid[bi];
            let per_member = (n / words.len() as u64).max(1);
            let mut distances = Vec::with_capacity(config.contour_seeds as usize);
            for s in 0..config.contour_seeds as u64 {
                let estimates: Vec<BlochEstimate> = words
                    .iter()
                    .enumerate()
                    .map(|(i, w)| {
                        let seed = derive(config.seed, &[tag::CONTOUR, b as u64, n, s, i as u64]);
                        run_circuit(w, &noise, Shots::Count(per_member), seed)
                    })
                    .collect::<Result<_>>()?;
                let all: Vec<usize> = (0..estimates.len()).collect();
                let mean = mean_vector(&estimates, &all)?;
                distances.push(trace_distance(&mean, &target));
            }
            let d_mean = distances.iter().sum::<f64>() / distances.len() as f64;
            let var = distances.iter().map(|d| (d - d_mean).powi(2)).sum::<f64>()
                / distances.len() as f64;
            Ok(ContourRow {
                bits: b,
                shots: n,
                d_mean,
                d_std: var.sqrt(),
                n_ref: 4f64.powi(b as i32),
            })
        })
        .collect()
}

/// Uniform i.i.d. assignments of sequence indices to g rotation slots: the
/// r^g randomized-circuit space, sampled with replacement.
pub fn sample_assignments(r: usize, g: usize, count: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    use rand::Rng;
    if r < 1 || g < 1 {
        return Err(Error::Domain("r and g must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, 0);
    Ok((0..count)
        .map(|_| (0..g).map(|_| rng.gen_range(0..r)).collect())
        .collect())
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = ranks(xs);
    let ry = ranks(ys);
    pearson(&rx, &ry)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

//! Degenerate decomposition ensembles: r distinct words, all within 2^−b of
//! one target z rotation.
//!
//! Member 0 is the zero-jitter synthesis of the target. Members k ≥ 1 are
//! synthesized at one extra bit of precision from a jittered angle
//! θ + u, u uniform in [−2^{−b−1}, +2^{−b−1}], with randomized tie-breaking
//! in the base-net lookup; by the triangle inequality every candidate still
//! sits within 2^−b of the unjittered target, and each one is re-verified
//! against it before acceptance. Candidate streams are keyed by
//! (member, attempt), so results do not depend on generation order.

use rand::Rng;

use crate::error::{Error, Result};
use crate::seeds::stream_rng;
use crate::su2::{op_distance, rotation_z};
use crate::synth::{synthesize_rz, SynthOptions};
use crate::word::GateWord;

/// Jitter value and rng stream id that produced one member.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MemberSeed {
    pub jitter: f64,
    pub stream: u64,
}

/// r unique words approximating R_Z(theta) to 2^−bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub theta: f64,
    pub bits: u32,
    pub seed: u64,
    pub opts: SynthOptions,
    pub words: Vec<GateWord>,
    pub seeds: Vec<MemberSeed>,
    /// Distance of each member to the unjittered target.
    pub distances: Vec<f64>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Attempt budget per requested member.
const ATTEMPTS_PER_MEMBER: usize = 50;

fn attempt_stream(member: usize, attempt: usize) -> u64 {
    debug_assert!(attempt < 1 << 24);
    ((member as u64) << 24) | attempt as u64
}

/// Generate an ensemble of `r` unique sequences. Falling short of `r` within
/// the attempt budget is a loud error, not a smaller ensemble.
pub fn generate_ensemble(
    theta: f64,
    bits: u32,
    r: usize,
    seed: u64,
    opts: &SynthOptions,
) -> Result<Ensemble> {
    if r < 1 {
        return Err(Error::Domain("ensemble size must be at least 1".into()));
    }
    let target = rotation_z(theta);
    let budget = 2f64.powi(-(bits as i32));
    let inner_bits = bits + 1;
    let half_width = 2f64.powi(-(bits as i32 + 1));

    let nominal = synthesize_rz(theta, inner_bits, opts, None)?;
    let mut words = vec![nominal.word];
    let mut seeds = vec![MemberSeed {
        jitter: 0.0,
        stream: 0,
    }];
    let mut distances = vec![op_distance(&words[0].matrix(), &target)];

    let max_attempts = ATTEMPTS_PER_MEMBER * r;
    let mut attempts = 0usize;
    for member in 1..r {
        let mut found = false;
        for attempt in 0.. {
            if attempts >= max_attempts {
                break;
            }
            attempts += 1;
            let stream = attempt_stream(member, attempt);
            let mut rng = stream_rng(seed, stream);
            let jitter = rng.gen_range(-half_width..=half_width);
            let Ok(result) = synthesize_rz(theta + jitter, inner_bits, opts, Some(&mut rng)) else {
                continue;
            };
            let distance = op_distance(&result.word.matrix(), &target);
            if distance > budget {
                continue;
            }
            if words.contains(&result.word) {
                continue;
            }
            words.push(result.word);
            seeds.push(MemberSeed { jitter, stream });
            distances.push(distance);
            found = true;
            break;
        }
        if !found {
            return Err(Error::EnsembleShortfall {
                found: words.len(),
                requested: r,
                attempts,
            });
        }
    }

    Ok(Ensemble {
        theta,
        bits,
        seed,
        opts: *opts,
        words,
        seeds,
        distances,
    })
}

/// On-disk schema of an ensemble: words in the gate-word text format, one
/// distance per word, and the generation parameters. `member_seeds` is
/// provenance and may be absent in hand-written files.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EnsembleFile {
    pub theta: f64,
    pub b: u32,
    pub r: usize,
    pub seed: u64,
    pub opts: SynthOptions,
    pub words: Vec<String>,
    pub distances: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member_seeds: Option<Vec<MemberSeed>>,
}

impl From<&Ensemble> for EnsembleFile {
    fn from(e: &Ensemble) -> Self {
        EnsembleFile {
            theta: e.theta,
            b: e.bits,
            r: e.words.len(),
            seed: e.seed,
            opts: e.opts,
            words: e.words.iter().map(|w| w.to_string()).collect(),
            distances: e.distances.clone(),
            member_seeds: Some(e.seeds.clone()),
        }
    }
}

impl EnsembleFile {
    pub fn into_ensemble(self) -> Result<Ensemble> {
        if self.words.is_empty() {
            return Err(Error::Domain("ensemble file holds no words".into()));
        }
        if self.words.len() != self.r {
            return Err(Error::Domain(format!(
                "ensemble file declares r = {} but holds {} words",
                self.r,
                self.words.len()
            )));
        }
        let words = self
            .words
            .iter()
            .map(|s| s.parse::<GateWord>())
            .collect::<Result<Vec<_>>>()?;
        let seeds = self.member_seeds.unwrap_or_else(|| {
            vec![
                MemberSeed {
                    jitter: 0.0,
                    stream: 0
                };
                words.len()
            ]
        });
        Ok(Ensemble {
            theta: self.theta,
            bits: self.b,
            seed: self.seed,
            opts: self.opts,
            words,
            seeds,
            distances: self.distances,
        })
    }
}

/// One invariant violation found by [`verify_ensemble`]. At most one is
/// reported per member, in check order: duplicate, non-canonical spelling,
/// stored distance mismatch, precision bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Structural(String),
    DuplicateOf {
        member: usize,
        of: usize,
    },
    NotCanonical {
        member: usize,
    },
    DistanceMismatch {
        member: usize,
        stored: f64,
        recomputed: f64,
    },
    PrecisionExceeded {
        member: usize,
        distance: f64,
        budget: f64,
    },
}

/// Recompute every member's matrix and distance from scratch and list any
/// invariant violations. A healthy ensemble yields an empty list.
pub fn verify_ensemble(e: &Ensemble) -> Vec<Violation> {
    let mut violations = Vec::new();
    if e.words.len() != e.distances.len() || e.words.len() != e.seeds.len() {
        violations.push(Violation::Structural(format!(
            "field lengths disagree: {} words, {} distances, {} seeds",
            e.words.len(),
            e.distances.len(),
            e.seeds.len()
        )));
        return violations;
    }

    let target = rotation_z(e.theta);
    let budget = 2f64.powi(-(e.bits as i32));
    for (i, word) in e.words.iter().enumerate() {
        if let Some(of) = e.words[..i].iter().position(|w| w == word) {
            violations.push(Violation::DuplicateOf { member: i, of });
            continue;
        }
        if *word != word.canonicalize() {
            violations.push(Violation::NotCanonical { member: i });
            continue;
        }
        let recomputed = op_distance(&word.matrix(), &target);
        if (recomputed - e.distances[i]).abs() > 1e-12 {
            violations.push(Violation::DistanceMismatch {
                member: i,
                stored: e.distances[i],
                recomputed,
            });
            continue;
        }
        if recomputed > budget {
            violations.push(Violation::PrecisionExceeded {
                member: i,
                distance: recomputed,
                budget,
            });
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::{apply, bloch_of_state, State2};

    #[test]
    fn single_member_is_the_nominal_synthesis() {
        let opts = SynthOptions::default();
        let e = generate_ensemble(1.0, 4, 1, 99, &opts).unwrap();
        let nominal = synthesize_rz(1.0, 5, &opts, None).unwrap();
        assert_eq!(e.words, vec![nominal.word]);
        assert_eq!(e.seeds[0].jitter, 0.0);
    }

    #[test]
    fn members_are_unique_and_within_budget() {
        let opts = SynthOptions::default();
        let e = generate_ensemble(1.0, 4, 20, 7, &opts).unwrap();
        assert_eq!(e.len(), 20);
        let target = rotation_z(1.0);
        for (i, w) in e.words.iter().enumerate() {
            // Matrix oracle re-check, independent of the stored distances.
            let d = op_distance(&w.matrix(), &target);
            assert!(d <= 2f64.powi(-4), "member {i} at distance {d}");
            for other in &e.words[..i] {
                assert_ne!(w, other);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let opts = SynthOptions::default();
        let a = generate_ensemble(1.0, 4, 20, 7, &opts).unwrap();
        let b = generate_ensemble(1.0, 4, 20, 7, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_passes_fresh_ensembles() {
        let opts = SynthOptions::default();
        let e = generate_ensemble(1.0, 5, 10, 3, &opts).unwrap();
        assert!(verify_ensemble(&e).is_empty());
    }

    #[test]
    fn verify_flags_a_corrupted_word_exactly_once() {
        let opts = SynthOptions::default();
        let mut e = generate_ensemble(1.0, 5, 10, 3, &opts).unwrap();
        let mut symbols: Vec<crate::word::Gate> = vec![crate::word::Gate::H];
        symbols.extend_from_slice(e.words[3].symbols());
        e.words[3] = GateWord::from_symbols(symbols);
        let violations = verify_ensemble(&e);
        assert_eq!(violations.len(), 1, "violations: {violations:?}");
    }

    #[test]
    fn verify_distances_match_recomputation() {
        let opts = SynthOptions::default();
        let e = generate_ensemble(0.6, 6, 8, 11, &opts).unwrap();
        let target = rotation_z(0.6);
        for (w, &stored) in e.words.iter().zip(&e.distances) {
            assert!((op_distance(&w.matrix(), &target) - stored).abs() < 1e-12);
        }
    }

    #[test]
    fn shortfall_is_a_loud_error_with_the_found_count() {
        // Coarse precision admits only a handful of distinct words, far
        // fewer than 100: generation must fail and report what it found.
        let opts = SynthOptions::default();
        match generate_ensemble(1.0, 2, 100, 1, &opts) {
            Err(crate::error::Error::EnsembleShortfall {
                found, requested, ..
            }) => {
                assert!((1..100).contains(&found));
                assert_eq!(requested, 100);
            }
            other => panic!("expected a shortfall, got {other:?}"),
        }
    }

    #[test]
    fn ensemble_spreads_bloch_vectors() {
        let opts = SynthOptions::default();
        let e = generate_ensemble(1.0, 4, 20, 5, &opts).unwrap();
        let vectors: Vec<_> = e
            .words
            .iter()
            .map(|w| bloch_of_state(&apply(&w.matrix(), &State2::plus())))
            .collect();
        let mean_x = vectors.iter().map(|v| v.x).sum::<f64>() / vectors.len() as f64;
        let var_x =
            vectors.iter().map(|v| (v.x - mean_x).powi(2)).sum::<f64>() / vectors.len() as f64;
        assert!(var_x > 0.0, "degenerate ensemble: no spread in x");
    }
}

//! Single-qubit statevector execution under the coherent noise model, with
//! exact or finite-shot tomography in the X, Y, Z bases.
//!
//! Noise model: every rotation composing an H gate is multiplicatively
//! over-rotated by 1+δ, i.e. H becomes X(δ)·√Y(δ) with
//! X(δ) = R_x(π(1+δ)) and √Y(δ) = R_y((π/2)(1+δ)). S and T are realized as
//! virtual z rotations and carry no error at any δ. Measurement-side basis
//! changes are ideal.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Binomial, Distribution};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::seeds::stream_rng;
use crate::su2::{apply, bloch_of_state, rotation, BlochVector, State2, Unitary2};
use crate::word::{gate_matrix, Gate, GateWord};

/// Over-rotation fraction δ of the pulses composing H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub delta: f64,
}

impl NoiseModel {
    pub fn new(delta: f64) -> Result<Self> {
        if delta < 0.0 {
            return Err(Error::Domain(format!(
                "over-rotation fraction must be non-negative, got {delta}"
            )));
        }
        Ok(NoiseModel { delta })
    }

    pub fn noiseless() -> Self {
        NoiseModel { delta: 0.0 }
    }
}

/// Sampling budget per measurement basis: exact expectations or a shot count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Exact,
    Count(u64),
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => write!(f, "exact"),
            Shots::Count(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Shots::Exact);
        }
        let n: u64 = s.parse().map_err(|_| {
            Error::Domain(format!(
                "shots must be 'exact' or a positive integer, got '{s}'"
            ))
        })?;
        if n == 0 {
            return Err(Error::Domain("shot count must be positive".into()));
        }
        Ok(Shots::Count(n))
    }
}

impl Serialize for Shots {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shots::Exact => serializer.serialize_str("exact"),
            Shots::Count(n) => serializer.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ShotsVisitor;
        impl Visitor<'_> for ShotsVisitor {
            type Value = Shots;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "\"exact\" or a positive shot count")
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<Shots, E> {
                Ok(Shots::Count(n))
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<Shots, E> {
                if n <= 0 {
                    return Err(E::custom("shot count must be positive"));
                }
                Ok(Shots::Count(n as u64))
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Shots, E> {
                s.parse().map_err(E::custom)
            }
        }
        deserializer.deserialize_any(ShotsVisitor)
    }
}

/// Measurement basis for tomography.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    X,
    Y,
    Z,
}

pub const BASES: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

impl Basis {
    fn index(self) -> usize {
        match self {
            Basis::X => 0,
            Basis::Y => 1,
            Basis::Z => 2,
        }
    }
}

/// Plus-outcome tally for one measured basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCounts {
    pub n_plus: u64,
    pub shots: u64,
}

/// A reconstructed Bloch vector, either exact or from finite sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochEstimate {
    pub vector: BlochVector,
    pub shots: Shots,
    /// Per-basis (X, Y, Z) tallies; present only in sampled mode.
    pub raw_counts: Option<[BasisCounts; 3]>,
}

/// The matrix a gate symbol realizes at noise strength δ.
///
/// S and T are exact at any δ. H decomposes into X(δ)·√Y(δ), ordered so the
/// noiseless limit reproduces H up to global phase; δ = 0 returns the exact
/// H so that noiseless runs agree bit-for-bit with the clean pipeline.
pub fn noisy_gate(g: Gate, noise: &NoiseModel) -> Unitary2 {
    match g {
        Gate::S | Gate::T => gate_matrix(g),
        Gate::H => {
            if noise.delta == 0.0 {
                return gate_matrix(Gate::H);
            }
            let scale = 1.0 + noise.delta;
            let x = rotation([1.0, 0.0, 0.0], std::f64::consts::PI * scale).expect("unit axis");
            let sqrt_y =
                rotation([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2 * scale).expect("unit axis");
            x.mul(&sqrt_y)
        }
    }
}

/// Matrix of a word with every symbol replaced by its noisy realization.
pub fn noisy_word_matrix(w: &GateWord, noise: &NoiseModel) -> Unitary2 {
    let mut u = Unitary2::identity();
    for &g in w.symbols() {
        u = u.mul(&noisy_gate(g, noise));
    }
    u
}

/// Count |+⟩-outcomes of `shots` measurements of a state in one basis.
///
/// The success probability is computed exactly from the state, then a
/// binomial is drawn from the (seed, basis) substream; per-shot trajectories
/// would be equivalent for a deterministic circuit.
pub fn measure_basis(psi: &State2, basis: Basis, shots: u64, seed: u64) -> Result<(u64, u64)> {
    if shots == 0 {
        return Err(Error::Domain(
            "measurement requires at least one shot".into(),
        ));
    }
    let s = bloch_of_state(psi);
    let p_plus = ((1.0 + s.component(basis.index())) / 2.0).clamp(0.0, 1.0);
    let mut rng = stream_rng(seed, basis.index() as u64);
    let n_plus = Binomial::new(shots, p_plus)
        .expect("probability is clamped to [0, 1]")
        .sample(&mut rng);
    Ok((n_plus, shots))
}

/// Execute the circuit |0⟩ → H (noisy preparation) → word, then tomograph.
///
/// Exact mode stores the expectation values themselves; sampled mode stores
/// (2·n₊ − N)/N per basis along with the raw tallies. Sampling substreams
/// are keyed by basis, so results are independent of evaluation order.
pub fn run_circuit(
    w: &GateWord,
    noise: &NoiseModel,
    shots: Shots,
    seed: u64,
) -> Result<BlochEstimate> {
    let mut psi = apply(&noisy_gate(Gate::H, noise), &State2::ket0());
    // Last symbol acts first: traverse in reverse list order.
    for &g in w.symbols().iter().rev() {
        psi = apply(&noisy_gate(g, noise), &psi);
    }

    match shots {
        Shots::Exact => Ok(BlochEstimate {
            vector: bloch_of_state(&psi),
            shots,
            raw_counts: None,
        }),
        Shots::Count(n) => {
            let mut comps = [0.0f64; 3];
            let mut raw = [BasisCounts {
                n_plus: 0,
                shots: n,
            }; 3];
            for basis in BASES {
                let (n_plus, total) = measure_basis(&psi, basis, n, seed)?;
                raw[basis.index()] = BasisCounts {
                    n_plus,
                    shots: total,
                };
                comps[basis.index()] = (2.0 * n_plus as f64 - total as f64) / total as f64;
            }
            Ok(BlochEstimate {
                vector: BlochVector::new(comps[0], comps[1], comps[2]),
                shots,
                raw_counts: Some(raw),
            })
        }
    }
}

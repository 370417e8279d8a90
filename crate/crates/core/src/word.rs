//! Gate words over the {H, S, T} alphabet: text format, canonical form,
//! inversion, and exact matrix evaluation.
//!
//! A word is written in matrix order: "HTS" denotes the product H·T·S, so
//! the last symbol acts first on a state. The canonical form is the
//! alternating shape T^{a₀} H T^{a₁} H … H T^{a_n} with a₀, a_n ∈ {0..7}
//! and interior exponents in {1..7}, every exponent spelled with maximal S
//! substitution (S^(a div 2) then T^(a mod 2)), and no HH pair. Words equal
//! up to global phase canonicalize to the same string.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::normal_form;
use crate::su2::{Quat, Unitary2};

/// A gate symbol. The derived order (H < S < T) matches the alphabetical
/// order of the letters, so derived comparisons are lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    H,
    S,
    T,
}

impl Gate {
    pub fn to_char(self) -> char {
        match self {
            Gate::H => 'H',
            Gate::S => 'S',
            Gate::T => 'T',
        }
    }

    pub fn from_char(c: char) -> Result<Gate> {
        match c {
            'H' => Ok(Gate::H),
            'S' => Ok(Gate::S),
            'T' => Ok(Gate::T),
            other => Err(Error::Domain(format!("unknown gate symbol '{other}'"))),
        }
    }

    /// Spelling of the inverse: H† = H, S† = S³, T† = T·S³.
    fn dagger_spelling(self) -> &'static [Gate] {
        match self {
            Gate::H => &[Gate::H],
            Gate::S => &[Gate::S, Gate::S, Gate::S],
            Gate::T => &[Gate::T, Gate::S, Gate::S, Gate::S],
        }
    }
}

/// Exact matrix of a gate symbol:
/// H = (1/√2)[[1,1],[1,−1]], S = diag(1, i), T = diag(1, e^{iπ/4}).
pub fn gate_matrix(g: Gate) -> Unitary2 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match g {
        Gate::H => Unitary2 {
            m: [[h, h], [h, -h]],
        },
        Gate::S => Unitary2 {
            m: [[one, zero], [zero, Complex64::new(0.0, 1.0)]],
        },
        Gate::T => Unitary2 {
            m: [
                [one, zero],
                [
                    zero,
                    Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
                ],
            ],
        },
    }
}

/// A finite sequence of gate symbols in matrix order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GateWord {
    symbols: Vec<Gate>,
}

impl GateWord {
    pub fn empty() -> Self {
        GateWord {
            symbols: Vec::new(),
        }
    }

    pub fn from_symbols(symbols: Vec<Gate>) -> Self {
        GateWord { symbols }
    }

    pub fn symbols(&self) -> &[Gate] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Concatenation in matrix order: `a.concat(&b)` denotes A·B.
    pub fn concat(&self, other: &GateWord) -> GateWord {
        let mut symbols = Vec::with_capacity(self.symbols.len() + other.symbols.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        GateWord { symbols }
    }

    /// Canonical form: same operator up to global phase, unique spelling.
    pub fn canonicalize(&self) -> GateWord {
        GateWord {
            symbols: respell(&normal_form::normalize(&self.symbols)),
        }
    }

    /// Canonical inverse: word_matrix(w.invert()) · word_matrix(w) ≡ I.
    pub fn invert(&self) -> GateWord {
        let mut symbols = Vec::with_capacity(self.symbols.len() * 2);
        for &g in self.symbols.iter().rev() {
            symbols.extend_from_slice(g.dagger_spelling());
        }
        GateWord { symbols }.canonicalize()
    }

    /// Symbol tallies of the word as written.
    pub fn counts(&self) -> WordCounts {
        let mut counts = WordCounts {
            total: self.symbols.len(),
            t_count: 0,
            h_count: 0,
        };
        for &g in &self.symbols {
            match g {
                Gate::T => counts.t_count += 1,
                Gate::H => counts.h_count += 1,
                Gate::S => {}
            }
        }
        counts
    }

    /// Ordered matrix product of the symbols; the empty word is the identity.
    pub fn matrix(&self) -> Unitary2 {
        let mut u = Unitary2::identity();
        for &g in &self.symbols {
            u = u.mul(&gate_matrix(g));
        }
        u
    }

    /// Phase-free quaternion of the word, via incremental quaternion products.
    pub fn quaternion(&self) -> Quat {
        let mut q = Quat::identity();
        for &g in &self.symbols {
            q = q.mul(&gate_quat(g));
        }
        q
    }
}

fn gate_quat(g: Gate) -> Quat {
    match g {
        Gate::H => Quat::new(
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
        ),
        Gate::S => Quat::new(
            std::f64::consts::FRAC_PI_4.cos(),
            0.0,
            0.0,
            std::f64::consts::FRAC_PI_4.sin(),
        ),
        Gate::T => Quat::new(
            std::f64::consts::FRAC_PI_8.cos(),
            0.0,
            0.0,
            std::f64::consts::FRAC_PI_8.sin(),
        ),
    }
}

/// Collapse HH pairs and diagonal runs (mod 8), then spell each exponent as
/// S^(a div 2) T^(a mod 2). Exact: H² = I and T⁸ = I hold without phase.
fn respell(symbols: &[Gate]) -> Vec<Gate> {
    let mut exps: Vec<u8> = vec![0];
    for &g in symbols {
        match g {
            Gate::T => {
                let e = exps.last_mut().unwrap();
                *e = (*e + 1) % 8;
            }
            Gate::S => {
                let e = exps.last_mut().unwrap();
                *e = (*e + 2) % 8;
            }
            Gate::H => {
                if exps.len() >= 2 && *exps.last().unwrap() == 0 {
                    exps.pop();
                } else {
                    exps.push(0);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if i > 0 {
            out.push(Gate::H);
        }
        for _ in 0..e / 2 {
            out.push(Gate::S);
        }
        if e % 2 == 1 {
            out.push(Gate::T);
        }
    }
    out
}

/// Symbol tallies: total length, T count, H count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WordCounts {
    pub total: usize,
    pub t_count: usize,
    pub h_count: usize,
}

impl fmt::Display for GateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &g in &self.symbols {
            write!(f, "{}", g.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for GateWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(s.len());
        for c in s.chars() {
            symbols.push(Gate::from_char(c)?);
        }
        Ok(GateWord { symbols })
    }
}

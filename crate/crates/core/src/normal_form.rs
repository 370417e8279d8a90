//! Reduction of {H,S,T} words to a unique normal form.
//!
//! Every single-qubit word over {H,S,T} factors, up to global phase, as
//!
//!   (T | ε) (HT | SHT)* · C
//!
//! with C one of the 24 Clifford classes, and that factorization is unique.
//! Two words therefore denote the same operator up to phase exactly when
//! they reduce to the same factorization. The reduction below processes one
//! symbol at a time with table lookups: H and S fold into the Clifford tail,
//! while a T is pushed through the tail using the fact that conjugating a
//! z-axis π/4 rotation by a Clifford yields a π/4 rotation about one of the
//! six signed coordinate axes.
//!
//! The tables are built once at first use from quaternion arithmetic and
//! self-checked against the defining identities.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::sync::OnceLock;

use crate::su2::{BlochVector, Quat};
use crate::word::Gate;

/// Key step for identifying Clifford classes. Distinct Clifford quaternions
/// are separated by at least ~0.26, so this is far from any boundary.
const KEY_STEP: f64 = 1e-6;

/// The syllable emitted when a T is pushed through the Clifford tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TSyllable {
    /// Bare T: absorbed by the tail of the syllable list.
    T,
    /// Append an HT syllable.
    Ht,
    /// Append an SHT syllable.
    Sht,
}

struct CliffordTables {
    /// Canonical-sign quaternion representative per class.
    reps: Vec<Quat>,
    /// Shortest {H,S} spelling per class (ties broken alphabetically).
    spellings: Vec<Vec<Gate>>,
    identity: usize,
    /// c ↦ class(rep_c · H), c ↦ class(rep_c · S)
    mul_h: Vec<usize>,
    mul_s: Vec<usize>,
    /// Left-multiplication maps used when the syllable list absorbs a T.
    lmul_s: Vec<usize>,
    lmul_hs: Vec<usize>,
    lmul_shs: Vec<usize>,
    /// c ↦ (emitted syllable, class of the new tail) for rep_c · T.
    tpush: Vec<(TSyllable, usize)>,
}

fn gate_quat(g: Gate) -> Quat {
    match g {
        // H is a π rotation about (x̂ + ẑ)/√2.
        Gate::H => Quat::new(
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
        ),
        Gate::S => Quat::new(FRAC_PI_4.cos(), 0.0, 0.0, FRAC_PI_4.sin()),
        Gate::T => Quat::new(FRAC_PI_8.cos(), 0.0, 0.0, FRAC_PI_8.sin()),
    }
}

impl CliffordTables {
    fn class_of(&self, keys: &HashMap<[i64; 4], usize>, q: &Quat) -> usize {
        *keys
            .get(&q.grid_key(KEY_STEP))
            .expect("quaternion is not a Clifford class representative")
    }

    fn build() -> CliffordTables {
        let q_h = gate_quat(Gate::H);
        let q_s = gate_quat(Gate::S);
        let q_t = gate_quat(Gate::T);
        let q_s3 = q_s.mul(&q_s).mul(&q_s);

        // Breadth-first enumeration over right-multiplication by H and S.
        // First arrival is the shortest spelling, alphabetical among equals.
        let mut reps: Vec<Quat> = vec![Quat::identity()];
        let mut spellings: Vec<Vec<Gate>> = vec![Vec::new()];
        let mut keys: HashMap<[i64; 4], usize> = HashMap::new();
        keys.insert(Quat::identity().grid_key(KEY_STEP), 0);
        let mut cursor = 0;
        while cursor < reps.len() {
            let base = reps[cursor];
            let spelling = spellings[cursor].clone();
            for g in [Gate::H, Gate::S] {
                let next = base.mul(&gate_quat(g));
                if let std::collections::hash_map::Entry::Vacant(slot) =
                    keys.entry(next.grid_key(KEY_STEP))
                {
                    slot.insert(reps.len());
                    reps.push(next);
                    let mut sp = spelling.clone();
                    sp.push(g);
                    spellings.push(sp);
                }
            }
            cursor += 1;
        }
        assert_eq!(
            reps.len(),
            24,
            "Clifford enumeration must close at 24 classes"
        );

        let mut tables = CliffordTables {
            identity: 0,
            mul_h: Vec::with_capacity(24),
            mul_s: Vec::with_capacity(24),
            lmul_s: Vec::with_capacity(24),
            lmul_hs: Vec::with_capacity(24),
            lmul_shs: Vec::with_capacity(24),
            tpush: Vec::with_capacity(24),
            reps,
            spellings,
        };

        let q_hs = q_h.mul(&q_s);
        let q_shs = q_s.mul(&q_h).mul(&q_s);
        for c in 0..24 {
            let rep = tables.reps[c];
            tables.mul_h.push(tables.class_of(&keys, &rep.mul(&q_h)));
            tables.mul_s.push(tables.class_of(&keys, &rep.mul(&q_s)));
            tables.lmul_s.push(tables.class_of(&keys, &q_s.mul(&rep)));
            tables.lmul_hs.push(tables.class_of(&keys, &q_hs.mul(&rep)));
            tables
                .lmul_shs
                .push(tables.class_of(&keys, &q_shs.mul(&rep)));

            // Classify C T C⁻¹ by the image of ẑ under C's rotation. With
            // P ∈ {I, H, SH} conjugating ẑ to that axis and σ the sign,
            //   C·T = (P·T) · (Q·C),  Q = P⁻¹ (σ=+1) or S³·P⁻¹ (σ=−1),
            // using T⁻¹ = T·S³ exactly.
            let v = rep.rotate(&BlochVector::new(0.0, 0.0, 1.0));
            let axis_val = |x: f64| -> Option<bool> {
                if (x - 1.0).abs() < 1e-6 {
                    Some(true)
                } else if (x + 1.0).abs() < 1e-6 {
                    Some(false)
                } else {
                    None
                }
            };
            let (syllable, factor) = if let Some(pos) = axis_val(v.z) {
                (TSyllable::T, if pos { Quat::identity() } else { q_s3 })
            } else if let Some(pos) = axis_val(v.x) {
                (TSyllable::Ht, if pos { q_h } else { q_s3.mul(&q_h) })
            } else if let Some(pos) = axis_val(v.y) {
                // (SH)⁻¹ ≡ H·S³ up to phase.
                let inv_sh = q_h.mul(&q_s3);
                (TSyllable::Sht, if pos { inv_sh } else { q_s3.mul(&inv_sh) })
            } else {
                panic!("Clifford image of ẑ is not a signed coordinate axis: {v:?}");
            };
            let c2 = tables.class_of(&keys, &factor.mul(&rep));
            tables.tpush.push((syllable, c2));

            // Self-check: rep_c · T ≡ (syllable) · rep_c2 up to phase.
            let lhs = rep.mul(&q_t);
            let syl_quat = match syllable {
                TSyllable::T => q_t,
                TSyllable::Ht => q_h.mul(&q_t),
                TSyllable::Sht => q_s.mul(&q_h).mul(&q_t),
            };
            let rhs = syl_quat.mul(&tables.reps[c2]);
            assert!(
                lhs.dist(&rhs) < 1e-9,
                "T push-through table failed self-check for class {c}"
            );
        }
        tables
    }
}

fn tables() -> &'static CliffordTables {
    static TABLES: OnceLock<CliffordTables> = OnceLock::new();
    TABLES.get_or_init(CliffordTables::build)
}

#[derive(Clone, Copy)]
enum Syllable {
    Ht,
    Sht,
}

/// Reduce a symbol sequence (in matrix order) to its normal form spelling.
///
/// The output is phase-equivalent to the input and identical for any two
/// inputs that agree up to global phase.
pub(crate) fn normalize(symbols: &[Gate]) -> Vec<Gate> {
    let t = tables();
    let mut lead_t = false;
    let mut syllables: Vec<Syllable> = Vec::new();
    let mut c = t.identity;

    for &g in symbols {
        match g {
            Gate::H => c = t.mul_h[c],
            Gate::S => c = t.mul_s[c],
            Gate::T => {
                let (syl, c2) = t.tpush[c];
                match syl {
                    TSyllable::Ht => {
                        syllables.push(Syllable::Ht);
                        c = c2;
                    }
                    TSyllable::Sht => {
                        syllables.push(Syllable::Sht);
                        c = c2;
                    }
                    TSyllable::T => {
                        // The syllable list absorbs a bare T on its right:
                        //   ...HT  · T = ...  · HS
                        //   ...SHT · T = ...  · SHS
                        //   T      · T =        S
                        //   ε      · T = T
                        if let Some(last) = syllables.pop() {
                            c = match last {
                                Syllable::Ht => t.lmul_hs[c2],
                                Syllable::Sht => t.lmul_shs[c2],
                            };
                        } else if lead_t {
                            lead_t = false;
                            c = t.lmul_s[c2];
                        } else {
                            lead_t = true;
                            c = c2;
                        }
                    }
                }
            }
        }
    }

    let mut out = Vec::new();
    if lead_t {
        out.push(Gate::T);
    }
    for syl in syllables {
        match syl {
            Syllable::Ht => out.extend([Gate::H, Gate::T]),
            Syllable::Sht => out.extend([Gate::S, Gate::H, Gate::T]),
        }
    }
    out.extend(t.spellings[c].iter().copied());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_group_closes() {
        let t = tables();
        assert_eq!(t.reps.len(), 24);
        assert!(t.spellings[t.identity].is_empty());
    }

    #[test]
    fn spellings_reproduce_representatives() {
        let t = tables();
        for c in 0..24 {
            let mut q = Quat::identity();
            for &g in &t.spellings[c] {
                q = q.mul(&gate_quat(g));
            }
            assert!(q.dist(&t.reps[c]) < 1e-6, "spelling mismatch for class {c}");
        }
    }

    #[test]
    fn hs_cubed_is_identity_class() {
        // (HS)³ is a pure phase; the reduction must erase it.
        let w = [Gate::H, Gate::S, Gate::H, Gate::S, Gate::H, Gate::S];
        assert!(normalize(&w).is_empty());
    }
}

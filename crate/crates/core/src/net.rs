//! Base approximation net: every canonical word with a bounded number of H
//! symbols, deduplicated by the rotation it implements. Seeds the
//! Solovay-Kitaev recursion and answers nearest-neighbor queries.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::su2::{to_quaternion, Quat, Unitary2};
use crate::word::{GateWord, WordCounts};

/// Grid step for quaternion deduplication.
const DEDUP_STEP: f64 = 1e-9;

/// Acceptance band for randomized tie-breaking in [`nearest`]: any entry
/// within this factor of the minimal distance may be chosen.
const TIE_BAND: f64 = 1.25;

/// One rotation class reachable by the net, with its cheapest spelling.
#[derive(Debug, Clone)]
pub struct NetEntry {
    pub quat: Quat,
    pub word: GateWord,
    pub counts: WordCounts,
    pub matrix: Unitary2,
}

/// Deduplicated enumeration of all canonical words with `h_count ≤ max_h`.
#[derive(Debug)]
pub struct BaseNet {
    max_h: u8,
    entries: Vec<NetEntry>,
}

impl BaseNet {
    /// Enumerate the alternating form T^{a₀} H T^{a₁} H … H T^{a_n} for every
    /// H count up to `max_h`, canonicalize, and keep one entry per quaternion
    /// grid cell: the shortest word, then fewest T, then lexicographic.
    pub fn build(max_h: u8) -> Result<BaseNet> {
        if max_h > 7 {
            return Err(Error::ResourceLimit(format!(
                "base net with max_h = {max_h} would enumerate more than 8.8M words; the limit is 7"
            )));
        }

        let mut cells: HashMap<[i64; 4], (GateWord, WordCounts)> = HashMap::new();
        for h in 0..=max_h as usize {
            let mut exps = vec![0u8; h + 1];
            for e in exps.iter_mut().take(h).skip(1) {
                *e = 1;
            }
            loop {
                let word = word_from_exponents(&exps).canonicalize();
                let counts = word.counts();
                let key = word.quaternion().grid_key(DEDUP_STEP);
                match cells.get_mut(&key) {
                    None => {
                        cells.insert(key, (word, counts));
                    }
                    Some((held, held_counts)) => {
                        let new_key = (counts.total, counts.t_count, word.to_string());
                        let old_key = (held_counts.total, held_counts.t_count, held.to_string());
                        if new_key < old_key {
                            *held = word;
                            *held_counts = counts;
                        }
                    }
                }
                if !advance_exponents(&mut exps) {
                    break;
                }
            }
        }

        let mut entries: Vec<NetEntry> = cells
            .into_values()
            .map(|(word, counts)| {
                let matrix = word.matrix();
                NetEntry {
                    quat: to_quaternion(&matrix),
                    counts,
                    matrix,
                    word,
                }
            })
            .collect();
        // Order by the tie-break chain so a strict-improvement scan in
        // `nearest` lands on the preferred entry among exact ties.
        entries.sort_by(|a, b| {
            (a.counts.total, a.counts.t_count, a.word.to_string()).cmp(&(
                b.counts.total,
                b.counts.t_count,
                b.word.to_string(),
            ))
        });
        Ok(BaseNet { max_h, entries })
    }

    /// Shared, lazily built net per `max_h`. Nets are immutable once built.
    pub fn shared(max_h: u8) -> Result<Arc<BaseNet>> {
        static NETS: OnceLock<Mutex<HashMap<u8, Arc<BaseNet>>>> = OnceLock::new();
        let mut map = NETS
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .expect("net cache poisoned");
        if let Some(net) = map.get(&max_h) {
            return Ok(net.clone());
        }
        let net = Arc::new(BaseNet::build(max_h)?);
        map.insert(max_h, net.clone());
        Ok(net)
    }

    pub fn max_h(&self) -> u8 {
        self.max_h
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[NetEntry] {
        &self.entries
    }
}

/// Spell an exponent vector as Z-power segments separated by H.
fn word_from_exponents(exps: &[u8]) -> GateWord {
    use crate::word::Gate;
    let mut symbols = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if i > 0 {
            symbols.push(Gate::H);
        }
        for _ in 0..e / 2 {
            symbols.push(Gate::S);
        }
        if e % 2 == 1 {
            symbols.push(Gate::T);
        }
    }
    GateWord::from_symbols(symbols)
}

/// Odometer over the alternating form: first and last exponents range over
/// 0..=7, interior ones over 1..=7. Returns false once exhausted.
fn advance_exponents(exps: &mut [u8]) -> bool {
    let n = exps.len();
    for i in (0..n).rev() {
        let interior = i != 0 && i != n - 1;
        if exps[i] < 7 {
            exps[i] += 1;
            return true;
        }
        exps[i] = if interior { 1 } else { 0 };
    }
    false
}

/// Net entry nearest to `u` in quaternion distance.
///
/// Without an rng the result is the minimum, ties broken by fewest total
/// gates, then fewest T, then lexicographic word. With an rng, one entry is
/// drawn uniformly among all entries within 1.25× the minimal distance.
pub fn nearest<'net>(
    u: &Unitary2,
    net: &'net BaseNet,
    rng: Option<&mut ChaCha8Rng>,
) -> &'net NetEntry {
    assert!(!net.is_empty(), "base net has no entries");
    let target = to_quaternion(u);

    // Distance is monotone decreasing in |dot|, so scan for the maximum.
    let mut best = 0usize;
    let mut best_dot = -1.0f64;
    for (i, e) in net.entries.iter().enumerate() {
        let d = e.quat.dot(&target).abs();
        if d > best_dot {
            best_dot = d;
            best = i;
        }
    }

    match rng {
        None => &net.entries[best],
        Some(rng) => {
            // d ≤ 1.25·dmin  ⟺  1 − |dot| ≤ 1.25²·(1 − |dot|max)
            let threshold = 1.0 - TIE_BAND * TIE_BAND * (1.0 - best_dot);
            let band: Vec<usize> = net
                .entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.quat.dot(&target).abs() >= threshold)
                .map(|(i, _)| i)
                .collect();
            use rand::Rng;
            let pick = band[rng.gen_range(0..band.len())];
            &net.entries[pick]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::{from_quaternion, op_distance, phase_defect, rotation_z};
    use crate::word::gate_matrix;
    use rand::SeedableRng;

    #[test]
    fn max_h_zero_is_the_eight_diagonal_words() {
        let net = BaseNet::build(0).unwrap();
        assert_eq!(net.len(), 8);
        let mut words: Vec<String> = net.entries().iter().map(|e| e.word.to_string()).collect();
        words.sort();
        let mut expected = vec!["", "T", "S", "ST", "SS", "SST", "SSS", "SSST"];
        expected.sort_unstable();
        assert_eq!(words, expected);
    }

    #[test]
    fn max_h_one_count_matches_enumeration_oracle() {
        // Independent oracle: list the 8 + 64 raw words, group them by
        // pairwise matrix comparison, and count the groups.
        let mut raw: Vec<GateWord> = Vec::new();
        for a in 0..8u8 {
            raw.push(word_from_exponents(&[a]));
        }
        for a in 0..8u8 {
            for b in 0..8u8 {
                raw.push(word_from_exponents(&[a, b]));
            }
        }
        assert_eq!(raw.len(), 72);
        let mats: Vec<Unitary2> = raw.iter().map(|w| w.matrix()).collect();
        let mut group_of = vec![usize::MAX; raw.len()];
        let mut groups = 0usize;
        for i in 0..raw.len() {
            if group_of[i] != usize::MAX {
                continue;
            }
            group_of[i] = groups;
            for j in (i + 1)..raw.len() {
                if group_of[j] == usize::MAX && op_distance(&mats[i], &mats[j]) < 1e-6 {
                    group_of[j] = groups;
                }
            }
            groups += 1;
        }

        let net = BaseNet::build(1).unwrap();
        assert_eq!(net.len(), groups);
    }

    #[test]
    fn entries_are_internally_consistent() {
        let net = BaseNet::build(2).unwrap();
        let mut cells = std::collections::HashSet::new();
        for e in net.entries() {
            assert_eq!(e.word, e.word.canonicalize());
            let reconstructed = from_quaternion(&e.quat);
            assert!(phase_defect(&e.word.matrix(), &reconstructed) < 1e-14);
            assert!(
                cells.insert(e.quat.grid_key(DEDUP_STEP)),
                "two entries share a grid cell: {}",
                e.word
            );
        }
    }

    #[test]
    fn max_h_above_limit_is_rejected() {
        assert!(matches!(BaseNet::build(8), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn nearest_finds_exact_members() {
        let net = BaseNet::build(1).unwrap();
        let t = nearest(&gate_matrix(crate::word::Gate::T), &net, None);
        assert_eq!(t.word.to_string(), "T");
        assert!(op_distance(&t.matrix, &gate_matrix(crate::word::Gate::T)) < 1e-7);

        let id = nearest(&Unitary2::identity(), &net, None);
        assert_eq!(id.word.to_string(), "");
    }

    #[test]
    fn nearest_on_diagonal_net_matches_linear_scan_oracle() {
        let net = BaseNet::build(0).unwrap();
        let target = rotation_z(1.0);
        // Oracle: scan the 8 diagonal words by op_distance directly.
        let best = net
            .entries()
            .iter()
            .min_by(|a, b| {
                op_distance(&a.matrix, &target).total_cmp(&op_distance(&b.matrix, &target))
            })
            .unwrap();
        assert_eq!(best.word.to_string(), "T");
        assert_eq!(nearest(&target, &net, None).word.to_string(), "T");
    }

    #[test]
    fn randomized_nearest_stays_in_band_and_keeps_exact_hits() {
        let net = BaseNet::build(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // An exact member has minimal distance zero; the band collapses to it.
        for _ in 0..20 {
            let e = nearest(&gate_matrix(crate::word::Gate::T), &net, Some(&mut rng));
            assert_eq!(e.word.to_string(), "T");
        }
        let target = rotation_z(0.9);
        let dmin = net
            .entries()
            .iter()
            .map(|e| op_distance(&e.matrix, &target))
            .fold(f64::INFINITY, f64::min);
        for _ in 0..50 {
            let e = nearest(&target, &net, Some(&mut rng));
            assert!(op_distance(&e.matrix, &target) <= 1.25 * dmin + 1e-12);
        }
    }
}

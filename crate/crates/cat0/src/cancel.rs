//! Symmetrized relator sets, pieces, and the metric small cancellation
//! conditions.
//!
//! A piece is a subword of an element of the symmetrized set that cancels
//! completely when that element is multiplied by another element which is
//! not its exact inverse. Occurrences are tracked as (relator, inverted,
//! rotation) triples, so distinct rotations of a proper power count as
//! distinct entries and `w^k` keeps its long self-overlap pieces.
//!
//! Two independent routes compute the same statistic: [`max_piece`] scans
//! longest common prefixes over the sorted occurrence list, [`piece_oracle`]
//! walks every ordered product and measures cancellation directly.

use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CancelError {
    #[error("symmetrized set has {size} entries, oracle cap is {cap}")]
    OracleCapExceeded { size: usize, cap: usize },
}

/// Address of one entry of the symmetrized set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub relator: usize,
    pub inverted: bool,
    pub rotation: usize,
}

/// All cyclic permutations of all relator cores and their inverses, with
/// origin labels.
#[derive(Debug, Clone)]
pub struct SymmetrizedSet {
    entries: Vec<(Occurrence, Word)>,
    distinct_words: usize,
    relator_lengths: Vec<usize>,
}

impl SymmetrizedSet {
    pub fn entries(&self) -> &[(Occurrence, Word)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct words in the set; proper powers and repeated
    /// relators shrink this below the occurrence count.
    pub fn distinct_words(&self) -> usize {
        self.distinct_words
    }

    pub fn relator_length(&self, relator: usize) -> usize {
        self.relator_lengths[relator]
    }

    fn index_of(&self, occ: Occurrence) -> usize {
        let base: usize = self.relator_lengths[..occ.relator].iter().map(|m| 2 * m).sum();
        base + if occ.inverted { self.relator_lengths[occ.relator] } else { 0 } + occ.rotation
    }

    pub fn word_of(&self, occ: Occurrence) -> &Word {
        &self.entries[self.index_of(occ)].1
    }
}

pub fn symmetrize(p: &Presentation) -> SymmetrizedSet {
    let mut entries = Vec::new();
    let mut relator_lengths = Vec::new();
    for (ri, rel) in p.relators().iter().enumerate() {
        let core = &rel.cyclic;
        let m = core.len();
        relator_lengths.push(m);
        for rot in 0..m {
            entries.push((Occurrence { relator: ri, inverted: false, rotation: rot }, core.rotated(rot)));
        }
        let inv = core.inverse();
        for rot in 0..m {
            entries.push((Occurrence { relator: ri, inverted: true, rotation: rot }, inv.rotated(rot)));
        }
    }
    let mut words: Vec<&Word> = entries.iter().map(|(_, w)| w).collect();
    words.sort();
    words.dedup();
    let distinct_words = words.len();
    SymmetrizedSet { entries, distinct_words, relator_lengths }
}

/// Piece statistics for one relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorPieceStats {
    pub length: usize,
    /// Longest piece occurring in this relator.
    pub max_piece: usize,
    /// Fewest pieces whose product is the relator, if it is a product of
    /// pieces at all.
    pub min_cover: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceReport {
    pub max_piece: usize,
    /// A pair of entries realizing `max_piece`; least such pair among those
    /// the scan examines.
    pub witness: Option<(Occurrence, Occurrence)>,
    pub per_relator: Vec<RelatorPieceStats>,
    /// Least `min_cover` over the relators.
    pub c_p: Option<usize>,
}

impl PieceReport {
    /// Strict metric condition: every piece in every relator is shorter
    /// than `num/den` times the relator length.
    pub fn satisfies_c_prime(&self, num: u64, den: u64) -> bool {
        self.per_relator
            .iter()
            .all(|r| (r.max_piece as u64) * den < num * (r.length as u64))
    }
}

/// Metric small cancellation test at ratio `num/den`; `c_prime(p, 1, 6)` is
/// the classical strict sixth condition.
pub fn c_prime(p: &Presentation, num: u64, den: u64) -> bool {
    max_piece(p).satisfies_c_prime(num, den)
}

/// Value of the pair of occurrences `(a, b)` as a piece: the longest common
/// prefix, except that equal words from one side of one relator are
/// self-overlaps whose value is capped by the rotation offset.
#[cfg(test)]
fn pair_value(set: &SymmetrizedSet, a: Occurrence, b: Occurrence) -> usize {
    let wa = set.word_of(a);
    let wb = set.word_of(b);
    if wa != wb {
        return wa.common_prefix_len(wb);
    }
    let m = wa.len();
    if a.relator == b.relator && a.inverted == b.inverted {
        let d = (a.rotation as i64 - b.rotation as i64).rem_euclid(m as i64) as usize;
        m - d.min(m - d)
    } else {
        // identical boundary words on distinct cells share everything
        m
    }
}

fn canonical_pair(a: Occurrence, b: Occurrence) -> (Occurrence, Occurrence) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

struct Maximum {
    best: usize,
    witness: Option<(Occurrence, Occurrence)>,
}

impl Maximum {
    fn new() -> Maximum {
        Maximum { best: 0, witness: None }
    }

    fn offer(&mut self, a: Occurrence, b: Occurrence, v: usize) {
        if v == 0 {
            return;
        }
        let pair = canonical_pair(a, b);
        if v > self.best || (v == self.best && self.witness.map(|w| pair < w).unwrap_or(true)) {
            self.best = v;
            self.witness = Some(pair);
        }
    }
}

/// Longest-common-prefix route. Sorts the occurrence view; adjacent entries
/// give the prefix pieces, equal-word runs give the self-overlap pieces.
pub fn max_piece(p: &Presentation) -> PieceReport {
    let set = symmetrize(p);
    let n = set.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        set.entries()[i]
            .1
            .cmp(&set.entries()[j].1)
            .then(set.entries()[i].0.cmp(&set.entries()[j].0))
    });

    // equal-word runs as [start, end) ranges of `order`
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut s = 0;
    while s < n {
        let mut e = s + 1;
        while e < n && set.entries()[order[e]].1 == set.entries()[order[s]].1 {
            e += 1;
        }
        runs.push((s, e));
        s = e;
    }

    let mut per_occ = vec![0usize; n];
    let mut max = Maximum::new();

    for (k, &(s, e)) in runs.iter().enumerate() {
        let first = set.entries()[order[s]].0;
        let m = set.entries()[order[s]].1.len();

        // self-overlap value inside the run; uniform across members
        let mut v_run = 0usize;
        if e - s >= 2 {
            let other_cell = (s + 1..e).find(|&x| {
                let o = set.entries()[order[x]].0;
                (o.relator, o.inverted) != (first.relator, first.inverted)
            });
            match other_cell {
                Some(x) => {
                    v_run = m;
                    max.offer(first, set.entries()[order[x]].0, m);
                }
                None => {
                    let period = p.relators()[first.relator].cyclic.primitive_period();
                    v_run = m - period;
                    max.offer(first, set.entries()[order[s + 1]].0, v_run);
                }
            }
        }

        // bridges to the neighbouring runs; the same word sits at every
        // member, so one lcp applies to the whole run
        let mut v_bridge = 0usize;
        if k > 0 {
            let (ps, _) = runs[k - 1];
            let v = set.entries()[order[ps]].1.common_prefix_len(&set.entries()[order[s]].1);
            v_bridge = v_bridge.max(v);
            max.offer(set.entries()[order[ps]].0, first, v);
        }
        if k + 1 < runs.len() {
            let (ns, _) = runs[k + 1];
            let v = set.entries()[order[s]].1.common_prefix_len(&set.entries()[order[ns]].1);
            v_bridge = v_bridge.max(v);
            max.offer(first, set.entries()[order[ns]].0, v);
        }

        let v = v_run.max(v_bridge);
        for x in s..e {
            per_occ[order[x]] = v;
        }
    }

    assemble_report(p, &set, &per_occ, max)
}

/// Cancellation route: every ordered product of two entries, skipping the
/// exact aligned inverse of each entry, measured by how much of the first
/// factor cancels.
pub fn piece_oracle(p: &Presentation) -> Result<PieceReport, CancelError> {
    const CAP: usize = 10_000;
    let set = symmetrize(p);
    let n = set.len();
    if n > CAP {
        return Err(CancelError::OracleCapExceeded { size: n, cap: CAP });
    }

    let mut per_occ = vec![0usize; n];
    let mut max = Maximum::new();

    for i in 0..n {
        let (oi, wi) = &set.entries()[i];
        let mi = wi.len();
        for j in 0..n {
            if i == j {
                continue;
            }
            let (oj, wj) = &set.entries()[j];
            let mj = wj.len();
            let aligned = oi.relator == oj.relator
                && oi.inverted != oj.inverted
                && oj.rotation == (mi - oi.rotation) % mi;
            if aligned {
                continue;
            }
            let c = wi.cancellation_with(wj);
            let value = if c == mi && mi == mj {
                if oi.relator == oj.relator {
                    debug_assert!(oi.inverted != oj.inverted);
                    let aligned_rot = (mi - oi.rotation) % mi;
                    let delta =
                        (oj.rotation as i64 - aligned_rot as i64).rem_euclid(mi as i64) as usize;
                    mi - delta
                } else {
                    mi
                }
            } else {
                c
            };
            if value == 0 {
                continue;
            }
            // the cancelled subword is a suffix of entry i; as a prefix it
            // starts `value` positions before the end of that entry
            let start_i = Occurrence {
                relator: oi.relator,
                inverted: oi.inverted,
                rotation: (oi.rotation + mi - (value % mi)) % mi,
            };
            let si = set.index_of(start_i);
            per_occ[si] = per_occ[si].max(value);
            per_occ[j] = per_occ[j].max(value);
            max.offer(start_i, *oj, value);
        }
    }

    Ok(assemble_report(p, &set, &per_occ, max))
}

fn assemble_report(
    p: &Presentation,
    set: &SymmetrizedSet,
    per_occ: &[usize],
    max: Maximum,
) -> PieceReport {
    let mut per_relator = Vec::new();
    for ri in 0..p.relator_count() {
        let m = set.relator_length(ri);
        let mut rel_max = 0;
        for rot in 0..m {
            for inverted in [false, true] {
                let idx = set.index_of(Occurrence { relator: ri, inverted, rotation: rot });
                rel_max = rel_max.max(per_occ[idx]);
            }
        }
        // jump lengths for the circular cover: the longest piece starting
        // at each position of the relator read forwards
        let starts: Vec<usize> = (0..m)
            .map(|rot| per_occ[set.index_of(Occurrence { relator: ri, inverted: false, rotation: rot })])
            .collect();
        let min_cover = circular_cover(&starts);
        per_relator.push(RelatorPieceStats { length: m, max_piece: rel_max, min_cover });
    }
    let c_p = per_relator.iter().filter_map(|r| r.min_cover).min();
    PieceReport { max_piece: max.best, witness: max.witness, per_relator, c_p }
}

/// Fewest arcs `[q, q + len[q])` that tile a circle of length `len()`, arcs
/// placed end to end.
fn circular_cover(lens: &[usize]) -> Option<usize> {
    let m = lens.len();
    if m == 0 {
        return Some(0);
    }
    if lens.contains(&0) {
        return None;
    }
    let mut best: Option<usize> = None;
    for s in 0..m {
        let mut covered = 0usize;
        let mut count = 0usize;
        let mut pos = s;
        while covered < m {
            let jump = lens[pos % m].min(m);
            covered += jump;
            pos += jump;
            count += 1;
        }
        best = Some(best.map_or(count, |b: usize| b.min(count)));
    }
    best
}

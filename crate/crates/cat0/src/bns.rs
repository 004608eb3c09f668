//! Relator walks in the plane, convex hulls, and the classification of
//! characters of two-generator one-relator groups into fibered, strictly
//! ascending, or neither.
//!
//! A character is a primitive integer pair vanishing on the relator's
//! exponent vector. Membership in the ascending set is read off the walk:
//! the character lies on the good side exactly when its maximum over the
//! cyclic walk is attained at a single point, or, when the character kills
//! a generator, when a single flat step sits at the maximum level. The
//! orientation is calibrated so that for `< a, t | t a t^-1 a^-2 >` the
//! character with `t -> 1` is on the good side: there the group ascends,
//! conjugation by the stable letter mapping the base into itself.

use num_integer::Integer;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BnsError {
    #[error("expected a two-generator presentation, found {0} generators")]
    NotTwoGenerators(usize),
    #[error("expected a one-relator presentation, found {0} relators")]
    NotOneRelator(usize),
    #[error("the zero character is not allowed")]
    ZeroCharacter,
    #[error("character ({a}, {t}) does not vanish on the relator exponent vector ({ea}, {et})")]
    InvalidCharacter { a: i64, t: i64, ea: i64, et: i64 },
}

/// Primitive integer character on a two-generator group, values listed in
/// generator order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    pub values: [i64; 2],
}

impl Character {
    /// Reduce to primitive form; rejects (0, 0).
    pub fn new(x: i64, y: i64) -> Result<Character, BnsError> {
        if x == 0 && y == 0 {
            return Err(BnsError::ZeroCharacter);
        }
        let g = x.abs().gcd(&y.abs());
        Ok(Character { values: [x / g, y / g] })
    }

    pub fn negated(&self) -> Character {
        Character { values: [-self.values[0], -self.values[1]] }
    }

    fn letter_value(&self, l: Letter) -> i64 {
        self.values[l.gen] * l.sign.as_i64()
    }
}

/// The relator traced as a lattice path: point `k` is the exponent vector
/// of the length-`k` prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorWalk {
    pub points: Vec<(i64, i64)>,
}

impl RelatorWalk {
    pub fn closed(&self) -> bool {
        self.points.first() == self.points.last()
    }

    pub fn endpoint(&self) -> (i64, i64) {
        *self.points.last().unwrap()
    }
}

/// Trace the cyclically reduced relator of a two-generator one-relator
/// presentation.
pub fn walk(p: &Presentation) -> Result<RelatorWalk, BnsError> {
    let core = relator_core(p)?;
    let mut points = vec![(0i64, 0i64)];
    let (mut x, mut y) = (0i64, 0i64);
    for &l in core.letters() {
        match l.gen {
            0 => x += l.sign.as_i64(),
            _ => y += l.sign.as_i64(),
        }
        points.push((x, y));
    }
    Ok(RelatorWalk { points })
}

fn relator_core(p: &Presentation) -> Result<&Word, BnsError> {
    if p.alphabet().len() != 2 {
        return Err(BnsError::NotTwoGenerators(p.alphabet().len()));
    }
    if p.relator_count() != 1 {
        return Err(BnsError::NotOneRelator(p.relator_count()));
    }
    Ok(p.relators()[0].cyclic.core())
}

/// Convex hull of the walk with visit bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullData {
    /// Hull vertices in counterclockwise order.
    pub vertices: Vec<(i64, i64)>,
    /// How often the walk passes through each hull vertex; for closed walks
    /// the duplicated endpoint counts once.
    pub multiplicity: Vec<usize>,
    /// For each hull edge, the walk indices whose points lie on the closed
    /// segment.
    pub edge_points: Vec<Vec<usize>>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone chain over the distinct walk points; collinear point sets give
/// a degenerate two-vertex hull, a single repeated point gives one vertex.
pub fn hull(w: &RelatorWalk) -> HullData {
    let mut pts: Vec<(i64, i64)> = w.points.clone();
    pts.sort();
    pts.dedup();
    let vertices: Vec<(i64, i64)> = if pts.len() <= 2 {
        pts.clone()
    } else {
        let mut lower: Vec<(i64, i64)> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<(i64, i64)> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    };

    let counted: Vec<(i64, i64)> = if w.closed() && w.points.len() > 1 {
        w.points[..w.points.len() - 1].to_vec()
    } else {
        w.points.clone()
    };
    let multiplicity = vertices
        .iter()
        .map(|v| counted.iter().filter(|p| *p == v).count())
        .collect();

    let mut edge_points = Vec::new();
    if vertices.len() >= 2 {
        let edges = if vertices.len() == 2 { 1 } else { vertices.len() };
        for e in 0..edges {
            let a = vertices[e];
            let b = vertices[(e + 1) % vertices.len()];
            let on: Vec<usize> = counted
                .iter()
                .enumerate()
                .filter(|(_, &p)| {
                    cross(a, b, p) == 0
                        && p.0 >= a.0.min(b.0)
                        && p.0 <= a.0.max(b.0)
                        && p.1 >= a.1.min(b.1)
                        && p.1 <= a.1.max(b.1)
                })
                .map(|(i, _)| i)
                .collect();
            edge_points.push(on);
        }
    }
    HullData { vertices, multiplicity, edge_points }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PairVerdict {
    /// Both signs good: the kernel is finitely generated.
    Fibered,
    /// Exactly one sign good: ascending with finitely generated base.
    StrictlyAscending,
    Neither,
}

impl std::fmt::Display for PairVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PairVerdict::Fibered => write!(f, "fibered"),
            PairVerdict::StrictlyAscending => write!(f, "strictly_ascending"),
            PairVerdict::Neither => write!(f, "neither"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BnsClassification {
    pub chi: Character,
    pub chi_in_sigma: bool,
    pub neg_chi_in_sigma: bool,
    pub verdict: PairVerdict,
}

/// One-sided test: does the character's maximum over the cyclic walk sit at
/// a unique spot?
fn max_side_unique(core: &Word, chi: &Character) -> bool {
    let m = core.len();
    debug_assert!(m > 0);
    let values: Vec<i64> = core.letters().iter().map(|&l| chi.letter_value(l)).collect();
    let degenerate = values.contains(&0);
    // heights h_0 .. h_{m-1} of the cyclic walk; h_m duplicates h_0
    let mut heights = Vec::with_capacity(m);
    let mut h = 0i64;
    heights.push(h);
    for &v in values.iter().take(m - 1) {
        h += v;
        heights.push(h);
    }
    if !degenerate {
        let max = *heights.iter().max().unwrap();
        return heights.iter().filter(|&&x| x == max).count() == 1;
    }
    // flat steps: the step k goes from h_{k} to h_{k+1}; it is flat when
    // the letter value vanishes, and every visit to the extreme level lies
    // on a flat step because the relator is reduced
    let max = *heights.iter().max().unwrap();
    let mut flat_at_max = 0usize;
    for (k, &v) in values.iter().enumerate() {
        if v == 0 && heights[k] == max {
            flat_at_max += 1;
        }
    }
    flat_at_max == 1
}

/// Classify a character of `< x, y | r >`.
pub fn brown_classify(p: &Presentation, chi: Character) -> Result<BnsClassification, BnsError> {
    let core = relator_core(p)?;
    let ev = (core.exponent_sum(0), core.exponent_sum(1));
    if chi.values[0] * ev.0 + chi.values[1] * ev.1 != 0 {
        return Err(BnsError::InvalidCharacter {
            a: chi.values[0],
            t: chi.values[1],
            ea: ev.0,
            et: ev.1,
        });
    }
    let chi_in_sigma = max_side_unique(core, &chi);
    let neg_chi_in_sigma = max_side_unique(core, &chi.negated());
    let verdict = match (chi_in_sigma, neg_chi_in_sigma) {
        (true, true) => PairVerdict::Fibered,
        (false, false) => PairVerdict::Neither,
        _ => PairVerdict::StrictlyAscending,
    };
    Ok(BnsClassification { chi, chi_in_sigma, neg_chi_in_sigma, verdict })
}

/// Classify every valid primitive ray pair with coordinates in `[-n, n]`,
/// one representative per pair, ordered by (second, first) coordinate.
pub fn sweep(p: &Presentation, n: i64) -> Result<Vec<BnsClassification>, BnsError> {
    let core = relator_core(p)?;
    let ev = (core.exponent_sum(0), core.exponent_sum(1));
    let mut out = Vec::new();
    for y in 0..=n {
        for x in -n..=n {
            if x == 0 && y == 0 {
                continue;
            }
            if y == 0 && x < 0 {
                continue; // canonical representative of the pair
            }
            if x.abs().gcd(&y.abs()) != 1 {
                continue;
            }
            if x * ev.0 + y * ev.1 != 0 {
                continue;
            }
            out.push(brown_classify(p, Character::new(x, y)?)?);
        }
    }
    Ok(out)
}

//! Curvature test for one-vertex square presentations.
//!
//! For a presentation with every relator cyclically reduced of length 4,
//! the presentation complex is non-positively curved exactly when the link
//! of the unique vertex has no cycle shorter than 4. Two equivalent
//! formulations are implemented and cross-checked: the subword conditions
//! (no repeated length-2 subword across the symmetrized set, and no
//! cancelling triple), and the girth of the link graph itself.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cancel::Occurrence;
use crate::presentation::Presentation;
use crate::word::{Letter, Sign, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NpcError {
    #[error("relator {relator} has length {length}, expected exactly 4")]
    NotSquare { relator: usize, length: usize },
}

/// A presentation whose relator cores all have length exactly 4.
#[derive(Debug, Clone)]
pub struct SquarePresentation {
    presentation: Presentation,
}

impl SquarePresentation {
    pub fn new(p: &Presentation) -> Result<SquarePresentation, NpcError> {
        for (i, r) in p.relators().iter().enumerate() {
            if r.cyclic.len() != 4 {
                return Err(NpcError::NotSquare { relator: i, length: r.cyclic.len() });
            }
        }
        Ok(SquarePresentation { presentation: p.clone() })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Relator cores as letter quadruples.
    pub fn squares(&self) -> Vec<[Letter; 4]> {
        self.presentation
            .relators()
            .iter()
            .map(|r| {
                let l = r.cyclic.core().letters();
                [l[0], l[1], l[2], l[3]]
            })
            .collect()
    }
}

/// Index of every length-2 cyclic subword across all relators and their
/// inverses. Each entry of the symmetrized list contributes the first two
/// letters of its rotation, so a subword repeated inside one relator is
/// counted as often as it occurs.
#[derive(Debug, Clone)]
pub struct PairIndex {
    map: BTreeMap<[Letter; 2], Vec<Occurrence>>,
}

impl PairIndex {
    pub fn build(sq: &SquarePresentation) -> PairIndex {
        let mut map: BTreeMap<[Letter; 2], Vec<Occurrence>> = BTreeMap::new();
        for (ri, rel) in sq.presentation.relators().iter().enumerate() {
            for (inverted, core) in [(false, rel.cyclic.clone()), (true, rel.cyclic.inverse())] {
                for rot in 0..core.len() {
                    let w = core.rotated(rot);
                    let pair = [w.letters()[0], w.letters()[1]];
                    map.entry(pair)
                        .or_default()
                        .push(Occurrence { relator: ri, inverted, rotation: rot });
                }
            }
        }
        PairIndex { map }
    }

    pub fn contains(&self, pair: [Letter; 2]) -> bool {
        self.map.contains_key(&pair)
    }

    pub fn occurrences(&self, pair: [Letter; 2]) -> &[Occurrence] {
        self.map.get(&pair).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&[Letter; 2], &Vec<Occurrence>)> {
        self.map.iter()
    }

    pub fn distinct_pairs(&self) -> usize {
        self.map.len()
    }
}

/// Finite or infinite shortest-cycle length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Finite(usize),
    /// The link is a forest.
    Infinite,
}

impl Girth {
    pub fn at_least(&self, n: usize) -> bool {
        match self {
            Girth::Finite(g) => *g >= n,
            Girth::Infinite => true,
        }
    }
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "infinite"),
        }
    }
}

/// The link of the unique vertex: one node per edge direction, one edge per
/// corner of each square.
#[derive(Debug, Clone)]
pub struct LinkGraph {
    /// Two direction nodes per generator.
    pub vertex_count: usize,
    /// Endpoints plus the corner that produced the edge.
    pub edges: Vec<(usize, usize, Occurrence)>,
}

/// Node index of the direction leaving the vertex along `l`.
pub fn direction_node(l: Letter) -> usize {
    2 * l.gen + usize::from(l.sign == Sign::Minus)
}

fn node_letter(idx: usize) -> Letter {
    Letter { gen: idx / 2, sign: if idx.is_multiple_of(2) { Sign::Plus } else { Sign::Minus } }
}

pub fn build_link(sq: &SquarePresentation) -> LinkGraph {
    let gens = sq.presentation().alphabet().len();
    let mut edges = Vec::new();
    for (ri, square) in sq.squares().iter().enumerate() {
        for rot in 0..4 {
            let x = square[rot];
            let y = square[(rot + 1) % 4];
            // arriving along x and leaving along y joins the backward
            // direction of x to the forward direction of y
            edges.push((
                direction_node(x.inverse()),
                direction_node(y),
                Occurrence { relator: ri, inverted: false, rotation: rot },
            ));
        }
    }
    LinkGraph { vertex_count: 2 * gens, edges }
}

/// Shortest cycle length in a multigraph: a loop counts 1, a parallel pair
/// counts 2, otherwise breadth-first search over the simple graph.
pub fn girth(g: &LinkGraph) -> Girth {
    if g.edges.iter().any(|&(u, v, _)| u == v) {
        return Girth::Finite(1);
    }
    let mut seen = std::collections::BTreeSet::new();
    for &(u, v, _) in &g.edges {
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Girth::Finite(2);
        }
    }
    // simple graph now
    let mut adj = vec![Vec::new(); g.vertex_count];
    for &(u, v) in &seen {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut best: Option<usize> = None;
    for start in 0..g.vertex_count {
        let mut dist = vec![usize::MAX; g.vertex_count];
        let mut parent = vec![usize::MAX; g.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let cycle = dist[x] + dist[y] + 1;
                    if best.map(|b| cycle < b).unwrap_or(true) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    match best {
        Some(b) => Girth::Finite(b),
        None => Girth::Infinite,
    }
}

/// Graphviz rendering of the link, direction nodes labelled by generator
/// names.
pub fn link_to_dot(g: &LinkGraph, p: &Presentation) -> String {
    let mut out = String::from("graph link {\n");
    for idx in 0..g.vertex_count {
        let l = node_letter(idx);
        let label = match l.sign {
            Sign::Plus => p.alphabet().name(l.gen).to_string(),
            Sign::Minus => format!("{}^-1", p.alphabet().name(l.gen)),
        };
        out.push_str(&format!("  n{idx} [label=\"{label}\"];\n"));
    }
    for (u, v, occ) in &g.edges {
        out.push_str(&format!("  n{u} -- n{v} [label=\"r{}c{}\"];\n", occ.relator, occ.rotation));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A length-2 subword occurring more than once across the symmetrized
    /// list.
    RepeatedPair { pair: [Letter; 2], occurrences: Vec<Occurrence> },
    /// Subwords `x y`, `y^-1 z` and `x z` all present.
    TripleLoop { xy: [Letter; 2], yz: [Letter; 2], xz: [Letter; 2] },
    /// A link cycle shorter than 4.
    ShortCycle { length: usize },
    /// The subword conditions and the girth bound disagree; indicates an
    /// internal inconsistency and always fails the check.
    CriteriaDisagreement { conditions_pass: bool, girth_pass: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpcReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
    /// Link girth; only filled by [`npc_check`].
    pub girth: Option<Girth>,
}

impl NpcReport {
    fn from_violations(violations: Vec<Violation>) -> NpcReport {
        NpcReport { pass: violations.is_empty(), violations, girth: None }
    }
}

/// No length-2 subword of the symmetrized list may appear twice.
pub fn check_condition_1(sq: &SquarePresentation) -> NpcReport {
    let index = PairIndex::build(sq);
    let violations = index
        .pairs()
        .filter(|(_, occs)| occs.len() >= 2)
        .map(|(pair, occs)| Violation::RepeatedPair { pair: *pair, occurrences: occs.clone() })
        .collect();
    NpcReport::from_violations(violations)
}

/// No triple `x y`, `y^-1 z`, `x z` of length-2 subwords. The excluded
/// `z = x^-1` case cannot arise here: `x x^-1` is unreduced and the list
/// only holds rotations of cyclically reduced words.
pub fn check_condition_2(sq: &SquarePresentation) -> NpcReport {
    let index = PairIndex::build(sq);
    let gens = sq.presentation().alphabet().len();
    let letters: Vec<Letter> =
        (0..gens).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
    let mut violations = Vec::new();
    for (&[x, y], _) in index.pairs() {
        for &z in &letters {
            let yz = [y.inverse(), z];
            let xz = [x, z];
            if index.contains(yz) && index.contains(xz) {
                violations.push(Violation::TripleLoop { xy: [x, y], yz, xz });
            }
        }
    }
    NpcReport::from_violations(violations)
}

/// Full curvature check: both subword conditions, plus the link girth, with
/// the two criteria required to agree.
pub fn npc_check(p: &Presentation) -> Result<NpcReport, NpcError> {
    let sq = SquarePresentation::new(p)?;
    let mut violations = check_condition_1(&sq).violations;
    violations.extend(check_condition_2(&sq).violations);
    let conditions_pass = violations.is_empty();

    let link = build_link(&sq);
    let g = girth(&link);
    let girth_pass = g.at_least(4);
    if let Girth::Finite(len) = g {
        if len < 4 {
            violations.push(Violation::ShortCycle { length: len });
        }
    }
    if conditions_pass != girth_pass {
        violations.push(Violation::CriteriaDisagreement { conditions_pass, girth_pass });
        return Ok(NpcReport { pass: false, violations, girth: Some(g) });
    }
    Ok(NpcReport { pass: conditions_pass, violations, girth: Some(g) })
}

/// Convenience wrapper for squares given as raw words.
pub fn npc_check_words(words: &[Word], gens: usize) -> Result<NpcReport, NpcError> {
    let names: Vec<String> = (0..gens).map(|i| format!("g{i}")).collect();
    let alphabet = crate::word::Alphabet::new(names).unwrap();
    let p = Presentation::new(alphabet, words.to_vec()).expect("valid relators");
    npc_check(&p)
}

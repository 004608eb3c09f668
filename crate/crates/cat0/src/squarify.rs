//! Turning even-length relators into presentations where every relator has
//! length 4.
//!
//! Each substitution replaces a length-3 window of the working relator by a
//! fresh generator, shortening it by two; the window becomes a length-4
//! defining relator. [`template_squarify`] runs the fixed centre-out
//! schedule for relators matching the anchored conjugate-chain template,
//! where the result is always non-positively curved.
//! [`general_squarify_search`] searches the schedule space of an arbitrary
//! even presentation for a squarification passing the curvature check.

use std::collections::HashMap;

use thiserror::Error;

use crate::npc;
use crate::presentation::{Presentation, PresentationError, RewriteResult};
use crate::word::{is_conjugate, Alphabet, Letter, Word, WordError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SquarifyError {
    #[error("relator {relator} has odd length {length}; substitution preserves parity")]
    OddRelator { relator: usize, length: usize },
    #[error("relator {relator} has length {length}, too short to squarify")]
    RelatorTooShort { relator: usize, length: usize },
    #[error("chain index bound must be at least 2, got {0}")]
    IndexTooSmall(usize),
    #[error("template mismatch at position {position}: {message}")]
    TemplateMismatch { position: usize, message: String },
    #[error("cut {cut} out of range for working relator of length {length}")]
    BadCut { cut: usize, length: usize },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// One substitution step: `name = left mid right`, recorded as the window
/// it replaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub name: String,
    /// Generator index in the output alphabet.
    pub gen: usize,
    /// Source relator being shortened.
    pub relator: usize,
    /// 0-based window start in the working relator at the time of the cut.
    pub cut: usize,
    /// The replaced window, in output-alphabet coordinates.
    pub window: [Letter; 3],
    /// Index of the defining relator in the output presentation.
    pub def_relator: usize,
}

/// Cut positions applied to one source relator, in order.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RelatorSchedule {
    pub relator: usize,
    pub cuts: Vec<usize>,
}

/// An all-length-4 presentation together with the substitutions that
/// produced it.
#[derive(Debug, Clone)]
pub struct SquarifiedPresentation {
    pub presentation: Presentation,
    pub schedule: Vec<RelatorSchedule>,
    pub substitutions: Vec<Substitution>,
    /// The presentation that was squarified, over a prefix of the output
    /// alphabet.
    pub source: Presentation,
    /// For each source relator, the output relator holding its residue.
    pub residues: Vec<usize>,
}

/// Outcome of a schedule search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub found: Option<SquarifiedPresentation>,
    pub leaves_visited: u64,
    /// True when the whole schedule space was examined.
    pub exhausted: bool,
}

pub const DEFAULT_LEAF_BUDGET: u64 = 1_000_000;

fn fresh_prefix(existing: &[String]) -> String {
    for cand in ["u", "v", "w", "uu"] {
        if !existing.iter().any(|n| {
            n.strip_prefix(cand).is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
        }) {
            return cand.to_string();
        }
    }
    "fresh".to_string()
}

fn apply_cut(
    working: &Word,
    cut: usize,
    gen: usize,
) -> Result<(Word, [Letter; 3], Word), SquarifyError> {
    let letters = working.letters();
    if cut + 3 > letters.len() {
        return Err(SquarifyError::BadCut { cut, length: letters.len() });
    }
    let window = [letters[cut], letters[cut + 1], letters[cut + 2]];
    let def = Word::reduce([window[0], window[1], window[2], Letter::neg(gen)]);
    debug_assert_eq!(def.len(), 4);
    let next: Word = letters[..cut]
        .iter()
        .copied()
        .chain(std::iter::once(Letter::pos(gen)))
        .chain(letters[cut + 3..].iter().copied())
        .collect();
    debug_assert_eq!(next.len(), working.len() - 2);
    Ok((next, window, def))
}

/// Check the anchored template: positions 1 and 2 hold the inverses of the
/// top and bottom chain generators, the middle is anchored the same way,
/// and all free positions stay strictly between the chain ends.
fn check_template(rw: &RewriteResult) -> Result<usize, SquarifyError> {
    let w = &rw.word;
    let l = rw.l;
    if l < 2 {
        return Err(SquarifyError::IndexTooSmall(l));
    }
    let len = w.len();
    if !len.is_multiple_of(2) {
        return Err(SquarifyError::OddRelator { relator: 0, length: len });
    }
    let n = len / 2;
    if n < 2 {
        return Err(SquarifyError::RelatorTooShort { relator: 0, length: len });
    }
    let letters = w.letters();
    let expect = |pos: usize, want: Letter, what: &str| -> Result<(), SquarifyError> {
        let found = letters[pos - 1];
        if found == want {
            Ok(())
        } else {
            Err(SquarifyError::TemplateMismatch {
                position: pos,
                message: format!("expected {what}"),
            })
        }
    };
    expect(1, Letter::neg(l), "the inverse top conjugate")?;
    expect(2, Letter::neg(0), "the inverse bottom conjugate")?;
    expect(n, Letter::neg(0), "the inverse bottom conjugate")?;
    expect(n + 1, Letter::pos(l), "the top conjugate")?;
    expect(n + 2, Letter::pos(0), "the bottom conjugate")?;
    expect(2 * n, Letter::pos(0), "the bottom conjugate")?;
    let free = (3..=n.saturating_sub(1)).chain(n + 3..=2 * n - 1);
    for pos in free {
        let g = letters[pos - 1].gen;
        if g == 0 || g >= l {
            return Err(SquarifyError::TemplateMismatch {
                position: pos,
                message: format!("free position must use an interior conjugate, found index {g}"),
            });
        }
    }
    Ok(n)
}

/// Squarify a rewritten relator matching the anchored template. The output
/// lists the stable generator, the conjugate chain, and the substitution
/// generators; its relators are the chain squares, the definition squares
/// working centre-out, and the residue.
pub fn template_squarify(rw: &RewriteResult) -> Result<SquarifiedPresentation, SquarifyError> {
    let n = check_template(rw)?;
    let l = rw.l;

    let mut names: Vec<String> = vec![rw.stable.clone()];
    names.extend((0..=l).map(|i| format!("{}{}", rw.base, i)));
    let prefix = fresh_prefix(&names);
    names.extend((1..=n.saturating_sub(2)).map(|j| format!("{prefix}{j}")));
    let alphabet = Alphabet::new(names.clone())?;

    // conjugate index i sits at output index i + 1; the stable letter is 0
    let embedded = rw.word.map_gens(|g| g + 1);
    let chain_gen = |i: usize| i + 1;
    let sub_gen = |j: usize| l + 1 + j; // j starting at 1

    let mut relators: Vec<Word> = Vec::new();
    for i in 1..=l {
        relators.push(Word::reduce([
            Letter::pos(0),
            Letter::pos(chain_gen(i - 1)),
            Letter::neg(0),
            Letter::neg(chain_gen(i)),
        ]));
    }

    let mut working = embedded.clone();
    let mut substitutions = Vec::new();
    let mut cuts = Vec::new();
    for j in 1..=n.saturating_sub(2) {
        let cut = n - j; // 0-based start of the centre window
        let gen = sub_gen(j);
        let (next, window, def) = apply_cut(&working, cut, gen)?;
        relators.push(def);
        substitutions.push(Substitution {
            name: names[gen].clone(),
            gen,
            relator: 0,
            cut,
            window,
            def_relator: relators.len() - 1,
        });
        cuts.push(cut);
        working = next;
    }
    debug_assert_eq!(working.len(), 4);
    relators.push(working);
    let residue = relators.len() - 1;

    let presentation = Presentation::new(alphabet, relators)?;
    let source_alphabet = Alphabet::new(names[..l + 2].to_vec())?;
    let source = Presentation::new(source_alphabet, vec![embedded])?;
    Ok(SquarifiedPresentation {
        presentation,
        schedule: vec![RelatorSchedule { relator: 0, cuts }],
        substitutions,
        source,
        residues: vec![residue],
    })
}

/// Outcome of back-substitution checking.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub ok: bool,
    /// For each failing source relator: (source index, expected, recovered).
    pub mismatches: Vec<(usize, Word, Word)>,
}

/// Undo the substitutions using the defining relators as stored in the
/// output presentation, innermost substitution last, and compare each
/// recovered word with its source relator up to free equality and rotation.
/// Tampering with any defining or residue relator is detected.
pub fn verify_substitutions(sq: &SquarifiedPresentation) -> VerifyOutcome {
    let mut expansion: HashMap<usize, Word> = HashMap::new();
    for sub in &sq.substitutions {
        let def = &sq.presentation.relators()[sub.def_relator].original;
        let letters = def.letters();
        // definitions read `left mid right gen^-1`
        let window: Word = if letters.len() == 4 && letters[3] == Letter::neg(sub.gen) {
            letters[..3].iter().copied().collect()
        } else {
            Word::empty() // malformed definition; mismatch will surface
        };
        expansion.insert(sub.gen, window);
    }

    let expand = |w: &Word| -> Word {
        let mut current = w.clone();
        loop {
            let mut out: Vec<Letter> = Vec::with_capacity(current.len() * 2);
            let mut changed = false;
            for &l in current.letters() {
                match expansion.get(&l.gen) {
                    Some(window) => {
                        changed = true;
                        let piece = match l.sign {
                            crate::word::Sign::Plus => window.clone(),
                            crate::word::Sign::Minus => window.inverse(),
                        };
                        out.extend_from_slice(piece.letters());
                    }
                    None => out.push(l),
                }
            }
            let next = Word::reduce(out);
            if !changed {
                return next;
            }
            current = next;
        }
    };

    let mut mismatches = Vec::new();
    for (src_idx, &res_idx) in sq.residues.iter().enumerate() {
        let recovered = expand(&sq.presentation.relators()[res_idx].original);
        let expected = &sq.source.relators()[src_idx].original;
        if !is_conjugate(&recovered, expected) {
            mismatches.push((src_idx, expected.clone(), recovered));
        }
    }
    VerifyOutcome { ok: mismatches.is_empty(), mismatches }
}

/// Two-letter cyclic subword census used to prune partial squarifications:
/// any repeat among the already fixed squares violates the no-repeat
/// condition, and adding relators never removes a repeat.
struct PairCensus {
    counts: HashMap<[Letter; 2], u32>,
}

impl PairCensus {
    fn new() -> PairCensus {
        PairCensus { counts: HashMap::new() }
    }

    /// Record a square's eight oriented corner readings. Returns false on a
    /// repeat; the entries stay recorded either way for symmetric undo.
    fn add_square(&mut self, w: &Word) -> bool {
        debug_assert_eq!(w.len(), 4);
        let l = w.letters();
        let mut ok = true;
        for rot in 0..4 {
            for inv in [false, true] {
                let pair = corner_reading(l, rot, inv);
                let c = self.counts.entry(pair).or_insert(0);
                *c += 1;
                if *c >= 2 {
                    ok = false;
                }
            }
        }
        ok
    }

    fn remove_square(&mut self, w: &Word) {
        let l = w.letters();
        for rot in 0..4 {
            for inv in [false, true] {
                let pair = corner_reading(l, rot, inv);
                match self.counts.get_mut(&pair) {
                    Some(c) if *c > 1 => *c -= 1,
                    _ => {
                        self.counts.remove(&pair);
                    }
                }
            }
        }
    }
}

fn corner_reading(l: &[Letter], rot: usize, inv: bool) -> [Letter; 2] {
    if !inv {
        [l[rot], l[(rot + 1) % 4]]
    } else {
        // the same rotation of the inverse word
        [l[(4 - rot) % 4].inverse(), l[(3 - rot) % 4].inverse()]
    }
}

/// Depth-first search over cut schedules: relators in sequence, cut
/// positions ascending. Each working relator shrinks by two per cut until
/// it reaches length 4; complete assignments are checked for non-positive
/// curvature. The first success is returned, which by the search order is
/// the lexicographically least schedule. `budget` caps the number of
/// complete assignments examined.
pub fn general_squarify_search(
    p: &Presentation,
    budget: u64,
) -> Result<SearchOutcome, SquarifyError> {
    let cores: Vec<Word> = p.relators().iter().map(|r| r.cyclic.core().clone()).collect();
    for (i, w) in cores.iter().enumerate() {
        if !w.len().is_multiple_of(2) {
            return Err(SquarifyError::OddRelator { relator: i, length: w.len() });
        }
        if w.len() < 4 {
            return Err(SquarifyError::RelatorTooShort { relator: i, length: w.len() });
        }
    }

    let total_subs: usize = cores.iter().map(|w| (w.len() - 4) / 2).sum();
    let mut names: Vec<String> = p.alphabet().names().to_vec();
    let prefix = fresh_prefix(&names);
    names.extend((1..=total_subs).map(|j| format!("{prefix}{j}")));
    let alphabet = Alphabet::new(names.clone())?;
    let first_fresh = p.alphabet().len();

    struct Ctx {
        cores: Vec<Word>,
        alphabet: Alphabet,
        names: Vec<String>,
        first_fresh: usize,
        budget: u64,
        leaves: u64,
        exhausted: bool,
        census: PairCensus,
        fixed: Vec<Word>,
        subs: Vec<Substitution>,
        schedule: Vec<RelatorSchedule>,
        residues: Vec<usize>,
    }

    fn descend(ctx: &mut Ctx, relator: usize, working: Word, cuts: Vec<usize>) -> Result<Option<()>, SquarifyError> {
        if working.len() == 4 {
            let ok = ctx.census.add_square(&working);
            ctx.fixed.push(working.clone());
            ctx.schedule.push(RelatorSchedule { relator, cuts });
            ctx.residues.push(ctx.fixed.len() - 1);
            let hit = if ok {
                solve(ctx, relator + 1)?
            } else {
                None
            };
            if hit.is_some() {
                return Ok(hit);
            }
            ctx.residues.pop();
            ctx.schedule.pop();
            ctx.fixed.pop();
            ctx.census.remove_square(&working);
            return Ok(None);
        }
        for cut in 0..=working.len() - 3 {
            if ctx.leaves >= ctx.budget {
                ctx.exhausted = false;
                return Ok(None);
            }
            let gen = ctx.first_fresh + ctx.subs.len();
            let (next, window, def) = apply_cut(&working, cut, gen)?;
            let ok = ctx.census.add_square(&def);
            ctx.fixed.push(def.clone());
            ctx.subs.push(Substitution {
                name: ctx.names[gen].clone(),
                gen,
                relator,
                cut,
                window,
                def_relator: ctx.fixed.len() - 1,
            });
            let mut cuts_next = cuts.clone();
            cuts_next.push(cut);
            let hit = if ok { descend(ctx, relator, next, cuts_next)? } else { None };
            if hit.is_some() {
                return Ok(hit);
            }
            ctx.subs.pop();
            ctx.fixed.pop();
            ctx.census.remove_square(&def);
        }
        Ok(None)
    }

    fn solve(ctx: &mut Ctx, relator: usize) -> Result<Option<()>, SquarifyError> {
        if relator == ctx.cores.len() {
            ctx.leaves += 1;
            let candidate = Presentation::new(ctx.alphabet.clone(), ctx.fixed.clone())?;
            let report = npc::npc_check(&candidate).expect("all relators have length 4");
            return Ok(report.pass.then_some(()));
        }
        let working = ctx.cores[relator].clone();
        descend(ctx, relator, working, Vec::new())
    }

    let mut ctx = Ctx {
        cores,
        alphabet,
        names,
        first_fresh,
        budget,
        leaves: 0,
        exhausted: true,
        census: PairCensus::new(),
        fixed: Vec::new(),
        subs: Vec::new(),
        schedule: Vec::new(),
        residues: Vec::new(),
    };

    let hit = solve(&mut ctx, 0)?;
    let found = match hit {
        Some(()) => {
            let presentation = Presentation::new(ctx.alphabet.clone(), ctx.fixed.clone())?;
            let source = Presentation::new(
                p.alphabet().clone(),
                ctx.cores.clone(),
            )?;
            Some(SquarifiedPresentation {
                presentation,
                schedule: ctx.schedule.clone(),
                substitutions: ctx.subs.clone(),
                source,
                residues: ctx.residues.clone(),
            })
        }
        None => None,
    };
    Ok(SearchOutcome { found, leaves_visited: ctx.leaves, exhausted: ctx.exhausted })
}

/// Replay a recorded schedule against a presentation, without searching.
pub fn replay_schedule(
    p: &Presentation,
    schedule: &[RelatorSchedule],
) -> Result<SquarifiedPresentation, SquarifyError> {
    let cores: Vec<Word> = p.relators().iter().map(|r| r.cyclic.core().clone()).collect();
    for (i, w) in cores.iter().enumerate() {
        if !w.len().is_multiple_of(2) {
            return Err(SquarifyError::OddRelator { relator: i, length: w.len() });
        }
    }
    let total_subs: usize = cores.iter().map(|w| (w.len().saturating_sub(4)) / 2).sum();
    let mut names: Vec<String> = p.alphabet().names().to_vec();
    let prefix = fresh_prefix(&names);
    names.extend((1..=total_subs).map(|j| format!("{prefix}{j}")));
    let alphabet = Alphabet::new(names.clone())?;
    let first_fresh = p.alphabet().len();

    let mut fixed = Vec::new();
    let mut subs = Vec::new();
    let mut residues = Vec::new();
    for sched in schedule {
        let mut working = cores
            .get(sched.relator)
            .ok_or(SquarifyError::BadCut { cut: sched.relator, length: cores.len() })?
            .clone();
        for &cut in &sched.cuts {
            let gen = first_fresh + subs.len();
            let (next, window, def) = apply_cut(&working, cut, gen)?;
            fixed.push(def);
            subs.push(Substitution {
                name: names[gen].clone(),
                gen,
                relator: sched.relator,
                cut,
                window,
                def_relator: fixed.len() - 1,
            });
            working = next;
        }
        fixed.push(working);
        residues.push(fixed.len() - 1);
    }
    let presentation = Presentation::new(alphabet, fixed)?;
    let source = Presentation::new(p.alphabet().clone(), cores)?;
    Ok(SquarifiedPresentation {
        presentation,
        schedule: schedule.to_vec(),
        substitutions: subs,
        source,
        residues,
    })
}

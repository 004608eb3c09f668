//! Finite presentations: text format, abelianization via Smith normal form,
//! mapping tori of endomorphisms, the zero-exponent conjugate rewriting and
//! the zigzag relator family.

use num_bigint::BigInt;
use thiserror::Error;

use crate::snf::{self, SmithNormalForm};
use crate::word::{
    format_word, parse_word, Alphabet, CyclicWord, Endomorphism, Letter, Sign, Word, WordError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("presentation parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
    #[error("relator {index} is trivial")]
    TrivialRelator { index: usize },
    #[error("generator name `{0}` already taken")]
    NameCollision(String),
    #[error("expected a presentation with {expected} generators, found {found}")]
    WrongGeneratorCount { expected: usize, found: usize },
    #[error("expected a one-relator presentation, found {0} relators")]
    WrongRelatorCount(usize),
    #[error("no generator has zero exponent sum in the relator")]
    NoZeroExponentGenerator,
    #[error("family index must be even and at least 2, got {0}")]
    BadFamilyIndex(usize),
}

/// A relator with its cyclically reduced core retained alongside the word
/// as it was given.
#[derive(Debug, Clone, PartialEq)]
pub struct Relator {
    pub original: Word,
    pub cyclic: CyclicWord,
    pub conjugator: Word,
}

impl Relator {
    fn new(original: Word) -> Relator {
        let (cyclic, conjugator) = CyclicWord::reduce(&original);
        Relator { original, cyclic, conjugator }
    }
}

/// Alphabet plus relator list. Relators are nonempty; cores are cyclically
/// reduced on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Relator>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Presentation, PresentationError> {
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_gen() {
                if g >= alphabet.len() {
                    return Err(WordError::GeneratorOutOfRange { gen: g, size: alphabet.len() }.into());
                }
            }
            if CyclicWord::reduce(r).0.is_empty() {
                return Err(PresentationError::TrivialRelator { index: i });
            }
        }
        Ok(Presentation { alphabet, relators: relators.into_iter().map(Relator::new).collect() })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    /// Cyclically reduced relator cores.
    pub fn cores(&self) -> impl Iterator<Item = &CyclicWord> + '_ {
        self.relators.iter().map(|r| &r.cyclic)
    }

    /// Parse `< a, t | t a t^-1 a^-2 >`. Relators are comma separated; a
    /// relation `u = v` becomes the relator `u v^-1`; the relator list may
    /// be empty.
    pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
        let open = text.find('<').ok_or_else(|| PresentationError::Parse {
            at: 0,
            message: "expected `<`".into(),
        })?;
        let close = text.rfind('>').ok_or_else(|| PresentationError::Parse {
            at: text.len().saturating_sub(1),
            message: "expected `>`".into(),
        })?;
        let inner = &text[open + 1..close];
        let bar = inner.find('|').ok_or_else(|| PresentationError::Parse {
            at: open + 1,
            message: "expected `|` between generators and relators".into(),
        })?;
        let gen_part = &inner[..bar];
        let rel_part = &inner[bar + 1..];

        let names: Vec<String> = gen_part
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let alphabet = Alphabet::new(names)?;

        let mut relators = Vec::new();
        for chunk in rel_part.split(',') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let word = match chunk.split_once('=') {
                Some((lhs, rhs)) => {
                    let u = parse_word(&alphabet, lhs)?;
                    let v = parse_word(&alphabet, rhs)?;
                    u.concat(&v.inverse())
                }
                None => parse_word(&alphabet, chunk)?,
            };
            relators.push(word);
        }
        Presentation::new(alphabet, relators)
    }

    /// Canonical text form; `parse(format(p))` reproduces `p`.
    pub fn format(&self) -> String {
        let gens = self.alphabet.names().join(", ");
        let rels = self
            .relators
            .iter()
            .map(|r| format_word(&self.alphabet, &r.original))
            .collect::<Vec<_>>()
            .join(", ");
        if rels.is_empty() {
            format!("< {gens} | >")
        } else {
            format!("< {gens} | {rels} >")
        }
    }

    /// Exponent matrix, one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| self.alphabet.names().iter().enumerate().map(|(g, _)| r.original.exponent_sum(g)).collect())
            .collect()
    }

    pub fn abelianization(&self) -> AbelianizationReport {
        let m = snf::big_matrix(&self.exponent_matrix());
        let snf = if self.relators.is_empty() {
            SmithNormalForm { diagonal: Vec::new(), rank: 0 }
        } else {
            snf::smith_normal_form(&m)
        };
        AbelianizationReport {
            betti: self.alphabet.len() - snf.rank,
            torsion: snf.torsion(),
        }
    }
}

/// Free rank and torsion of the abelianized group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianizationReport {
    pub betti: usize,
    /// Entries greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

/// Presentation of the mapping torus of `f`: a fresh stable generator `s`
/// with relators `s x s^-1 f(x)^-1`, stable generator listed first.
pub fn mapping_torus(
    f: &Endomorphism,
    stable_name: &str,
) -> Result<Presentation, PresentationError> {
    if f.domain().contains(stable_name) {
        return Err(PresentationError::NameCollision(stable_name.to_string()));
    }
    let mut names = vec![stable_name.to_string()];
    names.extend(f.domain().names().iter().cloned());
    let alphabet = Alphabet::new(names)?;
    let k = f.rank();
    // generator g of the domain is g + 1 here; the stable letter is 0
    let shift = |w: &Word| w.map_gens(|g| g + 1);
    let t = Word::letter(Letter::pos(0));
    let relators = (0..k)
        .map(|g| {
            let x = Word::letter(Letter::pos(g + 1));
            t.concat(&x)
                .concat(&t.inverse())
                .concat(&shift(f.image(g)).inverse())
        })
        .collect();
    Presentation::new(alphabet, relators)
}

/// Result of eliminating the zero-exponent generator of a two-generator
/// one-relator presentation: the relator rewritten over the conjugate
/// family, with conjugate indices normalized to start at 0.
///
/// Generator index `i` of `word` stands for the `i`-fold conjugate of the
/// base generator by the stable one.
#[derive(Debug, Clone, PartialEq)]
pub struct RewriteResult {
    /// Largest conjugate index occurring.
    pub l: usize,
    /// The relator over conjugate indices `0..=l`.
    pub word: Word,
    /// Name of the eliminated (stable) generator.
    pub stable: String,
    /// Name of the conjugated (base) generator.
    pub base: String,
    /// Index shift applied so the least occurring index is 0.
    pub shift: i64,
}

impl RewriteResult {
    /// Build directly from an index word, checking the index span.
    pub fn from_parts(l: usize, word: Word, stable: &str, base: &str) -> Result<RewriteResult, PresentationError> {
        match (word.min_gen(), word.max_gen()) {
            (Some(0), Some(top)) if top == l => {}
            _ => {
                return Err(PresentationError::Parse {
                    at: 0,
                    message: format!("index word must use index 0 and index {l}"),
                })
            }
        }
        Ok(RewriteResult { l, word, stable: stable.into(), base: base.into(), shift: 0 })
    }

    /// Names `base0 .. base{l}` for the conjugate generators.
    pub fn conjugate_alphabet(&self) -> Alphabet {
        Alphabet::new((0..=self.l).map(|i| format!("{}{}", self.base, i))).unwrap()
    }
}

/// Rewrite the relator of `< x, y | r >` over conjugates of one generator,
/// eliminating a generator with zero exponent sum in `r`. When both qualify
/// the first listed is eliminated. The cyclically reduced core of `r` is
/// rewritten, so expanding the result recovers `r` up to conjugacy.
pub fn t_rewrite(p: &Presentation) -> Result<RewriteResult, PresentationError> {
    if p.alphabet().len() != 2 {
        return Err(PresentationError::WrongGeneratorCount { expected: 2, found: p.alphabet().len() });
    }
    if p.relator_count() != 1 {
        return Err(PresentationError::WrongRelatorCount(p.relator_count()));
    }
    let core = p.relators()[0].cyclic.core().clone();
    let stable = [0, 1]
        .into_iter()
        .find(|&g| core.exponent_sum(g) == 0)
        .ok_or(PresentationError::NoZeroExponentGenerator)?;
    let base = 1 - stable;

    // walk the relator tracking the stable-generator height; a base letter
    // at height h becomes the h-indexed conjugate
    let mut height: i64 = 0;
    let mut indexed: Vec<(i64, Sign)> = Vec::new();
    for &l in core.letters() {
        if l.gen == stable {
            height += l.sign.as_i64();
        } else {
            indexed.push((height, l.sign));
        }
    }
    debug_assert_eq!(height, 0);

    let min = indexed.iter().map(|&(h, _)| h).min().unwrap_or(0);
    let max = indexed.iter().map(|&(h, _)| h).max().unwrap_or(0);
    let word = Word::reduce(
        indexed
            .iter()
            .map(|&(h, sign)| Letter { gen: (h - min) as usize, sign }),
    );
    debug_assert_eq!(word.len(), indexed.len(), "rewrite output must stay reduced");
    Ok(RewriteResult {
        l: (max - min) as usize,
        word,
        stable: p.alphabet().name(stable).to_string(),
        base: p.alphabet().name(base).to_string(),
        shift: -min,
    })
}

/// The even-index zigzag relator over conjugate indices `0..=l`: top and
/// bottom conjugates anchored at both ends, interior indices interleaved
/// descending against ascending, second half inverted. Every index has zero
/// exponent sum.
pub fn zigzag_relator(l: usize) -> Result<Word, PresentationError> {
    if l < 2 || !l.is_multiple_of(2) {
        return Err(PresentationError::BadFamilyIndex(l));
    }
    let mut letters: Vec<Letter> = Vec::with_capacity(2 * l + 4);
    let interleave: Vec<usize> = {
        let mut v = Vec::new();
        let mut hi = l - 1;
        let mut lo = 1;
        while hi > l / 2 {
            v.push(hi);
            v.push(lo);
            hi -= 1;
            lo += 1;
        }
        v.push(l / 2);
        v
    };
    // first half
    letters.push(Letter::neg(l));
    letters.push(Letter::neg(0));
    letters.extend(interleave.iter().map(|&i| Letter::pos(i)));
    letters.push(Letter::neg(0));
    // second half
    letters.push(Letter::pos(l));
    letters.push(Letter::pos(0));
    letters.extend(interleave.iter().map(|&i| Letter::neg(i)));
    letters.push(Letter::pos(0));

    let w = Word::reduce(letters.clone());
    debug_assert_eq!(w.len(), letters.len());
    Ok(w)
}

/// Substitute conjugate index `i` by `stable^i base stable^-i` and reduce.
/// Index generators map to a two-letter alphabet with the base generator at
/// index 0 and the stable generator at index 1.
pub fn expand_to_at(indexed: &Word) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    for &l in indexed.letters() {
        let i = l.gen as i64;
        push_power(&mut letters, 1, i);
        letters.push(Letter { gen: 0, sign: l.sign });
        push_power(&mut letters, 1, -i);
    }
    Word::reduce(letters)
}

fn push_power(out: &mut Vec<Letter>, gen: usize, exp: i64) {
    let sign = if exp >= 0 { Sign::Plus } else { Sign::Minus };
    for _ in 0..exp.unsigned_abs() {
        out.push(Letter { gen, sign });
    }
}

/// Two-generator alphabet matching [`expand_to_at`]'s index convention.
pub fn base_stable_alphabet(base: &str, stable: &str) -> Result<Alphabet, PresentationError> {
    Ok(Alphabet::new([base, stable])?)
}

/// `< base, stable | expanded relator >` for an index word.
pub fn indexed_relator_presentation(
    indexed: &Word,
    base: &str,
    stable: &str,
) -> Result<Presentation, PresentationError> {
    let alphabet = base_stable_alphabet(base, stable)?;
    Presentation::new(alphabet, vec![expand_to_at(indexed)])
}

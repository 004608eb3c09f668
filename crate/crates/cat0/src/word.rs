//! Freely reduced words over a ranked alphabet, cyclic words, and
//! endomorphisms of free groups.
//!
//! Words are stored always reduced; every constructor reduces eagerly, so a
//! [`Word`] value is the canonical representative of its group element and
//! plain equality is group equality. Generators are compared by index
//! internally; names only matter at the text boundary.

use std::fmt;
use std::ops::Mul;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet needs at least one generator")]
    EmptyAlphabet,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("letter refers to generator {gen} but the alphabet has {size} generators")]
    GeneratorOutOfRange { gen: usize, size: usize },
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
    #[error("no image assigned to generator `{0}`")]
    MissingImage(String),
    #[error("endomorphism domains differ")]
    DomainMismatch,
}

/// Orientation of a generator occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A generator or its inverse: an element of `X ∪ X^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(gen: usize) -> Letter {
        Letter { gen, sign: Sign::Plus }
    }

    pub fn neg(gen: usize) -> Letter {
        Letter { gen, sign: Sign::Minus }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, sign: self.sign.flip() }
    }

    /// True when `self · other` is an inverse pair.
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// Ordered set of distinct generator names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    if name == "e" {
        return false; // reserved for the empty word
    }
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Alphabet, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(WordError::InvalidName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(WordError::DuplicateGenerator(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// All letters in a fixed scan order: generator index ascending,
    /// positive before negative.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).flat_map(|g| [Letter::pos(g), Letter::neg(g)])
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if stack.last().is_some_and(|&top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(rhs.letters.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        if k < 0 {
            return self.inverse().pow(-k);
        }
        let mut out = Word::empty();
        for _ in 0..k {
            out = out.concat(self);
        }
        out
    }

    /// Signed count of occurrences of a generator.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.sign.as_i64())
            .sum()
    }

    /// Exponent vector over an alphabet of `k` generators.
    pub fn exponent_vector(&self, k: usize) -> Vec<i64> {
        let mut v = vec![0i64; k];
        for l in &self.letters {
            v[l.gen] += l.sign.as_i64();
        }
        v
    }

    /// Largest generator index occurring, if any.
    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn min_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).min()
    }

    /// Number of letter pairs cancelled when forming `self · rhs`.
    pub fn cancellation_with(&self, rhs: &Word) -> usize {
        let mut c = 0;
        let max = self.len().min(rhs.len());
        while c < max && self.letters[self.len() - 1 - c].cancels(rhs.letters[c]) {
            c += 1;
        }
        c
    }

    /// Longest common prefix length with another word.
    pub fn common_prefix_len(&self, rhs: &Word) -> usize {
        self.letters
            .iter()
            .zip(rhs.letters.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Remap generator indices.
    pub fn map_gens(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::reduce(self.letters.iter().map(|l| Letter { gen: f(l.gen), sign: l.sign }))
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word::reduce(iter)
    }
}

/// A cyclically reduced word considered up to rotation.
///
/// Equality is rotation equality, which in a free group is conjugacy of the
/// underlying elements.
#[derive(Debug, Clone)]
pub struct CyclicWord {
    core: Word,
}

impl CyclicWord {
    /// Cyclically reduce `w`, returning the core and a conjugator with
    /// `w = conjugator · core · conjugator^{-1}`.
    pub fn reduce(w: &Word) -> (CyclicWord, Word) {
        let mut letters = w.letters().to_vec();
        let mut conj = Vec::new();
        while letters.len() >= 2 && letters[0].cancels(*letters.last().unwrap()) {
            conj.push(letters[0]);
            letters.pop();
            letters.remove(0);
        }
        (CyclicWord { core: Word { letters } }, Word { letters: conj })
    }

    /// Wrap a word that is already cyclically reduced.
    pub fn from_reduced(w: Word) -> CyclicWord {
        debug_assert!(
            w.len() < 2 || !w.first().unwrap().cancels(w.last().unwrap()),
            "word is not cyclically reduced"
        );
        CyclicWord { core: w }
    }

    pub fn core(&self) -> &Word {
        &self.core
    }

    pub fn len(&self) -> usize {
        self.core.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord { core: self.core.inverse() }
    }

    /// The rotation starting at position `i`.
    pub fn rotated(&self, i: usize) -> Word {
        let n = self.core.len();
        if n == 0 {
            return Word::empty();
        }
        let i = i % n;
        let letters = self.core.letters();
        Word { letters: letters[i..].iter().chain(letters[..i].iter()).copied().collect() }
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.core.len().max(1)).map(|i| self.rotated(i))
    }

    /// Index `i` with `other == self.rotated(i)`, if one exists.
    pub fn rotation_of(&self, other: &Word) -> Option<usize> {
        let n = self.core.len();
        if other.len() != n {
            return None;
        }
        if n == 0 {
            return Some(0);
        }
        // search other inside the doubled core
        let doubled: Vec<Letter> =
            self.core.letters().iter().chain(self.core.letters().iter()).copied().collect();
        (0..n).find(|&i| doubled[i..i + n] == *other.letters())
    }

    /// Smallest `p > 0` with `rotated(p) == rotated(0)`; equals the length
    /// exactly when the cyclic word is not a proper power.
    pub fn primitive_period(&self) -> usize {
        let n = self.core.len();
        if n == 0 {
            return 0;
        }
        let letters = self.core.letters();
        (1..=n)
            .find(|&p| {
                n.is_multiple_of(p) && (0..n).all(|i| letters[i] == letters[(i + p) % n])
            })
            .unwrap()
    }

    /// Lexicographically least rotation; a canonical representative.
    pub fn canonical(&self) -> Word {
        self.rotations().min().unwrap_or_else(Word::empty)
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &CyclicWord) -> bool {
        other.rotation_of(&self.rotated(0)).is_some()
            || (self.is_empty() && other.is_empty())
    }
}

impl Eq for CyclicWord {}

/// Conjugacy test for free-group elements: cyclic reductions must be
/// rotations of each other.
pub fn is_conjugate(u: &Word, v: &Word) -> bool {
    let (cu, _) = CyclicWord::reduce(u);
    let (cv, _) = CyclicWord::reduce(v);
    cu == cv
}

/// A generator-to-word assignment on a free group.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism {
    domain: Alphabet,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(domain: Alphabet, images: Vec<Word>) -> Result<Endomorphism, WordError> {
        if images.len() != domain.len() {
            return Err(WordError::MissingImage(
                domain
                    .names()
                    .get(images.len())
                    .cloned()
                    .unwrap_or_else(|| "?".into()),
            ));
        }
        let k = domain.len();
        for w in &images {
            if let Some(g) = w.max_gen() {
                if g >= k {
                    return Err(WordError::GeneratorOutOfRange { gen: g, size: k });
                }
            }
        }
        Ok(Endomorphism { domain, images })
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn rank(&self) -> usize {
        self.domain.len()
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply_letter(&self, l: Letter) -> Word {
        match l.sign {
            Sign::Plus => self.images[l.gen].clone(),
            Sign::Minus => self.images[l.gen].inverse(),
        }
    }

    /// Reduced image of a word; the homomorphism applied letterwise.
    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        let k = self.domain.len();
        if let Some(g) = w.max_gen() {
            if g >= k {
                return Err(WordError::GeneratorOutOfRange { gen: g, size: k });
            }
        }
        let mut out = Vec::with_capacity(w.len() * 2);
        for &l in w.letters() {
            out.extend_from_slice(self.apply_letter(l).letters());
        }
        Ok(Word::reduce(out))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Endomorphism) -> Result<Endomorphism, WordError> {
        if self.domain != inner.domain {
            return Err(WordError::DomainMismatch);
        }
        let images = inner
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        Endomorphism::new(self.domain.clone(), images)
    }

    /// `f^i(w)` with `f^0 = id`.
    pub fn power_iterate(&self, i: u32, w: &Word) -> Result<Word, WordError> {
        let mut out = w.clone();
        for _ in 0..i {
            out = self.apply(&out)?;
        }
        Ok(out)
    }

    /// Common image length when all generator images have one, else `None`.
    pub fn uniform_image_length(&self) -> Option<usize> {
        let m = self.images.first()?.len();
        self.images.iter().all(|w| w.len() == m).then_some(m)
    }

    /// Matrix of the induced map on the abelianization; entry `[p][q]` is
    /// the exponent sum of generator `p` in the image of generator `q`.
    pub fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        let k = self.domain.len();
        let mut m = vec![vec![0i64; k]; k];
        for (q, w) in self.images.iter().enumerate() {
            for (p, row) in m.iter_mut().enumerate() {
                row[q] = w.exponent_sum(p);
            }
        }
        m
    }

    /// Parse assignments like `a -> a b, b -> b a`. The domain is the list
    /// of left-hand sides in order.
    pub fn parse(text: &str) -> Result<Endomorphism, WordError> {
        let mut names = Vec::new();
        let mut rhs = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (lhs, image) = part.split_once("->").ok_or_else(|| WordError::Parse {
                at: 0,
                message: format!("expected `gen -> word` in `{part}`"),
            })?;
            names.push(lhs.trim().to_string());
            rhs.push(image.trim().to_string());
        }
        let domain = Alphabet::new(names)?;
        let images = rhs
            .iter()
            .map(|t| parse_word(&domain, t))
            .collect::<Result<Vec<_>, _>>()?;
        Endomorphism::new(domain, images)
    }

    pub fn display(&self) -> String {
        self.domain
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| format!("{n} -> {}", format_word(&self.domain, &self.images[i])))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Parse the shared word syntax: whitespace-separated `name` or `name^k`
/// tokens with `k` a nonzero integer; `e` is the empty word.
pub fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word, WordError> {
    let mut letters = Vec::new();
    let mut offset = 0usize;
    for token in text.split_whitespace() {
        let at = text[offset..].find(token).map(|p| p + offset).unwrap_or(offset);
        offset = at + token.len();
        if token == "e" {
            continue;
        }
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => {
                let exp: i64 = e.parse().map_err(|_| WordError::Parse {
                    at,
                    message: format!("bad exponent `{e}`"),
                })?;
                if exp == 0 {
                    return Err(WordError::Parse {
                        at,
                        message: "exponent must be nonzero".into(),
                    });
                }
                (n, exp)
            }
            None => (token, 1),
        };
        let gen = alphabet
            .index_of(name)
            .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
        let sign = if exp > 0 { Sign::Plus } else { Sign::Minus };
        for _ in 0..exp.unsigned_abs() {
            letters.push(Letter { gen, sign });
        }
    }
    Ok(Word::reduce(letters))
}

/// Render a word in the shared syntax, collapsing runs into `name^k`.
pub fn format_word(alphabet: &Alphabet, w: &Word) -> String {
    if w.is_empty() {
        return "e".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    let letters = w.letters();
    while i < letters.len() {
        let l = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == l {
            run += 1;
        }
        let k = l.sign.as_i64() * run as i64;
        let name = alphabet.name(l.gen);
        if k == 1 {
            parts.push(name.to_string());
        } else {
            parts.push(format!("{name}^{k}"));
        }
        i += run;
    }
    parts.join(" ")
}

/// Helper for visible diagnostics when no alphabet is at hand: indices with
/// a prime marking inverses.
pub fn debug_word(w: &Word) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.letters()
        .iter()
        .map(|l| match l.sign {
            Sign::Plus => format!("g{}", l.gen),
            Sign::Minus => format!("g{}'", l.gen),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", debug_word(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn at() -> Alphabet {
        Alphabet::new(["a", "t"]).unwrap()
    }

    fn w(alpha: &Alphabet, text: &str) -> Word {
        parse_word(alpha, text).unwrap()
    }

    #[test]
    fn reduce_cancels_inverse_pair() {
        let a = at();
        assert_eq!(w(&a, "a a^-1"), Word::empty());
        assert_eq!(w(&a, "t a a^-1 t"), w(&a, "t t"));
    }

    #[test]
    fn reduce_word_times_inverse_is_identity() {
        let a = ab();
        let u = w(&a, "a b b^-1 a^-1");
        assert!(u.is_empty());
        let sapir_a = w(&a, "a b");
        assert!(sapir_a.concat(&sapir_a.inverse()).is_empty());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let a = ab();
        let (core, conj) = CyclicWord::reduce(&w(&a, "a b a^-1"));
        assert_eq!(core.core(), &w(&a, "b"));
        assert_eq!(conj, w(&a, "a"));

        let alpha = at();
        let v = w(&alpha, "t a t^-1 a^-2");
        let (core, conj) = CyclicWord::reduce(&v);
        assert_eq!(core.core(), &v);
        assert!(conj.is_empty());

        let (core, conj) = CyclicWord::reduce(&Word::empty());
        assert!(core.is_empty() && conj.is_empty());
    }

    #[test]
    fn exponent_sums() {
        let alpha = at();
        let r = w(&alpha, "t a t^-1 a^-2");
        assert_eq!(r.exponent_sum(1), 0);
        assert_eq!(r.exponent_sum(0), -1);
        assert_eq!(Word::empty().exponent_sum(0), 0);
    }

    #[test]
    fn apply_endomorphism() {
        let theta = Endomorphism::parse("a -> a b, b -> b a").unwrap();
        let a = ab();
        assert_eq!(theta.apply(&w(&a, "a b")).unwrap(), w(&a, "a b b a"));
        // second iterate of a under the doubling map
        let sq = theta.compose(&theta).unwrap();
        assert_eq!(sq.image(0), &w(&a, "a b b a"));

        let phi = Endomorphism::parse("a -> a b^-1 a^2 b, b -> b a^-1 b^2 a").unwrap();
        assert_eq!(phi.image(0), &w(&a, "a b^-1 a a b"));
        let phi2a = phi.power_iterate(2, &w(&a, "a")).unwrap();
        let prefix: Word = phi2a.letters()[..10].iter().copied().collect();
        assert_eq!(prefix, w(&a, "a b^-1 a a b a^-1 b^-1 b^-1 a b^-1"));
    }

    #[test]
    fn conjugacy_examples() {
        let a = ab();
        assert!(is_conjugate(&w(&a, "a b a^-1"), &w(&a, "b")));
        assert!(!is_conjugate(&w(&a, "a"), &w(&a, "b")));
        // abba vs abab: enumerate rotations by hand and none match
        assert!(!is_conjugate(&w(&a, "a b b a"), &w(&a, "a b a b")));
    }

    #[test]
    fn power_iterate_identity_case() {
        let phi = Endomorphism::parse("a -> a b^-1 a^2 b, b -> b a^-1 b^2 a").unwrap();
        let a = ab();
        let v = w(&a, "a b^-1");
        assert_eq!(phi.power_iterate(0, &v).unwrap(), v);
    }

    #[test]
    fn immersion_length_multiplies() {
        let theta = Endomorphism::parse("a -> a b, b -> b a").unwrap();
        let a = ab();
        let v = w(&a, "a b a b^-1");
        for i in 0..5u32 {
            let img = theta.power_iterate(i, &v).unwrap();
            assert_eq!(img.len(), 2usize.pow(i) * v.len());
        }
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["e"]).is_err());
        assert!(Alphabet::new(["1x"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn word_roundtrip_format() {
        let alpha = at();
        for text in ["t^8 a^-1 t^-8 a^-1", "a", "e", "t a t^-1 a^-2"] {
            let v = w(&alpha, text);
            assert_eq!(parse_word(&alpha, &format_word(&alpha, &v)).unwrap(), v);
        }
    }

    #[test]
    fn rotation_equality() {
        let a = ab();
        let (u, _) = CyclicWord::reduce(&w(&a, "a b a b b"));
        let (v, _) = CyclicWord::reduce(&w(&a, "b b a b a"));
        assert_eq!(u, v);
        let (x, _) = CyclicWord::reduce(&w(&a, "a b"));
        let (y, _) = CyclicWord::reduce(&w(&a, "b a"));
        assert_eq!(x, y);
    }

    #[test]
    fn primitive_period() {
        let a = ab();
        let (p, _) = CyclicWord::reduce(&w(&a, "a b a b"));
        assert_eq!(p.primitive_period(), 2);
        let (q, _) = CyclicWord::reduce(&w(&a, "a^4"));
        assert_eq!(q.primitive_period(), 1);
        let (r, _) = CyclicWord::reduce(&w(&a, "a b"));
        assert_eq!(r.primitive_period(), 2);
    }

    fn arb_letter(k: usize) -> impl Strategy<Value = Letter> {
        (0..k, prop::bool::ANY).prop_map(|(g, s)| Letter {
            gen: g,
            sign: if s { Sign::Plus } else { Sign::Minus },
        })
    }

    fn arb_raw(k: usize, n: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(arb_letter(k), 0..n)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in arb_raw(3, 40)) {
            let once = Word::reduce(raw.clone());
            let twice = Word::reduce(once.letters().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn product_length_and_parity(raw1 in arb_raw(3, 30), raw2 in arb_raw(3, 30)) {
            let u = Word::reduce(raw1);
            let v = Word::reduce(raw2);
            let p = u.concat(&v);
            prop_assert!(p.len() <= u.len() + v.len());
            prop_assert_eq!(p.len() % 2, (u.len() + v.len()) % 2);
        }

        #[test]
        fn conjugates_share_exponent_sums(raw in arb_raw(3, 20), conj in arb_raw(3, 10)) {
            let u = Word::reduce(raw);
            let c = Word::reduce(conj);
            let v = c.concat(&u).concat(&c.inverse());
            prop_assert!(is_conjugate(&u, &v));
            for g in 0..3 {
                prop_assert_eq!(u.exponent_sum(g), v.exponent_sum(g));
            }
        }

        #[test]
        fn cyclic_reduce_factorization(raw in arb_raw(3, 30)) {
            let u = Word::reduce(raw);
            let (core, conj) = CyclicWord::reduce(&u);
            let rebuilt = conj.concat(core.core()).concat(&conj.inverse());
            prop_assert_eq!(rebuilt, u);
            if core.len() >= 2 {
                let first = core.core().first().unwrap();
                let last = core.core().last().unwrap();
                prop_assert!(!first.cancels(last));
            }
        }

        #[test]
        fn iterate_adds(raw in arb_raw(2, 12), i in 0u32..3, j in 0u32..3) {
            let theta = Endomorphism::parse("a -> a b, b -> b a").unwrap();
            let v = Word::reduce(raw);
            let lhs = theta.power_iterate(i + j, &v).unwrap();
            let rhs = theta.power_iterate(i, &theta.power_iterate(j, &v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

//! Named endomorphisms and presentations used across tests, examples and
//! the command line.

use crate::presentation::{
    indexed_relator_presentation, zigzag_relator, Presentation,
};
use crate::word::Endomorphism;

/// The Sapir endomorphism: `a -> a b`, `b -> b a`. A length-2 immersion.
pub fn sapir() -> Endomorphism {
    Endomorphism::parse("a -> a b, b -> b a").unwrap()
}

/// The length-5 immersion `a -> a b^-1 a^2 b`, `b -> b a^-1 b^2 a`. Its
/// abelianization is three times the identity while words grow by a factor
/// of five, which pins down the exponent filter completely.
pub fn quintic() -> Endomorphism {
    Endomorphism::parse("a -> a b^-1 a^2 b, b -> b a^-1 b^2 a").unwrap()
}

/// The rank-one doubling map `a -> a^2`.
pub fn doubling() -> Endomorphism {
    Endomorphism::parse("a -> a^2").unwrap()
}

/// `< a, t | t a t^-1 a^-k >`: the solvable one-relator family.
pub fn power_conjugation_presentation(k: i64) -> Presentation {
    Presentation::parse(&format!("< a, t | t a t^-1 a^{} >", -k)).unwrap()
}

/// `< a, t | t a t^-1 a^-1 >`: the flat torus.
pub fn torus_presentation() -> Presentation {
    Presentation::parse("< a, t | t a t^-1 a^-1 >").unwrap()
}

/// The two-generator group presented by the expanded zigzag relator of even
/// index `l`, generators listed base first.
pub fn zigzag_presentation(l: usize) -> Presentation {
    indexed_relator_presentation(&zigzag_relator(l).unwrap(), "a", "t").unwrap()
}

/// Expanded zigzag relator for index 8 in the shared word syntax: 116
/// letters over the two-generator alphabet.
pub const ZIGZAG_L8_EXPANDED: &str = "t^8 a^-1 t^-8 a^-1 t^7 a t^-6 a t^5 a t^-4 a t^3 a t^-2 a t a t^-4 a^-1 t^8 a t^-8 a t^7 a^-1 t^-6 a^-1 t^5 a^-1 t^-4 a^-1 t^3 a^-1 t^-2 a^-1 t a^-1 t^-4 a";

/// Endomorphism samples by name, as accepted by the command line.
pub fn endomorphism_by_name(name: &str) -> Option<Endomorphism> {
    match name {
        "sapir" => Some(sapir()),
        "quintic" => Some(quintic()),
        "doubling" => Some(doubling()),
        _ => None,
    }
}

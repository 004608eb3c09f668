//! Free-group word algebra: reduction, cyclic reduction, conjugacy and
//! endomorphism application.
//!
//! ```bash
//! cargo run -p cat0 --example words
//! ```

use cat0::word::{format_word, is_conjugate, parse_word, Alphabet, CyclicWord, Endomorphism};

fn main() {
    let alpha = Alphabet::new(["a", "b"]).unwrap();
    let w = parse_word(&alpha, "a b b^-1 a a^-1 b").unwrap();
    println!("reduced: {}", format_word(&alpha, &w));

    let v = parse_word(&alpha, "a b a b^-1 a^-1").unwrap();
    let (core, conjugator) = CyclicWord::reduce(&v);
    println!(
        "cyclic core of {}: {} with conjugator {}",
        format_word(&alpha, &v),
        format_word(&alpha, core.core()),
        format_word(&alpha, &conjugator),
    );

    let u1 = parse_word(&alpha, "a b a^-1").unwrap();
    let u2 = parse_word(&alpha, "b").unwrap();
    println!(
        "conjugate({}, {}) = {}",
        format_word(&alpha, &u1),
        format_word(&alpha, &u2),
        is_conjugate(&u1, &u2)
    );

    let theta = Endomorphism::parse("a -> a b, b -> b a").unwrap();
    let img = theta.apply(&parse_word(&alpha, "a b").unwrap()).unwrap();
    println!("doubling image of a b: {}", format_word(&alpha, &img));
    let third = theta.power_iterate(3, &parse_word(&alpha, "a").unwrap()).unwrap();
    println!("third iterate of a has {} letters", third.len());
}

//! Immersion checks and the bounded search for iterates conjugate to
//! proper powers. An empty search is evidence, never a proof.
//!
//! ```bash
//! cargo run -p cat0 --example periodic_search
//! ```

use cat0::hnn::{is_immersion, periodic_conjugacy_search, periodic_exponent_filter};
use cat0::samples;
use cat0::word::format_word;

fn main() {
    for (label, f, max_len, max_iter) in [
        ("sapir", samples::sapir(), 8, 3u32),
        ("quintic", samples::quintic(), 6, 2),
        ("doubling", samples::doubling(), 2, 2),
    ] {
        println!("{label}: {}", f.display());
        println!("  immersion: {}", is_immersion(&f).is_immersion);
        let filter = periodic_exponent_filter(&f, 1).unwrap();
        println!(
            "  exponent constraint at depth 1: {}",
            if filter.is_trivial() { "only the zero vector".to_string() } else { format!("{} basis vector(s)", filter.basis.len()) }
        );
        match periodic_conjugacy_search(&f, max_len, max_iter).unwrap() {
            Some(w) => println!(
                "  witness: {} with iterate {} conjugate to power {}",
                format_word(f.domain(), &w.word),
                w.i,
                w.j
            ),
            None => println!("  no witness up to length {max_len}, depth {max_iter}"),
        }
    }
}

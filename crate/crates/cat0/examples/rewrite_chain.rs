//! Eliminating a zero-exponent generator: rewrite a two-generator relator
//! over conjugates of the other generator and expand back.
//!
//! ```bash
//! cargo run -p cat0 --example rewrite_chain
//! ```

use cat0::presentation::{expand_to_at, t_rewrite, Presentation};
use cat0::word::{format_word, is_conjugate};

fn main() {
    for text in [
        "< a, t | t a t^-1 a^-2 >",
        "< a, t | t^2 a t^-2 a^-1 t a t^-1 a^-1 >",
    ] {
        let p = Presentation::parse(text).unwrap();
        let rw = t_rewrite(&p).unwrap();
        let conj = rw.conjugate_alphabet();
        println!("{text}");
        println!("  eliminated {} in favour of conjugates of {}", rw.stable, rw.base);
        println!("  indexed word: {}", format_word(&conj, &rw.word));

        let expanded = expand_to_at(&rw.word);
        let aligned = if p.alphabet().name(1) == rw.stable {
            expanded
        } else {
            expanded.map_gens(|g| 1 - g)
        };
        println!(
            "  expansion is conjugate to the relator: {}",
            is_conjugate(&aligned, &p.relators()[0].original)
        );
    }
}

//! Piece statistics and the metric small cancellation conditions, with the
//! independent cancellation oracle alongside.
//!
//! ```bash
//! cargo run -p cat0 --example pieces
//! ```

use cat0::cancel::{max_piece, piece_oracle};
use cat0::presentation::Presentation;
use cat0::samples;

fn main() {
    let long = format!("< a, t | {} >", samples::ZIGZAG_L8_EXPANDED);
    for text in [long.as_str(), "< a, b | a b a^-1 b^-1 >", "< a | a^4 >"] {
        let p = Presentation::parse(text).unwrap();
        let report = max_piece(&p);
        let oracle = piece_oracle(&p).unwrap();
        let shown = if text.len() > 60 { "the 116-letter relator group" } else { text };
        println!("{shown}");
        println!("  max piece: {} (oracle: {})", report.max_piece, oracle.max_piece);
        for (i, r) in report.per_relator.iter().enumerate() {
            println!("  relator {i}: piece {} of length {}", r.max_piece, r.length);
        }
        println!("  C'(1/6): {}", report.satisfies_c_prime(1, 6));
        println!("  C'(1/7): {}", report.satisfies_c_prime(1, 7));
        if let Some(cp) = report.c_p {
            println!("  fewest pieces covering a relator: {cp}");
        }
    }
}

//! Curvature of square presentations via subword conditions and link
//! girth, including a DOT rendering of the link graph.
//!
//! ```bash
//! cargo run -p cat0 --example npc_link
//! ```

use cat0::npc::{build_link, check_condition_1, check_condition_2, girth, link_to_dot, npc_check, SquarePresentation};
use cat0::presentation::Presentation;

fn main() {
    for text in ["< a, b | a b a^-1 b^-1 >", "< a, b | a b a b >"] {
        let p = Presentation::parse(text).unwrap();
        let square = SquarePresentation::new(&p).unwrap();
        let c1 = check_condition_1(&square);
        let c2 = check_condition_2(&square);
        let g = girth(&build_link(&square));
        let full = npc_check(&p).unwrap();
        println!("{text}");
        println!("  no repeated pair: {}", c1.pass);
        println!("  no cancelling triple: {}", c2.pass);
        println!("  link girth: {g}");
        println!("  verdict: {}", if full.pass { "non-positively curved" } else { "curved" });
    }

    let torus = Presentation::parse("< a, b | a b a^-1 b^-1 >").unwrap();
    let square = SquarePresentation::new(&torus).unwrap();
    println!("\nlink graph of the torus in DOT:\n{}", link_to_dot(&build_link(&square), &torus));
}

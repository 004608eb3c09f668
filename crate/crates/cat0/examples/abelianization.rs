//! Free rank and torsion of presentation abelianizations.
//!
//! ```bash
//! cargo run -p cat0 --example abelianization
//! ```

use cat0::presentation::{mapping_torus, Presentation};
use cat0::samples;

fn show(label: &str, p: &Presentation) {
    let ab = p.abelianization();
    let torsion: Vec<String> = ab.torsion.iter().map(|d| d.to_string()).collect();
    println!("{label}: rank {} torsion [{}]", ab.betti, torsion.join(", "));
}

fn main() {
    show("free group of rank 2     ", &Presentation::parse("< a, b | >").unwrap());
    show("flat torus               ", &samples::torus_presentation());
    show("long-relator zigzag group", &samples::zigzag_presentation(8));
    show("sapir mapping torus      ", &mapping_torus(&samples::sapir(), "t").unwrap());
    show("quintic mapping torus    ", &mapping_torus(&samples::quintic(), "t").unwrap());
}

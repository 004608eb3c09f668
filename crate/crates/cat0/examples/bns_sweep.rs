//! Relator walk, convex hull, and character classification for the
//! long-relator group: which directions fiber and which only ascend.
//!
//! ```bash
//! cargo run -p cat0 --example bns_sweep
//! ```

use cat0::bns::{hull, sweep, walk, PairVerdict};
use cat0::samples;

fn main() {
    let p = samples::zigzag_presentation(8);
    let w = walk(&p).unwrap();
    println!("walk: {} points, closed: {}", w.points.len(), w.closed());

    let h = hull(&w);
    println!("hull vertices and visit counts:");
    for (v, m) in h.vertices.iter().zip(h.multiplicity.iter()) {
        println!("  {v:?} visited {m} time(s)");
    }

    println!("\nprimitive ray pairs with coordinates up to 3:");
    for c in sweep(&p, 3).unwrap() {
        let mark = match c.verdict {
            PairVerdict::StrictlyAscending => "  <- ascending only",
            PairVerdict::Neither => "  <- neither direction",
            PairVerdict::Fibered => "",
        };
        println!(
            "  ({:>2},{:>2})  {}{}",
            c.chi.values[0], c.chi.values[1], c.verdict, mark
        );
    }
}

//! The anchored-template squarification: from the 116-letter relator to an
//! all-length-4 presentation whose complex is non-positively curved.
//!
//! ```bash
//! cargo run -p cat0 --example squarify_template
//! ```

use cat0::npc;
use cat0::presentation::{expand_to_at, zigzag_relator, RewriteResult};
use cat0::squarify::{template_squarify, verify_substitutions};

fn main() {
    let l = 8;
    let indexed = zigzag_relator(l).unwrap();
    let expanded = expand_to_at(&indexed);
    println!("zigzag index {l}: {} letters over the conjugate chain", indexed.len());
    println!("expanded two-generator relator: {} letters", expanded.len());

    let rw = RewriteResult::from_parts(l, indexed, "t", "a").unwrap();
    let sq = template_squarify(&rw).unwrap();
    println!(
        "squarified: {} generators, {} relators, all of length 4",
        sq.presentation.alphabet().len(),
        sq.presentation.relator_count()
    );
    println!("cut schedule: {:?}", sq.schedule[0].cuts);
    println!("back-substitution recovers the source: {}", verify_substitutions(&sq).ok);

    let report = npc::npc_check(&sq.presentation).unwrap();
    let girth = report.girth.map(|g| g.to_string()).unwrap_or_default();
    println!("curvature check: {} (link girth {girth})", if report.pass { "pass" } else { "fail" });
}

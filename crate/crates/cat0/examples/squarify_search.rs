//! Schedule search over an arbitrary even presentation: the quintic
//! mapping torus squarifies into a non-positively curved complex; relators
//! of odd length are rejected outright.
//!
//! ```bash
//! cargo run -p cat0 --example squarify_search
//! ```

use cat0::npc;
use cat0::presentation::mapping_torus;
use cat0::samples;
use cat0::squarify::{general_squarify_search, SquarifyError, DEFAULT_LEAF_BUDGET};

fn main() {
    let torus = mapping_torus(&samples::quintic(), "t").unwrap();
    println!("quintic mapping torus: {}", torus.format());
    let outcome = general_squarify_search(&torus, DEFAULT_LEAF_BUDGET).unwrap();
    println!("schedules examined: {}", outcome.leaves_visited);
    match outcome.found {
        Some(sq) => {
            println!("found: {}", sq.presentation.format());
            for rs in &sq.schedule {
                println!("  relator {} cuts {:?}", rs.relator, rs.cuts);
            }
            let report = npc::npc_check(&sq.presentation).unwrap();
            println!("curvature: {}", if report.pass { "pass" } else { "fail" });
        }
        None => println!("no squarification inside the budget"),
    }

    let sapir_torus = mapping_torus(&samples::sapir(), "t").unwrap();
    match general_squarify_search(&sapir_torus, DEFAULT_LEAF_BUDGET) {
        Err(SquarifyError::OddRelator { relator, length }) => {
            println!("\nsapir torus: relator {relator} has odd length {length}, no schedule exists");
        }
        other => println!("\nunexpected outcome for the sapir torus: {other:?}"),
    }
}

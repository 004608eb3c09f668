//! Random endomorphism experiment: how often the mapping torus of a random
//! length-n endomorphism satisfies the metric small cancellation
//! conditions, as n grows.
//!
//! ```bash
//! cargo run -p cat0 --example genericity
//! ```

use cat0::hnn::genericity_experiment;

fn main() {
    let seed = 2026;
    let trials = 100;
    println!("k = 2, {trials} trials per image length, seed {seed}");
    println!("{:>6} {:>10} {:>10} {:>14}", "n", "C'(1/6)", "C'(1/7)", "piece gap > 2");
    for n in [6usize, 12, 25, 50, 100] {
        let r = genericity_experiment(2, n, trials, seed).unwrap();
        println!(
            "{n:>6} {:>10} {:>10} {:>14}",
            format!("{}/{}", r.count_cprime16, trials),
            format!("{}/{}", r.count_cprime17, trials),
            r.piece_gap_violations
        );
    }
}

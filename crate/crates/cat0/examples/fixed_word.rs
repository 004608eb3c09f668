//! The semi-infinite fixed word of a prefix-preserving immersion and its
//! prefix exponent scan.
//!
//! ```bash
//! cargo run -p cat0 --example fixed_word
//! ```

use cat0::hnn::{prefix_exponent_scan, FixedWordStream};
use cat0::samples;
use cat0::word::{format_word, Letter};

fn main() {
    let phi = samples::quintic();
    let alpha = phi.domain().clone();
    let mut stream = FixedWordStream::new(phi, Letter::pos(0)).unwrap();

    let head = stream.prefix(25).unwrap();
    println!("first 25 letters: {}", format_word(&alpha, &head));

    for i in 1..=4u32 {
        let len = 5usize.pow(i);
        let p = stream.prefix(len).unwrap();
        println!("prefix of length 5^{i} = {len} is iterate {i} of the seed ({} letters)", p.len());
    }

    let report = prefix_exponent_scan(&mut stream, 15_625, 0).unwrap();
    println!(
        "exponent of the first generator over prefixes up to 15625: range [{}, {}], zeros: {}",
        report.min,
        report.max,
        report.zero_positions.len()
    );
}

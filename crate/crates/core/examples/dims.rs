//! Prints the size of the linear system and the real dimension of each
//! graded component of the built-in model, with the named fields it contains.
//!
//! `cargo run --release -p quadric-core --example dims -- 6`

use std::time::Instant;

use quadric_core::autsolver::{build_system, graded_component};
use quadric_core::{example_fields, QuadricModel};

fn main() {
    let m = QuadricModel::example();
    let max: i32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for mu in -2..=max {
        let t = Instant::now();
        let (layout, sys) = build_system(&m, mu);
        let built = t.elapsed();
        let c = graded_component(&m, mu);
        let named: Vec<&str> = example_fields()
            .into_iter()
            .filter(|(_, v)| c.contains(v))
            .map(|(k, _)| k)
            .collect();
        println!(
            "mu={mu} unknowns={} rows={} dim={} build={:?} total={:?} contains={named:?}",
            layout.num_unknowns(),
            sys.nrows(),
            c.real_dimension,
            built,
            t.elapsed()
        );
    }
}

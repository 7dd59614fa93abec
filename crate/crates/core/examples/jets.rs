//! Searches the built-in model for automorphism fields with vanishing jets.

use quadric_core::{jet_counterexample, QuadricModel};

fn main() {
    let m = QuadricModel::example();
    for (k, w) in [(2, 2), (2, 3), (2, 4), (3, 6), (0, 0)] {
        match jet_counterexample(&m, k, w) {
            Some(v) => println!(
                "k={k} W={w}: weight {:?} order {:?}: {v}",
                v.weight(),
                v.vanishing_order()
            ),
            None => println!("k={k} W={w}: none"),
        }
    }
}

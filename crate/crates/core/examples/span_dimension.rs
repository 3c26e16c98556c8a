//! Rank of the local subspace generated from a witness, as r grows.
use endonet::catalog::lookup;
use endonet::witness::{span_dimension, witness_pair_with, BumpFamily, WitnessOptions};

fn main() {
    let spec = lookup("translation_1").unwrap().spec;
    let opts = WitnessOptions { n_half: 512, ..Default::default() };
    let w = witness_pair_with(&spec, 0.2, 0.5, &opts).unwrap();
    let family = BumpFamily::random(64, 2.0, 5);
    for r in [0.8, 1.0, 1.5, 2.0, 3.0] {
        let s = span_dimension(&w, r, &family).unwrap();
        println!("r = {r:.1}: rank {} of {} generators", s.rank, s.generators);
    }
}

//! Invariant masses in the tensor square of a mass-m₀ representation.
use endonet::reps::tensor_square_mass_spectrum;

fn main() {
    let grid: Vec<f64> = (0..120).map(|k| 0.05 * (k as f64 * 0.05).exp()).collect();
    let r = tensor_square_mass_spectrum(1.0, &grid, 12).unwrap();
    println!("min {} at {:?}, max {:.3}", r.min, r.argmin, r.max);
    for (lo, hi, n) in r.histogram {
        println!("[{lo:8.3}, {hi:8.3})  {n}");
    }
}

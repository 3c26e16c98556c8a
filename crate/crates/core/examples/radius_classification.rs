//! One- and two-dimensional localization radii of the catalog entries.
use endonet::catalog::catalog;
use endonet::radius::{classify_1d, classify_2d, natural_mass};

fn main() {
    println!("{:<20} {:<28} {:<28}", "entry", "1D", "2D");
    for e in catalog() {
        let one = classify_1d(&e.spec).unwrap();
        let two = classify_2d(&e.spec, natural_mass(&e.spec)).unwrap();
        println!("{:<20} {:<28} {:<28}", e.name, format!("{:?}", one.value), format!("{:?}", two.value));
        println!("{:<20} rule: {}", "", one.rule);
    }
}

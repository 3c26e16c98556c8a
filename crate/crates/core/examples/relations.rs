//! Sub-additivity and the 2D bound over all catalog pairs.
use endonet::catalog::named_specs;
use endonet::radius::relations_suite;

fn main() {
    let r = relations_suite(&named_specs()).unwrap();
    for c in r.checks.iter().filter(|c| c.relation != "subadditivity").chain(r.checks.iter().take(6)) {
        println!("{:<14} {:<40} {:?} in [{}, {}] ok={}", c.relation, format!("{} / {}", c.lhs, c.rhs), c.value, c.bound_low, c.bound_high, c.ok);
    }
    println!("{} checks, {} skipped, {} violations", r.checks.len(), r.skipped, r.violations);
}

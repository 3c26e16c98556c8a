//! Named built-in inner functions covering every classification branch.

use num_complex::Complex64;

use crate::inner_fn::InnerFunctionSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: InnerFunctionSpec,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let i = |y: f64| Complex64::new(0.0, y);
    let entry = |name, description, spec| CatalogEntry { name, description, spec };
    vec![
        entry("identity", "phi = 1", InnerFunctionSpec::identity()),
        entry("single_zero_i", "Blaschke factor with a zero at i", InnerFunctionSpec::blaschke(vec![i(1.0)])),
        entry(
            "double_zero_i_2i",
            "Blaschke product with zeros at i and 2i",
            InnerFunctionSpec::blaschke(vec![i(1.0), i(2.0)]),
        ),
        entry("translation_1", "exp(ip), x = 1", InnerFunctionSpec::translation(1.0)),
        entry("translation_2", "exp(2ip), x = 2", InnerFunctionSpec::translation(2.0)),
        entry("atom_at_0", "exp(-i/p), unit atom at 0", InnerFunctionSpec::atom(0.0, 1.0)),
        entry("atom_at_1", "unit atom at t = 1", InnerFunctionSpec::atom(1.0, 1.0)),
        entry(
            "sin_ratio_nu_0.25",
            "sin(p/4 - i)/sin(p/4 + i), 64 zeros",
            InnerFunctionSpec::sin_ratio(0.25, 1.0, 64),
        ),
        entry(
            "sin_ratio_nu_0.5",
            "sin(p/2 - i)/sin(p/2 + i), 64 zeros",
            InnerFunctionSpec::sin_ratio(0.5, 1.0, 64),
        ),
        entry("sin_ratio_nu_1", "sin(p - i)/sin(p + i), 64 zeros", InnerFunctionSpec::sin_ratio(1.0, 1.0, 64)),
        entry(
            "gamma_example",
            "zeros n^-2 exp(i/n) and their reflections, m = 2, 400 terms",
            InnerFunctionSpec::gamma_example(2.0, 400, 2.0),
        ),
    ]
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// `(name, spec)` pairs as consumed by the relations suite.
pub fn named_specs() -> Vec<(String, InnerFunctionSpec)> {
    catalog().into_iter().map(|e| (e.name.to_string(), e.spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_fn::validate_and_generate;

    #[test]
    fn names_unique_and_valid() {
        let all = catalog();
        assert_eq!(all.len(), 11);
        for (k, e) in all.iter().enumerate() {
            assert!(all[k + 1..].iter().all(|f| f.name != e.name));
            validate_and_generate(&e.spec).unwrap();
        }
        assert!(lookup("sin_ratio_nu_0.5").is_some());
        assert!(lookup("nope").is_none());
    }
}

use herbrand::suites::SigGen;
use herbrand::text::{formula_from_str, term_from_str};
use herbrand_core::proof::metastability_signature;
use proptest::prelude::*;

fn scope() -> Vec<String> {
    ["x", "y"].iter().map(|s| s.to_string()).collect()
}

proptest! {
    #[test]
    fn formulas_print_and_parse_back(seed in any::<u64>(), bounded in any::<bool>()) {
        let sig = metastability_signature();
        let mut g = SigGen::new(seed, true);
        let phi = g.formula(3, &scope(), bounded);
        let printed = phi.to_string();
        let back = formula_from_str(&sig, &printed).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn terms_print_and_parse_back(seed in any::<u64>()) {
        let sig = metastability_signature();
        let mut g = SigGen::new(seed, true);
        let t = g.term(4, &scope());
        let back = term_from_str(&sig, &t.to_string()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn garbage_is_rejected_not_panicking(s in "[()a-zP0-9 +*<=-]{0,40}") {
        let sig = metastability_signature();
        let _ = formula_from_str(&sig, &s);
        let _ = term_from_str(&sig, &s);
    }
}

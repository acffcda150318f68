use herbrand_core::omega::{embed_symbol, numeral, Term};
use herbrand_core::pr::{default_roster, PrDerivation};
use herbrand_core::proof::metastability_signature;
use herbrand_core::example::default_structure;
use herbrand_core::semantics::eval_direct;
use num_bigint::BigUint;
use proptest::prelude::*;

const SYMBOLS: [(&str, usize); 12] = [
    ("+", 2),
    ("*", 2),
    ("pred", 1),
    ("monus", 2),
    ("max", 2),
    ("min", 2),
    ("sg", 1),
    ("nsg", 1),
    ("select", 3),
    ("cond", 3),
    ("chi_eq", 2),
    ("chi_lt", 2),
];

fn big(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn native(f: &str, a: &[u64]) -> u64 {
    match (f, a) {
        ("+", [x, y]) => x + y,
        ("*", [x, y]) => x * y,
        ("pred", [x]) => x.saturating_sub(1),
        ("monus", [x, y]) => x.saturating_sub(*y),
        ("max", [x, y]) => *x.max(y),
        ("min", [x, y]) => *x.min(y),
        ("sg", [x]) => (*x > 0) as u64,
        ("nsg", [x]) => (*x == 0) as u64,
        ("select", [x, y, c]) => if *c == 0 { *x } else { *y },
        ("cond", [c, x, y]) => if *c == 0 { *x } else { *y },
        ("chi_eq", [x, y]) => (x != y) as u64,
        ("chi_lt", [x, y]) => (x >= y) as u64,
        _ => unreachable!(),
    }
}

proptest! {
    #[test]
    fn jets_agree_with_derivations(i in 0..SYMBOLS.len(), args in prop::collection::vec(0u64..25, 3)) {
        let r = default_roster();
        let (f, n) = SYMBOLS[i];
        let a = &args[..n];
        let want = BigUint::from(native(f, a));
        prop_assert_eq!(r.eval(f, &big(a)).unwrap(), want.clone());
        prop_assert_eq!(r.get(f).unwrap().eval(&big(a)).unwrap(), want);
    }

    #[test]
    fn embedded_symbols_agree_with_jets(i in 0..SYMBOLS.len(), args in prop::collection::vec(0u64..12, 3)) {
        let sig = metastability_signature();
        let m = default_structure(2).unwrap();
        let (f, n) = SYMBOLS[i];
        let a = &args[..n];
        let t = Term::apps(embed_symbol(&sig, f).unwrap(), &a.iter().map(|&x| numeral(x)).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(eval_direct(&m, &t).unwrap(), BigUint::from(native(f, a)));
    }

    #[test]
    fn composition_evaluates_pointwise(x in 0u64..30, y in 0u64..30) {
        let r = default_roster();
        // max(x, y) * (y monus x)
        let p = PrDerivation::proj;
        let d = PrDerivation::comp(
            r.reference("*").unwrap(),
            vec![
                PrDerivation::comp(r.reference("max").unwrap(), vec![p(1, 2), p(2, 2)]),
                PrDerivation::comp(r.reference("monus").unwrap(), vec![p(2, 2), p(1, 2)]),
            ],
        );
        prop_assert_eq!(d.eval(&big(&[x, y])).unwrap(), BigUint::from(x.max(y) * y.saturating_sub(x)));
    }
}

#[test]
fn arity_mismatch_is_an_error() {
    let r = default_roster();
    assert!(r.eval("+", &big(&[1])).is_err());
    assert!(r.eval("nope", &big(&[1])).is_err());
    assert!(PrDerivation::proj(3, 2).validate().is_err());
}

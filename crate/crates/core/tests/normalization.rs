use herbrand_core::example::default_structure;
use herbrand_core::omega::{embed_symbol, numeral, recursor, Term, Var};
use herbrand_core::proof::metastability_signature;
use herbrand_core::rewrite::{check_normal_structure, Budget, Engine};
use herbrand_core::semantics::{eval_direct, eval_normal};
use num_bigint::BigUint;
use proptest::prelude::*;

fn step(i: usize) -> Term {
    let sig = metastability_signature();
    let (v, w) = (Var::nat("v"), Var::nat("w"));
    let (tv, tw) = (Term::var(v.clone()), Term::var(w.clone()));
    let body = match i {
        0 => Term::succ(tw),
        1 => Term::app(Term::constant("g", 1), tw).unwrap(),
        2 => Term::apps(embed_symbol(&sig, "+").unwrap(), &[tv, tw]).unwrap(),
        _ => Term::apps(embed_symbol(&sig, "max").unwrap(), &[tv, tw]).unwrap(),
    };
    Term::lams(&[v, w], body)
}

fn oracle(i: usize, a: u64, n: u64) -> u64 {
    (0..n).fold(a, |t, v| match i {
        0 | 1 => t + 1,
        2 => v + t,
        _ => v.max(t),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Nested recursors: `R_{a,b}(R_{c,d} n)`.
    #[test]
    fn normalization_preserves_value(a in 0u64..8, c in 0u64..8, i in 0usize..4, j in 0usize..4, n in 0u64..8) {
        let m = default_structure(2).unwrap();
        let inner = Term::app(recursor(numeral(c), step(j)).unwrap(), numeral(n)).unwrap();
        let t = Term::app(recursor(numeral(a), step(i)).unwrap(), inner).unwrap();
        let want = BigUint::from(oracle(i, a, oracle(j, c, n)));
        let mut e = Engine::new(Budget::default());
        let nf = e.normalize(&t).unwrap();
        prop_assert_eq!(eval_direct(&m, &t).unwrap(), want.clone());
        prop_assert_eq!(eval_normal(&m, &mut e, &nf).unwrap(), want.clone());
        prop_assert_eq!(eval_direct(&m, &nf).unwrap(), want);
        prop_assert!(check_normal_structure(&nf).is_ok());
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let m = default_structure(2).unwrap();
    let t = Term::app(recursor(numeral(0), step(2)).unwrap(), numeral(60)).unwrap();
    let r = herbrand_core::semantics::eval_omega(&m, &t, Budget { max_steps: 10, max_demand: 1_000 });
    assert!(r.is_err());
    let r = herbrand_core::semantics::eval_omega(&m, &t, Budget::default()).unwrap();
    assert_eq!(r, BigUint::from(oracle(2, 0, 60)));
}

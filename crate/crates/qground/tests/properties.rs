//! Randomized invariants across the public API.

use num_bigint::BigUint;
use num_integer::Roots;
use proptest::prelude::*;

use qground::codec::{decode, encode_formula, encode_term, from_g64, to_g64, Decoded};
use qground::encoders::{build_dag_term, build_tree_term};
use qground::par::{self, Strategy as Exec};
use qground::probe::{find_breaking_point, planted_sentence};
use qground::semantics::{eval_fn, eval_term, Semantics, ThetaInterpretation};
use qground::syntax::{c0, c1, c2, parse_formula, parse_term, var, Recognizer};
use qground::{Formula, Func, Nat, Term};

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(c0()), Just(c1()), Just(c2()), (0u32..3000).prop_map(var)];
    leaf.prop_recursive(5, 48, 2, |inner| {
        (0usize..7, inner.clone(), inner).prop_map(|(k, a, b)| {
            let f = Func::ALL[k];
            let args = if f.arity() == 1 { vec![a] } else { vec![a, b] };
            Term::App(f, args)
        })
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (term(), term()).prop_map(|(a, b)| Formula::eq(a, b)),
        (term(), term()).prop_map(|(a, b)| Formula::leq(a, b)),
        (term(), term()).prop_map(|(a, b)| Formula::Proves(Recognizer::HilbPrf, vec![a, b])),
    ];
    atom.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (0u32..2000, inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            (0u32..2000, inner).prop_map(|(v, b)| Formula::exists(v, b)),
        ]
    })
}

fn big(n: &Nat) -> BigUint {
    n.to_big()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn term_codes_round_trip(t in term()) {
        let codes = encode_term(&t);
        prop_assert!(codes.iter().all(|&c| c < 63));
        prop_assert_eq!(decode(&codes).unwrap(), Decoded::Term(t));
    }

    #[test]
    fn formula_codes_round_trip(f in formula()) {
        let codes = encode_formula(&f);
        prop_assert_eq!(decode(&codes).unwrap(), Decoded::Formula(f));
    }

    #[test]
    fn text_round_trips(t in term(), f in formula()) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn g64_round_trips_any_symbol_stream(codes in proptest::collection::vec(0u8..63, 0..200)) {
        prop_assert_eq!(from_g64(&to_g64(&codes).unwrap()).unwrap(), codes);
    }

    #[test]
    fn truncated_streams_never_decode_to_the_original(f in formula(), cut in 1usize..8) {
        let codes = encode_formula(&f);
        let keep = codes.len().saturating_sub(cut);
        if let Ok(d) = decode(&codes[..keep]) {
            prop_assert_ne!(d, Decoded::Formula(f));
        }
    }

    #[test]
    fn tree_terms_denote_their_number(n in 0u64..1 << 16, seed in any::<u64>()) {
        let t = build_tree_term(n);
        prop_assert_eq!(eval_term(&t, &ThetaInterpretation::doubling()).unwrap(), Nat::from(n));
        prop_assert_eq!(eval_term(&t, &ThetaInterpretation::sample(seed, 40)).unwrap(), Nat::from(n));
    }

    #[test]
    fn dag_terms_denote_their_number(bytes in proptest::collection::vec(any::<u8>(), 1..24), seed in any::<u64>()) {
        let n = Nat::from_big(BigUint::from_bytes_le(&bytes));
        let t = Term::Dag(std::sync::Arc::new(build_dag_term(&n)));
        prop_assert_eq!(eval_term(&t, &ThetaInterpretation::sample(seed, 256)).unwrap(), n);
    }

    #[test]
    fn division_and_roots_bracket(x in 0u64..1 << 40, y in 1u64..1 << 20, k in 1u32..7) {
        let (nx, ny) = (Nat::from(x), Nat::from(y));
        let q = big(&eval_fn(Func::Div, &[nx.clone(), ny.clone()]));
        prop_assert!(&q * y <= BigUint::from(x) && BigUint::from(x) < (q + 1u32) * y);
        let r = big(&eval_fn(Func::Root, &[nx.clone(), Nat::from(u64::from(k))]));
        prop_assert_eq!(r, BigUint::from(x.nth_root(k)));
        let s = big(&eval_fn(Func::Sub, &[nx.clone(), ny.clone()]));
        prop_assert_eq!(s, BigUint::from(x.saturating_sub(y)));
        let c = big(&eval_fn(Func::Count, &[nx.clone(), Nat::from(64)]));
        prop_assert_eq!(c, BigUint::from(x.count_ones()));
    }

    #[test]
    fn strategies_agree(lo in 0u64..1000, len in 0u64..5000, m in 2u64..97) {
        let f = |x: u64| x * x % m;
        prop_assert_eq!(par::map_range(Exec::Sequential, lo..lo + len, f), par::map_range(Exec::Parallel, lo..lo + len, f));
        let hit = |x: u64| x.is_multiple_of(m).then_some(x);
        prop_assert_eq!(
            par::find_first(Exec::Sequential, lo..lo + len, hit),
            par::find_first(Exec::Parallel, lo..lo + len, hit)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planted_breaking_point_is_the_planted_value(k in 0u64..512, seed in any::<u64>()) {
        let sigma = ThetaInterpretation::sample(seed, 24);
        let sem = Semantics::standard(&sigma);
        let bp = find_breaking_point(&planted_sentence(k), 512, &sem).unwrap().unwrap();
        prop_assert_eq!(bp.k, k);
    }
}

//! Proptest generators shared by the crate's unit tests.

use proptest::prelude::*;

use super::{c0, c1, c2, var, Formula, Func, Term};

pub(crate) fn arb_term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just(c0()), Just(c1()), Just(c2())],
        (0u32..40).prop_map(var),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        (0usize..7, inner.clone(), inner).prop_map(|(k, a, b)| {
            let f = Func::ALL[k];
            if f.arity() == 1 {
                Term::App(f, vec![a])
            } else {
                Term::App(f, vec![a, b])
            }
        })
    })
}

pub(crate) fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let atom = (any::<bool>(), arb_term(3), arb_term(3))
        .prop_map(|(eq, a, b)| if eq { Formula::eq(a, b) } else { Formula::leq(a, b) });
    atom.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (0u32..6, inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (0u32..6, inner.clone()).prop_map(|(v, a)| Formula::exists(v, a)),
            (0u32..6, arb_term(2), inner.clone()).prop_map(|(v, t, a)| Formula::forall_le(v, t, a)),
            (0u32..6, arb_term(2), inner).prop_map(|(v, t, a)| Formula::exists_le(v, t, a)),
        ]
    })
}

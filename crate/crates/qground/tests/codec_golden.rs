//! Frozen byte streams for small terms, formulas and proofs. The expected
//! codes were written out by hand from the symbol table.

use num_bigint::BigUint;
use qground::codec::{decode, encode_formula, encode_proof, encode_term, from_g64, godel_number, to_g64, Decoded};
use qground::syntax::{parse_formula, parse_term};

const TERMS: &[(&str, &[u8])] = &[
    ("C0", &[44]),
    ("v0", &[47]),
    ("v5", &[47, 5]),
    ("v40", &[47, 1, 8]),
    ("sub(C1, C0)", &[48, 32, 45, 34, 44, 33]),
    ("theta(C2)", &[54, 32, 46, 33]),
    ("log(v31)", &[52, 32, 47, 31, 33]),
    ("max(C0, count(C1, C2))", &[50, 32, 44, 34, 53, 32, 45, 34, 46, 33, 33]),
    ("div(root(v1, C2), C2)", &[49, 32, 51, 32, 47, 1, 34, 46, 33, 34, 46, 33]),
];

const FORMULAS: &[(&str, &[u8])] = &[
    ("C0 = C1", &[42, 32, 44, 34, 45, 33]),
    ("C0 <= v1", &[43, 32, 44, 34, 47, 1, 33]),
    ("~C0 = C0", &[36, 32, 42, 32, 44, 34, 44, 33, 33]),
    (
        "C0 = C0 -> C1 = C1",
        &[39, 32, 42, 32, 44, 34, 44, 33, 34, 42, 32, 45, 34, 45, 33, 33],
    ),
    (
        "C0 = C0 & C1 = C1",
        &[37, 32, 42, 32, 44, 34, 44, 33, 34, 42, 32, 45, 34, 45, 33, 33],
    ),
    (
        "C0 = C0 | C0 <= C0",
        &[38, 32, 42, 32, 44, 34, 44, 33, 34, 43, 32, 44, 34, 44, 33, 33],
    ),
    ("forall v0. v0 = v0", &[40, 32, 47, 34, 42, 32, 47, 34, 47, 33, 33]),
    ("exists v2. C2 <= v2", &[41, 32, 47, 2, 34, 43, 32, 46, 34, 47, 2, 33, 33]),
    ("HilbPrf(v0, C1)", &[57, 32, 47, 34, 45, 33]),
    ("SubstPrf(v0, v0, C2)", &[58, 32, 47, 34, 47, 34, 46, 33]),
];

#[test]
fn terms_encode_to_frozen_codes() {
    for (text, want) in TERMS {
        let t = parse_term(text).unwrap();
        assert_eq!(encode_term(&t), *want, "{text}");
        assert_eq!(decode(want).unwrap(), Decoded::Term(t), "{text}");
    }
}

#[test]
fn formulas_encode_to_frozen_codes() {
    for (text, want) in FORMULAS {
        let f = parse_formula(text).unwrap();
        assert_eq!(encode_formula(&f), *want, "{text}");
        assert_eq!(decode(want).unwrap(), Decoded::Formula(f), "{text}");
    }
}

#[test]
fn proof_steps_are_dot_separated() {
    let steps = [parse_formula("C0 = C0").unwrap(), parse_formula("C1 = C1").unwrap()];
    let want = [42, 32, 44, 34, 44, 33, 35, 42, 32, 45, 34, 45, 33];
    assert_eq!(encode_proof(&steps), want);
    assert_eq!(decode(&want).unwrap(), Decoded::Proof(steps.to_vec()));
}

#[test]
fn goedel_numbers_read_codes_as_base_64() {
    assert_eq!(godel_number(&[44]), BigUint::from(44u32));
    assert_eq!(godel_number(&[47, 5]), BigUint::from(47u32 * 64 + 5));
    for (_, codes) in TERMS.iter().chain(FORMULAS) {
        let want = codes.iter().fold(BigUint::from(0u32), |acc, &c| acc * 64u32 + c);
        assert_eq!(godel_number(codes), want);
    }
}

#[test]
fn g64_files_round_trip_every_fixture() {
    for (_, codes) in TERMS.iter().chain(FORMULAS) {
        let file = to_g64(codes).unwrap();
        assert_eq!(&file[..4], b"QG64");
        assert_eq!(from_g64(&file).unwrap(), *codes);
    }
}

#[test]
fn malformed_streams_are_rejected() {
    for bad in [&[][..], &[33], &[42, 32, 44, 34, 45], &[48, 32, 45, 33], &[5], &[44, 44]] {
        assert!(decode(bad).is_err(), "{bad:?}");
    }
}

//! The graph-based weight against a direct reading of the coinductive
//! weight-bound rules.

mod common;

use std::collections::HashSet;

use polysing::surface::print_type;
use polysing::types::{weight, BoundEnv, Polarity, Type, Weight};
use proptest::prelude::*;

const MAX_N: u64 = 8;

/// Does `(t, n)` belong to some coinductive weight bound? Expands the rules
/// directly; a goal that recurs on the current path is assumed to hold. A
/// quantified variable weighs what its bound weighs, so branches are opened
/// with the bound itself and every goal stays closed.
fn bounded(t: &Type, n: u64, path: &mut HashSet<(String, u64)>) -> bool {
    match t {
        Type::End | Type::Base(_) => true,
        Type::Top | Type::Bound(_) | Type::Free(_) => false,
        Type::Choice(Polarity::Internal, _) => true,
        Type::Rec(..) => {
            let key = (print_type(t), n);
            if !path.insert(key.clone()) {
                return true;
            }
            let ok = bounded(&t.unfold(), n, path);
            path.remove(&key);
            ok
        }
        Type::Choice(Polarity::External, branches) => {
            n > 0
                && branches.iter().all(|b| {
                    let (payload, cont) = b.open_with(&b.bound);
                    payload.map_or(true, |s| bounded(&s, n - 1, path)) && bounded(&cont, n, path)
                })
        }
    }
}

fn oracle(t: &Type) -> Option<u64> {
    (0..=MAX_N).find(|&n| bounded(t, n, &mut HashSet::new()))
}

fn agree(name: &str, t: &Type) {
    let w = weight(&BoundEnv::new(), t).unwrap();
    match (oracle(t), w) {
        (Some(n), Weight::Finite(m)) => assert_eq!(n, m, "{name}"),
        (None, Weight::Infinite) => {}
        (None, Weight::Finite(m)) => assert!(m > MAX_N, "{name}: graph says {m}, oracle finds no bound"),
        (Some(n), Weight::Infinite) => panic!("{name}: oracle finds bound {n}, graph says infinite"),
    }
}

#[test]
fn corpus_agrees() {
    for (name, t) in common::corpus() {
        agree(&name, &t);
    }
}

#[test]
fn known_infinite_fixtures() {
    for text in ["Top", "rec a. &{ m(a). end }", "&{ m(Top). end }", "&{ arg<a>(a). end }"] {
        let t = common::parse_type(text);
        assert_eq!(oracle(&t), None, "{text}");
        assert_eq!(weight(&BoundEnv::new(), &t).unwrap(), Weight::Infinite, "{text}");
    }
}

#[test]
fn cell_content_adds_one() {
    let cell = common::fixture("cell.psg").type_def("CellT").unwrap().closed.clone().unwrap();
    for (name, t) in common::corpus() {
        let Weight::Finite(wt) = weight(&BoundEnv::new(), &t).unwrap() else { continue };
        let get = Type::choice(
            Polarity::External,
            vec![polysing::types::Branch {
                tag: polysing::syntax::Tag::new("get"),
                var: polysing::types::Hint::new("_"),
                bound: Type::Top,
                payload: Some(t.shift(1, 0)),
                cont: cell.shift(1, 0),
            }],
        );
        assert_eq!(weight(&BoundEnv::new(), &get).unwrap(), Weight::Finite(wt + 1), "{name}");
        assert_eq!(oracle(&get), Some(wt + 1), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn random_types_agree(seed in any::<u64>()) {
        if let Some((text, t)) = common::random_type(seed, 4) {
            agree(&text, &t);
        }
    }
}

use std::cmp::Ordering;

use proptest::prelude::*;

use scatter::automata::{convolve2, deconvolve, regex, Alphabet, Sym, Word};
use scatter::constructions::{encode_args, poly_run_nfa, Polynomial};
use scatter::orders::{delta_cmp, delta_decode, delta_encode, lex, lex2, llex, DeltaPoint};
use scatter::tree::{cmp_trees, delimiter_coords, delimiter_tree};
use scatter::weighted::{Value, WeightedAutomaton};

fn word(max: usize, syms: Sym) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..syms, 0..=max)
}

fn best(a: &WeightedAutomaton, q: usize, w: &[Sym]) -> Value {
    match w.split_first() {
        None => a.is_final(q).then_some(0),
        Some((&s, rest)) => a
            .out(q)
            .iter()
            .filter(|t| t.0 == s)
            .filter_map(|&(_, r, wt)| best(a, r, rest).map(|v| v + wt as u64))
            .max(),
    }
}

proptest! {
    #[test]
    fn delta_matches_encoding(i in 0usize..40, j in 0usize..40, k in 0usize..40, l in 0usize..40) {
        let (p, q) = (DeltaPoint::new(i, j), DeltaPoint::new(k, l));
        prop_assert_eq!(delta_decode(&delta_encode(p)), Some(p));
        prop_assert_eq!(delta_cmp(p, q), lex(&delta_encode(p), &delta_encode(q)));
        prop_assert_eq!(delta_cmp(p, q), delta_cmp(q, p).reverse());
    }

    #[test]
    fn delimiter_trees_ordered(i in 0usize..20, j in 0usize..20, k in 0usize..20, l in 0usize..20) {
        let (s, t) = (delimiter_tree(i, j, 0), delimiter_tree(k, l, 0));
        prop_assert_eq!(delimiter_coords(&s), Some((i, j)));
        let want = if (i, j) == (k, l) { Ordering::Equal } else if i > k || (i == k && j < l) { Ordering::Less } else { Ordering::Greater };
        prop_assert_eq!(cmp_trees(&s, &t), want);
    }

    #[test]
    fn lex2_is_lex_on_tracks(u in word(6, 3), v in word(6, 3), x in word(6, 3), y in word(6, 3)) {
        let conv = Alphabet::conv(&Alphabet::chars("abc"), 2);
        let (w1, w2) = (convolve2(&conv, &u, &v), convolve2(&conv, &x, &y));
        prop_assert_eq!(deconvolve(&conv, &w1).unwrap(), vec![u.clone(), v.clone()]);
        prop_assert_eq!(lex2(&conv, &w1, &w2).unwrap(), lex(&u, &x).then(lex(&v, &y)));
    }

    #[test]
    fn llex_is_length_then_lex(u in word(8, 2), v in word(8, 2)) {
        prop_assert_eq!(llex(&u, &v), u.len().cmp(&v.len()).then(u.cmp(&v)));
    }

    #[test]
    fn polynomial_runs(c0 in 0u64..4, c1 in 0u64..4, c2 in 0u64..3, x in 0u64..6) {
        let p = Polynomial::parse(&format!("{c0} + {c1}x + {c2}x^2"), 1).unwrap();
        prop_assert_eq!(p.eval(&[x]), c0 + c1 * x + c2 * x * x);
        let a = poly_run_nfa(&p);
        prop_assert_eq!(a.count_accepting_runs(&encode_args(&[x])), (c0 + c1 * x + c2 * x * x).into());
    }

    #[test]
    fn regex_and_minimal_dfa_agree(w in word(8, 2)) {
        for src in ["(a|b)*ab", "a*b|ba*", "(aa|bb)*", "ab*a"] {
            let n = regex::parse(&Alphabet::chars("ab"), src).unwrap();
            prop_assert_eq!(n.accepts(&w), n.determinize().minimize().accepts(&w));
        }
    }

    #[test]
    fn behavior_is_best_path(
        edges in prop::collection::vec((0usize..3, 0 as Sym..2, 0usize..3, 0u8..2), 0..12),
        finals in prop::collection::vec(any::<bool>(), 3),
        w in prop::collection::vec(0 as Sym..2, 1..7),
    ) {
        let mut a = WeightedAutomaton::new(Alphabet::chars("ab"), 3);
        for (p, s, q, wt) in edges {
            if a.weight(p, s, q).is_none() {
                a.add_transition(p, s, q, wt);
            }
        }
        for (q, f) in finals.into_iter().enumerate() {
            a.set_final(q, f);
        }
        prop_assert_eq!(a.behavior(&w).unwrap(), best(&a, 0, &w));
    }
}

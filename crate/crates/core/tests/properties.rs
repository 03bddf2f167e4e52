use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use sft_escape::escape::{escape_rate, HoleSpec};
use sft_escape::experiments::{all_words, enumerate_canonical_collections};
use sft_escape::poly::{
    correlation_matrix, generating_function, r_function, series_coefficients, IntPoly, PolyMatrix,
};
use sft_escape::poly::roots::complex_roots;
use sft_escape::spectral::{
    perron_root_matrix, perron_root_poly, spectral_radius, AvoidanceAutomaton, DEFAULT_ROOT_TOL,
};
use sft_escape::words::{
    correlation, minimal_period_from_autocorrelation, minimal_period_word, permute_symbols, Word,
    WordCollection,
};

fn word(q: u32, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..q, len).prop_map(|s| Word::new(s).unwrap())
}

/// A symbol permutation of `0..q`.
fn perm(q: u32) -> impl Strategy<Value = Vec<u32>> {
    Just((0..q).collect::<Vec<u32>>()).prop_shuffle()
}

fn collection(q: u32, p: usize, t: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::btree_set(prop::collection::vec(0..q, p), t)
        .prop_map(|s| s.into_iter().map(|w| Word::new(w).unwrap()).collect())
}

fn exps(f: &IntPoly) -> Vec<usize> {
    (0..f.coeffs().len()).filter(|&k| f.coeff(k) != BigInt::from(0)).collect()
}

#[test]
fn period_implementations_agree_exhaustively() {
    for q in [2, 3] {
        for p in 1..=6 {
            for w in all_words(q, p) {
                assert_eq!(minimal_period_word(&w), minimal_period_from_autocorrelation(&w), "{w}");
            }
        }
    }
}

#[test]
fn delta_positive_beyond_four() {
    let xs: Vec<BigRational> = [4, 5, 7, 10, 100]
        .iter()
        .map(|&k| BigRational::from_integer(BigInt::from(k)))
        .collect();
    for q in 2..=4u32 {
        for p in 2..=4 {
            for g in enumerate_canonical_collections(q, p, 2).unwrap() {
                let d = r_function(g.words()).unwrap().delta;
                for x in &xs {
                    assert!(d.eval(x).is_positive(), "{:?} at {x}", g.words());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn autocorrelation_shape(w in word(4, 1..=9)) {
        let c = correlation(&w, &w);
        let p = w.len();
        prop_assert_eq!(c.degree(), Some(p - 1));
        prop_assert!(c.coeffs().iter().all(|x| *x == BigInt::from(0) || *x == BigInt::from(1)));
        let tau = minimal_period_word(&w);
        let e = exps(&c);
        if tau == p {
            prop_assert_eq!(e, vec![p - 1]);
        } else {
            prop_assert_eq!(e[e.len() - 2], p - 1 - tau);
        }
    }

    #[test]
    fn cross_correlation_degree((u, w) in (2usize..=7).prop_flat_map(|p| (word(3, p..=p), word(3, p..=p)))) {
        prop_assume!(u != w);
        let c = correlation(&u, &w);
        prop_assert!(c.degree().is_none_or(|d| d + 2 <= u.len()));
        prop_assert!(c.coeffs().iter().all(|x| *x == BigInt::from(0) || *x == BigInt::from(1)));
    }

    #[test]
    fn correlation_permutation_invariant(u in word(4, 1..=7), w in word(4, 1..=7), pi in perm(4)) {
        let pu = permute_symbols(&u, &pi).unwrap();
        let pw = permute_symbols(&w, &pi).unwrap();
        prop_assert_eq!(correlation(&u, &w), correlation(&pu, &pw));
        prop_assert_eq!(minimal_period_word(&u), minimal_period_word(&pu));
    }

    #[test]
    fn cofactor_matches_bareiss(n in 1usize..=5, entries in prop::collection::vec(prop::collection::vec(-3i64..=3, 0..=3), 25)) {
        let m = PolyMatrix::from_fn(n, |i, j| IntPoly::from_i64s(&entries[i * 5 + j]));
        prop_assert_eq!(m.determinant_cofactor(), m.determinant_bareiss());
    }

    #[test]
    fn r_transpose_invariant(g in (2usize..=4, 1usize..=4).prop_flat_map(|(p, t)| collection(3, p, t))) {
        let m = correlation_matrix(&g);
        let mt = m.transpose();
        prop_assume!(!m.determinant().is_zero());
        let r1 = sft_escape::poly::RationalFunction::new(m.adjugate_sum(), m.determinant()).unwrap().reduced();
        let r2 = sft_escape::poly::RationalFunction::new(mt.adjugate_sum(), mt.determinant()).unwrap().reduced();
        prop_assert_eq!(r1.to_string(), r2.to_string());
    }

    #[test]
    fn degree_laws(g in (2usize..=5, 1usize..=4).prop_flat_map(|(p, t)| collection(3, p, t))) {
        let t = g.len();
        let p = g[0].len();
        let rf = r_function(&g).unwrap();
        prop_assert_eq!(rf.delta.degree(), Some(t * (p - 1)));
        prop_assert!(rf.delta.is_monic());
        prop_assert_eq!(rf.s.degree(), Some((t - 1) * (p - 1)));
        prop_assert_eq!(rf.s.leading().cloned(), Some(BigInt::from(t)));
    }

    #[test]
    fn two_word_coefficient_bounds(g in (2usize..=7).prop_flat_map(|p| collection(4, p, 2))) {
        let p = g[0].len();
        let rf = r_function(&g).unwrap();
        for (l, a) in rf.delta.coeffs().iter().enumerate() {
            let bound = (l + 1).min(2 * p - 1 - l);
            prop_assert!(a.abs() <= BigInt::from(bound), "z^{} coefficient {} of {}", l, a, rf.delta);
        }
        prop_assert!(rf.s.coeffs().iter().all(|a| a.abs() <= BigInt::from(2)));
    }

    #[test]
    fn single_root_beyond_four(q in 5u32..=9, g in (3usize..=5).prop_flat_map(|p| collection(5, p, 2))) {
        let (_, den) = generating_function(&g, q).unwrap();
        let big = complex_roots(&den).iter().filter(|z| z.norm() >= 4.0).count();
        prop_assert_eq!(big, 1, "{}", den);
    }

    #[test]
    fn series_counts_and_growth(q in 2u32..=4, g in (2usize..=4, 1usize..=3).prop_flat_map(|(p, t)| collection(2, p, t))) {
        prop_assume!(WordCollection::new(q, g.clone()).is_ok());
        let (num, den) = generating_function(&g, q).unwrap();
        let f = series_coefficients(&num, &den, 12).unwrap();
        let a = AvoidanceAutomaton::new(&g, q).unwrap();
        prop_assert_eq!(&f, &a.count_words_upto(12));
        for n in 0..12 {
            prop_assert!(f[n + 1] <= &f[n] * BigInt::from(q));
        }
    }

    #[test]
    fn spectral_radius_permutation_invariant(pi in perm(3), g in (2usize..=4, 1usize..=3).prop_flat_map(|(p, t)| collection(3, p, t))) {
        prop_assume!(WordCollection::new(3, g.clone()).is_ok());
        let pg: Vec<Word> = g.iter().map(|w| permute_symbols(w, &pi).unwrap()).collect();
        let a = spectral_radius(&AvoidanceAutomaton::new(&g, 3).unwrap().transfer_matrix(), DEFAULT_ROOT_TOL).unwrap();
        let b = perron_root_matrix(&pg, 3, DEFAULT_ROOT_TOL).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-9 * a.value.max(1.0));
        let c = perron_root_poly(&g, 3, DEFAULT_ROOT_TOL).unwrap();
        if a.irreducible == Some(true) {
            prop_assert!((a.value - c.value).abs() <= 1e-9, "{} vs {}", a.value, c.value);
        }
    }

    #[test]
    fn escape_rate_routes_and_permutation(
        pi in perm(4),
        base in prop::collection::vec(word(4, 2..=2), 0..=1),
        hole in (2usize..=3).prop_flat_map(|p| collection(4, p, 2)),
    ) {
        let h = HoleSpec::new(4, hole, base);
        prop_assume!(h.is_ok());
        let h = h.unwrap();
        let r = escape_rate(&h).unwrap();
        prop_assert!(r.rho >= -1e-12);
        let route = r.entropy_ambient - r.entropy_survivor;
        let width = r.bracket_width() + 1e-12;
        prop_assert!((r.rho - route).abs() <= width, "{} vs {}", r.rho, route);
        let rp = escape_rate(&h.permuted(&pi).unwrap()).unwrap();
        prop_assert!((r.rho - rp.rho).abs() <= 1e-9, "{} vs {}", r.rho, rp.rho);
        prop_assert!(r.rho_lo <= r.rho && r.rho <= r.rho_hi);
    }
}

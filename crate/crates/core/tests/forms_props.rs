mod common;

use proptest::prelude::*;
use qsimplex::arith::{is_rational_square, Rational};
use qsimplex::forms::{
    diagonalize_congruence, diagonalize_congruence_with, direct_sum, forms_equivalent,
    gram_regular_simplex, hasse_invariant, invariants, scale, DiagonalForm, PivotStrategy,
    SymmetricMatrix,
};
use qsimplex::local::{hilbert_symbol, relevant_places};

fn nonzero(max: i64) -> impl Strategy<Value = Rational> {
    ((-max..=max).prop_filter("nonzero", |n| *n != 0), 1..=max)
        .prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn positive(max: i64) -> impl Strategy<Value = Rational> {
    (1..=max, 1..=max).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn diagonal(rank: std::ops::RangeInclusive<usize>, max: i64) -> impl Strategy<Value = DiagonalForm> {
    prop::collection::vec(nonzero(max), rank).prop_map(|c| DiagonalForm::new(c).unwrap())
}

fn symmetric(dim: usize) -> impl Strategy<Value = SymmetricMatrix> {
    prop::collection::vec(-6i64..=6, dim * dim).prop_map(move |e| {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| Rational::from(e[i.min(j) * dim + i.max(j)])).collect())
            .collect();
        SymmetricMatrix::new(rows).unwrap()
    })
}

/// `P^T diag(f) P` for an integer matrix `P`.
fn congruent(f: &DiagonalForm, p: &[Vec<i64>]) -> SymmetricMatrix {
    let n = f.rank();
    let c = f.coefficients();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &c[k] * Rational::from(p[k][i] * p[k][j])).sum())
                .collect()
        })
        .collect();
    SymmetricMatrix::new(rows).unwrap()
}

proptest! {
    #[test]
    fn pivot_order_does_not_change_invariants(g in (2usize..=4).prop_flat_map(symmetric)) {
        prop_assume!(!g.determinant().is_zero());
        let f1 = diagonalize_congruence_with(&g, PivotStrategy::FirstNonzero).unwrap();
        let f2 = diagonalize_congruence_with(&g, PivotStrategy::LastNonzero).unwrap();
        prop_assert_eq!(invariants(&f1).unwrap(), invariants(&f2).unwrap());
        // det(P^T g P) = det(P)^2 det(g)
        prop_assert!(is_rational_square(&(f1.determinant() / g.determinant())));
    }

    #[test]
    fn random_change_of_basis_is_an_isometry(
        f in diagonal(1..=4, 30),
        p in prop::collection::vec(-3i64..=3, 16),
    ) {
        let n = f.rank();
        let p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| p[i * 4 + j]).collect()).collect();
        let g = congruent(&f, &p);
        prop_assume!(!g.determinant().is_zero());
        let h = diagonalize_congruence(&g).unwrap();
        prop_assert!(forms_equivalent(&f, &h).unwrap(), "{} vs {}", f, h);
    }

    #[test]
    fn witt_cancellation(f in diagonal(2..=2, 20), g in diagonal(2..=2, 20), h in diagonal(1..=2, 20)) {
        prop_assert_eq!(
            forms_equivalent(&direct_sum(&f, &h), &direct_sum(&g, &h)).unwrap(),
            forms_equivalent(&f, &g).unwrap()
        );
    }

    #[test]
    fn hasse_of_direct_sum(f in diagonal(1..=3, 50), g in diagonal(1..=3, 50)) {
        let fg = direct_sum(&f, &g);
        let (df, dg) = (f.determinant(), g.determinant());
        for v in relevant_places(fg.coefficients()).unwrap() {
            let lhs = hasse_invariant(&fg, &v).unwrap();
            let rhs = hasse_invariant(&f, &v).unwrap()
                * hasse_invariant(&g, &v).unwrap()
                * hilbert_symbol(&df, &dg, &v).unwrap();
            prop_assert_eq!(lhs, rhs, "v = {}", v);
        }
    }

    #[test]
    fn binary_hasse_formula(x in nonzero(200), delta in positive(200)) {
        let f = DiagonalForm::new(vec![x.clone(), &delta / &x]).unwrap();
        let minus_delta = -delta.clone();
        for v in relevant_places([&x, &delta]).unwrap() {
            prop_assert_eq!(hasse_invariant(&f, &v).unwrap(), hilbert_symbol(&x, &minus_delta, &v).unwrap());
        }
    }

    #[test]
    fn four_copies_absorb_any_positive_scale(a in positive(1000), j in 1usize..=3) {
        let k = 4 * j;
        let lhs = DiagonalForm::repeated(k, &a).unwrap();
        prop_assert!(forms_equivalent(&lhs, &DiagonalForm::identity(k)).unwrap());
    }
}

#[test]
fn simplex_gram_plus_line_is_a_sum_of_squares() {
    for d in 1..=30usize {
        let a = diagonalize_congruence(&gram_regular_simplex(d).unwrap()).unwrap();
        let lhs = direct_sum(&a, &DiagonalForm::new(vec![Rational::from(d as i64 + 1)]).unwrap());
        assert!(forms_equivalent(&lhs, &DiagonalForm::identity(d + 1)).unwrap(), "d = {d}");
    }
}

#[test]
fn scaling_by_a_square_is_an_isometry() {
    let f = DiagonalForm::new(vec![common::r("3"), common::r("-5/2"), common::r("7")]).unwrap();
    assert!(forms_equivalent(&f, &scale(&f, &common::r("4/9")).unwrap()).unwrap());
    assert!(!forms_equivalent(&f, &scale(&f, &common::r("3")).unwrap()).unwrap());
}

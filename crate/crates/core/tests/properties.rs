//! Property tests for the arithmetic and linear-algebra invariants.

use std::sync::Arc;

use proptest::prelude::*;

use severi_core::polyring::{
    bi_weight, jacobian, kernel_basis, parse_poly, rank_over_field, MultiPoly, PolyMatrix,
    VarTable, WeightVector,
};
use severi_core::scalars::{rat, Eisenstein, Rational};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn arb_scalar() -> impl Strategy<Value = Eisenstein> {
    (arb_rational(), arb_rational()).prop_map(|(re, zc)| Eisenstein::new(re, zc))
}

fn stw() -> Arc<VarTable> {
    VarTable::new(&["s", "t", "w"])
}

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..3, 3), arb_scalar()),
        0..4,
    )
    .prop_map(|raw| MultiPoly::from_raw_terms(&stw(), raw))
}

fn arb_monomial() -> impl Strategy<Value = MultiPoly> {
    (proptest::collection::vec(0u32..4, 3), arb_scalar().prop_filter("nonzero", |c| !c.is_zero()))
        .prop_map(|(exps, c)| MultiPoly::from_raw_terms(&stw(), vec![(exps, c)]))
}

proptest! {
    #[test]
    fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Eisenstein::one());
        }
    }

    #[test]
    fn scalar_text_round_trips(a in arb_scalar()) {
        let text = a.to_string();
        let back: Eisenstein = text.parse().unwrap();
        prop_assert_eq!(back, a, "round trip through {}", text);
    }

    #[test]
    fn poly_text_round_trips(p in arb_poly()) {
        let text = p.to_string();
        let back = parse_poly(&stw(), &text).unwrap();
        prop_assert_eq!(back, p, "round trip through {}", text);
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(p in arb_poly(), q in arb_poly()) {
        let t = stw();
        // s -> s + t*w, t -> t^2, w fixed.
        let assignment = vec![
            ("s", parse_poly(&t, "s + t*w").unwrap()),
            ("t", parse_poly(&t, "t^2").unwrap()),
        ];
        let sub = |x: &MultiPoly| x.substitute(&t, &assignment).unwrap();
        prop_assert_eq!(sub(&p.mul(&q)), sub(&p).mul(&sub(&q)));
        prop_assert_eq!(sub(&p.add(&q)), sub(&p).add(&sub(&q)));
    }

    #[test]
    fn kernel_vectors_annihilate_exactly(
        rows in proptest::collection::vec(
            proptest::collection::vec(arb_scalar(), 5), 1..4)
    ) {
        let kernel = kernel_basis(&rows, 5);
        let rank = rank_over_field(&rows);
        prop_assert_eq!(kernel.len(), 5 - rank);
        for v in &kernel {
            for row in &rows {
                let mut acc = Eisenstein::zero();
                for (a, b) in row.iter().zip(v) {
                    acc += &(a * b);
                }
                prop_assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn rank_is_invariant_under_row_operations(
        entries in proptest::collection::vec(arb_poly(), 6),
        swap in 0usize..2,
        scale_pick in 0usize..5,
    ) {
        let t = stw();
        let m = PolyMatrix::new(&t, 2, 3, entries.clone());
        let base = m.rank_fraction_free();

        let mut swapped = entries.clone();
        if swap == 1 {
            swapped.rotate_left(3);
        }
        let ms = PolyMatrix::new(&t, 2, 3, swapped);
        prop_assert_eq!(ms.rank_fraction_free(), base);

        let scale = parse_poly(&t, ["1", "s", "t", "s + 1", "s*t - 2"][scale_pick]).unwrap();
        let mut scaled = entries;
        for e in scaled.iter_mut().take(3) {
            *e = e.mul(&scale);
        }
        let mc = PolyMatrix::new(&t, 2, 3, scaled);
        prop_assert_eq!(mc.rank_fraction_free(), base);
    }

    #[test]
    fn jacobian_is_linear_and_obeys_the_product_rule(p in arb_poly(), q in arb_poly()) {
        let sum = jacobian(&[p.add(&q)], &["s", "t", "w"]).unwrap();
        let jp = jacobian(std::slice::from_ref(&p), &["s", "t", "w"]).unwrap();
        let jq = jacobian(std::slice::from_ref(&q), &["s", "t", "w"]).unwrap();
        prop_assert!(sum.sub(&jp.add(&jq)).is_zero());
        for v in ["s", "t", "w"] {
            let lhs = p.mul(&q).derivative(v).unwrap();
            let rhs = p.derivative(v).unwrap().mul(&q).add(&p.mul(&q.derivative(v).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bi_weight_is_additive_on_products(
        p in arb_monomial(),
        q in arb_monomial(),
        weights in proptest::collection::vec((-3i64..=3, -3i64..=3), 3),
    ) {
        let w = WeightVector::new(&stw(), weights);
        let wp = bi_weight(&p, &w).unwrap();
        let wq = bi_weight(&q, &w).unwrap();
        let wpq = bi_weight(&p.mul(&q), &w).unwrap();
        prop_assert_eq!(wpq, (wp.0 + wq.0, wp.1 + wq.1));
    }

    #[test]
    fn exact_division_inverts_multiplication(
        p in arb_poly().prop_filter("nonzero", |p| !p.is_zero()),
        q in arb_poly(),
    ) {
        let prod = q.mul(&p);
        let back = prod.exact_div(&p).unwrap();
        prop_assert_eq!(back, q);
    }
}

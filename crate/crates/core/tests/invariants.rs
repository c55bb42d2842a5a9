//! Property-based invariants that complement the seeded verification
//! ledger: algebraic laws that must survive arbitrary inputs, not just
//! the seeded corpus.

use std::sync::Arc;

use lplab_core::crossed::{convolve, CcElement, FiniteGroup, IsometricAction};
use lplab_core::exact::{gq, GaussianRational};
use lplab_core::ktheory::LocalizedInt;
use lplab_core::leavitt::{LeavittElement, Word};
use lplab_core::space::{disjoint_union, p_norm, LpVector, OperatorMatrix, WeightedSpace};
use lplab_core::C64;
use num_bigint::BigInt;
use proptest::prelude::*;

type Lq = LeavittElement<GaussianRational>;

fn small_complex() -> impl Strategy<Value = C64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| C64::new(re, im))
}

fn space_and_vectors(n: usize) -> impl Strategy<Value = (WeightedSpace, Vec<C64>, Vec<C64>)> {
    (
        proptest::collection::vec(0.1f64..4.0, n),
        proptest::collection::vec(small_complex(), n),
        proptest::collection::vec(small_complex(), n),
    )
        .prop_map(move |(weights, v, w)| {
            let atoms = (0..n).map(|i| format!("a{i}")).collect();
            (WeightedSpace::new(atoms, weights).unwrap(), v, w)
        })
}

proptest! {
    #[test]
    fn p_norm_is_a_norm((space, v, w) in space_and_vectors(4), pidx in 0usize..4) {
        let p = [1.0, 1.5, 2.0, 3.0][pidx];
        let vv = LpVector::new(space.clone(), v.clone()).unwrap();
        let ww = LpVector::new(space.clone(), w.clone()).unwrap();
        let nv = p_norm(&vv, p).unwrap();
        let nw = p_norm(&ww, p).unwrap();

        // homogeneity
        let alpha = C64::new(-1.25, 0.5);
        let scaled = LpVector::new(space.clone(), v.iter().map(|c| c * alpha).collect()).unwrap();
        prop_assert!((p_norm(&scaled, p).unwrap() - alpha.norm() * nv).abs() < 1e-10);

        // triangle inequality
        let sum = LpVector::new(space, v.iter().zip(&w).map(|(a, b)| a + b).collect()).unwrap();
        prop_assert!(p_norm(&sum, p).unwrap() <= nv + nw + 1e-10);
    }

    #[test]
    fn direct_sum_norm_is_p_power_additive(
        (s1, v1, _) in space_and_vectors(3),
        (s2, v2, _) in space_and_vectors(2),
        pidx in 0usize..3,
    ) {
        let p = [1.0, 2.0, 3.0][pidx];
        let union = disjoint_union(&[s1.clone(), s2.clone()]).unwrap();
        let x1 = LpVector::new(s1, v1).unwrap();
        let x2 = LpVector::new(s2, v2).unwrap();
        let e1 = union.embed(0, &x1).unwrap();
        let e2 = union.embed(1, &x2).unwrap();
        let joint = LpVector::new(
            union.space.clone(),
            e1.coords.iter().zip(&e2.coords).map(|(a, b)| a + b).collect(),
        )
        .unwrap();
        let lhs = p_norm(&joint, p).unwrap().powf(p);
        let rhs = p_norm(&x1, p).unwrap().powf(p) + p_norm(&x2, p).unwrap().powf(p);
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn leavitt_normal_form_is_insertion_order_free(
        raw in proptest::collection::vec(
            (
                proptest::collection::vec(0u8..2, 0..3),
                proptest::collection::vec(0u8..2, 0..3),
                -3i64..=3,
                -3i64..=3,
            ),
            1..6,
        ),
        rot in 0usize..6,
    ) {
        let d = 2u32;
        let build = |terms: &[(Vec<u8>, Vec<u8>, i64, i64)]| {
            let mut x = Lq::zero(d).unwrap();
            for (mu, nu, re, im) in terms {
                let mono = Lq::monomial(d, Word(mu.clone()), Word(nu.clone()), gq(*re, *im)).unwrap();
                x = x.add(&mono).unwrap();
            }
            x
        };
        let a = build(&raw);
        let mut rotated = raw.clone();
        rotated.rotate_left(rot % raw.len().max(1));
        let b = build(&rotated);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn leavitt_product_distributes(
        t1 in (proptest::collection::vec(0u8..2, 0..2), proptest::collection::vec(0u8..2, 0..2)),
        t2 in (proptest::collection::vec(0u8..2, 0..2), proptest::collection::vec(0u8..2, 0..2)),
        t3 in (proptest::collection::vec(0u8..2, 0..2), proptest::collection::vec(0u8..2, 0..2)),
    ) {
        let d = 2u32;
        let mono = |t: &(Vec<u8>, Vec<u8>)| {
            Lq::monomial(d, Word(t.0.clone()), Word(t.1.clone()), gq(1, 0)).unwrap()
        };
        let (a, b, c) = (mono(&t1), mono(&t2), mono(&t3));
        let lhs = a.multiply(&b.add(&c).unwrap()).unwrap();
        let rhs = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn localized_integers_form_a_commutative_ring(
        an in -200i64..=200, ae in 0u32..5,
        bn in -200i64..=200, be in 0u32..5,
        cn in -200i64..=200, ce in 0u32..5,
        didx in 0usize..4,
    ) {
        let d = [2u32, 3, 6, 10][didx];
        let a = LocalizedInt::new(BigInt::from(an), ae, d).unwrap();
        let b = LocalizedInt::new(BigInt::from(bn), be, d).unwrap();
        let c = LocalizedInt::new(BigInt::from(cn), ce, d).unwrap();
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn convolution_is_bilinear(
        entries in proptest::collection::vec(small_complex(), 18),
        alpha in small_complex(),
    ) {
        let action = Arc::new(IsometricAction::trivial_scalar(FiniteGroup::cyclic(3)));
        let carrier = action.carrier().clone();
        let mk = |chunk: &[C64]| {
            let mut coeffs = std::collections::BTreeMap::new();
            for (g, &z) in chunk.iter().enumerate() {
                coeffs.insert(
                    g,
                    OperatorMatrix::from_fn(carrier.clone(), carrier.clone(), |_, _| z),
                );
            }
            CcElement::new(action.clone(), coeffs).unwrap()
        };
        let a = mk(&entries[0..3]);
        let b = mk(&entries[3..6]);
        let c = mk(&entries[6..9]);
        let lhs = convolve(&a, &b.scale(alpha).add(&c).unwrap()).unwrap();
        let rhs = convolve(&a, &b).unwrap().scale(alpha).add(&convolve(&a, &c).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-10);
    }
}

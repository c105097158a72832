use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgw_core::linalg::ParamMatrix;
use qgw_core::presentations::catalog;
use qgw_core::{Alphabet, Letter, NCPoly, Scalar, Strategy as Order, Word};

fn poly(coeffs: &[i64]) -> Scalar {
    let (r, s) = (Scalar::var("r"), Scalar::var("s"));
    let monos = [Scalar::one(), r.clone(), s.clone(), r.mul(&s), r.mul(&r)];
    coeffs
        .iter()
        .zip(monos.iter())
        .fold(Scalar::zero(), |acc, (c, m)| acc.add(&m.mul(&Scalar::from_int(*c))))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (prop::collection::vec(-3i64..=3, 5), prop::collection::vec(-3i64..=3, 5)).prop_map(|(n, d)| {
        let den = poly(&d);
        let den = if den.is_zero() { Scalar::one() } else { den };
        poly(&n).div(&den).unwrap()
    })
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

fn alphabet() -> Arc<Alphabet> {
    Alphabet::new(&["x", "y", "z"])
}

fn ncpoly() -> impl Strategy<Value = NCPoly> {
    let term = (prop::collection::vec(0u8..3, 0..4), -4i64..=4);
    prop::collection::vec(term, 0..4).prop_map(|ts| {
        let al = alphabet();
        NCPoly::from_terms(
            &al,
            ts.into_iter().map(|(w, c)| {
                let letters: Vec<Letter> = w.into_iter().map(|g| Letter::new(g, 1)).collect();
                (Word::from_letters(&letters), Scalar::from_int(c))
            }),
        )
    })
}

fn rational_matrix(n: usize) -> impl Strategy<Value = ParamMatrix> {
    prop::collection::vec((-5i64..=5, 1i64..=3), n * n).prop_map(move |v| {
        ParamMatrix::from_fn(n, n, |i, j| {
            let (a, b) = v[i * n + j];
            Scalar::from_rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&Scalar::one()), a.clone());
    }

    #[test]
    fn nonzero_scalars_invert(a in nonzero_scalar()) {
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn nc_mul_is_associative(x in ncpoly(), y in ncpoly(), z in ncpoly()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
    }

    #[test]
    fn kron_mixed_product(a in rational_matrix(2), b in rational_matrix(2), c in rational_matrix(2), d in rational_matrix(2)) {
        let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

/// 1000 random words of degree at most 4 over each catalog alphabet.
#[test]
fn normalize_is_idempotent_and_strategy_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37);
    for name in ["Grs", "Gmk"] {
        let p = catalog(name).unwrap();
        let sys = p.rewrite_system();
        let al = p.alphabet();
        for _ in 0..1000 {
            let len = rng.gen_range(0..=4);
            let letters: Vec<Letter> = (0..len)
                .map(|_| Letter::new(rng.gen_range(0..al.len() as u8), 1))
                .collect();
            let x = NCPoly::monomial(al, Word::from_letters(&letters), Scalar::one());
            let left = sys.normalize_with(&x, Order::LeftmostInnermost, None).unwrap();
            let right = sys.normalize_with(&x, Order::RightmostInnermost, None).unwrap();
            assert_eq!(left, right, "{name}: {}", x.render());
            assert_eq!(sys.normalize(&left).unwrap(), left, "{name}: {}", x.render());
            assert!(left.terms().keys().all(|w| sys.is_normal(w)));
        }
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use filtval_core::{parse_element, Element, RingDescriptor};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 13, 101];

fn int() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        (-50i64..=50).prop_map(BigInt::from),
        any::<i64>().prop_map(BigInt::from),
        any::<i128>().prop_map(BigInt::from),
    ]
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn ring_and_triple() -> impl Strategy<Value = (RingDescriptor, [Element; 3])> {
    let z = prop::array::uniform3(int()).prop_map(|xs| {
        let r = RingDescriptor::integers();
        (r, xs.map(|x| Element::from_bigint(r, &x)))
    });
    let zn = (2u64..=2000, prop::array::uniform3(any::<i64>())).prop_map(|(n, xs)| {
        let r = RingDescriptor::zmod(n).unwrap();
        (r, xs.map(|x| Element::from_int(r, x)))
    });
    let zn_big = (
        prop_oneof![Just(u64::MAX), Just((1u64 << 61) - 1), (2u64..=u64::MAX)],
        prop::array::uniform3(int()),
    )
        .prop_map(|(n, xs)| {
            let r = RingDescriptor::zmod(n).unwrap();
            (r, xs.map(|x| Element::from_bigint(r, &x)))
        });
    let pq = prop::array::uniform3(prop::collection::vec(rational(), 0..5))
        .prop_map(|cs| (RingDescriptor::poly_q(), cs.map(Element::poly_q)));
    let pp = (
        prop::sample::select(PRIMES.to_vec()),
        prop::array::uniform3(prop::collection::vec(-300i64..300, 0..6)),
    )
        .prop_map(|(p, cs)| {
            let r = RingDescriptor::poly_zmod(p).unwrap();
            (r, cs.map(|c| Element::poly_zmod(r, &c).unwrap()))
        });
    prop_oneof![z, zn, zn_big, pq, pp]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn commutative_ring_axioms((ring, [a, b, c]) in ring_and_triple()) {
        let zero = ring.zero();
        let one = ring.one();
        prop_assert_eq!(a.add(&b)?.add(&c)?, a.add(&b.add(&c)?)?);
        prop_assert_eq!(a.add(&b)?, b.add(&a)?);
        prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
        prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
        prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
        prop_assert_eq!(a.add(&zero)?, a.clone());
        prop_assert_eq!(a.mul(&one)?, a.clone());
        prop_assert!(a.add(&a.neg())?.is_zero());
        prop_assert_eq!(a.sub(&b)?, a.add(&b.neg())?);
        prop_assert_eq!(a.pow(3), a.mul(&a)?.mul(&a)?);
    }

    #[test]
    fn results_are_canonical((_ring, [a, b, c]) in ring_and_triple()) {
        for e in [a.add(&b)?, a.mul(&c)?, b.neg(), a.sub(&c)?, b.pow(2)] {
            prop_assert!(e.is_canonical(), "{:?}", e);
        }
    }

    #[test]
    fn parse_inverts_format((ring, [a, b, _c]) in ring_and_triple()) {
        for e in [&a, &b] {
            prop_assert_eq!(&parse_element(ring, &e.to_string())?, e);
        }
    }

    #[test]
    fn exact_division_is_sound((_ring, [a, b, _c]) in ring_and_triple()) {
        let product = a.mul(&b)?;
        if b.is_zero() {
            prop_assert!(product.try_exact_div(&b).is_err());
        } else {
            let q = product.try_exact_div(&b)?;
            prop_assert!(q.is_some(), "{} / {}", product, b);
            prop_assert_eq!(q.unwrap().mul(&b)?, product);
            if let Some(q) = a.try_exact_div(&b)? {
                prop_assert_eq!(q.mul(&b)?, a.clone());
            }
        }
    }

    #[test]
    fn gcd_divides_both((ring, [a, b, _c]) in ring_and_triple()) {
        if !ring.is_euclidean() || (a.is_zero() && b.is_zero()) {
            return Ok(());
        }
        let g = a.gcd(&b)?;
        prop_assert!(a.try_exact_div(&g)?.is_some());
        prop_assert!(b.try_exact_div(&g)?.is_some());
        prop_assert_eq!(g.normalize_unit(), g.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&b)?.gcd(&a)?, a.normalize_unit());
        }
    }
}

#[test]
fn residue_division_matches_brute_force() {
    for n in 2..=60u64 {
        let r = RingDescriptor::zmod(n).unwrap();
        for a in 0..n {
            for b in 1..n {
                let got = Element::from_int(r, a as i64)
                    .try_exact_div(&Element::from_int(r, b as i64))
                    .unwrap();
                let smallest = (0..n).find(|q| q * b % n == a);
                assert_eq!(got.and_then(|q| q.residue()), smallest, "{a}/{b} mod {n}");
            }
        }
    }
}

use std::sync::{Arc, LazyLock};

use proptest::prelude::*;
use ringstab_core::predicates::{
    is_nearly_local, is_von_neumann_regular, power_idempotent, regular_idempotent,
    regular_partner,
};
use ringstab_core::ring::builtin_test_rings;
use ringstab_core::{build_ring, Elem, FiniteRing, RingDescriptor};

static RINGS: LazyLock<Vec<(String, Arc<FiniteRing>)>> = LazyLock::new(builtin_test_rings);

fn ring_and_elems(k: usize) -> impl Strategy<Value = (usize, Vec<Elem>)> {
    (0..RINGS.len()).prop_flat_map(move |idx| {
        let q = RINGS[idx].1.order();
        (Just(idx), prop::collection::vec(0..q, k))
            .prop_map(|(i, v)| (i, v.into_iter().map(|e| e as Elem).collect()))
    })
}

fn z(m: usize) -> Arc<FiniteRing> {
    Arc::new(FiniteRing::zmod(m).unwrap())
}

#[test]
fn axioms_exhaustive_for_small_rings() {
    for (name, ring) in RINGS.iter().filter(|(_, r)| r.order() <= 64) {
        assert!(ring.verify_axioms().is_ok(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn ring_laws_on_sampled_triples((idx, v) in ring_and_elems(3)) {
        let r = &RINGS[idx].1;
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(r.add(a, b), c), r.add(r.mul(a, c), r.mul(b, c)));
        prop_assert_eq!(r.mul(r.one(), a), a);
        prop_assert_eq!(r.mul(a, r.one()), a);
    }

    #[test]
    fn zmod_matches_integer_arithmetic(m in 2usize..=40, a in 0usize..40, b in 0usize..40) {
        let r = FiniteRing::zmod(m).unwrap();
        let (a, b) = (a % m, b % m);
        prop_assert_eq!(r.add(a as Elem, b as Elem) as usize, (a + b) % m);
        prop_assert_eq!(r.mul(a as Elem, b as Elem) as usize, (a * b) % m);
    }
}

#[test]
fn radical_matches_definition() {
    for (name, r) in RINGS.iter() {
        let one = r.one();
        let defined: Vec<Elem> = r
            .elements()
            .filter(|&x| r.elements().all(|s| r.is_unit(r.sub(one, r.mul(s, x)))))
            .collect();
        assert_eq!(r.jacobson_radical().members(), defined.as_slice(), "{name}");
    }
}

#[test]
fn radical_of_semisimple_quotient_vanishes() {
    for (name, r) in RINGS.iter() {
        let j = r.jacobson_radical();
        if j.is_zero() {
            continue;
        }
        let (q, hom) = r.quotient(&j).unwrap();
        assert!(q.jacobson_radical().is_zero(), "{name}");
        assert!(hom.is_homomorphism(r, &q), "{name}");
        assert_eq!(hom.kernel(r, &q), j.members(), "{name}");
    }
}

#[test]
fn quotient_maps_are_homomorphisms() {
    for (name, r) in RINGS.iter().filter(|(_, r)| r.order() <= 16) {
        for ideal in r.all_ideals() {
            if ideal.is_whole() {
                continue;
            }
            let (q, hom) = r.quotient(&ideal).unwrap();
            assert_eq!(q.order() * ideal.len(), r.order(), "{name}");
            for a in r.elements() {
                for b in r.elements() {
                    assert_eq!(hom.apply(r.add(a, b)), q.add(hom.apply(a), hom.apply(b)));
                    assert_eq!(hom.apply(r.mul(a, b)), q.mul(hom.apply(a), hom.apply(b)));
                }
            }
            assert_eq!(hom.apply(r.one()), q.one(), "{name}");
        }
    }
}

#[test]
fn annihilators_are_maximal() {
    for (name, r) in RINGS.iter().filter(|(_, r)| r.order() <= 16) {
        let z = r.zero();
        for ideal in r.all_ideals() {
            let ann = r.annihilator(&ideal);
            for x in r.elements() {
                let kills = ideal
                    .members()
                    .iter()
                    .all(|&a| r.mul(x, a) == z && r.mul(a, x) == z);
                assert_eq!(ann.contains(x), kills, "{name}: x = {x}");
            }
        }
    }
}

#[test]
fn ideal_counts_of_known_rings() {
    // Z/m has one ideal per divisor of m; M_2(F_2) is simple.
    let count = |r: &FiniteRing| r.all_ideals().len();
    assert_eq!(count(&z(4)), 3);
    assert_eq!(count(&z(6)), 4);
    assert_eq!(count(&z(8)), 4);
    let m2 = build_ring(&RingDescriptor::Matrix { k: 2, base: z(2) }, 256).unwrap();
    assert_eq!(count(&m2), 2);
}

#[test]
fn unit_counts_match_euler_phi() {
    for (m, phi) in [(2, 1), (4, 2), (6, 2), (8, 4), (9, 6), (12, 4)] {
        assert_eq!(FiniteRing::zmod(m).unwrap().units().len(), phi, "Z/{m}");
    }
}

#[test]
fn product_laws_for_regularity_and_near_locality() {
    let pairs = [
        (z(2), z(3)),
        (z(2), z(4)),
        (z(4), z(3)),
        (z(6), z(2)),
        (
            Arc::new(build_ring(&RingDescriptor::Matrix { k: 2, base: z(2) }, 256).unwrap()),
            z(2),
        ),
    ];
    for (a, b) in pairs {
        let p = build_ring(&RingDescriptor::Product(vec![a.clone(), b.clone()]), 256).unwrap();
        assert_eq!(
            is_von_neumann_regular(&p),
            is_von_neumann_regular(&a) && is_von_neumann_regular(&b),
            "{}",
            p.family()
        );
        assert_eq!(
            is_nearly_local(&p),
            is_nearly_local(&a) && is_nearly_local(&b),
            "{}",
            p.family()
        );
    }
}

#[test]
fn regular_idempotents_of_every_regular_element() {
    for (name, r) in RINGS.iter() {
        for a in r.elements() {
            if regular_partner(r, a).is_none() {
                continue;
            }
            let (_, e) = regular_idempotent(r, a).unwrap();
            assert!(r.is_idempotent(e), "{name}: a = {a}");
            assert_eq!(r.mul(e, a), a, "{name}: a = {a}");
            assert!(r.elements().any(|t| r.mul(a, t) == e), "{name}: e ∉ aR");
            assert!(r.elements().any(|t| r.mul(e, t) == a), "{name}: a ∉ eR");
        }
    }
}

#[test]
fn power_idempotents_exhaustive() {
    for (name, r) in RINGS.iter() {
        for a in r.elements() {
            let p = power_idempotent(r, a);
            let am = (0..p.m).fold(r.one(), |acc, _| r.mul(acc, a));
            assert!(r.is_idempotent(p.e), "{name}: a = {a}");
            assert_eq!(r.mul(p.e, am), am, "{name}: a = {a}");
            assert_eq!(r.mul(r.mul(am, a), p.a_prime), am, "{name}: a = {a}");
        }
    }
}

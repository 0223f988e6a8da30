use std::sync::{Arc, LazyLock};

use proptest::prelude::*;
use ringstab_core::stability::{
    decompose_conjugated_transvection, find_witness, find_witness_scaled, is_rij_stable,
    radical_approximant, radical_entry_correction, stable_rank_reduce,
};
use ringstab_core::subgroup::enumerate_gl;
use ringstab_core::{
    Elem, FactorKind, FiniteRing, GroupElement, Ideal, MatSpace, DEFAULT_CAP,
};

fn z(m: usize) -> Arc<FiniteRing> {
    Arc::new(FiniteRing::zmod(m).unwrap())
}

static GL3_Z4: LazyLock<(MatSpace, Vec<GroupElement>)> = LazyLock::new(|| {
    let space = MatSpace::new(z(4), 3).unwrap();
    let gl = enumerate_gl(&space, DEFAULT_CAP).unwrap();
    (space, gl.elements)
});

fn gl3_z4_element() -> impl Strategy<Value = GroupElement> {
    (0..GL3_Z4.1.len()).prop_map(|i| GL3_Z4.1[i])
}

fn pair() -> impl Strategy<Value = (usize, usize)> {
    (0usize..3, 0usize..2).prop_map(|(i, j)| (i, if j >= i { j + 1 } else { j }))
}

#[test]
fn every_element_of_gl3_z2_is_stable_at_every_pair() {
    let space = MatSpace::new(z(2), 3).unwrap();
    let gl = enumerate_gl(&space, DEFAULT_CAP).unwrap();
    for g in &gl.elements {
        for i in 0..3 {
            for j in (0..3).filter(|&j| j != i) {
                assert!(is_rij_stable(space.ring(), g, i, j), "{} ({i},{j})", g.mat);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sampled_gl3_z4_elements_are_stable(g in gl3_z4_element(), (i, j) in pair()) {
        prop_assert!(is_rij_stable(GL3_Z4.0.ring(), &g, i, j));
    }

    #[test]
    fn conjugated_transvection_decomposes(
        g in gl3_z4_element(),
        (i, j) in pair(),
        r in 0u8..4,
        c in prop::sample::select(vec![1u8, 3]),
    ) {
        let space = &GL3_Z4.0;
        let ring = space.ring();
        if let Some(w) = find_witness_scaled(ring, &g, i, j, r, c) {
            let d = decompose_conjugated_transvection(space, &g, c, &w).unwrap();
            prop_assert!(d.word.verify(space));
            prop_assert!(d.in_cr);
            // Independent recomputation of the target.
            let c2 = ring.mul(c, c);
            let t = space.t(i, j, ring.mul(r, c2));
            prop_assert_eq!(d.word.target, space.mul(&space.mul(&g.mat, &t.mat), &g.inv));
            let n_diag = d.word.factors.iter().filter(|f| f.kind == FactorKind::Diagonal).count();
            prop_assert!(n_diag <= 2);
        }
    }

    #[test]
    fn radical_entries_are_corrected(g in gl3_z4_element()) {
        let space = &GL3_Z4.0;
        let radical = space.ring().jacobson_radical();
        for i in 0..3 {
            for j in 0..3 {
                if !radical.contains(g.mat.get(i, j)) {
                    continue;
                }
                let corr = radical_entry_correction(space, &radical, &g, i, j).unwrap();
                for l in (0..3).filter(|&l| l != j) {
                    prop_assert_eq!(corr.g1.mat.get(i, l), 0);
                }
                for s in (0..3).filter(|&s| s != i) {
                    prop_assert_eq!(corr.g1.mat.get(s, j), 0);
                }
                let approx = radical_approximant(space, &corr, i, j);
                prop_assert_eq!(space.mul(&approx.mat, &approx.inv), space.identity());
            }
        }
    }

    #[test]
    fn column_reduction_clears_corner(g in gl3_z4_element()) {
        let space = &GL3_Z4.0;
        let red = stable_rank_reduce(space, &g).unwrap();
        prop_assert_eq!(red.g1.mat.get(0, 2), 0);
        let expected = space.mul(&red.e2.mat, &space.mul(&space.mul(&red.e1.mat, &g.mat), &red.e1.inv));
        prop_assert_eq!(red.g1.mat, expected);
    }
}

#[test]
fn column_reduction_of_congruence_elements_stays_in_ideal() {
    let (space, elements) = &*GL3_Z4;
    let ring = space.ring();
    let ideal: Ideal = ring.ideal_generated(&[2]);
    let mut checked = 0;
    for g in elements {
        let congruent = (0..3).all(|p| {
            (0..3).all(|q| {
                let d = if p == q { ring.sub(g.mat.get(p, q), 1) } else { g.mat.get(p, q) };
                ideal.contains(d)
            })
        });
        if !congruent {
            continue;
        }
        let red = stable_rank_reduce(space, g).unwrap();
        assert!(red.s.iter().all(|&s| ideal.contains(s)), "{}", g.mat);
        checked += 1;
    }
    // C_I for I = 2Z/4 is the kernel of GL(3, Z/4) → GL(3, Z/2): 2^9 elements.
    assert_eq!(checked, 512);
}

#[test]
fn witnesses_exist_for_every_coefficient_over_z2() {
    let space = MatSpace::new(z(2), 3).unwrap();
    let gl = enumerate_gl(&space, DEFAULT_CAP).unwrap();
    for g in gl.elements.iter().take(40) {
        for r in 0..2 as Elem {
            assert!(find_witness(space.ring(), g, 0, 1, r).is_some(), "{}", g.mat);
        }
    }
}

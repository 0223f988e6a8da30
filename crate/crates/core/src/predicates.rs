//! Ring-level predicates: unimodularity and stable rank, von Neumann
//! regularity, the nearly-local relation and power idempotents.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::StabilityError;
use crate::ring::{Elem, FiniteRing};

/// Coefficients `t` with `t₁v₁ + … + tₙvₙ = 1`, if any. The left ideal
/// generated by `v` is grown one coordinate at a time, remembering a
/// coefficient vector for every reached element.
pub fn unimodular_coefficients(ring: &FiniteRing, v: &[Elem]) -> Option<Vec<Elem>> {
    let q = ring.order();
    let mut coeffs: Vec<Option<Vec<Elem>>> = vec![None; q];
    coeffs[ring.zero() as usize] = Some(vec![ring.zero(); v.len()]);
    let mut reached = vec![ring.zero()];
    for (p, &vp) in v.iter().enumerate() {
        let mut next = Vec::new();
        for &a in &reached {
            let base = coeffs[a as usize].clone().expect("reached");
            for t in ring.elements() {
                let b = ring.add(a, ring.mul(t, vp));
                if coeffs[b as usize].is_none() {
                    let mut c = base.clone();
                    c[p] = ring.add(c[p], t);
                    coeffs[b as usize] = Some(c);
                    next.push(b);
                }
            }
        }
        reached.extend(next);
    }
    coeffs[ring.one() as usize].take()
}

/// `∃t: t₁v₁ + … + tₙvₙ = 1`.
pub fn is_unimodular(ring: &FiniteRing, v: &[Elem]) -> bool {
    unimodular_coefficients(ring, v).is_some()
}

fn vector(ring: &FiniteRing, len: usize, mut code: usize) -> Vec<Elem> {
    let q = ring.order();
    (0..len)
        .map(|_| {
            let d = (code % q) as Elem;
            code /= q;
            d
        })
        .collect()
}

/// A unimodular `(m+1)`-vector that no correction `aᵢ + sᵢ·a_{m+1}` shortens
/// to a unimodular `m`-vector, or `None` if the stable-rank condition holds.
pub fn stable_rank_counterexample(ring: &FiniteRing, m: usize) -> Option<Vec<Elem>> {
    let q = ring.order();
    let total = q.pow((m + 1) as u32);
    let corrections = q.pow(m as u32);
    (0..total).into_par_iter().find_map_first(|code| {
        let a = vector(ring, m + 1, code);
        if !is_unimodular(ring, &a) {
            return None;
        }
        let last = a[m];
        let reduces = (0..corrections).any(|sc| {
            let s = vector(ring, m, sc);
            let b: Vec<Elem> = (0..m).map(|p| ring.add(a[p], ring.mul(s[p], last))).collect();
            is_unimodular(ring, &b)
        });
        (!reduces).then_some(a)
    })
}

/// Stable rank `≤ m`, checked over every unimodular `(m+1)`-vector.
pub fn stable_rank_at_most(ring: &FiniteRing, m: usize) -> bool {
    m >= 1 && stable_rank_counterexample(ring, m).is_none()
}

/// With `αr + βe = 1` and `e² = e`, returns `s = (1−e)α`, for which
/// `e + sr = 1 − (1−e)βe` is a unit.
pub fn rank1_witness_via_idempotent(ring: &FiniteRing, r: Elem, e: Elem) -> Result<Elem, StabilityError> {
    if !ring.is_idempotent(e) {
        return Err(StabilityError::BadWitness(format!("{e} is not idempotent")));
    }
    let coeffs = unimodular_coefficients(ring, &[r, e]).ok_or(StabilityError::NotUnimodular)?;
    let s = ring.mul(ring.sub(ring.one(), e), coeffs[0]);
    debug_assert!(ring.is_unit(ring.add(e, ring.mul(s, r))));
    Ok(s)
}

/// `a'` with `a·a'·a = a`.
pub fn regular_partner(ring: &FiniteRing, a: Elem) -> Option<Elem> {
    ring.elements().find(|&b| ring.mul(ring.mul(a, b), a) == a)
}

pub fn is_von_neumann_regular(ring: &FiniteRing) -> bool {
    ring.elements().all(|a| regular_partner(ring, a).is_some())
}

/// `(a', e)` with `aa'a = a` and `e = aa'`, checking `e² = e`, `ea = a`,
/// `e ∈ aR` and `a ∈ eR`.
pub fn regular_idempotent(ring: &FiniteRing, a: Elem) -> Result<(Elem, Elem), StabilityError> {
    let b = regular_partner(ring, a).ok_or(StabilityError::NotRegular(a))?;
    let e = ring.mul(a, b);
    let in_right_ideal = |x: Elem, y: Elem| ring.elements().any(|t| ring.mul(y, t) == x);
    if !ring.is_idempotent(e)
        || ring.mul(e, a) != a
        || !in_right_ideal(e, a)
        || !in_right_ideal(a, e)
    {
        return Err(StabilityError::NotRegular(a));
    }
    Ok((b, e))
}

/// `a'` with `(1 + a'a)(1 − a' + aa') = 0`.
pub fn nearly_local_partner(ring: &FiniteRing, a: Elem) -> Option<Elem> {
    let one = ring.one();
    ring.elements().find(|&b| {
        let left = ring.add(one, ring.mul(b, a));
        let right = ring.add(ring.sub(one, b), ring.mul(a, b));
        ring.mul(left, right) == ring.zero()
    })
}

pub fn is_nearly_local(ring: &FiniteRing) -> bool {
    ring.elements().all(|a| nearly_local_partner(ring, a).is_some())
}

/// `e = (1 − a' + aa')a`, checking `e² = e` and `1 − e = (1 − a)(1 + a'a)`.
pub fn nearly_local_idempotent(ring: &FiniteRing, a: Elem, a_prime: Elem) -> Result<Elem, StabilityError> {
    let one = ring.one();
    let left = ring.add(one, ring.mul(a_prime, a));
    let right = ring.add(ring.sub(one, a_prime), ring.mul(a, a_prime));
    if ring.mul(left, right) != ring.zero() {
        return Err(StabilityError::NotNearlyLocal(a, a_prime));
    }
    let e = ring.mul(right, a);
    let complement = ring.mul(ring.sub(one, a), left);
    if !ring.is_idempotent(e) || ring.sub(one, e) != complement {
        return Err(StabilityError::NotNearlyLocal(a, a_prime));
    }
    Ok(e)
}

/// `a^m = a^{m+1}a'` with `a'` in the subring generated by `a`, and the
/// idempotent `e = a^m (a')^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerIdempotent {
    pub m: usize,
    pub a_prime: Elem,
    pub e: Elem,
}

fn pow(ring: &FiniteRing, a: Elem, m: usize) -> Elem {
    (0..m).fold(ring.one(), |acc, _| ring.mul(acc, a))
}

/// Smallest `m ≥ 1` admitting `a'`; candidates are tried as the powers
/// `1, a, a², …` first, then the rest of `ℤ[a]` by code.
pub fn power_idempotent(ring: &FiniteRing, a: Elem) -> PowerIdempotent {
    let mut powers = vec![ring.one()];
    loop {
        let next = ring.mul(*powers.last().unwrap(), a);
        if powers.contains(&next) {
            break;
        }
        powers.push(next);
    }
    let span = ring.additive_closure(powers.iter().copied());
    let mut candidates = powers.clone();
    candidates.extend(
        ring.elements()
            .filter(|&x| span[x as usize] && !powers.contains(&x)),
    );
    for m in 1..=ring.order() + 1 {
        let am = pow(ring, a, m);
        let am1 = ring.mul(am, a);
        if let Some(&b) = candidates.iter().find(|&&b| ring.mul(am1, b) == am) {
            let e = ring.mul(am, pow(ring, b, m));
            debug_assert!(ring.is_idempotent(e) && ring.mul(e, am) == am);
            return PowerIdempotent { m, a_prime: b, e };
        }
    }
    unreachable!("power sequences of a finite ring are eventually periodic")
}

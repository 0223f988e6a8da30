//! Finite associative rings with identity, stored as dense operation tables.
//!
//! Every ring, whatever family produced it, is a pair of `order × order`
//! tables over element codes `0..order`. Parametric families (integers mod
//! `m`, truncated polynomials, matrix rings, upper-triangular rings, direct
//! products) only generate those tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::RingError;

/// Element code. Codes are dense in `0..order`.
pub type Elem = u8;

/// Hard upper bound on ring order imposed by the `u8` element encoding.
pub const MAX_ORDER: usize = 256;

/// Default cap on the order of a scalar ring.
pub const DEFAULT_ORDER_CAP: usize = 256;

/// Provenance of a ring's tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    Zmod { m: usize },
    TruncPoly { base: Box<Family>, k: usize },
    Matrix { k: usize, base: Box<Family> },
    UpperTriangular { k: usize, base: Box<Family> },
    Product { factors: Vec<Family> },
    ExplicitTable { order: usize },
    Quotient { base: Box<Family>, ideal: Vec<Elem> },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Zmod { m } => write!(f, "zmod({m})"),
            Family::TruncPoly { base, k } => write!(f, "trunc_poly({base},{k})"),
            Family::Matrix { k, base } => write!(f, "matrix({k},{base})"),
            Family::UpperTriangular { k, base } => write!(f, "upper_triangular({k},{base})"),
            Family::Product { factors } => {
                write!(f, "product(")?;
                for (idx, factor) in factors.iter().enumerate() {
                    if idx > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{factor}")?;
                }
                write!(f, ")")
            }
            Family::ExplicitTable { order } => write!(f, "explicit_table({order})"),
            Family::Quotient { base, ideal } => {
                let gens: Vec<String> = ideal.iter().map(|e| e.to_string()).collect();
                write!(f, "{base}/({})", gens.join(","))
            }
        }
    }
}

/// Input to [`build_ring`].
#[derive(Clone, Debug)]
pub enum RingDescriptor {
    Zmod(usize),
    TruncPoly { base: Arc<FiniteRing>, k: usize },
    Matrix { k: usize, base: Arc<FiniteRing> },
    UpperTriangular { k: usize, base: Arc<FiniteRing> },
    Product(Vec<Arc<FiniteRing>>),
    Explicit {
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    },
}

/// A finite associative ring with identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    order: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inverse: Vec<Option<Elem>>,
    zero: Elem,
    one: Elem,
    family: Family,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("family", &self.family)
            .field("order", &self.order)
            .finish()
    }
}

/// A two-sided ideal, as an explicit member set of the ring that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    mask: Vec<bool>,
    members: Vec<Elem>,
    generators: Vec<Elem>,
}

impl Ideal {
    fn from_mask(mask: Vec<bool>, generators: Vec<Elem>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(e, _)| e as Elem)
            .collect();
        Ideal {
            mask,
            members,
            generators,
        }
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.mask[e as usize]
    }

    /// Members in ascending code order.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.mask.len()
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.members.iter().all(|&e| other.contains(e))
    }
}

/// A ring homomorphism given by its table on element codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    map: Vec<Elem>,
}

impl RingHom {
    /// The identity map of `ring`.
    pub fn identity(ring: &FiniteRing) -> Self {
        RingHom {
            map: ring.elements().collect(),
        }
    }

    pub fn apply(&self, e: Elem) -> Elem {
        self.map[e as usize]
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }

    /// Exhaustively checks that the map preserves 0, 1, + and ·.
    pub fn is_homomorphism(&self, source: &FiniteRing, target: &FiniteRing) -> bool {
        if self.map.len() != source.order() {
            return false;
        }
        if self.apply(source.zero()) != target.zero() || self.apply(source.one()) != target.one()
        {
            return false;
        }
        source.elements().all(|a| {
            source.elements().all(|b| {
                self.apply(source.add(a, b)) == target.add(self.apply(a), self.apply(b))
                    && self.apply(source.mul(a, b)) == target.mul(self.apply(a), self.apply(b))
            })
        })
    }

    pub fn kernel(&self, source: &FiniteRing, target: &FiniteRing) -> Vec<Elem> {
        source
            .elements()
            .filter(|&a| self.apply(a) == target.zero())
            .collect()
    }
}

/// Builds a ring from a family descriptor, rejecting orders above `cap`.
pub fn build_ring(desc: &RingDescriptor, cap: usize) -> Result<FiniteRing, RingError> {
    let cap = cap.min(MAX_ORDER);
    match desc {
        RingDescriptor::Zmod(m) => {
            let m = *m;
            if m < 2 {
                return Err(RingError::InvalidParameter(format!(
                    "zmod modulus must be at least 2, got {m}"
                )));
            }
            check_cap(m, cap)?;
            Ok(FiniteRing::from_fn(
                m,
                |a, b| (a + b) % m,
                |a, b| (a * b) % m,
                0,
                1,
                Family::Zmod { m },
            ))
        }
        RingDescriptor::TruncPoly { base, k } => {
            let k = *k;
            if k < 1 {
                return Err(RingError::InvalidParameter(
                    "trunc_poly needs k >= 1".into(),
                ));
            }
            let q = base.order();
            let order = checked_pow(q, k).ok_or(RingError::CapExceeded {
                order: usize::MAX,
                cap,
            })?;
            check_cap(order, cap)?;
            let decode = |c: usize| digits(c, q, k);
            let encode = |d: &[Elem]| undigits(d, q);
            let add = |a: usize, b: usize| {
                let (da, db) = (decode(a), decode(b));
                let d: Vec<Elem> = da.iter().zip(&db).map(|(&x, &y)| base.add(x, y)).collect();
                encode(&d)
            };
            let mul = |a: usize, b: usize| {
                let (da, db) = (decode(a), decode(b));
                let mut d = vec![base.zero(); k];
                for (p, &x) in da.iter().enumerate() {
                    for (s, &y) in db.iter().enumerate().take(k - p) {
                        d[p + s] = base.add(d[p + s], base.mul(x, y));
                    }
                }
                encode(&d)
            };
            let mut zero = vec![base.zero(); k];
            let z = encode(&zero);
            zero[0] = base.one();
            let o = encode(&zero);
            Ok(FiniteRing::from_fn(
                order,
                add,
                mul,
                z,
                o,
                Family::TruncPoly {
                    base: Box::new(base.family.clone()),
                    k,
                },
            ))
        }
        RingDescriptor::Matrix { k, base } => {
            matrix_family(*k, base, cap, false).map(|(ring, _)| ring)
        }
        RingDescriptor::UpperTriangular { k, base } => {
            matrix_family(*k, base, cap, true).map(|(ring, _)| ring)
        }
        RingDescriptor::Product(factors) => {
            if factors.is_empty() {
                return Err(RingError::InvalidParameter(
                    "product needs at least one factor".into(),
                ));
            }
            let radices: Vec<usize> = factors.iter().map(|f| f.order()).collect();
            let mut order = 1usize;
            for &r in &radices {
                order = order.checked_mul(r).ok_or(RingError::CapExceeded {
                    order: usize::MAX,
                    cap,
                })?;
                check_cap(order, cap)?;
            }
            let decode = |mut c: usize| {
                radices
                    .iter()
                    .map(|&r| {
                        let d = c % r;
                        c /= r;
                        d as Elem
                    })
                    .collect::<Vec<_>>()
            };
            let encode = |d: &[Elem]| {
                let mut c = 0usize;
                for (&x, &r) in d.iter().zip(&radices).rev() {
                    c = c * r + x as usize;
                }
                c
            };
            let op = |a: usize, b: usize, mult: bool| {
                let (da, db) = (decode(a), decode(b));
                let d: Vec<Elem> = factors
                    .iter()
                    .zip(da.iter().zip(&db))
                    .map(|(f, (&x, &y))| if mult { f.mul(x, y) } else { f.add(x, y) })
                    .collect();
                encode(&d)
            };
            let zero: Vec<Elem> = factors.iter().map(|f| f.zero()).collect();
            let one: Vec<Elem> = factors.iter().map(|f| f.one()).collect();
            Ok(FiniteRing::from_fn(
                order,
                |a, b| op(a, b, false),
                |a, b| op(a, b, true),
                encode(&zero),
                encode(&one),
                Family::Product {
                    factors: factors.iter().map(|f| f.family.clone()).collect(),
                },
            ))
        }
        RingDescriptor::Explicit {
            add,
            mul,
            zero,
            one,
        } => {
            let order = add.len();
            if order == 0 {
                return Err(RingError::MalformedTable("empty addition table".into()));
            }
            check_cap(order, cap)?;
            for (name, table) in [("add", add), ("mul", mul)] {
                if table.len() != order {
                    return Err(RingError::MalformedTable(format!(
                        "{name} table has {} rows, expected {order}",
                        table.len()
                    )));
                }
                for (r, row) in table.iter().enumerate() {
                    if row.len() != order {
                        return Err(RingError::MalformedTable(format!(
                            "{name} table row {r} has {} entries, expected {order}",
                            row.len()
                        )));
                    }
                    if let Some(&bad) = row.iter().find(|&&v| v >= order) {
                        return Err(RingError::MalformedTable(format!(
                            "{name} table row {r} contains code {bad} outside 0..{order}"
                        )));
                    }
                }
            }
            if *zero >= order || *one >= order {
                return Err(RingError::MalformedTable(
                    "zero/one code outside the element range".into(),
                ));
            }
            let ring = FiniteRing::from_fn(
                order,
                |a, b| add[a][b],
                |a, b| mul[a][b],
                *zero,
                *one,
                Family::ExplicitTable { order },
            );
            ring.verify_axioms()?;
            Ok(ring)
        }
    }
}

fn check_cap(order: usize, cap: usize) -> Result<(), RingError> {
    if order > cap {
        Err(RingError::CapExceeded { order, cap })
    } else {
        Ok(())
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc = 1usize;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn digits(mut c: usize, radix: usize, len: usize) -> Vec<Elem> {
    (0..len)
        .map(|_| {
            let d = c % radix;
            c /= radix;
            d as Elem
        })
        .collect()
}

fn undigits(d: &[Elem], radix: usize) -> usize {
    d.iter().rev().fold(0usize, |c, &x| c * radix + x as usize)
}

fn matrix_family(
    k: usize,
    base: &FiniteRing,
    cap: usize,
    upper: bool,
) -> Result<(FiniteRing, Vec<(usize, usize)>), RingError> {
    if k < 1 {
        return Err(RingError::InvalidParameter("matrix size must be >= 1".into()));
    }
    // Free positions in row-major order; upper-triangular keeps only p <= q.
    let slots: Vec<(usize, usize)> = (0..k)
        .flat_map(|p| (0..k).map(move |q| (p, q)))
        .filter(|&(p, q)| !upper || p <= q)
        .collect();
    let q = base.order();
    let order = checked_pow(q, slots.len()).ok_or(RingError::CapExceeded {
        order: usize::MAX,
        cap,
    })?;
    check_cap(order, cap)?;
    let to_full = |c: usize| {
        let d = digits(c, q, slots.len());
        let mut m = vec![base.zero(); k * k];
        for (&(p, s), &x) in slots.iter().zip(&d) {
            m[p * k + s] = x;
        }
        m
    };
    let from_full = |m: &[Elem]| {
        let d: Vec<Elem> = slots.iter().map(|&(p, s)| m[p * k + s]).collect();
        undigits(&d, q)
    };
    let add = |a: usize, b: usize| {
        let (ma, mb) = (to_full(a), to_full(b));
        let m: Vec<Elem> = ma.iter().zip(&mb).map(|(&x, &y)| base.add(x, y)).collect();
        from_full(&m)
    };
    let mul = |a: usize, b: usize| {
        let (ma, mb) = (to_full(a), to_full(b));
        let mut m = vec![base.zero(); k * k];
        for p in 0..k {
            for s in 0..k {
                let mut acc = base.zero();
                for t in 0..k {
                    acc = base.add(acc, base.mul(ma[p * k + t], mb[t * k + s]));
                }
                m[p * k + s] = acc;
            }
        }
        from_full(&m)
    };
    let mut id = vec![base.zero(); k * k];
    let zero = from_full(&id);
    for p in 0..k {
        id[p * k + p] = base.one();
    }
    let one = from_full(&id);
    let family = if upper {
        Family::UpperTriangular {
            k,
            base: Box::new(base.family.clone()),
        }
    } else {
        Family::Matrix {
            k,
            base: Box::new(base.family.clone()),
        }
    };
    Ok((
        FiniteRing::from_fn(order, add, mul, zero, one, family),
        slots,
    ))
}

impl FiniteRing {
    fn from_fn(
        order: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
        zero: usize,
        one: usize,
        family: Family,
    ) -> Self {
        let mut add_t = Vec::with_capacity(order * order);
        let mut mul_t = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                add_t.push(add(a, b) as Elem);
                mul_t.push(mul(a, b) as Elem);
            }
        }
        let zero = zero as Elem;
        let one = one as Elem;
        // Additive inverses: the unique b with a + b = 0 (None only if tables are broken).
        let neg = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| add_t[a * order + b] == zero)
                    .unwrap_or(0) as Elem
            })
            .collect();
        // Two-sided inverses by exhaustive search.
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| mul_t[a * order + b] == one && mul_t[b * order + a] == one)
                    .map(|b| b as Elem)
            })
            .collect();
        FiniteRing {
            order,
            add: add_t,
            mul: mul_t,
            neg,
            inverse,
            zero,
            one,
            family,
        }
    }

    pub fn zmod(m: usize) -> Result<Self, RingError> {
        build_ring(&RingDescriptor::Zmod(m), DEFAULT_ORDER_CAP)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(|e| e as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Two-sided inverse, if `a` is a unit.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        self.inverse[a as usize]
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse[a as usize].is_some()
    }

    /// `R*`, in ascending code order.
    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    /// Has a left inverse: some `b` with `b·a = 1`.
    pub fn is_left_invertible(&self, a: Elem) -> bool {
        self.elements().any(|b| self.mul(b, a) == self.one)
    }

    pub fn is_right_invertible(&self, a: Elem) -> bool {
        self.elements().any(|b| self.mul(a, b) == self.one)
    }

    /// `1 + 1 + … + 1` (`k` times) as a ring element.
    pub fn from_int(&self, k: i64) -> Elem {
        let mut acc = self.zero;
        let steps = k.unsigned_abs() % (self.additive_order(self.one) as u64);
        for _ in 0..steps {
            acc = self.add(acc, self.one);
        }
        if k < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    fn additive_order(&self, a: Elem) -> usize {
        let mut acc = a;
        let mut k = 1;
        while acc != self.zero {
            acc = self.add(acc, a);
            k += 1;
        }
        k
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, c: Elem) -> bool {
        self.elements().all(|r| self.mul(c, r) == self.mul(r, c))
    }

    pub fn is_idempotent(&self, e: Elem) -> bool {
        self.mul(e, e) == e
    }

    /// Smallest `k ≥ 1` with `a^k = 0`, if `a` is nilpotent.
    pub fn nilpotency_index(&self, a: Elem) -> Option<usize> {
        let mut p = a;
        for k in 1..=self.order {
            if p == self.zero {
                return Some(k);
            }
            p = self.mul(p, a);
        }
        None
    }

    /// `ξR`.
    pub fn center(&self) -> Vec<Elem> {
        self.elements().filter(|&c| self.is_central(c)).collect()
    }

    /// `J(R) = { r | 1 − s·r is a unit for every s }`, using two-sided units.
    pub fn jacobson_radical(&self) -> Ideal {
        let mask: Vec<bool> = self
            .elements()
            .map(|r| {
                self.elements()
                    .all(|s| self.is_unit(self.sub(self.one, self.mul(s, r))))
            })
            .collect();
        let gens = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(e, _)| e as Elem)
            .collect();
        Ideal::from_mask(mask, gens)
    }

    /// Least two-sided ideal containing `gens`, as a fixed point under `+`
    /// and left/right multiplication.
    pub fn ideal_generated(&self, gens: &[Elem]) -> Ideal {
        let mut mask = vec![false; self.order];
        let mut queue = Vec::new();
        let push = |e: Elem, mask: &mut Vec<bool>, queue: &mut Vec<Elem>| {
            if !mask[e as usize] {
                mask[e as usize] = true;
                queue.push(e);
            }
        };
        push(self.zero, &mut mask, &mut queue);
        for &g in gens {
            push(g, &mut mask, &mut queue);
        }
        let mut members: Vec<Elem> = Vec::new();
        while let Some(x) = queue.pop() {
            for r in self.elements() {
                push(self.mul(r, x), &mut mask, &mut queue);
                push(self.mul(x, r), &mut mask, &mut queue);
            }
            members.push(x);
            for &y in &members {
                push(self.add(x, y), &mut mask, &mut queue);
            }
        }
        let mut generators: Vec<Elem> = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        Ideal::from_mask(mask, generators)
    }

    /// Additive subgroup generated by `gens`.
    pub fn additive_closure(&self, gens: impl IntoIterator<Item = Elem>) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[self.zero as usize] = true;
        let mut members = vec![self.zero];
        let mut queue: Vec<Elem> = Vec::new();
        for g in gens {
            if !mask[g as usize] {
                mask[g as usize] = true;
                queue.push(g);
            }
        }
        while let Some(x) = queue.pop() {
            members.push(x);
            for &y in &members {
                let s = self.add(x, y);
                if !mask[s as usize] {
                    mask[s as usize] = true;
                    queue.push(s);
                }
            }
        }
        mask
    }

    /// `Ann I = { r | rI = Ir = 0 }`.
    pub fn annihilator(&self, ideal: &Ideal) -> Ideal {
        let mask: Vec<bool> = self
            .elements()
            .map(|r| {
                ideal
                    .members()
                    .iter()
                    .all(|&a| self.mul(r, a) == self.zero && self.mul(a, r) == self.zero)
            })
            .collect();
        let gens = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(e, _)| e as Elem)
            .collect();
        Ideal::from_mask(mask, gens)
    }

    /// Checks closure of a member set under `+` and two-sided multiplication.
    pub fn is_two_sided_ideal(&self, members: &[Elem]) -> bool {
        let mut mask = vec![false; self.order];
        for &m in members {
            mask[m as usize] = true;
        }
        mask[self.zero as usize]
            && members.iter().all(|&a| {
                members.iter().all(|&b| mask[self.add(a, b) as usize])
                    && self.elements().all(|r| {
                        mask[self.mul(r, a) as usize] && mask[self.mul(a, r) as usize]
                    })
            })
    }

    /// `I + J`.
    pub fn ideal_sum(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let mask = self.additive_closure(a.members().iter().chain(b.members()).copied());
        let mut gens: Vec<Elem> = a.generators().iter().chain(b.generators()).copied().collect();
        gens.sort_unstable();
        gens.dedup();
        Ideal::from_mask(mask, gens)
    }

    /// `I·J`, the additive span of all products `ab`.
    pub fn ideal_product(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let products: Vec<Elem> = a
            .members()
            .iter()
            .flat_map(|&x| b.members().iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.mul(x, y))
            .collect();
        let mask = self.additive_closure(products.iter().copied());
        let mut gens = products;
        gens.sort_unstable();
        gens.dedup();
        gens.retain(|&g| g != self.zero);
        Ideal::from_mask(mask, gens)
    }

    /// The ideal whose members are exactly `members` (which must form an ideal).
    pub fn ideal_from_members(&self, members: &[Elem]) -> Option<Ideal> {
        if !self.is_two_sided_ideal(members) {
            return None;
        }
        Some(self.ideal_generated(members))
    }

    pub fn zero_ideal(&self) -> Ideal {
        self.ideal_generated(&[])
    }

    pub fn whole_ideal(&self) -> Ideal {
        self.ideal_generated(&[self.one])
    }

    /// Every two-sided ideal, ordered by size and then by member list.
    ///
    /// Each ideal is a sum of principal ideals, so principal ideals closed
    /// under pairwise sums give them all.
    pub fn all_ideals(&self) -> Vec<Ideal> {
        let mut found: Vec<Ideal> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for a in self.elements() {
            let ideal = self.ideal_generated(&[a]);
            if seen.insert(ideal.members().to_vec()) {
                found.push(ideal);
            }
        }
        let mut idx = 0;
        while idx < found.len() {
            for other in 0..idx {
                let sum = self.ideal_sum(&found[idx], &found[other]);
                if seen.insert(sum.members().to_vec()) {
                    found.push(sum);
                }
            }
            idx += 1;
        }
        found.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.members().cmp(b.members()))
        });
        // Prefer the smallest generator list that reproduces each ideal.
        for ideal in &mut found {
            if let Some(g) = self
                .elements()
                .find(|&g| self.ideal_generated(&[g]).members() == ideal.members())
            {
                ideal.generators = if g == self.zero { vec![] } else { vec![g] };
            }
        }
        found
    }

    /// `R/I` with cosets represented by their minimum code, and the natural
    /// surjection. `I = R` is rejected: the zero ring is not a ring here, so
    /// callers handle the whole-ring level themselves.
    pub fn quotient(&self, ideal: &Ideal) -> Result<(FiniteRing, RingHom), RingError> {
        if ideal.is_whole() {
            return Err(RingError::TrivialQuotient);
        }
        // class[a] = index of the coset a + I among cosets sorted by min rep.
        let mut rep = vec![usize::MAX; self.order];
        for a in self.elements() {
            let min = ideal
                .members()
                .iter()
                .map(|&i| self.add(a, i) as usize)
                .min()
                .unwrap_or(a as usize);
            rep[a as usize] = min;
        }
        let mut reps: Vec<usize> = rep.clone();
        reps.sort_unstable();
        reps.dedup();
        let index_of = |r: usize| reps.binary_search(&r).expect("representative") as Elem;
        let map: Vec<Elem> = rep.iter().map(|&r| index_of(r)).collect();
        let q = reps.len();
        let ring = FiniteRing::from_fn(
            q,
            |x, y| map[self.add(reps[x] as Elem, reps[y] as Elem) as usize] as usize,
            |x, y| map[self.mul(reps[x] as Elem, reps[y] as Elem) as usize] as usize,
            map[self.zero as usize] as usize,
            map[self.one as usize] as usize,
            Family::Quotient {
                base: Box::new(self.family.clone()),
                ideal: ideal.generators().to_vec(),
            },
        );
        Ok((ring, RingHom { map }))
    }

    /// Exhaustive axiom check; on failure reports the offending triple.
    pub fn verify_axioms(&self) -> Result<(), RingError> {
        if self.zero == self.one {
            return Err(RingError::TrivialRing);
        }
        let witness = |law: &'static str, a: Elem, b: Elem, c: Elem| RingError::AxiomViolation {
            law,
            witness: [a, b, c],
        };
        for a in self.elements() {
            if self.add(a, self.zero) != a || self.add(self.zero, a) != a {
                return Err(witness("additive identity", a, self.zero, self.zero));
            }
            if !(self.elements().any(|b| self.add(a, b) == self.zero)) {
                return Err(witness("additive inverse", a, a, a));
            }
            if self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                return Err(witness("multiplicative identity", a, self.one, self.one));
            }
            for b in self.elements() {
                if self.add(a, b) != self.add(b, a) {
                    return Err(witness("additive commutativity", a, b, b));
                }
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    self.check_triple(a, b, c).map_err(|law| witness(law, a, b, c))?;
                }
            }
        }
        Ok(())
    }

    /// Checks associativity and distributivity on one triple.
    pub fn check_triple(&self, a: Elem, b: Elem, c: Elem) -> Result<(), &'static str> {
        if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
            return Err("additive associativity");
        }
        if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
            return Err("multiplicative associativity");
        }
        if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
            return Err("left distributivity");
        }
        if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
            return Err("right distributivity");
        }
        Ok(())
    }
}

/// Rings used throughout the test suites. All are small enough for
/// exhaustive element-level checks.
pub fn builtin_test_rings() -> Vec<(String, Arc<FiniteRing>)> {
    let z = |m| Arc::new(FiniteRing::zmod(m).expect("zmod"));
    let z2 = z(2);
    let z3 = z(3);
    let z4 = z(4);
    let build = |d: RingDescriptor| Arc::new(build_ring(&d, DEFAULT_ORDER_CAP).expect("builtin"));
    let rings = vec![
        z2.clone(),
        z3.clone(),
        z4.clone(),
        z(5),
        z(6),
        z(8),
        z(9),
        build(RingDescriptor::TruncPoly {
            base: z2.clone(),
            k: 2,
        }),
        build(RingDescriptor::TruncPoly {
            base: z2.clone(),
            k: 3,
        }),
        build(RingDescriptor::TruncPoly {
            base: z3.clone(),
            k: 2,
        }),
        build(RingDescriptor::Matrix {
            k: 2,
            base: z2.clone(),
        }),
        build(RingDescriptor::UpperTriangular {
            k: 2,
            base: z2.clone(),
        }),
        build(RingDescriptor::UpperTriangular {
            k: 3,
            base: z2.clone(),
        }),
        build(RingDescriptor::UpperTriangular { k: 2, base: z4.clone() }),
        build(RingDescriptor::Product(vec![z2.clone(), z2.clone()])),
        build(RingDescriptor::Product(vec![z2.clone(), z4])),
        build(RingDescriptor::Product(vec![z2, z3])),
    ];
    rings
        .into_iter()
        .map(|r| (r.family().to_string(), r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: usize) -> FiniteRing {
        FiniteRing::zmod(m).unwrap()
    }

    fn m2f2() -> FiniteRing {
        build_ring(
            &RingDescriptor::Matrix {
                k: 2,
                base: Arc::new(z(2)),
            },
            256,
        )
        .unwrap()
    }

    fn ut2f2() -> FiniteRing {
        build_ring(
            &RingDescriptor::UpperTriangular {
                k: 2,
                base: Arc::new(z(2)),
            },
            256,
        )
        .unwrap()
    }

    fn f2_dual() -> FiniteRing {
        build_ring(
            &RingDescriptor::TruncPoly {
                base: Arc::new(z(2)),
                k: 2,
            },
            256,
        )
        .unwrap()
    }

    #[test]
    fn zmod_units() {
        assert_eq!(z(4).units(), vec![1, 3]);
        assert_eq!(z(6).units(), vec![1, 5]);
    }

    #[test]
    fn product_of_z2_z3_has_order_six_and_is_cyclic() {
        let p = build_ring(
            &RingDescriptor::Product(vec![Arc::new(z(2)), Arc::new(z(3))]),
            256,
        )
        .unwrap();
        assert_eq!(p.order(), 6);
        // Z/2 × Z/3 ≅ Z/6: the identity has additive order 6.
        assert_eq!(p.additive_order(p.one()), 6);
        assert_eq!(p.units().len(), 2);
        p.verify_axioms().unwrap();
    }

    #[test]
    fn m2f2_units_center_and_simplicity() {
        let r = m2f2();
        assert_eq!(r.order(), 16);
        // Brute-force oracle: count elements with a two-sided inverse.
        let oracle = r
            .elements()
            .filter(|&a| {
                r.elements()
                    .any(|b| r.mul(a, b) == r.one() && r.mul(b, a) == r.one())
            })
            .count();
        assert_eq!(oracle, 6);
        assert_eq!(r.units().len(), 6);
        assert_eq!(r.center(), vec![r.zero(), r.one()]);
        // e12 sits at slot (0,1) -> code 2.
        assert!(r.ideal_generated(&[2]).is_whole());
        r.verify_axioms().unwrap();
    }

    #[test]
    fn truncated_polynomial_units() {
        let r = f2_dual();
        // codes: c0 + 2 c1, so 1 -> 1 and 1 + x -> 3.
        assert_eq!(r.units(), vec![1, 3]);
        assert_eq!(r.jacobson_radical().members(), &[0, 2]);
    }

    #[test]
    fn radicals() {
        assert_eq!(z(4).jacobson_radical().members(), &[0, 2]);
        assert_eq!(z(6).jacobson_radical().members(), &[0]);
        let ut = ut2f2();
        // slots (0,0),(0,1),(1,1): strictly upper elements have only digit 1 set.
        assert_eq!(ut.jacobson_radical().members(), &[0, 2]);
        assert_eq!(ut.center(), vec![0, 5]);
    }

    #[test]
    fn generated_ideals_and_annihilators() {
        let r = z(4);
        assert!(r.ideal_generated(&[0]).is_zero());
        assert_eq!(r.ideal_generated(&[2]).members(), &[0, 2]);
        let two = r.ideal_generated(&[2]);
        assert_eq!(r.annihilator(&two).members(), &[0, 2]);
        assert!(r.annihilator(&r.whole_ideal()).is_zero());
        assert!(r.annihilator(&r.zero_ideal()).is_whole());
    }

    #[test]
    fn quotients() {
        let r = z(4);
        let (q, hom) = r.quotient(&r.ideal_generated(&[2])).unwrap();
        assert_eq!(q.order(), 2);
        assert!(hom.is_homomorphism(&r, &q));
        assert_eq!(hom.kernel(&r, &q), vec![0, 2]);

        let (same, id) = r.quotient(&r.zero_ideal()).unwrap();
        assert_eq!(same.order(), 4);
        assert_eq!(id.table(), &[0, 1, 2, 3]);

        let z6 = z(6);
        let (q6, _) = z6.quotient(&z6.ideal_generated(&[2])).unwrap();
        assert_eq!(q6.order(), 2);

        assert!(matches!(
            r.quotient(&r.whole_ideal()),
            Err(RingError::TrivialQuotient)
        ));
    }

    #[test]
    fn radical_of_quotient_by_radical_is_zero() {
        for (name, r) in builtin_test_rings() {
            let j = r.jacobson_radical();
            assert!(r.is_two_sided_ideal(j.members()), "{name}");
            let (q, _) = r.quotient(&j).unwrap();
            assert!(q.jacobson_radical().is_zero(), "{name}");
        }
    }

    #[test]
    fn explicit_table_errors() {
        let bad_shape = RingDescriptor::Explicit {
            add: vec![vec![0, 1], vec![1]],
            mul: vec![vec![0, 0], vec![0, 1]],
            zero: 0,
            one: 1,
        };
        assert!(matches!(
            build_ring(&bad_shape, 256),
            Err(RingError::MalformedTable(_))
        ));
        // Multiplication that is not distributive over addition.
        let not_distributive = RingDescriptor::Explicit {
            add: vec![vec![0, 1], vec![1, 0]],
            mul: vec![vec![1, 0], vec![0, 1]],
            zero: 0,
            one: 1,
        };
        assert!(matches!(
            build_ring(&not_distributive, 256),
            Err(RingError::AxiomViolation { .. })
        ));
        let f2 = RingDescriptor::Explicit {
            add: vec![vec![0, 1], vec![1, 0]],
            mul: vec![vec![0, 0], vec![0, 1]],
            zero: 0,
            one: 1,
        };
        assert_eq!(build_ring(&f2, 256).unwrap().order(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_ring(&RingDescriptor::Zmod(300), 256),
            Err(RingError::CapExceeded { .. })
        ));
        assert!(matches!(
            build_ring(&RingDescriptor::Zmod(9), 8),
            Err(RingError::CapExceeded { order: 9, cap: 8 })
        ));
        assert!(matches!(
            build_ring(&RingDescriptor::Zmod(1), 8),
            Err(RingError::InvalidParameter(_))
        ));
    }

    #[test]
    fn all_ideals_of_small_rings() {
        assert_eq!(z(4).all_ideals().len(), 3);
        assert_eq!(z(6).all_ideals().len(), 4);
        assert_eq!(f2_dual().all_ideals().len(), 3);
        // M2(F2) is simple.
        assert_eq!(m2f2().all_ideals().len(), 2);
        for ideal in z(12).all_ideals() {
            assert!(z(12).is_two_sided_ideal(ideal.members()));
            assert_eq!(
                z(12).ideal_generated(ideal.generators()).members(),
                ideal.members()
            );
        }
    }

    #[test]
    fn ideal_products() {
        let r = z(4);
        let two = r.ideal_generated(&[2]);
        assert!(r.ideal_product(&two, &two).is_zero());
        let r6 = z(6);
        let a = r6.ideal_generated(&[2]);
        let b = r6.ideal_generated(&[3]);
        assert!(r6.ideal_product(&a, &b).is_zero());
        assert_eq!(r6.ideal_product(&a, &a).members(), a.members());
    }

    #[test]
    fn from_int_wraps() {
        let r = z(4);
        assert_eq!(r.from_int(-1), 3);
        assert_eq!(r.from_int(6), 2);
    }
}

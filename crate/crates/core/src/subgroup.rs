//! Explicitly enumerated subgroups of `GL(n, R)`.
//!
//! Closures are built coset by coset (Dimino's method): adding a generator
//! `g ∉ H` to a finished subgroup `H` appends whole right cosets `H·c`, and
//! coset representatives are multiplied by the generators until no new coset
//! appears. Every product is then computed once per element and generator,
//! and inverses never need to be adjoined because the groups are finite.

use std::io::{self, Write};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::matrix::{GroupElement, Mat, MatSpace, Transvection};
use crate::ring::{Elem, Ideal, RingHom};

/// Default cap on enumerated group sizes and on `|R|^(n²)` for full scans.
pub const DEFAULT_CAP: usize = 1 << 22;

/// Cosets at least this large are multiplied out in parallel.
const PAR_COSET: usize = 4096;

/// An explicitly enumerated subgroup.
#[derive(Clone)]
pub struct SubgroupClosure {
    space: MatSpace,
    generators: Vec<GroupElement>,
    elements: Vec<Mat>,
    index: FxHashSet<Mat>,
    complete: bool,
}

impl std::fmt::Debug for SubgroupClosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupClosure")
            .field("size", &self.elements.len())
            .field("generators", &self.generators.len())
            .field("complete", &self.complete)
            .finish()
    }
}

/// Size summary written into reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSummary {
    pub size: usize,
    pub generators: usize,
    pub complete: bool,
}

/// Outcome of a watched extension: `Some(m)` when an inserted element
/// satisfied the watch predicate (the closure is left partial).
type Hit = Option<Mat>;

impl SubgroupClosure {
    /// `{1}`.
    pub fn trivial(space: &MatSpace) -> Self {
        let id = space.identity();
        let mut index = FxHashSet::default();
        index.insert(id);
        SubgroupClosure {
            space: space.clone(),
            generators: Vec::new(),
            elements: vec![id],
            index,
            complete: true,
        }
    }

    /// `⟨gens⟩`, stopping with `complete = false` once `cap` is exceeded.
    pub fn closure(space: &MatSpace, gens: &[GroupElement], cap: usize) -> Self {
        let mut h = Self::trivial(space);
        h.extend(gens, cap);
        h
    }

    /// Builds the closure of a set known (or expected) to be a subgroup; the
    /// stored generators are an irredundant subset of `elements`.
    pub fn from_elements(space: &MatSpace, elements: &[GroupElement], cap: usize) -> Self {
        Self::closure(space, elements, cap)
    }

    /// Adjoins generators; returns whether the group grew.
    pub fn extend(&mut self, gens: &[GroupElement], cap: usize) -> bool {
        let before = self.elements.len();
        for g in gens {
            if !self.complete {
                break;
            }
            self.extend_one(g, cap, None::<&fn(&Mat) -> bool>);
        }
        self.elements.len() != before
    }

    /// Like [`extend`](Self::extend), but stops at the first new element
    /// on which `watch` fires and returns it (the closure is then partial).
    pub fn extend_watch<W>(&mut self, gens: &[GroupElement], cap: usize, watch: &W) -> Hit
    where
        W: Fn(&Mat) -> bool + Sync,
    {
        for g in gens {
            if !self.complete {
                break;
            }
            if let Some(hit) = self.extend_one(g, cap, Some(watch)) {
                return Some(hit);
            }
        }
        None
    }

    /// Adjoins one generator; stops early and returns the element when `watch`
    /// fires on a newly inserted element.
    fn extend_one<W>(&mut self, g: &GroupElement, cap: usize, watch: Option<&W>) -> Hit
    where
        W: Fn(&Mat) -> bool + Sync,
    {
        if self.index.contains(&g.mat) || !self.complete {
            return None;
        }
        let h_len = self.elements.len();
        self.generators.push(*g);
        let mut reps = vec![g.mat];
        if let Some(hit) = self.add_coset(h_len, &g.mat, cap, watch) {
            return Some(hit);
        }
        let mut pos = 0;
        while pos < reps.len() && self.complete {
            let c = reps[pos];
            for s in 0..self.generators.len() {
                let x = self.space.mul(&c, &self.generators[s].mat);
                if self.index.contains(&x) {
                    continue;
                }
                reps.push(x);
                if let Some(hit) = self.add_coset(h_len, &x, cap, watch) {
                    return Some(hit);
                }
                if !self.complete {
                    break;
                }
            }
            pos += 1;
        }
        None
    }

    /// Appends the coset `H·x`, `H = elements[..h_len]`, known to be disjoint
    /// from the current set.
    fn add_coset<W>(&mut self, h_len: usize, x: &Mat, cap: usize, watch: Option<&W>) -> Hit
    where
        W: Fn(&Mat) -> bool + Sync,
    {
        if self.elements.len() + h_len > cap {
            self.complete = false;
            return None;
        }
        let space = &self.space;
        let coset: Vec<Mat> = if h_len >= PAR_COSET {
            self.elements[..h_len]
                .par_iter()
                .map(|h| space.mul(h, x))
                .collect()
        } else {
            self.elements[..h_len].iter().map(|h| space.mul(h, x)).collect()
        };
        let hit = watch.and_then(|w| {
            if coset.len() >= PAR_COSET {
                coset.par_iter().find_first(|m| w(m)).copied()
            } else {
                coset.iter().find(|m| w(m)).copied()
            }
        });
        self.index.reserve(coset.len());
        for m in &coset {
            self.index.insert(*m);
        }
        self.elements.extend(coset);
        if hit.is_some() {
            self.complete = false;
        }
        hit
    }

    pub fn space(&self) -> &MatSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.index.contains(m)
    }

    /// Elements in discovery order (identity first).
    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn summary(&self) -> SubgroupSummary {
        SubgroupSummary {
            size: self.len(),
            generators: self.generators.len(),
            complete: self.complete,
        }
    }

    pub fn is_subset_of(&self, other: &SubgroupClosure) -> bool {
        self.len() <= other.len() && self.elements.par_iter().all(|m| other.contains(m))
    }

    pub fn set_eq(&self, other: &SubgroupClosure) -> bool {
        self.len() == other.len() && self.is_subset_of(other)
    }

    /// First element of `self` missing from `other`, if any.
    pub fn first_outside(&self, other: &SubgroupClosure) -> Option<Mat> {
        self.elements
            .par_iter()
            .find_first(|m| !other.contains(m))
            .copied()
    }

    /// Non-identity transvections contained in the subgroup.
    pub fn transvections(&self) -> Vec<Transvection> {
        let mut out: Vec<Transvection> = self
            .elements
            .iter()
            .filter_map(|m| self.space.as_transvection(m))
            .collect();
        out.sort();
        out
    }

    /// Returns a conjugate `c·t·c⁻¹` of a generator `t` that falls outside
    /// the subgroup, for some `c` in `conjugators`.
    pub fn normality_violation(&self, conjugators: &[GroupElement]) -> Option<(Mat, Mat)> {
        conjugators.par_iter().find_map_first(|c| {
            self.generators.iter().find_map(|t| {
                let m = self.space.conj(&t.mat, c);
                (!self.contains(&m)).then_some((c.mat, t.mat))
            })
        })
    }

    /// Canonical encodings, sorted.
    pub fn sorted_encodings(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.elements.iter().map(|m| m.encoding()).collect();
        lines.sort();
        lines
    }

    /// Writes the sorted canonical encodings, one per line.
    pub fn write_encodings<W: Write>(&self, mut out: W) -> io::Result<()> {
        for line in self.sorted_encodings() {
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Grows the subgroup to its normal closure under `conjugators`.
    pub fn normal_closure(&mut self, conjugators: &[GroupElement], cap: usize) {
        self.normal_closure_watch(conjugators, cap, None::<&fn(&Mat) -> bool>);
    }

    /// Normal closure that stops as soon as `watch` fires on a new element.
    /// Since the groups are finite, conjugation by the given elements alone
    /// (not their inverses) reaches the fixed point.
    pub fn normal_closure_watch<W>(
        &mut self,
        conjugators: &[GroupElement],
        cap: usize,
        watch: Option<&W>,
    ) -> Hit
    where
        W: Fn(&Mat) -> bool + Sync,
    {
        let mut next = 0;
        while next < self.generators.len() && self.complete {
            let t = self.generators[next];
            for c in conjugators {
                let m = self.space.conj_element(&t, c);
                if let Some(hit) = self.extend_one(&m, cap, watch) {
                    return Some(hit);
                }
                if !self.complete {
                    return None;
                }
            }
            next += 1;
        }
        None
    }
}

/// Plain breadth-first closure under the generators and their inverses.
/// Kept as an independent reference for the coset-based closure.
pub fn bfs_closure(space: &MatSpace, gens: &[GroupElement], cap: usize) -> (FxHashSet<Mat>, bool) {
    let mut seen = FxHashSet::default();
    let id = space.identity();
    seen.insert(id);
    let mut frontier = vec![id];
    let steps: Vec<Mat> = gens.iter().flat_map(|g| [g.mat, g.inv]).collect();
    while let Some(x) = frontier.pop() {
        for s in &steps {
            let y = space.mul(&x, s);
            if seen.insert(y) {
                if seen.len() > cap {
                    return (seen, false);
                }
                frontier.push(y);
            }
        }
    }
    (seen, true)
}

/// All transvections `t_ij(r)` with `r` in `members` (zero skipped).
pub fn transvections_over(space: &MatSpace, members: &[Elem]) -> Vec<GroupElement> {
    let z = space.ring().zero();
    let n = space.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for &r in members {
                if r != z {
                    out.push(space.t(i, j, r));
                }
            }
        }
    }
    out
}

/// `E_X = ⟨t_ij(X)⟩`.
pub fn elementary_over(space: &MatSpace, members: &[Elem], cap: usize) -> SubgroupClosure {
    SubgroupClosure::closure(space, &transvections_over(space, members), cap)
}

/// `E(n, R)`.
pub fn elementary_group(space: &MatSpace, cap: usize) -> SubgroupClosure {
    let all: Vec<Elem> = space.ring().elements().collect();
    elementary_over(space, &all, cap)
}

/// `E(n, I)` as the normal closure of `E_I` under `E(n, R)`.
pub fn relative_elementary_normal_closure(
    space: &MatSpace,
    ideal: &Ideal,
    cap: usize,
) -> SubgroupClosure {
    let mut h = elementary_over(space, ideal.members(), cap);
    let all: Vec<Elem> = space.ring().elements().collect();
    h.normal_closure(&transvections_over(space, &all), cap);
    h
}

/// The generators `t_ji(r)·t_ij(a)·t_ji(−r)`, `a ∈ I`, `r ∈ R`.
pub fn conjugated_ideal_transvections(space: &MatSpace, ideal: &Ideal) -> Vec<GroupElement> {
    let ring = space.ring();
    let n = space.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for &a in ideal.members() {
                if a == ring.zero() {
                    continue;
                }
                for r in ring.elements() {
                    let conj = space.t(j, i, r);
                    out.push(space.conj_element(&space.t(i, j, a), &conj));
                }
            }
        }
    }
    out
}

/// `E(n, I)` as `⟨t_ij(I)^{t_ji(R)}⟩`.
pub fn relative_elementary_conjugated(space: &MatSpace, ideal: &Ideal, cap: usize) -> SubgroupClosure {
    SubgroupClosure::closure(space, &conjugated_ideal_transvections(space, ideal), cap)
}

/// `[A, B]`: the normal closure in `⟨A, B⟩` of the commutators of the
/// generators.
pub fn commutator_subgroup(
    a: &SubgroupClosure,
    b: &SubgroupClosure,
    cap: usize,
) -> Result<SubgroupClosure, GroupError> {
    if !a.is_complete() || !b.is_complete() {
        return Err(GroupError::Incomplete("commutator operand".into()));
    }
    let space = a.space();
    let seeds: Vec<GroupElement> = a
        .generators()
        .iter()
        .flat_map(|x| b.generators().iter().map(move |y| space.comm_element(x, y)))
        .collect();
    let mut h = SubgroupClosure::closure(space, &seeds, cap);
    let conj: Vec<GroupElement> = a.generators().iter().chain(b.generators()).copied().collect();
    h.normal_closure(&conj, cap);
    Ok(h)
}

/// The fully enumerated `GL(n, R)` and its center.
#[derive(Debug)]
pub struct GeneralLinear {
    pub elements: Vec<GroupElement>,
    pub group: SubgroupClosure,
    pub center: Vec<GroupElement>,
}

impl GeneralLinear {
    pub fn is_central(&self, m: &Mat) -> bool {
        let space = self.group.space();
        self.group.generators().iter().all(|g| {
            space.mul(m, &g.mat) == space.mul(&g.mat, m)
        })
    }
}

/// Enumerates every invertible `n×n` matrix by scanning all `|R|^(n²)`
/// matrices; the center is the centralizer of a generating set.
pub fn enumerate_gl(space: &MatSpace, cap: usize) -> Result<GeneralLinear, GroupError> {
    let count = space.matrix_count();
    if count > cap as u128 {
        return Err(GroupError::CapExceeded {
            what: format!("|R|^(n²) for GL({}, {})", space.n(), space.ring().family()),
            size: count,
            cap,
        });
    }
    let elements: Vec<GroupElement> = (0..count as u64)
        .into_par_iter()
        .filter_map(|code| space.try_invert(&space.from_index(code)))
        .collect();
    let group = SubgroupClosure::from_elements(space, &elements, cap);
    debug_assert_eq!(group.len(), elements.len());
    let mut gl = GeneralLinear {
        elements,
        group,
        center: Vec::new(),
    };
    gl.center = gl
        .elements
        .par_iter()
        .filter(|g| gl.is_central(&g.mat))
        .copied()
        .collect();
    Ok(gl)
}

/// Entrywise image of a matrix under a ring homomorphism.
pub fn reduce(hom: &RingHom, target: &MatSpace, m: &Mat) -> Mat {
    let entries: Vec<Elem> = m.entries().iter().map(|&e| hom.apply(e)).collect();
    target
        .from_entries(&entries)
        .expect("homomorphic image has valid codes")
}

/// `C_I ⊆ C(n, I)` for one ideal.
#[derive(Debug)]
pub struct CongruencePair {
    pub ideal: Ideal,
    /// Kernel of the reduction to `GL(n, R/I)`.
    pub kernel: SubgroupClosure,
    /// Full preimage of the center of `GL(n, R/I)`.
    pub center_preimage: SubgroupClosure,
    pub center_preimage_elements: Vec<GroupElement>,
}

/// Builds `C_I` and `C(n, I)` by filtering the enumerated `GL(n, R)`.
/// `quotient` is `None` for `I = R` (both groups are then all of `GL`).
pub fn congruence_pair(
    gl: &GeneralLinear,
    ideal: &Ideal,
    quotient: Option<(&RingHom, &GeneralLinear)>,
    cap: usize,
) -> CongruencePair {
    let space = gl.group.space();
    let (kernel_elems, center_elems): (Vec<GroupElement>, Vec<GroupElement>) = match quotient {
        None => (gl.elements.clone(), gl.elements.clone()),
        Some((hom, gl_q)) => {
            let qspace = gl_q.group.space();
            let id = qspace.identity();
            let tagged: Vec<(GroupElement, bool, bool)> = gl
                .elements
                .par_iter()
                .map(|g| {
                    let r = reduce(hom, qspace, &g.mat);
                    (*g, r == id, gl_q.is_central(&r))
                })
                .collect();
            (
                tagged.iter().filter(|t| t.1).map(|t| t.0).collect(),
                tagged.iter().filter(|t| t.2).map(|t| t.0).collect(),
            )
        }
    };
    CongruencePair {
        ideal: ideal.clone(),
        kernel: SubgroupClosure::from_elements(space, &kernel_elems, cap),
        center_preimage: SubgroupClosure::from_elements(space, &center_elems, cap),
        center_preimage_elements: center_elems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;
    use std::sync::Arc;

    fn space(m: usize, n: usize) -> MatSpace {
        MatSpace::new(Arc::new(FiniteRing::zmod(m).unwrap()), n).unwrap()
    }

    #[test]
    fn empty_generators_give_identity() {
        let s = space(4, 3);
        let h = SubgroupClosure::closure(&s, &[], DEFAULT_CAP);
        assert_eq!(h.len(), 1);
        assert!(h.contains(&s.identity()));
    }

    #[test]
    fn sl3_f2_has_168_elements() {
        let s = space(2, 3);
        let e = elementary_group(&s, DEFAULT_CAP);
        assert!(e.is_complete());
        assert_eq!(e.len(), (8 - 1) * (8 - 2) * (8 - 4));
        let (bfs, done) = bfs_closure(&s, &transvections_over(&s, &[1]), DEFAULT_CAP);
        assert!(done);
        assert_eq!(bfs.len(), e.len());
        assert!(e.elements().iter().all(|m| bfs.contains(m)));
    }

    #[test]
    fn coset_closure_matches_bfs_on_mixed_generators() {
        let s = space(4, 3);
        let gens = vec![s.t(0, 1, 2), s.t(2, 0, 1), s.t(1, 2, 2)];
        let h = SubgroupClosure::closure(&s, &gens, DEFAULT_CAP);
        let (bfs, _) = bfs_closure(&s, &gens, DEFAULT_CAP);
        assert_eq!(h.len(), bfs.len());
        assert!(h.elements().iter().all(|m| bfs.contains(m)));
    }

    #[test]
    fn cap_marks_incomplete() {
        let s = space(4, 3);
        let h = elementary_group(&s, 1000);
        assert!(!h.is_complete());
        assert!(h.len() <= 1000);
    }

    #[test]
    fn gl3_z4_counts() {
        let s = space(4, 3);
        let gl = enumerate_gl(&s, DEFAULT_CAP).unwrap();
        assert_eq!(gl.elements.len(), 86016);
        assert_eq!(gl.center.len(), 2);
        let e = elementary_group(&s, DEFAULT_CAP);
        assert_eq!(e.len(), 86016 / 2);
    }

    #[test]
    fn gl_enumeration_respects_cap() {
        let s = space(6, 3);
        assert!(matches!(
            enumerate_gl(&s, DEFAULT_CAP),
            Err(GroupError::CapExceeded { .. })
        ));
    }

    #[test]
    fn commutator_with_center_is_trivial() {
        let s = space(4, 3);
        let gl = enumerate_gl(&s, DEFAULT_CAP).unwrap();
        let z = SubgroupClosure::from_elements(&s, &gl.center, DEFAULT_CAP);
        let e = elementary_group(&s, DEFAULT_CAP);
        let c = commutator_subgroup(&z, &e, DEFAULT_CAP).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn encodings_are_sorted() {
        let s = space(2, 3);
        let e = elementary_over(&s, &[1], DEFAULT_CAP);
        let enc = e.sorted_encodings();
        assert_eq!(enc.len(), 168);
        let mut buf = Vec::new();
        e.write_encodings(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 168);
    }
}

//! Searches for `E(n, R)`-invariant subgroups without non-identity
//! transvections, and checks the structural consequences such subgroups
//! must satisfy.
//!
//! Any invariant subgroup that is transvection-free contains the invariant
//! closure of each of its elements, so it suffices to look at the
//! closures of single `E(n, R)`-conjugacy orbits.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::lab::GroupLab;
use crate::matrix::{GroupElement, Mat, MatSpace};
use crate::ring::{Elem, FiniteRing, Ideal};
use crate::subgroup::SubgroupClosure;

/// Result of the partial-normality probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub ring: String,
    pub n: usize,
    pub group_order: usize,
    pub center_size: usize,
    pub orbits: usize,
    pub central_orbits: usize,
    pub orbits_reaching_transvection: usize,
    /// Orbit representatives whose invariant closure hit the cap.
    pub unresolved: Vec<String>,
    /// Non-central elements whose invariant closure is transvection-free.
    pub counterexamples: Vec<String>,
    pub verdict: String,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.unresolved.is_empty()
    }
}

/// The probe's report plus the transvection-free invariant subgroups found.
#[derive(Debug)]
pub struct ProbeOutcome {
    pub report: ProbeReport,
    pub transvection_free: Vec<SubgroupClosure>,
}

enum OrbitVerdict {
    Transvection,
    Free(SubgroupClosure),
    Unresolved,
}

/// `E(n, R)`-conjugacy orbits of all of `GL(n, R)`, as representatives with
/// orbit sizes.
pub fn conjugacy_orbits(
    space: &MatSpace,
    elements: &[GroupElement],
    conjugators: &[GroupElement],
) -> Vec<(GroupElement, usize)> {
    let mut seen: FxHashSet<Mat> = FxHashSet::default();
    let mut reps = Vec::new();
    for g in elements {
        if seen.contains(&g.mat) {
            continue;
        }
        seen.insert(g.mat);
        let mut stack = vec![g.mat];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for c in conjugators {
                let y = space.conj(&x, c);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        reps.push((*g, size));
    }
    reps
}

/// Invariant closure of `g` under `conjugators`, abandoned at the first
/// non-identity transvection.
fn orbit_closure(
    space: &MatSpace,
    g: &GroupElement,
    conjugators: &[GroupElement],
    cap: usize,
) -> OrbitVerdict {
    // Cheap first look: [c, g] = (c·g·c⁻¹)·g⁻¹ lies in the closure.
    for c in conjugators {
        let comm = space.comm(c, g);
        if space.is_nontrivial_transvection(&comm) {
            return OrbitVerdict::Transvection;
        }
    }
    let watch = |m: &Mat| space.is_nontrivial_transvection(m);
    let mut h = SubgroupClosure::trivial(space);
    if h.extend_watch(std::slice::from_ref(g), cap, &watch).is_some() {
        return OrbitVerdict::Transvection;
    }
    if h.normal_closure_watch(conjugators, cap, Some(&watch)).is_some() {
        return OrbitVerdict::Transvection;
    }
    if h.is_complete() {
        OrbitVerdict::Free(h)
    } else {
        OrbitVerdict::Unresolved
    }
}

/// Probes partial normality of `R` at dimension `n` over every element of
/// the enumerated `GL(n, R)`.
pub fn invariant_subgroup_probe(lab: &GroupLab) -> Result<ProbeOutcome, GroupError> {
    let gl = lab.gl()?;
    let space = lab.space();
    let conjugators = lab.transvections();
    let orbits = conjugacy_orbits(space, &gl.elements, &conjugators);
    let verdicts: Vec<(GroupElement, bool, OrbitVerdict)> = orbits
        .par_iter()
        .map(|(g, _)| {
            let central = gl.is_central(&g.mat);
            let v = if central {
                let h = SubgroupClosure::closure(space, std::slice::from_ref(g), lab.cap());
                if !h.transvections().is_empty() {
                    OrbitVerdict::Transvection
                } else if h.is_complete() {
                    OrbitVerdict::Free(h)
                } else {
                    OrbitVerdict::Unresolved
                }
            } else {
                orbit_closure(space, g, &conjugators, lab.cap())
            };
            (*g, central, v)
        })
        .collect();

    let mut report = ProbeReport {
        ring: lab.ring().family().to_string(),
        n: lab.n(),
        group_order: gl.elements.len(),
        center_size: gl.center.len(),
        orbits: orbits.len(),
        central_orbits: 0,
        orbits_reaching_transvection: 0,
        unresolved: Vec::new(),
        counterexamples: Vec::new(),
        verdict: String::new(),
    };
    let mut free = Vec::new();
    for (g, central, v) in verdicts {
        if central {
            report.central_orbits += 1;
        }
        match v {
            OrbitVerdict::Transvection => report.orbits_reaching_transvection += 1,
            OrbitVerdict::Unresolved => report.unresolved.push(g.mat.encoding()),
            OrbitVerdict::Free(h) => {
                if !central {
                    report.counterexamples.push(g.mat.encoding());
                }
                free.push(h);
            }
        }
    }
    // The center itself is invariant and transvection-free.
    let center = SubgroupClosure::from_elements(space, &gl.center, lab.cap());
    if center.transvections().is_empty() {
        free.push(center);
    }
    report.verdict = if !report.counterexamples.is_empty() {
        "not partially normal".into()
    } else if !report.unresolved.is_empty() {
        "unverified (cap)".into()
    } else {
        "partially normal (probe)".into()
    };
    Ok(ProbeOutcome {
        report,
        transvection_free: free,
    })
}

/// One structural consequence checked over the transvection-free subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsequenceCheck {
    pub name: String,
    /// Instances where the hypothesis held.
    pub instances: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsequenceReport {
    pub ring: String,
    pub n: usize,
    pub subgroups: usize,
    pub elements: usize,
    pub checks: Vec<ConsequenceCheck>,
}

impl ConsequenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Tally {
    name: &'static str,
    instances: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            instances: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> ConsequenceCheck {
        ConsequenceCheck {
            name: self.name.into(),
            instances: self.instances,
            passed: self.witness.is_none(),
            witness: self.witness,
        }
    }
}

/// Memoizes `Ann(Rx₁R + … + RxₖR)` by generator set.
struct AnnCache<'a> {
    ring: &'a FiniteRing,
    map: FxHashMap<Vec<Elem>, Ideal>,
}

impl<'a> AnnCache<'a> {
    fn get(&mut self, gens: &[Elem]) -> Ideal {
        let mut key = gens.to_vec();
        key.sort_unstable();
        key.dedup();
        let ring = self.ring;
        self.map
            .entry(key.clone())
            .or_insert_with(|| ring.annihilator(&ring.ideal_generated(&key)))
            .clone()
    }
}

/// Every vector in `R^n` with at least one zero coordinate.
fn vectors_with_zero(ring: &FiniteRing, n: usize) -> Vec<Vec<Elem>> {
    let q = ring.order();
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = (code % q) as Elem;
                    code /= q;
                    d
                })
                .collect::<Vec<Elem>>()
        })
        .filter(|v| v.contains(&ring.zero()))
        .collect()
}

/// Checks the consequences that every element `g` of a transvection-free
/// invariant subgroup must satisfy:
///
/// * a one-sided annihilator `x` of an off-diagonal entry puts `g` in
///   `C(n, Ann RxR)`; of a diagonal entry, forces `x = 0`;
/// * a zero entry in `[g, t_ij(x)]` puts `g` in `C(n, Ann RxR)`;
/// * a row (or column) relation with a zero coefficient puts `g` in
///   `C(n, Ann(Rx₁R + … + RxₙR))`;
/// * a one-sided invertible entry makes `g` central;
/// * a factorization `g = g₁g₂` with column `i` of `g₁` and column `j` of
///   `g₂` equal to those of the identity makes `g` central.
pub fn invariant_subgroup_consequences(
    lab: &GroupLab,
    outcome: &ProbeOutcome,
) -> Result<ConsequenceReport, GroupError> {
    let gl = lab.gl()?;
    let space = lab.space();
    let ring = space.ring();
    let n = space.n();
    let z = ring.zero();
    let mut ann = AnnCache {
        ring,
        map: FxHashMap::default(),
    };
    let vectors = vectors_with_zero(ring, n);

    let mut members: Vec<Mat> = outcome
        .transvection_free
        .iter()
        .flat_map(|h| h.elements().iter().copied())
        .collect();
    members.sort();
    members.dedup();

    let mut zero_divisor = Tally::new("entry annihilator");
    let mut comm_zero = Tally::new("commutator zero entry");
    let mut row_rel = Tally::new("row relation");
    let mut col_rel = Tally::new("column relation");
    let mut invertible_entry = Tally::new("one-sided invertible entry");
    let mut factorization = Tally::new("column factorization");

    for g in &members {
        let ge = space
            .try_invert(g)
            .ok_or(crate::error::MatError::NotInvertible)?;
        let enc = || g.encoding();
        for i in 0..n {
            for j in 0..n {
                let gij = g.get(i, j);
                for x in ring.elements() {
                    if ring.mul(gij, x) != z && ring.mul(x, gij) != z {
                        continue;
                    }
                    let ok = if i != j {
                        lab.in_center_preimage(g, &ann.get(&[x]))?
                    } else {
                        x == z
                    };
                    zero_divisor.record(ok, || format!("g={} i={} j={} x={x}", enc(), i + 1, j + 1));
                }
                if i != j {
                    for x in ring.elements() {
                        let c = space.comm(&ge, &space.t(i, j, x));
                        if c.entries().contains(&z) {
                            let ok = lab.in_center_preimage(g, &ann.get(&[x]))?;
                            comm_zero.record(ok, || {
                                format!("g={} i={} j={} x={x}", enc(), i + 1, j + 1)
                            });
                        }
                    }
                }
            }
        }
        for v in &vectors {
            for i in 0..n {
                let row = (0..n).fold(z, |acc, l| ring.add(acc, ring.mul(g.get(i, l), v[l])));
                if row == z {
                    let ok = lab.in_center_preimage(g, &ann.get(v))?;
                    row_rel.record(ok, || format!("g={} row={} x={v:?}", enc(), i + 1));
                }
                let col = (0..n).fold(z, |acc, s| ring.add(acc, ring.mul(v[s], g.get(s, i))));
                if col == z {
                    let ok = lab.in_center_preimage(g, &ann.get(v))?;
                    col_rel.record(ok, || format!("g={} column={} x={v:?}", enc(), i + 1));
                }
            }
        }
        if g.entries()
            .iter()
            .any(|&e| ring.is_left_invertible(e) || ring.is_right_invertible(e))
        {
            invertible_entry.record(gl.is_central(g), enc);
        }
        for i in 0..n {
            for j in 0..n {
                let exists = if i == j {
                    (0..n).all(|s| g.get(s, i) == if s == i { ring.one() } else { z })
                } else {
                    gl.elements.par_iter().any(|g1| {
                        (0..n).all(|s| {
                            g1.mat.get(s, i) == if s == i { ring.one() } else { z }
                                && g1.mat.get(s, j) == g.get(s, j)
                        })
                    })
                };
                if exists {
                    factorization.record(gl.is_central(g), || {
                        format!("g={} i={} j={}", enc(), i + 1, j + 1)
                    });
                }
            }
        }
    }

    Ok(ConsequenceReport {
        ring: ring.family().to_string(),
        n,
        subgroups: outcome.transvection_free.len(),
        elements: members.len(),
        checks: vec![
            zero_divisor.finish(),
            comm_zero.finish(),
            row_rel.finish(),
            col_rel.finish(),
            invertible_entry.finish(),
            factorization.finish(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::DEFAULT_CAP;
    use std::sync::Arc;

    fn lab(m: usize) -> GroupLab {
        GroupLab::new(Arc::new(FiniteRing::zmod(m).unwrap()), 3, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn gl3_f2_probe() {
        let lab = lab(2);
        let out = invariant_subgroup_probe(&lab).unwrap();
        assert_eq!(out.report.group_order, 168);
        assert!(out.report.passed(), "{:?}", out.report);
        assert_eq!(out.report.verdict, "partially normal (probe)");
        // Only the trivial subgroup survives.
        assert!(out.transvection_free.iter().all(|h| h.len() == 1));
        let suite = invariant_subgroup_consequences(&lab, &out).unwrap();
        assert!(suite.passed(), "{suite:?}");
    }

    #[test]
    fn orbit_sizes_cover_the_group() {
        let lab = lab(2);
        let gl = lab.gl().unwrap();
        let orbits = conjugacy_orbits(lab.space(), &gl.elements, &lab.transvections());
        assert_eq!(orbits.iter().map(|o| o.1).sum::<usize>(), 168);
    }
}

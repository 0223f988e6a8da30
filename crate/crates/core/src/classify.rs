//! Ring-level verdicts: the commutator formula per ideal, its iterated
//! (weak) form, and the aggregate classification report.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::lab::GroupLab;
use crate::predicates;
use crate::probe::{invariant_subgroup_probe, ProbeReport};
use crate::ring::{Elem, FiniteRing, Ideal};
use crate::subgroup::{commutator_subgroup, SubgroupClosure};

/// Three-valued outcome used throughout reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unverified,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Fail dominates Unverified, which dominates Pass.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Unverified, _) | (_, Status::Unverified) => Status::Unverified,
            _ => Status::Pass,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Status>) -> Status {
        items.into_iter().fold(Status::Pass, Status::combine)
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unverified => "unverified",
        })
    }
}

/// `[C(n, I), E(n, R)] = E(n, I)` and normality of `E(n, I)` for one ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCommutator {
    pub ideal: Vec<Elem>,
    pub generators: Vec<Elem>,
    pub status: Status,
    pub relative_size: Option<usize>,
    pub center_preimage_size: Option<usize>,
    pub commutator_size: Option<usize>,
    pub normal: Option<bool>,
    pub witness: Option<String>,
    pub note: Option<String>,
}

fn unverified(ideal: &Ideal, note: String) -> IdealCommutator {
    IdealCommutator {
        ideal: ideal.members().to_vec(),
        generators: ideal.generators().to_vec(),
        status: Status::Unverified,
        relative_size: None,
        center_preimage_size: None,
        commutator_size: None,
        normal: None,
        witness: None,
        note: Some(note),
    }
}

/// Checks one ideal. Normality is checked against a generating set of
/// `GL(n, R)`, which suffices in a finite group.
pub fn verify_commutator_ideal(lab: &GroupLab, ideal: &Ideal) -> IdealCommutator {
    let run = || -> Result<IdealCommutator, GroupError> {
        let relative = lab.relative_elementary(ideal);
        let elementary = lab.elementary();
        if !relative.is_complete() || !elementary.is_complete() {
            return Ok(unverified(ideal, "elementary closure hit the cap".into()));
        }
        let pair = lab.congruence(ideal)?;
        let comm = commutator_subgroup(&pair.center_preimage, &elementary, lab.cap())?;
        if !comm.is_complete() {
            return Ok(unverified(ideal, "commutator closure hit the cap".into()));
        }
        let gl = lab.gl()?;
        let violation = relative.normality_violation(gl.group.generators());
        let equal = comm.set_eq(&relative);
        let witness = if !equal {
            comm.first_outside(&relative)
                .or_else(|| relative.first_outside(&comm))
                .map(|m| format!("differs at {m}"))
        } else {
            violation.map(|(c, t)| format!("conjugator {c} moves generator {t} outside"))
        };
        Ok(IdealCommutator {
            ideal: ideal.members().to_vec(),
            generators: ideal.generators().to_vec(),
            status: Status::from_bool(equal && violation.is_none()),
            relative_size: Some(relative.len()),
            center_preimage_size: Some(pair.center_preimage.len()),
            commutator_size: Some(comm.len()),
            normal: Some(violation.is_none()),
            witness,
            note: None,
        })
    };
    run().unwrap_or_else(|e| unverified(ideal, e.to_string()))
}

/// The commutator formula for every ideal of the ring.
pub fn verify_commutator_ring(lab: &GroupLab) -> Vec<IdealCommutator> {
    lab.ideals()
        .iter()
        .map(|ideal| verify_commutator_ideal(lab, ideal))
        .collect()
}

/// Outcome of the iterated-commutator search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorLength {
    pub status: Status,
    /// Least `k ≤ max_k` that works for every ideal.
    pub length: Option<usize>,
    pub max_k: usize,
    pub note: Option<String>,
}

/// Least `k ≤ max_k` with `[C(n,I), E, …, E]` (`k` commutators) equal to
/// `E(n, I)` for all ideals simultaneously.
pub fn weakly_commutator_length(lab: &GroupLab, max_k: usize) -> CommutatorLength {
    let run = || -> Result<Option<usize>, GroupError> {
        let elementary = lab.elementary();
        if !elementary.is_complete() {
            return Err(GroupError::Incomplete("E(n, R)".into()));
        }
        let mut current: Vec<SubgroupClosure> = Vec::new();
        for ideal in lab.ideals() {
            current.push(lab.congruence(ideal)?.center_preimage.clone());
        }
        for k in 1..=max_k {
            let mut all_equal = true;
            for (slot, ideal) in current.iter_mut().zip(lab.ideals()) {
                let next = commutator_subgroup(slot, &elementary, lab.cap())?;
                if !next.is_complete() {
                    return Err(GroupError::Incomplete("iterated commutator".into()));
                }
                let relative = lab.relative_elementary(ideal);
                if !relative.is_complete() {
                    return Err(GroupError::Incomplete("E(n, I)".into()));
                }
                all_equal &= next.set_eq(&relative);
                *slot = next;
            }
            if all_equal {
                return Ok(Some(k));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(Some(k)) => CommutatorLength {
            status: Status::Pass,
            length: Some(k),
            max_k,
            note: None,
        },
        Ok(None) => CommutatorLength {
            status: Status::Fail,
            length: None,
            max_k,
            note: Some(format!("not found ≤ {max_k}")),
        },
        Err(e) => CommutatorLength {
            status: Status::Unverified,
            length: None,
            max_k,
            note: Some(e.to_string()),
        },
    }
}

/// Exhaustive ring predicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPredicates {
    pub commutative: bool,
    pub von_neumann_regular: bool,
    pub nearly_local: bool,
    pub stable_rank_one: bool,
}

pub fn ring_predicates(ring: &FiniteRing) -> RingPredicates {
    RingPredicates {
        commutative: ring.is_commutative(),
        von_neumann_regular: predicates::is_von_neumann_regular(ring),
        nearly_local: predicates::is_nearly_local(ring),
        stable_rank_one: predicates::stable_rank_at_most(ring, 1),
    }
}

/// Partial-normality probe of a quotient `R/I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientProbe {
    pub ideal: Vec<Elem>,
    pub status: Status,
    pub verdict: String,
}

/// An instance-level implication between verified properties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationCheck {
    pub name: String,
    pub hypothesis: Status,
    pub conclusion: Status,
    /// Fail only when the hypothesis verified and the conclusion failed.
    pub status: Status,
}

impl ImplicationCheck {
    fn new(name: &str, hypothesis: Status, conclusion: Status) -> Self {
        let status = match (hypothesis, conclusion) {
            (Status::Pass, c) => c,
            (Status::Fail, _) => Status::Pass,
            (Status::Unverified, _) => Status::Unverified,
        };
        ImplicationCheck {
            name: name.into(),
            hypothesis,
            conclusion,
            status,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub ring: String,
    pub order: usize,
    pub n: usize,
    pub predicates: RingPredicates,
    pub commutator: Vec<IdealCommutator>,
    pub commutator_status: Status,
    pub probe: Option<ProbeReport>,
    pub probe_status: Status,
    pub quotient_probes: Vec<QuotientProbe>,
    pub weakly_commutator: CommutatorLength,
    pub radical_quotient: Option<String>,
    pub implications: Vec<ImplicationCheck>,
    pub verdict: String,
    pub verdict_status: Status,
}

fn probe_status(lab: &GroupLab) -> (Option<ProbeReport>, Status) {
    match invariant_subgroup_probe(lab) {
        Ok(out) => {
            let status = if !out.report.counterexamples.is_empty() {
                Status::Fail
            } else if !out.report.unresolved.is_empty() {
                Status::Unverified
            } else {
                Status::Pass
            };
            (Some(out.report), status)
        }
        Err(_) => (None, Status::Unverified),
    }
}

fn quotient_probes(lab: &GroupLab) -> Vec<QuotientProbe> {
    lab.ideals()
        .iter()
        .filter(|i| !i.is_zero() && !i.is_whole())
        .map(|ideal| {
            let (status, verdict) = match lab.quotient(ideal) {
                Ok(Some(q)) => {
                    let (report, status) = probe_status(&q.lab);
                    let verdict = report
                        .map(|r| r.verdict)
                        .unwrap_or_else(|| "unverified (cap)".into());
                    (status, verdict)
                }
                _ => (Status::Unverified, "unverified".into()),
            };
            QuotientProbe {
                ideal: ideal.members().to_vec(),
                status,
                verdict,
            }
        })
        .collect()
}

/// Everything except the radical-quotient implications.
fn classify_core(lab: &GroupLab) -> StabilityReport {
    let ring = lab.ring();
    let predicates = ring_predicates(ring);
    let commutator = verify_commutator_ring(lab);
    let commutator_status = Status::all(commutator.iter().map(|c| c.status));
    let (probe, probe_status) = probe_status(lab);
    let quotient_probes = quotient_probes(lab);
    let quotients_status = Status::all(quotient_probes.iter().map(|q| q.status));
    let weakly_commutator = weakly_commutator_length(lab, 4);

    // Weakly-commutator with partially normal quotients (the zero ideal
    // gives R itself) yields stability.
    let all_probes = probe_status.combine(quotients_status);
    let hypothesis = weakly_commutator.status.combine(all_probes);
    let verdict_status = commutator_status.combine(all_probes);
    let verdict = match verdict_status {
        Status::Pass => "stable (probe)".to_string(),
        Status::Fail => "not stable".to_string(),
        Status::Unverified => "unverified (cap)".to_string(),
    };
    let implications = vec![
        ImplicationCheck::new(
            "weakly commutator with partially normal quotients => stable",
            hypothesis,
            verdict_status,
        ),
        ImplicationCheck::new(
            "weakly commutator and normal => stable",
            weakly_commutator.status.combine(probe_status),
            commutator_status,
        ),
    ];
    StabilityReport {
        ring: ring.family().to_string(),
        order: ring.order(),
        n: lab.n(),
        predicates,
        commutator,
        commutator_status,
        probe,
        probe_status,
        quotient_probes,
        weakly_commutator,
        radical_quotient: None,
        implications,
        verdict,
        verdict_status,
    }
}

/// Aggregates predicates, commutator checks, probes and the iterated
/// commutator length into a verdict, and checks the radical-quotient
/// implications against the classification of `R/J(R)`.
pub fn classify_ring(lab: &GroupLab) -> StabilityReport {
    let mut report = classify_core(lab);
    let ring = lab.ring();
    let radical = ring.jacobson_radical();
    let quotient = if radical.is_zero() {
        None
    } else {
        lab.quotient(&radical).ok().flatten()
    };
    // J(R) = 0 makes R/J(R) = R; the implications then hold trivially.
    let (q_verdict, q_probe, q_name) = match &quotient {
        Some(q) => {
            let sub = classify_core(&q.lab);
            (sub.verdict_status, sub.probe_status, Some(sub.ring))
        }
        None => (report.verdict_status, report.probe_status, None),
    };
    report.radical_quotient = q_name;
    let all_quotients = Status::all(
        report
            .quotient_probes
            .iter()
            .map(|q| q.status)
            .chain(std::iter::once(report.probe_status)),
    );
    report.implications.extend([
        ImplicationCheck::new(
            "R/J(R) partially normal => R partially normal",
            q_probe,
            report.probe_status,
        ),
        ImplicationCheck::new(
            "R/J(R) stable (so normal) => quotients partially normal",
            q_verdict,
            all_quotients,
        ),
        ImplicationCheck::new("R/J(R) stable => R stable", q_verdict, report.verdict_status),
    ]);
    report
}

/// Convenience constructor for suites that only have a ring.
pub fn lab_for(ring: Arc<FiniteRing>, n: usize, cap: usize) -> Result<GroupLab, GroupError> {
    Ok(GroupLab::new(ring, n, cap)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::DEFAULT_CAP;

    #[test]
    fn status_lattice() {
        assert_eq!(Status::Pass.combine(Status::Unverified), Status::Unverified);
        assert_eq!(Status::Unverified.combine(Status::Fail), Status::Fail);
        assert_eq!(Status::all([]), Status::Pass);
    }

    #[test]
    fn z2_classification() {
        let lab = GroupLab::new(Arc::new(FiniteRing::zmod(2).unwrap()), 3, DEFAULT_CAP).unwrap();
        let report = classify_ring(&lab);
        assert_eq!(report.verdict, "stable (probe)");
        assert!(report.predicates.von_neumann_regular);
        assert_eq!(report.weakly_commutator.length, Some(1));
        assert!(report.implications.iter().all(|i| i.status == Status::Pass));
    }
}

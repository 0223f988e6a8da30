//! Suite execution: each suite turns one ring into a list of checks.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringstab_core::classify::{self, Status};
use ringstab_core::matrix::{diag2_factor, embed_word_2x2};
use ringstab_core::predicates;
use ringstab_core::probe::{invariant_subgroup_probe, invariant_subgroup_consequences};
use ringstab_core::stability::{
    self, congruent_pair_check, congruent_witness, find_witness_scaled, decompose_conjugated_transvection,
    stable_rank_reduce, radical_entry_correction,
};
use ringstab_core::subgroup::{
    commutator_subgroup, elementary_over, relative_elementary_conjugated,
    relative_elementary_normal_closure,
};
use ringstab_core::{
    Elem, FiniteRing, GroupElement, GroupLab, Ideal, Mat, MatSpace, SubgroupClosure, Transvection,
    DEFAULT_CAP,
};
use serde_json::json;
use thiserror::Error;

use crate::report::{CheckResult, Report, RingReport};
use crate::spec::{DeclaredRing, RingSpecFile};

pub const SUITES: &[&str] = &[
    "axioms",
    "identities",
    "lemma1",
    "corollary1",
    "lemma6",
    "lemma7",
    "theorem2",
    "stable-rank",
    "predicates",
    "commutator",
    "normality-probe",
    "lemma-suite",
    "classify",
    "all",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected one of: {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("no ring named `{0}` in the spec")]
    UnknownRing(String),
    #[error("n = {n} is not supported by suite `{suite}` (n = 2 only for identities; at most 4)")]
    Dimension { suite: String, n: usize },
    #[error("ideal generator {0} is not an element of {1}")]
    BadIdeal(usize, String),
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Overrides the per-ring `n`; default 3.
    pub n: Option<usize>,
    /// Overrides the per-ring closure cap.
    pub cap: Option<usize>,
    /// Restricts ideal-indexed suites to the ideal generated by these codes.
    pub ideal: Option<Vec<usize>>,
    pub seed: u64,
    /// Sample count for randomized checks.
    pub samples: usize,
    /// Restricts the run to one declared ring.
    pub ring: Option<String>,
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            n: None,
            cap: None,
            ideal: None,
            seed: 0,
            samples: 1000,
            ring: None,
            timings: false,
        }
    }
}

/// Everything a suite needs for one ring.
struct Ctx<'a> {
    lab: &'a GroupLab,
    ideal: Option<Ideal>,
    seed: u64,
    samples: usize,
}

impl Ctx<'_> {
    fn space(&self) -> &MatSpace {
        self.lab.space()
    }

    fn ring(&self) -> &FiniteRing {
        self.lab.ring()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// The selected ideal, or every ideal of the ring.
    fn ideals(&self) -> Vec<Ideal> {
        match &self.ideal {
            Some(i) => vec![i.clone()],
            None => self.lab.ideals().to_vec(),
        }
    }

    fn ideal_label(&self, ideal: &Ideal) -> String {
        let gens: Vec<String> = ideal.generators().iter().map(|g| g.to_string()).collect();
        if gens.is_empty() {
            return "(0)".into();
        }
        format!("({})", gens.join(","))
    }
}

/// Counts instances and keeps the first failure.
struct Tally {
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn result(self, suite: &str, name: &str) -> CheckResult {
        let status = Status::from_bool(self.witness.is_none());
        CheckResult::new(suite, name, status)
            .with_witness(self.witness)
            .with_details(json!({ "checked": self.checked }))
    }
}

fn unverified(suite: &str, name: &str, reason: impl ToString) -> CheckResult {
    CheckResult::new(suite, name, Status::Unverified).with_witness(Some(reason.to_string()))
}

fn random_invertible(space: &MatSpace, rng: &mut ChaCha8Rng) -> GroupElement {
    let count = space.matrix_count().min(u64::MAX as u128) as u64;
    loop {
        if let Some(g) = space.try_invert(&space.from_index(rng.gen_range(0..count))) {
            return g;
        }
    }
}

fn random_elem(ring: &FiniteRing, rng: &mut ChaCha8Rng) -> Elem {
    rng.gen_range(0..ring.order()) as Elem
}

fn distinct_pair(n: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Either every element of `GL(n, R)` (when enumerable and at most
/// `limit` elements, or always when `exhaustive_any_size`) or `limit` seeded samples.
fn gl_elements(ctx: &Ctx, limit: usize, exhaustive_any_size: bool) -> (Vec<GroupElement>, &'static str) {
    if let Ok(gl) = ctx.lab.gl() {
        if exhaustive_any_size || gl.elements.len() <= limit {
            return (gl.elements.clone(), "exhaustive");
        }
    }
    let mut rng = ctx.rng();
    let sample = (0..limit)
        .map(|_| random_invertible(ctx.space(), &mut rng))
        .collect();
    (sample, "sampled")
}

fn axioms(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "axioms";
    let ring = ctx.ring();
    let mut out = vec![match ring.verify_axioms() {
        Ok(()) => CheckResult::new(S, "ring axioms", Status::Pass),
        Err(e) => CheckResult::new(S, "ring axioms", Status::Fail).with_witness(Some(e.to_string())),
    }];
    // Independent reading of the radical: 1 − rs invertible for all s.
    let radical = ring.jacobson_radical();
    let right: Vec<Elem> = ring
        .elements()
        .filter(|&r| ring.elements().all(|s| ring.is_unit(ring.sub(ring.one(), ring.mul(r, s)))))
        .collect();
    let two_sided = ring.is_two_sided_ideal(radical.members());
    let ok = right == radical.members() && two_sided;
    out.push(
        CheckResult::new(S, "jacobson radical", Status::from_bool(ok))
            .with_witness((!ok).then(|| format!("left {:?} right {right:?}", radical.members())))
            .with_details(json!({
                "radical": radical.members(),
                "units": ring.units().len(),
                "ideals": ctx.lab.ideals().len(),
            })),
    );
    out
}

fn identities(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "identities";
    let space = ctx.space();
    let ring = ctx.ring();
    let n = space.n();
    let mut out = Vec::new();

    let mut diag = Tally::new();
    for x in ring.units() {
        match diag2_factor(space.ring_arc(), x) {
            Ok(w) => {
                let space2 = MatSpace::new(space.ring_arc().clone(), 2).expect("n = 2");
                let mut ok = w.verify(&space2);
                if n >= 3 {
                    ok &= embed_word_2x2(&w, space, 0, n - 1).is_ok_and(|e| e.verify(space));
                }
                diag.record(ok, || format!("x={x}"));
            }
            Err(e) => diag.record(false, || format!("x={x}: {e}")),
        }
    }
    out.push(diag.result(S, "diag(x, x⁻¹) six-factor word"));
    if n < 3 {
        return out;
    }

    let mut closed = Tally::new();
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            for l in 0..n {
                for j in (0..n).filter(|&j| j != l) {
                    if (l, j) == (k, i) {
                        continue;
                    }
                    for x in ring.elements() {
                        for y in ring.elements() {
                            let a = Transvection { i, j: k, r: x };
                            let b = Transvection { i: l, j, r: y };
                            let direct = space.comm(&space.transvection(&a), &space.transvection(&b));
                            let ok = space
                                .transvection_comm_closed_form(&a, &b)
                                .is_ok_and(|t| space.transvection_mat(&t) == direct);
                            closed.record(ok, || format!("[{a}, {b}] = {direct}"));
                        }
                    }
                }
            }
        }
    }
    out.push(closed.result(S, "non-opposite transvection commutators"));

    let mut additive = Tally::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for r in ring.elements() {
                for s in ring.elements() {
                    let lhs = space.mul(&space.t(i, j, r).mat, &space.t(i, j, s).mat);
                    let ok = lhs == space.t(i, j, ring.add(r, s)).mat;
                    additive.record(ok, || format!("i={} j={} r={r} s={s}", i + 1, j + 1));
                }
            }
        }
    }
    out.push(additive.result(S, "t_ij(r)·t_ij(s) = t_ij(r+s)"));

    let mut rng = ctx.rng();
    let mut hall = Tally::new();
    let mut inverse = Tally::new();
    for _ in 0..ctx.samples {
        let a = random_invertible(space, &mut rng);
        let b = random_invertible(space, &mut rng);
        let c = random_invertible(space, &mut rng);
        let (ok, product) = space.hall_identity_check(&a, &b, &c);
        hall.record(ok, || format!("a={} b={} c={} product={product}", a.mat, b.mat, c.mat));
        let ab = space.comm_element(&a, &b);
        let ok = space.mul(&ab.mat, &space.comm(&b, &a)) == space.identity();
        inverse.record(ok, || format!("a={} b={}", a.mat, b.mat));
    }
    out.push(hall.result(S, "Hall–Witt identity (sampled)"));
    out.push(inverse.result(S, "[a,b]⁻¹ = [b,a] (sampled)"));
    out
}

fn closure_status(parts: &[&SubgroupClosure]) -> Option<String> {
    parts
        .iter()
        .any(|h| !h.is_complete())
        .then(|| "closure hit the cap".to_string())
}

fn relative_two_ways(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "lemma1";
    let space = ctx.space();
    let cap = ctx.lab.cap();
    ctx.ideals()
        .iter()
        .map(|ideal| {
            let name = format!("E(n,I) two ways, I = {}", ctx.ideal_label(ideal));
            let normal = relative_elementary_normal_closure(space, ideal, cap);
            let generated = relative_elementary_conjugated(space, ideal, cap);
            if let Some(reason) = closure_status(&[&normal, &generated]) {
                return unverified(S, &name, reason);
            }
            let ok = normal.set_eq(&generated);
            let witness = (!ok).then(|| {
                normal
                    .first_outside(&generated)
                    .or_else(|| generated.first_outside(&normal))
                    .map(|m| m.encoding())
                    .unwrap_or_default()
            });
            CheckResult::new(S, name, Status::from_bool(ok))
                .with_witness(witness)
                .with_details(json!({
                    "ideal": ideal.members(),
                    "normal_closure": normal.summary(),
                    "conjugated_generators": generated.summary(),
                }))
        })
        .collect()
}

fn ideal_products(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "corollary1";
    let space = ctx.space();
    let ring = ctx.ring();
    let cap = ctx.lab.cap();
    let ideals = ctx.ideals();
    let mut out = Vec::new();
    let generated: Vec<SubgroupClosure> = ideals
        .iter()
        .map(|i| elementary_over(space, i.members(), cap))
        .collect();
    for (a, ia) in ideals.iter().enumerate() {
        let square = ring.ideal_product(ia, ia);
        let name = format!("E(n,I²) ⊆ E_I, I = {}", ctx.ideal_label(ia));
        let rel = ctx.lab.relative_elementary(&square);
        out.push(if let Some(reason) = closure_status(&[&rel, &generated[a]]) {
            unverified(S, &name, reason)
        } else {
            let ok = rel.is_subset_of(&generated[a]);
            CheckResult::new(S, name, Status::from_bool(ok))
                .with_witness(rel.first_outside(&generated[a]).map(|m| m.encoding()))
        });
        for (b, ib) in ideals.iter().enumerate() {
            let name = format!(
                "E(n,IJ) ⊆ [E_I,E_J], I = {}, J = {}",
                ctx.ideal_label(ia),
                ctx.ideal_label(ib)
            );
            let product = ring.ideal_product(ia, ib);
            let rel = ctx.lab.relative_elementary(&product);
            let comm = match commutator_subgroup(&generated[a], &generated[b], cap) {
                Ok(c) => c,
                Err(e) => {
                    out.push(unverified(S, &name, e));
                    continue;
                }
            };
            out.push(if let Some(reason) = closure_status(&[&rel, &comm]) {
                unverified(S, &name, reason)
            } else {
                let ok = rel.is_subset_of(&comm);
                CheckResult::new(S, name, Status::from_bool(ok))
                    .with_witness(rel.first_outside(&comm).map(|m| m.encoding()))
                    .with_details(json!({
                        "relative": rel.summary(),
                        "commutator": comm.summary(),
                    }))
            });
        }
    }
    out
}

/// A random square-zero matrix: a strictly upper-triangular matrix with
/// zero square, conjugated by a random invertible matrix.
fn random_square_zero(space: &MatSpace, rng: &mut ChaCha8Rng) -> Mat {
    let ring = space.ring();
    let n = space.n();
    let nil = loop {
        let mut m = space.zero();
        for i in 0..n {
            for j in i + 1..n {
                m = space.add(&m, &space.unit_scaled(i, j, random_elem(ring, rng)));
            }
        }
        if space.mul(&m, &m) == space.zero() {
            break m;
        }
    };
    let p = random_invertible(space, rng);
    space.mul(&space.mul(&p.mat, &nil), &p.inv)
}

/// Square-zero factorizations for every `(x·e_ik, −y·e_lj)` with `1 + ab` invertible,
/// then for `random` seeded square-zero pairs.
pub fn square_zero_checks(space: &MatSpace, random: usize, seed: u64) -> Vec<CheckResult> {
    const S: &str = "lemma6";
    let ring = space.ring();
    let n = space.n();
    let mut patterns = Tally::new();
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            for l in 0..n {
                for j in (0..n).filter(|&j| j != l) {
                    for x in ring.elements() {
                        for y in ring.elements() {
                            let a = space.unit_scaled(i, k, x);
                            let b = space.unit_scaled(l, j, ring.neg(y));
                            let one_ab = space.one_plus(&space.mul(&a, &b));
                            if space.try_invert(&one_ab).is_none() {
                                continue;
                            }
                            let ok = space.square_zero_factor(&a, &b).is_ok_and(|w| w.verify(space));
                            patterns.record(ok, || format!("a={a} b={b}"));
                        }
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = Tally::new();
    while sampled.checked < random {
        let a = random_square_zero(space, &mut rng);
        let b = random_square_zero(space, &mut rng);
        if space.try_invert(&space.one_plus(&space.mul(&a, &b))).is_none() {
            continue;
        }
        let ok = space.square_zero_factor(&a, &b).is_ok_and(|w| w.verify(space));
        sampled.record(ok, || format!("a={a} b={b}"));
    }
    vec![
        patterns.result(S, "factorization of 1+ab, unit patterns"),
        sampled.result(S, "factorization of 1+ab, random square-zero pairs"),
    ]
}

fn square_zero(ctx: &Ctx) -> Vec<CheckResult> {
    square_zero_checks(ctx.space(), ctx.samples, ctx.seed)
}

/// Seeded instances `(g, i, j, r, c)` with an admissible witness row; `c`
/// runs through the central elements in turn.
pub fn conjugated_transvection_checks(space: &MatSpace, count: usize, seed: u64) -> CheckResult {
    const S: &str = "lemma7";
    let ring = space.ring();
    let n = space.n();
    let central = ring.center();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut product = Tally::new();
    let mut coefficients = Tally::new();
    let mut attempts = 0usize;
    while product.checked < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let g = random_invertible(space, &mut rng);
        let (i, j) = distinct_pair(n, &mut rng);
        let r = random_elem(ring, &mut rng);
        let c = central[product.checked % central.len()];
        let Some(w) = find_witness_scaled(ring, &g, i, j, r, c) else {
            continue;
        };
        let label = || format!("g={} i={} j={} r={r} c={c} row={:?}", g.mat, i + 1, j + 1, w.x);
        match decompose_conjugated_transvection(space, &g, c, &w) {
            Ok(d) => {
                product.record(d.word.verify(space), label);
                coefficients.record(d.in_cr, label);
            }
            Err(e) => product.record(false, || format!("{}: {e}", label())),
        }
    }
    let short = product.checked < count;
    let checked = product.checked;
    let ok = product.witness.is_none() && coefficients.witness.is_none();
    let status = if !ok {
        Status::Fail
    } else if short {
        Status::Unverified
    } else {
        Status::Pass
    };
    CheckResult::new(S, "t_ij(rc²)^g = T·d_l·d_k⁻¹ with T over cR", status)
        .with_witness(product.witness.or(coefficients.witness).or_else(|| {
            short.then(|| format!("only {checked} admissible instances in {attempts} attempts"))
        }))
        .with_details(json!({ "instances": checked, "attempts": attempts, "central": central }))
}

fn conjugated_transvections(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "lemma7";
    let space = ctx.space();
    let ring = ctx.ring();
    let n = space.n();
    let mut out = vec![conjugated_transvection_checks(space, ctx.samples, ctx.seed)];

    // Two-element form: h ∈ C_I, g' = g·h⁻¹.
    let ideals: Vec<Ideal> = ctx
        .ideals()
        .into_iter()
        .filter(|i| !i.is_zero() && !i.is_whole())
        .collect();
    let central = ring.center();
    for ideal in ideals {
        let name = format!("congruent pair, I = {}", ctx.ideal_label(&ideal));
        let pair = match ctx.lab.congruence(&ideal) {
            Ok(p) => p,
            Err(e) => {
                out.push(unverified(S, &name, e));
                continue;
            }
        };
        let kernel = pair.kernel.elements();
        let mut rng = ctx.rng();
        let mut diag = Tally::new();
        let mut diag2 = Tally::new();
        let mut in_ci = Tally::new();
        let mut in_j = Tally::new();
        let target = (ctx.samples / 10).max(10);
        let mut attempts = 0;
        while diag.checked < target && attempts < 50 * target {
            attempts += 1;
            let g = random_invertible(space, &mut rng);
            let h = space
                .try_invert(&kernel[rng.gen_range(0..kernel.len())])
                .expect("kernel element");
            let (i, j) = distinct_pair(n, &mut rng);
            let r = random_elem(ring, &mut rng);
            let c = central[diag.checked % central.len()];
            let Some(w) = find_witness_scaled(ring, &g, i, j, r, c) else {
                continue;
            };
            let g_prime = space.group_mul(&g, &h.inverse());
            let Some(w2) = congruent_witness(ring, &g_prime, &w, &ideal, c) else {
                continue;
            };
            let c2 = ring.mul(c, c);
            let c2i = ring.ideal_generated(
                &ideal.members().iter().map(|&a| ring.mul(c2, a)).collect::<Vec<_>>(),
            );
            let ci = ring.ideal_generated(
                &ideal.members().iter().map(|&a| ring.mul(c, a)).collect::<Vec<_>>(),
            );
            let jr = ring.ideal_generated(&[r]);
            let (e_c2i, e_ci, e_j) = (
                ctx.lab.relative_elementary(&c2i),
                ctx.lab.relative_elementary(&ci),
                ctx.lab.relative_elementary(&jr),
            );
            let label = || format!("g={} h={} i={} j={} r={r} c={c}", g.mat, h.mat, i + 1, j + 1);
            match congruent_pair_check(space, &g, &h, c, &w, &w2, &e_c2i, &e_ci, &e_j) {
                Ok(chk) => {
                    diag.record(chk.diagonal_in_relative, label);
                    if let Some(ok) = chk.diag2_word {
                        diag2.record(ok, label);
                    }
                    in_ci.record(chk.commutator_in_ci, label);
                    in_j.record(chk.commutator_in_j, label);
                }
                Err(e) => diag.record(false, || format!("{}: {e}", label())),
            }
        }
        let witness = diag
            .witness
            .clone()
            .or(diag2.witness.clone())
            .or(in_ci.witness.clone())
            .or(in_j.witness.clone());
        let status = if witness.is_some() {
            Status::Fail
        } else if diag.checked < target {
            Status::Unverified
        } else {
            Status::Pass
        };
        out.push(
            CheckResult::new(S, name, status)
                .with_witness(witness.or_else(|| {
                    (diag.checked < target).then(|| "too few admissible instances".to_string())
                }))
                .with_details(json!({
                    "instances": diag.checked,
                    "diag2_words": diag2.checked,
                })),
        );
    }
    out
}

fn radical_correction(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "theorem2";
    let space = ctx.space();
    let n = space.n();
    let radical = ctx.ring().jacobson_radical();
    let (elements, mode) = gl_elements(ctx, ctx.samples, true);
    let mut pattern = Tally::new();
    for g in &elements {
        for i in 0..n {
            for j in 0..n {
                if !radical.contains(g.mat.get(i, j)) {
                    continue;
                }
                let ok = radical_entry_correction(space, &radical, g, i, j).is_ok();
                pattern.record(ok, || format!("g={} i={} j={}", g.mat, i + 1, j + 1));
            }
        }
    }
    let mut r = pattern.result(S, "radical entry correction zero pattern");
    r.details["mode"] = json!(mode);
    r.details["elements"] = json!(elements.len());
    vec![r]
}

fn stable_rank(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "stable-rank";
    let ring = ctx.ring();
    let space = ctx.space();
    let mut out = Vec::new();
    let counter = predicates::stable_rank_counterexample(ring, 1);
    out.push(
        CheckResult::new(S, "stable rank 1", Status::from_bool(counter.is_none()))
            .with_witness(counter.map(|v| format!("{v:?}"))),
    );

    let mut witness = Tally::new();
    for e in ring.elements().filter(|&e| ring.is_idempotent(e)) {
        for r in ring.elements() {
            if !predicates::is_unimodular(ring, &[r, e]) {
                continue;
            }
            let ok = predicates::rank1_witness_via_idempotent(ring, r, e)
                .is_ok_and(|s| ring.is_unit(ring.add(e, ring.mul(s, r))));
            witness.record(ok, || format!("r={r} e={e}"));
        }
    }
    out.push(witness.result(S, "idempotent shortening s = (1−e)α"));

    let mut rng = ctx.rng();
    let mut reduce = Tally::new();
    for _ in 0..ctx.samples {
        let g = random_invertible(space, &mut rng);
        let ok = stable_rank_reduce(space, &g).is_ok();
        reduce.record(ok, || g.mat.encoding());
    }
    out.push(reduce.result(S, "column reduction clears (1,n)"));

    for ideal in ctx.ideals().into_iter().filter(|i| !i.is_zero()) {
        let mut congruent = Tally::new();
        let mut attempts = 0;
        while congruent.checked < ctx.samples / 10 && attempts < 100 * ctx.samples {
            attempts += 1;
            let entries: Vec<Elem> = (0..space.n() * space.n())
                .map(|_| ideal.members()[rng.gen_range(0..ideal.len())])
                .collect();
            let m = space.one_plus(&space.from_entries(&entries).expect("codes"));
            let Some(g) = space.try_invert(&m) else {
                continue;
            };
            let ok = stable_rank_reduce(space, &g).is_ok_and(|red| red.s.iter().all(|&s| ideal.contains(s)));
            congruent.record(ok, || g.mat.encoding());
        }
        out.push(congruent.result(
            S,
            &format!("column reduction of C_I stays in I, I = {}", ctx.ideal_label(&ideal)),
        ));
    }
    out
}

fn predicates_suite(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "predicates";
    let ring = ctx.ring();
    let table = classify::ring_predicates(ring);
    let mut out = vec![CheckResult::new(S, "predicate table", Status::Pass).with_details(&table)];

    let mut regular = Tally::new();
    for a in ring.elements() {
        if predicates::regular_partner(ring, a).is_some() {
            let ok = predicates::regular_idempotent(ring, a).is_ok();
            regular.record(ok, || format!("a={a}"));
        }
    }
    out.push(regular.result(S, "regular idempotent e = aa'"));

    let mut nearly = Tally::new();
    for a in ring.elements() {
        if let Some(b) = predicates::nearly_local_partner(ring, a) {
            let ok = predicates::nearly_local_idempotent(ring, a, b).is_ok();
            nearly.record(ok, || format!("a={a} a'={b}"));
        }
    }
    out.push(nearly.result(S, "nearly-local idempotent"));

    let mut power = Tally::new();
    for a in ring.elements() {
        let p = predicates::power_idempotent(ring, a);
        let am = (0..p.m).fold(ring.one(), |acc, _| ring.mul(acc, a));
        let ok = ring.is_idempotent(p.e) && ring.mul(p.e, am) == am;
        power.record(ok, || format!("a={a} m={} a'={} e={}", p.m, p.a_prime, p.e));
    }
    out.push(power.result(S, "power idempotent a^m = a^(m+1)a'"));

    if table.commutative && ctx.space().n() >= 3 {
        let (elements, mode) = gl_elements(ctx, ctx.samples, false);
        let n = ctx.space().n();
        let mut stable = Tally::new();
        for g in &elements {
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let ok = stability::is_rij_stable(ring, g, i, j);
                    stable.record(ok, || format!("g={} i={} j={}", g.mat, i + 1, j + 1));
                }
            }
        }
        let mut r = stable.result(S, "R(g) = R for every pair i ≠ j");
        r.details["mode"] = json!(mode);
        r.details["elements"] = json!(elements.len());
        out.push(r);
    }
    out
}

fn commutator(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "commutator";
    let mut out: Vec<CheckResult> = ctx
        .ideals()
        .iter()
        .map(|ideal| {
            let r = classify::verify_commutator_ideal(ctx.lab, ideal);
            let name = format!("[C(n,I), E(n,R)] = E(n,I) ⊴ GL, I = {}", ctx.ideal_label(ideal));
            CheckResult::new(S, name, r.status)
                .with_witness(r.witness.clone().or(r.note.clone()))
                .with_details(&r)
        })
        .collect();
    if ctx.ideal.is_none() {
        let len = classify::weakly_commutator_length(ctx.lab, 4);
        out.push(
            CheckResult::new(S, "iterated commutator length", len.status)
                .with_witness(len.note.clone())
                .with_details(&len),
        );
    }
    out
}

fn normality_probe(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "normality-probe";
    match invariant_subgroup_probe(ctx.lab) {
        Ok(out) => {
            let r = &out.report;
            let status = if !r.counterexamples.is_empty() {
                Status::Fail
            } else if !r.unresolved.is_empty() {
                Status::Unverified
            } else {
                Status::Pass
            };
            let witness = r.counterexamples.first().or(r.unresolved.first()).cloned();
            vec![CheckResult::new(S, "transvection-free invariant closures are central", status)
                .with_witness(witness)
                .with_details(r)]
        }
        Err(e) => vec![unverified(S, "transvection-free invariant closures are central", e)],
    }
}

fn invariant_consequences(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "lemma-suite";
    let outcome = match invariant_subgroup_probe(ctx.lab) {
        Ok(o) => o,
        Err(e) => return vec![unverified(S, "invariant subgroup consequences", e)],
    };
    match invariant_subgroup_consequences(ctx.lab, &outcome) {
        Ok(report) => report
            .checks
            .iter()
            .map(|c| {
                CheckResult::new(S, c.name.clone(), Status::from_bool(c.passed))
                    .with_witness(c.witness.clone())
                    .with_details(json!({
                        "instances": c.instances,
                        "subgroups": report.subgroups,
                        "elements": report.elements,
                    }))
            })
            .collect(),
        Err(e) => vec![unverified(S, "invariant subgroup consequences", e)],
    }
}

fn classify_suite(ctx: &Ctx) -> Vec<CheckResult> {
    const S: &str = "classify";
    let report = classify::classify_ring(ctx.lab);
    let mut out = vec![CheckResult::new(S, "stability verdict", report.verdict_status)
        .with_witness((report.verdict_status != Status::Pass).then(|| report.verdict.clone()))
        .with_details(&report)];
    for imp in &report.implications {
        out.push(
            CheckResult::new(S, format!("implication: {}", imp.name), imp.status)
                .with_details(imp),
        );
    }
    out
}

fn run_one(ctx: &Ctx, suite: &str) -> Vec<CheckResult> {
    match suite {
        "axioms" => axioms(ctx),
        "identities" => identities(ctx),
        "lemma1" => relative_two_ways(ctx),
        "corollary1" => ideal_products(ctx),
        "lemma6" => square_zero(ctx),
        "lemma7" => conjugated_transvections(ctx),
        "theorem2" => radical_correction(ctx),
        "stable-rank" => stable_rank(ctx),
        "predicates" => predicates_suite(ctx),
        "commutator" => commutator(ctx),
        "normality-probe" => normality_probe(ctx),
        "lemma-suite" => invariant_consequences(ctx),
        "classify" => classify_suite(ctx),
        _ => unreachable!("validated suite name"),
    }
}

fn ideal_from(ring: &FiniteRing, gens: &[usize]) -> Result<Ideal, SuiteError> {
    let codes = gens
        .iter()
        .map(|&g| {
            if g < ring.order() {
                Ok(g as Elem)
            } else {
                Err(SuiteError::BadIdeal(g, ring.family().to_string()))
            }
        })
        .collect::<Result<Vec<Elem>, _>>()?;
    Ok(ring.ideal_generated(&codes))
}

fn run_ring(
    declared: &DeclaredRing,
    suites: &[&str],
    opts: &SuiteOptions,
    timings: &mut BTreeMap<String, u64>,
) -> Result<RingReport, SuiteError> {
    let n = opts.n.or(declared.n).unwrap_or(3);
    let cap = opts.cap.or(declared.cap).unwrap_or(DEFAULT_CAP);
    for s in suites {
        if !(2..=4).contains(&n) || (n == 2 && *s != "identities") {
            return Err(SuiteError::Dimension {
                suite: s.to_string(),
                n,
            });
        }
    }
    let lab = GroupLab::new(Arc::clone(&declared.ring), n, cap).map_err(|_| SuiteError::Dimension {
        suite: suites.join(","),
        n,
    })?;
    let ideal = opts
        .ideal
        .as_deref()
        .map(|g| ideal_from(&declared.ring, g))
        .transpose()?;
    let ctx = Ctx {
        lab: &lab,
        ideal,
        seed: opts.seed,
        samples: opts.samples,
    };
    let mut results = Vec::new();
    for s in suites {
        let start = Instant::now();
        results.extend(run_one(&ctx, s));
        timings.insert(
            format!("{}/{s}", declared.name),
            start.elapsed().as_millis() as u64,
        );
    }
    Ok(RingReport {
        name: declared.name.clone(),
        family: declared.ring.family().to_string(),
        order: declared.ring.order(),
        n,
        cap,
        results,
    })
}

/// Runs `suite` on every top-level ring of `spec` (or only `opts.ring`).
pub fn run_suite(spec: &RingSpecFile, suite: &str, opts: &SuiteOptions) -> Result<Report, SuiteError> {
    if !SUITES.contains(&suite) {
        return Err(SuiteError::UnknownSuite(suite.to_string()));
    }
    let suites: Vec<&str> = if suite == "all" {
        SUITES.iter().copied().filter(|s| *s != "all").collect()
    } else {
        vec![suite]
    };
    let rings: Vec<&DeclaredRing> = match &opts.ring {
        Some(name) => vec![spec
            .get(name)
            .ok_or_else(|| SuiteError::UnknownRing(name.clone()))?],
        None => spec.top_level().collect(),
    };
    let mut report = Report::new(suite, opts.seed);
    let mut timings = BTreeMap::new();
    for r in rings {
        report.rings.push(run_ring(r, &suites, opts, &mut timings)?);
    }
    if opts.timings {
        report.timings = Some(timings);
    }
    report.finalize();
    Ok(report)
}

//! The twelve acceptance criteria, one pass/fail line each.
//!
//! Lines go straight to the process stdout so they show up in the test log
//! even when the harness captures output.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringstab::suites::square_zero_checks;
use ringstab_core::classify::{
    ring_predicates, verify_commutator_ring, weakly_commutator_length, Status,
};
use ringstab_core::probe::invariant_subgroup_probe;
use ringstab_core::ring::builtin_test_rings;
use ringstab_core::stability::{
    decompose_conjugated_transvection, find_witness_scaled, r_of_g, radical_entry_correction,
};
use ringstab_core::subgroup::{
    commutator_subgroup, elementary_over, enumerate_gl, relative_elementary_conjugated,
    relative_elementary_normal_closure,
};
use ringstab_core::{
    build_ring, Elem, FiniteRing, GroupElement, GroupLab, Mat, MatSpace, RingDescriptor,
    Transvection, DEFAULT_CAP,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn z(m: usize) -> Arc<FiniteRing> {
    Arc::new(FiniteRing::zmod(m).unwrap())
}

fn dual_numbers() -> Arc<FiniteRing> {
    Arc::new(build_ring(&RingDescriptor::TruncPoly { base: z(2), k: 2 }, 256).unwrap())
}

fn named_rings() -> Vec<(&'static str, Arc<FiniteRing>)> {
    vec![("Z/4", z(4)), ("Z/6", z(6)), ("F2[x]/(x^2)", dual_numbers())]
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || {
        format!("took {:.1?}, limit {limit:?}", start.elapsed())
    })
}

/// 3×3 determinant by cofactor expansion, independent of the matrix code.
fn det3(ring: &FiniteRing, m: &Mat) -> Elem {
    let e = |p, q| m.get(p, q);
    let minor = |a: usize, b: usize| {
        let (r1, r2) = (1, 2);
        let (c1, c2) = match (a, b) {
            (_, 0) => (1, 2),
            (_, 1) => (0, 2),
            _ => (0, 1),
        };
        ring.sub(ring.mul(e(r1, c1), e(r2, c2)), ring.mul(e(r1, c2), e(r2, c1)))
    };
    let mut acc = ring.zero();
    for b in 0..3 {
        let term = ring.mul(e(0, b), minor(0, b));
        acc = if b % 2 == 0 { ring.add(acc, term) } else { ring.sub(acc, term) };
    }
    acc
}

fn non_opposite(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            for l in 0..n {
                for j in (0..n).filter(|&j| j != l) {
                    if (l, j) != (k, i) {
                        out.push((i, k, l, j));
                    }
                }
            }
        }
    }
    out
}

fn closed_form() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    let rings = [("Z/2", z(2)), ("Z/4", z(4)), ("Z/6", z(6)), ("F2[x]/(x^2)", dual_numbers())];
    for n in [3, 4] {
        for (name, ring) in &rings {
            let s = MatSpace::new(ring.clone(), n).unwrap();
            for (i, k, l, j) in non_opposite(n) {
                for x in ring.elements() {
                    for y in ring.elements() {
                        let a = Transvection { i, j: k, r: x };
                        let b = Transvection { i: l, j, r: y };
                        let closed = s.transvection_comm_closed_form(&a, &b).map_err(|e| e.to_string())?;
                        let direct = s.comm(&s.transvection(&a), &s.transvection(&b));
                        ensure(s.transvection_mat(&closed) == direct, || {
                            format!("{name}, n = {n}: [{a}, {b}]")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} commutators, {:.1?}", start.elapsed()))
}

fn relative_two_ways() -> Outcome {
    let start = Instant::now();
    let mut ideals = 0;
    for (name, ring) in named_rings() {
        let space = MatSpace::new(ring.clone(), 3).unwrap();
        for ideal in ring.all_ideals() {
            let a = relative_elementary_normal_closure(&space, &ideal, DEFAULT_CAP);
            let b = relative_elementary_conjugated(&space, &ideal, DEFAULT_CAP);
            ensure(a.is_complete() && b.is_complete(), || format!("{name}: cap reached"))?;
            ensure(a.set_eq(&b), || format!("{name}: ideal {:?}", ideal.members()))?;
            ideals += 1;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{ideals} ideals, {:.1?}", start.elapsed()))
}

fn ideal_products() -> Outcome {
    let mut pairs = 0;
    for (name, ring) in named_rings() {
        let space = MatSpace::new(ring.clone(), 3).unwrap();
        let ideals = ring.all_ideals();
        let gens: Vec<_> = ideals
            .iter()
            .map(|i| elementary_over(&space, i.members(), DEFAULT_CAP))
            .collect();
        for (a, ia) in ideals.iter().enumerate() {
            let square = relative_elementary_conjugated(&space, &ring.ideal_product(ia, ia), DEFAULT_CAP);
            ensure(square.is_complete() && square.is_subset_of(&gens[a]), || {
                format!("{name}: E(I²) ⊄ ⟨E_I⟩ for I = {:?}", ia.members())
            })?;
            for (b, ib) in ideals.iter().enumerate() {
                let rel = relative_elementary_conjugated(&space, &ring.ideal_product(ia, ib), DEFAULT_CAP);
                let comm = commutator_subgroup(&gens[a], &gens[b], DEFAULT_CAP).map_err(|e| e.to_string())?;
                ensure(rel.is_complete() && comm.is_complete(), || format!("{name}: cap reached"))?;
                ensure(rel.is_subset_of(&comm), || {
                    format!("{name}: I = {:?}, J = {:?}", ia.members(), ib.members())
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ideal pairs"))
}

fn commutator_z4() -> Outcome {
    let start = Instant::now();
    let lab = GroupLab::new(z(4), 3, DEFAULT_CAP).unwrap();
    let results = verify_commutator_ring(&lab);
    ensure(results.len() == 3, || format!("{} ideals", results.len()))?;
    for r in &results {
        ensure(r.status == Status::Pass, || format!("ideal {:?}: {:?}", r.ideal, r.witness))?;
    }
    let gl = lab.gl().map_err(|e| e.to_string())?;
    ensure(gl.elements.len() == 86016, || format!("|GL| = {}", gl.elements.len()))?;
    for ideal in lab.ideals() {
        let rel = lab.relative_elementary(ideal);
        for g in &gl.elements {
            for t in rel.generators() {
                let c = lab.space().conj(&t.mat, g);
                ensure(rel.contains(&c), || format!("ideal {:?}, g = {}", ideal.members(), g.mat))?;
            }
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("3 ideals, 86016 conjugators, {:.1?}", start.elapsed()))
}

fn partial_normality() -> Outcome {
    let mut parts = Vec::new();
    for (m, order) in [(2, 168), (4, 86016)] {
        let lab = GroupLab::new(z(m), 3, DEFAULT_CAP).unwrap();
        let out = invariant_subgroup_probe(&lab).map_err(|e| e.to_string())?;
        let r = &out.report;
        ensure(r.group_order == order, || format!("Z/{m}: |GL| = {}", r.group_order))?;
        ensure(r.passed(), || {
            format!("Z/{m}: {:?} {:?}", r.counterexamples, r.unresolved)
        })?;
        parts.push(format!("Z/{m}: {} orbits", r.orbits));
    }
    Ok(parts.join(", "))
}

fn square_zero() -> Outcome {
    let space = MatSpace::new(z(4), 3).unwrap();
    let results = square_zero_checks(&space, 10_000, 0);
    for r in &results {
        ensure(r.status == Status::Pass, || format!("{}: {:?}", r.name, r.witness))?;
    }
    let sampled = results[1].details["checked"].as_u64().unwrap_or(0);
    ensure(sampled >= 10_000, || format!("only {sampled} random pairs"))?;
    Ok(format!("{} unit patterns, {sampled} random pairs", results[0].details["checked"]))
}

fn radical_correction() -> Outcome {
    let space = MatSpace::new(z(4), 3).unwrap();
    let ring = space.ring();
    let radical = ring.jacobson_radical();
    let gl = enumerate_gl(&space, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut instances = 0;
    for g in &gl.elements {
        for i in 0..3 {
            for j in 0..3 {
                if !radical.contains(g.mat.get(i, j)) {
                    continue;
                }
                let c = radical_entry_correction(&space, &radical, g, i, j)
                    .map_err(|e| format!("g = {}, ({}, {}): {e}", g.mat, i + 1, j + 1))?;
                let g1 = &c.g1.mat;
                let row_ok = (0..3).filter(|&l| l != j).all(|l| g1.get(i, l) == 0);
                let col_ok = (0..3).filter(|&s| s != i).all(|s| g1.get(s, j) == 0);
                let recomputed = space.mul(&space.mul(&space.mul(&c.e1.mat, &c.e.mat), &g.mat), &c.e2.mat);
                let unimodular = [&c.e, &c.e1, &c.e2].iter().all(|x| det3(ring, &x.mat) == 1);
                ensure(row_ok && col_ok && recomputed == *g1 && unimodular, || {
                    format!("g = {}, ({}, {}) → g₁ = {g1}", g.mat, i + 1, j + 1)
                })?;
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} (g, i, j) instances, exhaustive"))
}

fn stability_commutative() -> Outcome {
    let pairs: Vec<(usize, usize)> = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let space = MatSpace::new(z(2), 3).unwrap();
    let gl2 = enumerate_gl(&space, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(gl2.elements.len() == 168, || "GL(3, Z/2) size".into())?;
    let full = |ring: &FiniteRing, g: &GroupElement| {
        pairs.iter().all(|&(i, j)| r_of_g(ring, g, i, j).iter().all(|&b| b))
    };
    for g in &gl2.elements {
        ensure(full(space.ring(), g), || format!("Z/2: g = {}", g.mat))?;
    }
    let space4 = MatSpace::new(z(4), 3).unwrap();
    let gl4 = enumerate_gl(&space4, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let g = &gl4.elements[rng.gen_range(0..gl4.elements.len())];
        ensure(full(space4.ring(), g), || format!("Z/4: g = {}", g.mat))?;
    }
    Ok("168 exhaustive over Z/2, 1000 sampled over Z/4".into())
}

fn predicate_table() -> Outcome {
    let m2 = build_ring(&RingDescriptor::Matrix { k: 2, base: z(2) }, 256).unwrap();
    ensure(!ring_predicates(&z(4)).von_neumann_regular, || "vN(Z/4)".into())?;
    ensure(ring_predicates(&m2).von_neumann_regular, || "vN(M2(F2))".into())?;
    ensure(ring_predicates(&z(4)).nearly_local, || "nearly-local(Z/4)".into())?;
    ensure(ring_predicates(&z(6)).nearly_local, || "nearly-local(Z/6)".into())?;
    let rings = builtin_test_rings();
    for (name, ring) in &rings {
        ensure(ring_predicates(ring).stable_rank_one, || format!("sr({name}) > 1"))?;
    }
    Ok(format!("stable rank 1 on {} built-in rings", rings.len()))
}

fn weakly_commutator() -> Outcome {
    let lab = GroupLab::new(z(4), 3, DEFAULT_CAP).unwrap();
    let len = weakly_commutator_length(&lab, 4);
    ensure(len.status == Status::Pass && len.length == Some(1), || format!("{len:?}"))?;
    Ok("length 1".into())
}

fn conjugated_transvections() -> Outcome {
    let space = MatSpace::new(z(4), 3).unwrap();
    let ring = space.ring();
    let gl = enumerate_gl(&space, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut instances = 0;
    let mut attempts = 0;
    while instances < 1000 {
        attempts += 1;
        ensure(attempts < 100_000, || format!("only {instances} admissible instances"))?;
        let g = &gl.elements[rng.gen_range(0..gl.elements.len())];
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        let r = rng.gen_range(0..4) as Elem;
        let c = [1, 3][instances % 2];
        let Some(w) = find_witness_scaled(ring, g, i, j, r, c) else {
            continue;
        };
        let d = decompose_conjugated_transvection(&space, g, c, &w).map_err(|e| e.to_string())?;
        let expected = space.mul(&space.mul(&g.mat, &space.t(i, j, ring.mul(r, ring.mul(c, c))).mat), &g.inv);
        let product = d
            .word
            .factors
            .iter()
            .fold(space.identity(), |acc, f| space.mul(&acc, &f.mat));
        ensure(d.word.target == expected && product == expected && d.in_cr, || {
            format!("g = {}, ({}, {}), r = {r}, c = {c}", g.mat, i + 1, j + 1)
        })?;
        instances += 1;
    }
    Ok(format!("{instances} instances in {attempts} draws, c ∈ {{1, 3}}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let spec = dir.path().join("rings.spec");
    std::fs::write(&spec, "[ring z4]\nfamily = zmod\nm = 4\n").map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ringstab"))
            .args(["all", "--seed", "42", "--cap", "4194304", "--samples", "200", "--spec"])
            .arg(&spec)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || {
        format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr))
    })?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "reports differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 12] = [
        ("transvection commutator closed form", closed_form),
        ("relative elementary group, both constructions", relative_two_ways),
        ("ideal products inside commutators", ideal_products),
        ("commutator ring Z/4 and normality", commutator_z4),
        ("partial normality probe GL(3, Z/2), GL(3, Z/4)", partial_normality),
        ("square-zero factorization over Z/4", square_zero),
        ("radical entry correction over GL(3, Z/4)", radical_correction),
        ("R-stability over commutative rings", stability_commutative),
        ("predicate table", predicate_table),
        ("weakly-commutator length of Z/4", weakly_commutator),
        ("conjugated transvection decomposition", conjugated_transvections),
        ("deterministic CLI reports", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let line = match &outcome {
            Ok(note) => format!("criterion {:>2}: pass — {name} ({note})", k + 1),
            Err(why) => {
                failed.push(k + 1);
                format!("criterion {:>2}: FAIL — {name}: {why}", k + 1)
            }
        };
        let _ = writeln!(std::io::stdout().lock(), "{line}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

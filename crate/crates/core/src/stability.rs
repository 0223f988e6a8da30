//! Stability of individual matrices: admissible coefficient groups, the
//! transvection decomposition of conjugated transvections, the radical
//! zero-pattern correction and the stable-rank column reduction.

use serde::{Deserialize, Serialize};

use crate::error::{MatError, StabilityError};
use crate::matrix::{Factor, FactorKind, FactorWord, GroupElement, Mat, MatSpace, Transvection};
use crate::predicates::unimodular_coefficients;
use crate::ring::{Elem, FiniteRing, Ideal};

/// A row `V₀ = x₁e_i1 + … + xₙe_in` with `x_l = 0` and `x_k = r·(g⁻¹)_jk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityWitnessRow {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub x: Vec<Elem>,
    pub r: Elem,
}

/// `α = Σ x_s g_si`.
fn alpha(ring: &FiniteRing, g: &Mat, i: usize, x: &[Elem]) -> Elem {
    x.iter()
        .enumerate()
        .fold(ring.zero(), |acc, (s, &xs)| ring.add(acc, ring.mul(xs, g.get(s, i))))
}

/// Checks a witness row against `g` with coefficients scaled by `c²`:
/// `x_l = 0`, `x_k = r(g⁻¹)_jk`, and both `1 + V₀c²U` and
/// `1 + (V₀ − x_k e_ik)c²U` invertible, where `U = g·e_ii`. The two matrices
/// are the identity except at `(i, i)`, so invertibility reduces to the
/// scalars `1 + αc²` and `1 + (α − x_k g_ki)c²`.
pub fn witness_is_admissible(
    ring: &FiniteRing,
    g: &GroupElement,
    w: &StabilityWitnessRow,
    c: Elem,
) -> Result<(), StabilityError> {
    let n = g.mat.n();
    let bad = |msg: &str| Err(StabilityError::BadWitness(msg.to_string()));
    if w.i == w.j || [w.i, w.j, w.k, w.l].iter().any(|&t| t >= n) || w.x.len() != n {
        return bad("indices or row length out of range");
    }
    if w.x[w.l] != ring.zero() {
        return bad("x_l is not zero");
    }
    if w.x[w.k] != ring.mul(w.r, g.inv.get(w.j, w.k)) {
        return bad("x_k differs from r·(g⁻¹)_jk");
    }
    let c2 = ring.mul(c, c);
    let a = alpha(ring, &g.mat, w.i, &w.x);
    if !ring.is_unit(ring.add(ring.one(), ring.mul(a, c2))) {
        return bad("1 + V₀c²U is not invertible");
    }
    let a_star = ring.sub(a, ring.mul(w.x[w.k], g.mat.get(w.k, w.i)));
    if !ring.is_unit(ring.add(ring.one(), ring.mul(a_star, c2))) {
        return bad("1 + (V₀ − x_k e_ik)c²U is not invertible");
    }
    Ok(())
}

/// Visits every row with `x_l = 0` and `x_k = r(g⁻¹)_jk` (the remaining
/// coordinates free) until `visit` returns `true`.
fn for_each_row(
    ring: &FiniteRing,
    g: &GroupElement,
    i: usize,
    j: usize,
    r: Elem,
    mut visit: impl FnMut(StabilityWitnessRow) -> bool,
) -> bool {
    let n = g.mat.n();
    let q = ring.order();
    for k in 0..n {
        let xk = ring.mul(r, g.inv.get(j, k));
        for l in 0..n {
            if l == k && xk != ring.zero() {
                continue;
            }
            let free: Vec<usize> = (0..n).filter(|&s| s != k && s != l).collect();
            let total = q.pow(free.len() as u32);
            for mut code in 0..total {
                let mut x = vec![ring.zero(); n];
                x[k] = xk;
                for &s in &free {
                    x[s] = (code % q) as Elem;
                    code /= q;
                }
                if visit(StabilityWitnessRow { i, j, k, l, x, r }) {
                    return true;
                }
            }
        }
    }
    false
}

/// First admissible witness row for coefficient `r` (with `c = 1`).
pub fn find_witness(
    ring: &FiniteRing,
    g: &GroupElement,
    i: usize,
    j: usize,
    r: Elem,
) -> Option<StabilityWitnessRow> {
    find_witness_scaled(ring, g, i, j, r, ring.one())
}

/// First witness row admissible with coefficients scaled by `c²`.
pub fn find_witness_scaled(
    ring: &FiniteRing,
    g: &GroupElement,
    i: usize,
    j: usize,
    r: Elem,
    c: Elem,
) -> Option<StabilityWitnessRow> {
    let mut found = None;
    for_each_row(ring, g, i, j, r, |w| {
        if witness_is_admissible(ring, g, &w, c).is_ok() {
            found = Some(w);
            true
        } else {
            false
        }
    });
    found
}

/// `R(g)`: the additive subgroup generated by every `r` that admits a
/// witness row. Returned as a membership mask over element codes.
pub fn r_of_g(ring: &FiniteRing, g: &GroupElement, i: usize, j: usize) -> Vec<bool> {
    let admissible: Vec<Elem> = ring
        .elements()
        .filter(|&r| find_witness(ring, g, i, j, r).is_some())
        .collect();
    ring.additive_closure(admissible)
}

pub fn is_rij_stable(ring: &FiniteRing, g: &GroupElement, i: usize, j: usize) -> bool {
    r_of_g(ring, g, i, j).iter().all(|&m| m)
}

/// `(R, i, j)`-stable for every ordered pair `i ≠ j`.
pub fn is_r_stable(ring: &FiniteRing, g: &GroupElement) -> bool {
    let n = g.mat.n();
    (0..n).all(|i| (0..n).all(|j| i == j || is_rij_stable(ring, g, i, j)))
}

/// Certificate that `t_ij(rc²)^g = T(g)·d_l·d_k⁻¹`.
#[derive(Clone, Debug)]
pub struct ConjugateDecomposition {
    /// Transvection factors of `T(g)` followed by `d_l` and `d_k⁻¹`.
    pub word: FactorWord,
    pub alpha: Elem,
    pub d_l: Mat,
    pub d_k: Mat,
    /// Whether every transvection coefficient lies in `cR`.
    pub in_cr: bool,
}

/// `T_l(row)` for a column `u` placed at column `i` and a row with a zero
/// in position `l`: returns the transvection factors of
/// `(1+b(1−γ))·[1−b,1+a]·(1+(1−γ)a)·(1+d_l·u_l·c·b)` together with `d_l`,
/// where `a = (U e_il − u_l e_ll)c`, `b = e_li V₀ c`, `γ = (1+ab)⁻¹`, and
/// checks `1 + U c² V₀ = T_l·d_l`.
fn line_factor(
    space: &MatSpace,
    u: &[Elem],
    row: &[Elem],
    i: usize,
    l: usize,
    c: Elem,
    tag: &str,
) -> Result<(Vec<Factor>, Mat), StabilityError> {
    let ring = space.ring();
    let n = space.n();
    let z = ring.zero();
    let mut a = space.zero();
    let mut b = space.zero();
    let mut big_u = space.zero();
    let mut v0 = space.zero();
    for s in 0..n {
        big_u = space.add(&big_u, &space.unit_scaled(s, i, u[s]));
        v0 = space.add(&v0, &space.unit_scaled(i, s, row[s]));
        if s != l {
            a = space.add(&a, &space.unit_scaled(s, l, ring.mul(u[s], c)));
            b = space.add(&b, &space.unit_scaled(l, s, ring.mul(row[s], c)));
        }
    }
    debug_assert_eq!(row[l], z);
    let c2 = ring.mul(c, c);
    let word = space
        .square_zero_factor(&a, &b)
        .map_err(|e| StabilityError::BadWitness(format!("{tag}: {e}")))?;
    let d = word.factors[3].mat;
    if !space.is_diagonal(&d) {
        return Err(StabilityError::BadWitness(format!("{tag}: 1+ba is not diagonal")));
    }
    let one = space.identity();
    let gamma = space.invert(&word.target)?;
    let one_minus_gamma = space.sub(&one, &gamma.inv);
    let ul_cb = space.scale_left(ring.mul(u[l], c), &b);
    let last = space.add(&one, &space.mul(&d, &ul_cb));
    let pieces = [
        ("1+b(1-γ)", space.add(&one, &space.mul(&b, &one_minus_gamma))),
        ("1-b", space.sub(&one, &b)),
        ("1+a", space.add(&one, &a)),
        ("1+b", space.add(&one, &b)),
        ("1-a", space.sub(&one, &a)),
        ("1+(1-γ)a", space.add(&one, &space.mul(&one_minus_gamma, &a))),
        ("1+d·u_l·c·b", last),
    ];
    let mut factors = Vec::new();
    for (role, m) in pieces {
        let ts = space.as_line_product(&m).ok_or_else(|| {
            StabilityError::BadWitness(format!("{tag}: factor {role} is not a line matrix"))
        })?;
        for t in ts {
            factors.push(Factor::transvection(space, t, format!("{tag}[{role}]")));
        }
    }
    let product = factors
        .iter()
        .fold(one, |acc, f| space.mul(&acc, &f.mat));
    let target = space.add(&one, &space.scale_right(&space.mul(&big_u, &v0), c2));
    if space.mul(&product, &d) != target {
        return Err(StabilityError::BadWitness(format!(
            "{tag}: product of factors differs from 1 + Uc²V₀"
        )));
    }
    Ok((factors, d))
}

/// Decomposes `t_ij(rc²)^g` into transvections with coefficients in `cR`
/// and two diagonal factors.
pub fn decompose_conjugated_transvection(
    space: &MatSpace,
    g: &GroupElement,
    c: Elem,
    w: &StabilityWitnessRow,
) -> Result<ConjugateDecomposition, StabilityError> {
    let ring = space.ring();
    if !ring.is_central(c) {
        return Err(StabilityError::NotCentral(c));
    }
    witness_is_admissible(ring, g, w, c)?;
    let n = space.n();
    let (i, j, k, l, r) = (w.i, w.j, w.k, w.l, w.r);
    let u: Vec<Elem> = g.mat.column(i);
    // W = rV − V₀ with V = e_ij g⁻¹; only row i is nonzero.
    let w_row: Vec<Elem> = (0..n)
        .map(|s| ring.sub(ring.mul(r, g.inv.get(j, s)), w.x[s]))
        .collect();
    if w_row[k] != ring.zero() {
        return Err(StabilityError::BadWitness("W_ik is not zero".into()));
    }
    let minus_w: Vec<Elem> = w_row.iter().map(|&e| ring.neg(e)).collect();
    let (t_l, d_l) = line_factor(space, &u, &w.x, i, l, c, "T_l(V0)")?;
    let (t_k, d_k) = line_factor(space, &u, &minus_w, i, k, c, "T_k(-W)")?;
    let d_k_inv = space.invert(&d_k)?;
    let d_l_inv = space.invert(&d_l)?;
    // (T_k⁻¹)^{D} with D = d_l·d_k⁻¹: conjugating t_pq(s) by a diagonal D
    // gives t_pq(D_pp·s·D_qq⁻¹).
    let dmat = space.mul(&d_l, &d_k_inv.inv);
    let dinv = space.mul(&d_k, &d_l_inv.inv);
    let mut factors = t_l;
    for f in t_k.iter().rev() {
        let FactorKind::Transvection { t } = f.kind else {
            unreachable!("line factors are transvections")
        };
        let s = ring.mul(ring.mul(dmat.get(t.i, t.i), ring.neg(t.r)), dinv.get(t.j, t.j));
        factors.push(Factor::transvection(
            space,
            Transvection { i: t.i, j: t.j, r: s },
            format!("{}^-1^D", f.role),
        ));
    }
    factors.push(Factor::classified(space, d_l, "d_l"));
    factors.push(Factor::classified(space, d_k_inv.inv, "d_k^-1"));
    let c2 = ring.mul(c, c);
    let target = space.conj(&space.t(i, j, ring.mul(r, c2)).mat, g);
    let word = FactorWord { target, factors };
    if !word.verify(space) {
        return Err(StabilityError::BadWitness(
            "factor product differs from the conjugated transvection".into(),
        ));
    }
    let cr: Vec<Elem> = ring.elements().map(|s| ring.mul(c, s)).collect();
    let in_cr = word.transvections().all(|t| cr.contains(&t.r));
    Ok(ConjugateDecomposition {
        alpha: alpha(ring, &g.mat, i, &w.x),
        word,
        d_l,
        d_k,
        in_cr,
    })
}

/// Outcome of the two-element (`g`, `g' = g·h⁻¹`) form of the decomposition
/// for `h ∈ C_I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruentPairCheck {
    /// `d_l d_k⁻¹ d'_k (d'_l)⁻¹ ∈ E(n, c²I)`.
    pub diagonal_in_relative: bool,
    /// When the diagonal quotient has the shape `diag(x, x⁻¹)` on `(l, k)`,
    /// whether the embedded six-factor word reproduces it (`None` otherwise).
    pub diag2_word: Option<bool>,
    /// `[h, t_ij(c²r)]^{g'} ∈ E(n, cI)`.
    pub commutator_in_ci: bool,
    /// `[h, t_ij(c²r)]^{g'} ∈ E(n, J)` for `J = RrR`.
    pub commutator_in_j: bool,
}

/// Picks the witness for `g' = g·h⁻¹` by keeping the free coordinates of `w`
/// and searching their translates by `I` when needed.
pub fn congruent_witness(
    ring: &FiniteRing,
    g_prime: &GroupElement,
    w: &StabilityWitnessRow,
    ideal: &Ideal,
    c: Elem,
) -> Option<StabilityWitnessRow> {
    let n = w.x.len();
    let free: Vec<usize> = (0..n).filter(|&s| s != w.k && s != w.l).collect();
    let m = ideal.len();
    let total = m.pow(free.len() as u32);
    for mut code in 0..total {
        let mut x = w.x.clone();
        x[w.k] = if w.k == w.l {
            ring.zero()
        } else {
            ring.mul(w.r, g_prime.inv.get(w.j, w.k))
        };
        for &s in &free {
            x[s] = ring.add(w.x[s], ideal.members()[code % m]);
            code /= m;
        }
        let cand = StabilityWitnessRow { x, ..w.clone() };
        if witness_is_admissible(ring, g_prime, &cand, c).is_ok() {
            return Some(cand);
        }
    }
    None
}

/// Checks the congruence-level claims for `h ∈ C_I` against explicit
/// subgroups: `relative_c2i = E(n, c²I)`, `relative_ci = E(n, cI)`,
/// `relative_j = E(n, RrR)`.
#[allow(clippy::too_many_arguments)]
pub fn congruent_pair_check(
    space: &MatSpace,
    g: &GroupElement,
    h: &GroupElement,
    c: Elem,
    w: &StabilityWitnessRow,
    w_prime: &StabilityWitnessRow,
    relative_c2i: &crate::subgroup::SubgroupClosure,
    relative_ci: &crate::subgroup::SubgroupClosure,
    relative_j: &crate::subgroup::SubgroupClosure,
) -> Result<CongruentPairCheck, StabilityError> {
    let ring = space.ring();
    let g_prime = space.group_mul(g, &h.inverse());
    let first = decompose_conjugated_transvection(space, g, c, w)?;
    let second = decompose_conjugated_transvection(space, &g_prime, c, w_prime)?;
    let inv = |m: &Mat| space.invert(m).map(|e| e.inv);
    let diag = space.mul(
        &space.mul(&first.d_l, &inv(&first.d_k)?),
        &space.mul(&second.d_k, &inv(&second.d_l)?),
    );
    let (l, k) = (w.l, w.k);
    let diag2_word = if l != k {
        let x = diag.get(l, l);
        match ring.inv(x) {
            Some(xi) if diag.get(k, k) == xi => {
                let word = crate::matrix::diag2_factor(space.ring_arc(), x)?;
                let embedded = crate::matrix::embed_word_2x2(&word, space, l, k)?;
                Some(embedded.verify(space) && embedded.target == diag)
            }
            _ => None,
        }
    } else {
        None
    };
    let c2 = ring.mul(c, c);
    let t = space.t(w.i, w.j, ring.mul(c2, w.r));
    let comm = space.comm_element(h, &t);
    let conj = space.conj(&comm.mat, &g_prime);
    Ok(CongruentPairCheck {
        diagonal_in_relative: relative_c2i.contains(&diag),
        diag2_word,
        commutator_in_ci: relative_ci.contains(&conj),
        commutator_in_j: relative_j.contains(&conj),
    })
}

/// `e`, `e₁`, `e₂` and `g₁ = e₁·e·g·e₂`.
#[derive(Clone, Debug)]
pub struct RadicalCorrection {
    pub alpha: Elem,
    pub e: GroupElement,
    pub e1: GroupElement,
    pub e2: GroupElement,
    pub g1: GroupElement,
}

fn product(space: &MatSpace, ts: &[Transvection]) -> GroupElement {
    ts.iter().fold(space.identity_element(), |acc, t| {
        space.group_mul(&acc, &space.transvection(t))
    })
}

/// For `g_ij ∈ J(R)`, builds elementary corrections with
/// `(g₁)_il = 0` for `l ≠ j` and `(g₁)_sj = 0` for `s ≠ i`. Index
/// collisions (`t_ii`) in the displayed products are skipped.
pub fn radical_entry_correction(
    space: &MatSpace,
    radical: &Ideal,
    g: &GroupElement,
    i: usize,
    j: usize,
) -> Result<RadicalCorrection, StabilityError> {
    let ring = space.ring();
    let n = space.n();
    if i >= n || j >= n {
        return Err(MatError::BadIndex(i, j).into());
    }
    let gij = g.mat.get(i, j);
    if !radical.contains(gij) {
        return Err(StabilityError::NotRadical(format!("g_{}{} = {gij}", i + 1, j + 1)));
    }
    let ginv_ji = g.inv.get(j, i);
    let beta = ring.sub(ring.one(), ginv_ji);
    let denom = ring.add(ring.one(), ring.mul(beta, gij));
    let alpha = ring.neg(ring.inv(denom).ok_or(MatError::NotUnit(denom))?);
    let e: Vec<Transvection> = (0..n)
        .filter(|&k| k != i)
        .map(|k| Transvection { i, j: k, r: g.inv.get(j, k) })
        .collect();
    let e1: Vec<Transvection> = (0..n)
        .filter(|&s| s != i)
        .map(|s| Transvection { i: s, j: i, r: ring.mul(g.mat.get(s, j), alpha) })
        .collect();
    let e2: Vec<Transvection> = (0..n)
        .filter(|&k| k != j)
        .map(|k| Transvection {
            i: j,
            j: k,
            r: ring.mul(ring.mul(alpha, beta), g.mat.get(i, k)),
        })
        .collect();
    let (e, e1, e2) = (product(space, &e), product(space, &e1), product(space, &e2));
    let g1 = space.group_mul(&space.group_mul(&space.group_mul(&e1, &e), g), &e2);
    let z = ring.zero();
    for l in (0..n).filter(|&l| l != j) {
        if g1.mat.get(i, l) != z {
            return Err(StabilityError::ZeroPattern { row: i + 1, col: l + 1 });
        }
    }
    for s in (0..n).filter(|&s| s != i) {
        if g1.mat.get(s, j) != z {
            return Err(StabilityError::ZeroPattern { row: s + 1, col: j + 1 });
        }
    }
    Ok(RadicalCorrection { alpha, e, e1, e2, g1 })
}

/// The `R`-stable approximant: `g₁` when `i = j`, otherwise `e₀·g₁` with
/// `e₀ = t_ji(1)·t_ij(−1)·t_ji(1)`.
pub fn radical_approximant(space: &MatSpace, corr: &RadicalCorrection, i: usize, j: usize) -> GroupElement {
    if i == j {
        return corr.g1;
    }
    let ring = space.ring();
    let one = ring.one();
    let e0 = product(
        space,
        &[
            Transvection { i: j, j: i, r: one },
            Transvection { i, j, r: ring.neg(one) },
            Transvection { i: j, j: i, r: one },
        ],
    );
    space.group_mul(&e0, &corr.g1)
}

/// `e₁ = Π t_p1(k_p)`, `e₂ = Π t_1p(s_p)`, `g₁ = e₂·g^{e₁}`.
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    pub k: Vec<Elem>,
    pub s: Vec<Elem>,
    pub e1: GroupElement,
    pub e2: GroupElement,
    pub g1: GroupElement,
}

/// Clears the `(1, n)` entry: finds `k₂…kₙ` making
/// `(g_pn + k_p·g_1n)_p` unimodular, then `s_p ∈ g_1n·R` with
/// `g_1n + Σ s_p(g_pn + k_p g_1n) = 0`.
pub fn stable_rank_reduce(space: &MatSpace, g: &GroupElement) -> Result<ColumnReduction, StabilityError> {
    let ring = space.ring();
    let n = space.n();
    if n < 2 {
        return Err(MatError::UnsupportedDimension(n).into());
    }
    let last = n - 1;
    let top = g.mat.get(0, last);
    let q = ring.order();
    let total = q.pow((n - 1) as u32);
    for mut code in 0..total {
        let k: Vec<Elem> = (1..n)
            .map(|_| {
                let d = (code % q) as Elem;
                code /= q;
                d
            })
            .collect();
        let v: Vec<Elem> = (1..n)
            .map(|p| ring.add(g.mat.get(p, last), ring.mul(k[p - 1], top)))
            .collect();
        let Some(t) = unimodular_coefficients(ring, &v) else {
            continue;
        };
        let s: Vec<Elem> = t.iter().map(|&tp| ring.neg(ring.mul(top, tp))).collect();
        let e1 = product(
            space,
            &(1..n)
                .map(|p| Transvection { i: p, j: 0, r: k[p - 1] })
                .collect::<Vec<_>>(),
        );
        let e2 = product(
            space,
            &(1..n)
                .map(|p| Transvection { i: 0, j: p, r: s[p - 1] })
                .collect::<Vec<_>>(),
        );
        let g1 = space.group_mul(&e2, &space.conj_element(g, &e1));
        if g1.mat.get(0, last) != ring.zero() {
            return Err(StabilityError::ZeroPattern { row: 1, col: n });
        }
        return Ok(ColumnReduction { k, s, e1, e2, g1 });
    }
    Err(StabilityError::NoReduction(format!(
        "no k-vector makes the last column unimodular for {}",
        g.mat
    )))
}

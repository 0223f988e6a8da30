//! Matrices over a finite ring, invertibility, transvection calculus and
//! certified factor words.
//!
//! Indices are 0-based throughout the API; reports print them 1-based.
//!
//! Canonical encoding: the row-major sequence of the `n²` element codes,
//! written in decimal and separated by commas (`"1,0,0,0,1,0,0,0,1"` is the
//! 3×3 identity over any ring whose `one` has code 1). Within a fixed
//! `(ring, n)` the encoding identifies the matrix uniquely.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::MatError;
use crate::ring::{Elem, FiniteRing};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 4;

/// An `n×n` matrix of element codes, stored inline.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    n: u8,
    e: [Elem; MAX_DIM * MAX_DIM],
}

impl Mat {
    /// Builds a matrix from `n²` row-major entries.
    pub fn from_entries(n: usize, entries: &[Elem]) -> Result<Self, MatError> {
        if n == 0 || n > MAX_DIM {
            return Err(MatError::UnsupportedDimension(n));
        }
        if entries.len() != n * n {
            return Err(MatError::DimensionMismatch {
                left: n * n,
                right: entries.len(),
            });
        }
        let mut e = [0; MAX_DIM * MAX_DIM];
        e[..n * n].copy_from_slice(entries);
        Ok(Mat { n: n as u8, e })
    }

    fn blank(n: usize) -> Self {
        Mat {
            n: n as u8,
            e: [0; MAX_DIM * MAX_DIM],
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.e[i * self.n as usize + j] = v;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Elem] {
        let n = self.n as usize;
        &self.e[..n * n]
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        (0..self.n()).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.n()).map(|i| self.get(i, j)).collect()
    }

    /// Canonical encoding (see module docs).
    pub fn encoding(&self) -> String {
        let parts: Vec<String> = self.entries().iter().map(|e| e.to_string()).collect();
        parts.join(",")
    }

    /// Parses a canonical encoding.
    pub fn parse_encoding(n: usize, text: &str) -> Result<Self, MatError> {
        let entries: Result<Vec<Elem>, _> = text.split(',').map(|t| t.trim().parse()).collect();
        let entries = entries.map_err(|_| MatError::Precondition(format!("bad encoding `{text}`")))?;
        Self::from_entries(n, &entries)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// The elementary matrix `1 + r·e_ij`, `i ≠ j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transvection {
    pub i: usize,
    pub j: usize,
    pub r: Elem,
}

impl Transvection {
    pub fn new(i: usize, j: usize, r: Elem) -> Result<Self, MatError> {
        if i == j {
            return Err(MatError::BadIndex(i, j));
        }
        Ok(Transvection { i, j, r })
    }
}

impl fmt::Display for Transvection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}{}({})", self.i + 1, self.j + 1, self.r)
    }
}

/// An invertible matrix carrying a certified two-sided inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub mat: Mat,
    pub inv: Mat,
}

impl GroupElement {
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            mat: self.inv,
            inv: self.mat,
        }
    }
}

/// `M_n(R)` together with the arithmetic on it.
#[derive(Clone, Debug)]
pub struct MatSpace {
    ring: Arc<FiniteRing>,
    n: usize,
}

impl MatSpace {
    pub fn new(ring: Arc<FiniteRing>, n: usize) -> Result<Self, MatError> {
        if n == 0 || n > MAX_DIM {
            return Err(MatError::UnsupportedDimension(n));
        }
        Ok(MatSpace { ring, n })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|R|^(n²)`, saturating.
    pub fn matrix_count(&self) -> u128 {
        (self.ring.order() as u128).saturating_pow((self.n * self.n) as u32)
    }

    pub fn zero(&self) -> Mat {
        let z = self.ring.zero();
        let mut m = Mat::blank(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, z);
            }
        }
        m
    }

    pub fn identity(&self) -> Mat {
        self.scalar(self.ring.one())
    }

    /// `s·1`.
    pub fn scalar(&self, s: Elem) -> Mat {
        let mut m = self.zero();
        for i in 0..self.n {
            m.set(i, i, s);
        }
        m
    }

    pub fn identity_element(&self) -> GroupElement {
        let id = self.identity();
        GroupElement { mat: id, inv: id }
    }

    /// `diag(d_1, …, d_n)`.
    pub fn diagonal(&self, diag: &[Elem]) -> Mat {
        let mut m = self.zero();
        for (i, &d) in diag.iter().enumerate().take(self.n) {
            m.set(i, i, d);
        }
        m
    }

    /// The standard unit matrix `e_ij`.
    pub fn standard_unit(&self, i: usize, j: usize) -> Result<Mat, MatError> {
        if i >= self.n || j >= self.n {
            return Err(MatError::BadIndex(i, j));
        }
        let mut m = self.zero();
        m.set(i, j, self.ring.one());
        Ok(m)
    }

    /// `r·e_ij` without bounds checks beyond the slice index.
    pub fn unit_scaled(&self, i: usize, j: usize, r: Elem) -> Mat {
        let mut m = self.zero();
        m.set(i, j, r);
        m
    }

    pub fn from_entries(&self, entries: &[Elem]) -> Result<Mat, MatError> {
        if let Some(&bad) = entries.iter().find(|&&e| e as usize >= self.ring.order()) {
            return Err(MatError::Precondition(format!(
                "entry {bad} is not an element code"
            )));
        }
        Mat::from_entries(self.n, entries)
    }

    /// The matrix whose row-major digits in base `|R|` spell `code`.
    pub fn from_index(&self, mut code: u64) -> Mat {
        let q = self.ring.order() as u64;
        let mut m = Mat::blank(self.n);
        for p in 0..self.n * self.n {
            m.e[p] = (code % q) as Elem;
            code /= q;
        }
        m
    }

    fn check(&self, m: &Mat) -> Result<(), MatError> {
        if m.n() != self.n {
            return Err(MatError::DimensionMismatch {
                left: self.n,
                right: m.n(),
            });
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        debug_assert!(a.n() == self.n && b.n() == self.n);
        let n = self.n;
        let r = &*self.ring;
        let mut m = Mat::blank(n);
        for i in 0..n {
            for k in 0..n {
                let mut acc = r.mul(a.get(i, 0), b.get(0, k));
                for j in 1..n {
                    acc = r.add(acc, r.mul(a.get(i, j), b.get(j, k)));
                }
                m.set(i, k, acc);
            }
        }
        m
    }

    pub fn checked_mul(&self, a: &Mat, b: &Mat) -> Result<Mat, MatError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    fn zip(&self, a: &Mat, b: &Mat, f: impl Fn(Elem, Elem) -> Elem) -> Mat {
        let mut m = Mat::blank(self.n);
        for p in 0..self.n * self.n {
            m.e[p] = f(a.e[p], b.e[p]);
        }
        m
    }

    pub fn add(&self, a: &Mat, b: &Mat) -> Mat {
        self.zip(a, b, |x, y| self.ring.add(x, y))
    }

    pub fn checked_add(&self, a: &Mat, b: &Mat) -> Result<Mat, MatError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn sub(&self, a: &Mat, b: &Mat) -> Mat {
        self.zip(a, b, |x, y| self.ring.sub(x, y))
    }

    pub fn neg(&self, a: &Mat) -> Mat {
        self.zip(a, a, |x, _| self.ring.neg(x))
    }

    /// `s·a` (left scalar multiplication).
    pub fn scale_left(&self, s: Elem, a: &Mat) -> Mat {
        self.zip(a, a, |x, _| self.ring.mul(s, x))
    }

    /// `a·s` (right scalar multiplication).
    pub fn scale_right(&self, a: &Mat, s: Elem) -> Mat {
        self.zip(a, a, |x, _| self.ring.mul(x, s))
    }

    /// `1 + a`.
    pub fn one_plus(&self, a: &Mat) -> Mat {
        self.add(&self.identity(), a)
    }

    pub fn pow(&self, a: &Mat, mut p: u64) -> Mat {
        let mut base = *a;
        let mut acc = self.identity();
        while p > 0 {
            if p & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            p >>= 1;
        }
        acc
    }

    pub fn is_identity(&self, a: &Mat) -> bool {
        *a == self.identity()
    }

    pub fn is_diagonal(&self, a: &Mat) -> bool {
        let z = self.ring.zero();
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || a.get(i, j) == z))
    }

    /// Decides invertibility from the power sequence: in a finite monoid `m`
    /// is a unit iff some `m^p` is the identity, and then `m^(p−1)` is the
    /// inverse. The sequence `1, m, m², …` is eventually periodic; Brent's
    /// cycle search finds its period `λ` in constant memory, and `m` is a
    /// unit exactly when the sequence is purely periodic, i.e. `m^λ = 1`.
    pub fn try_invert(&self, m: &Mat) -> Option<GroupElement> {
        let id = self.identity();
        let mut power = 1u64;
        let mut lambda = 1u64;
        let mut tortoise = id;
        let mut hare = *m;
        while tortoise != hare {
            if power == lambda {
                tortoise = hare;
                power *= 2;
                lambda = 0;
            }
            hare = self.mul(&hare, m);
            lambda += 1;
        }
        if self.pow(m, lambda) != id {
            return None;
        }
        Some(GroupElement {
            mat: *m,
            inv: self.pow(m, lambda - 1),
        })
    }

    pub fn invert(&self, m: &Mat) -> Result<GroupElement, MatError> {
        self.check(m)?;
        self.try_invert(m).ok_or(MatError::NotInvertible)
    }

    pub fn group_mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            mat: self.mul(&a.mat, &b.mat),
            inv: self.mul(&b.inv, &a.inv),
        }
    }

    pub fn transvection_mat(&self, t: &Transvection) -> Mat {
        let mut m = self.identity();
        m.set(t.i, t.j, t.r);
        m
    }

    pub fn transvection(&self, t: &Transvection) -> GroupElement {
        let neg = Transvection {
            r: self.ring.neg(t.r),
            ..*t
        };
        GroupElement {
            mat: self.transvection_mat(t),
            inv: self.transvection_mat(&neg),
        }
    }

    /// `t_ij(r)` as a group element; indices must be distinct and in range.
    pub fn t(&self, i: usize, j: usize, r: Elem) -> GroupElement {
        debug_assert!(i != j && i < self.n && j < self.n);
        self.transvection(&Transvection { i, j, r })
    }

    /// Returns `Some(t)` if `m = 1 + r·e_ij` for some `i ≠ j` and `r ≠ 0`.
    pub fn as_transvection(&self, m: &Mat) -> Option<Transvection> {
        let (z, o) = (self.ring.zero(), self.ring.one());
        let mut found = None;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = m.get(i, j);
                if i == j {
                    if v != o {
                        return None;
                    }
                } else if v != z {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(Transvection { i, j, r: v });
                }
            }
        }
        found
    }

    pub fn is_nontrivial_transvection(&self, m: &Mat) -> bool {
        self.as_transvection(m).is_some()
    }

    /// Splits `m = 1 + N` into commuting transvections when `N` is supported
    /// on a single row `l` with `N_ll = 0`, or on a single column with zero
    /// diagonal entry. Returns `None` otherwise; the identity gives `[]`.
    pub fn as_line_product(&self, m: &Mat) -> Option<Vec<Transvection>> {
        let z = self.ring.zero();
        let d = self.sub(m, &self.identity());
        let support: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| d.get(i, j) != z)
            .collect();
        if support.iter().any(|&(i, j)| i == j) {
            return None;
        }
        let same_row = support.windows(2).all(|w| w[0].0 == w[1].0);
        let same_col = support.windows(2).all(|w| w[0].1 == w[1].1);
        if !(same_row || same_col) {
            return None;
        }
        Some(
            support
                .into_iter()
                .map(|(i, j)| Transvection { i, j, r: d.get(i, j) })
                .collect(),
        )
    }

    /// `a^b = b·a·b⁻¹`.
    pub fn conj(&self, a: &Mat, b: &GroupElement) -> Mat {
        self.mul(&self.mul(&b.mat, a), &b.inv)
    }

    pub fn conj_element(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            mat: self.conj(&a.mat, b),
            inv: self.conj(&a.inv, b),
        }
    }

    /// `[a, b] = a·b·a⁻¹·b⁻¹`.
    pub fn comm(&self, a: &GroupElement, b: &GroupElement) -> Mat {
        let ab = self.mul(&a.mat, &b.mat);
        self.mul(&self.mul(&ab, &a.inv), &b.inv)
    }

    pub fn comm_element(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        // [a,b]⁻¹ = b·a·b⁻¹·a⁻¹ = [b,a]
        GroupElement {
            mat: self.comm(a, b),
            inv: self.comm(b, a),
        }
    }

    /// Checks `[a⁻¹,b,c]^a · [c⁻¹,a,b]^c · [b⁻¹,c,a]^b = 1` and returns the
    /// computed product alongside.
    pub fn hall_identity_check(
        &self,
        a: &GroupElement,
        b: &GroupElement,
        c: &GroupElement,
    ) -> (bool, Mat) {
        let triple = |x: &GroupElement, y: &GroupElement, z: &GroupElement| {
            let xy = self.comm_element(&x.inverse(), y);
            self.conj(&self.comm(&xy, z), x)
        };
        let p1 = triple(a, b, c);
        let p2 = triple(c, a, b);
        let p3 = triple(b, c, a);
        let product = self.mul(&self.mul(&p1, &p2), &p3);
        (self.is_identity(&product), product)
    }

    /// Closed form of `[t_ik(x), t_lj(y)]` for non-opposite pairs:
    /// `t_ij(δ_kl·xy)` when `i ≠ j`, otherwise `t_lk(−yx)`. A zero
    /// coefficient means the commutator is the identity.
    pub fn transvection_comm_closed_form(
        &self,
        first: &Transvection,
        second: &Transvection,
    ) -> Result<Transvection, MatError> {
        let (i, k, x) = (first.i, first.j, first.r);
        let (l, j, y) = (second.i, second.j, second.r);
        for idx in [i, k, l, j] {
            if idx >= self.n {
                return Err(MatError::BadIndex(idx, self.n));
            }
        }
        if i == k || l == j {
            return Err(MatError::BadIndex(i, k));
        }
        if (l, j) == (k, i) {
            return Err(MatError::OppositePair { i, k, l, j });
        }
        let r = &*self.ring;
        if i != j {
            let coeff = if k == l { r.mul(x, y) } else { r.zero() };
            Ok(Transvection { i, j, r: coeff })
        } else {
            Ok(Transvection {
                i: l,
                j: k,
                r: r.neg(r.mul(y, x)),
            })
        }
    }

    /// Places a 2×2 matrix on rows/columns `(p, q)` of the `n×n` identity.
    pub fn embed_2x2(&self, m: &Mat, p: usize, q: usize) -> Result<Mat, MatError> {
        if m.n() != 2 {
            return Err(MatError::DimensionMismatch {
                left: 2,
                right: m.n(),
            });
        }
        if p == q || p >= self.n || q >= self.n {
            return Err(MatError::BadIndex(p, q));
        }
        let mut out = self.identity();
        out.set(p, p, m.get(0, 0));
        out.set(p, q, m.get(0, 1));
        out.set(q, p, m.get(1, 0));
        out.set(q, q, m.get(1, 1));
        Ok(out)
    }

    /// `1 + ab = (1+b(1−γ))·[1−b, 1+a]·(1+(1−γ)a)·(1+ba)` with
    /// `γ = (1+ab)⁻¹`, for `a² = b² = 0` and `1+ab` invertible.
    pub fn square_zero_factor(&self, a: &Mat, b: &Mat) -> Result<FactorWord, MatError> {
        self.check(a)?;
        self.check(b)?;
        let zero = self.zero();
        if self.mul(a, a) != zero || self.mul(b, b) != zero {
            return Err(MatError::Precondition("a² and b² must vanish".into()));
        }
        let one = self.identity();
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        let one_ab = self.add(&one, &ab);
        let gamma = self
            .try_invert(&one_ab)
            .ok_or_else(|| MatError::Precondition("1 + ab is not invertible".into()))?;
        debug_assert!(
            self.mul(&gamma.inv, &one_ab) == one && self.mul(&one_ab, &gamma.inv) == one
        );
        let one_ba = self.add(&one, &ba);
        if self.try_invert(&one_ba).is_none() {
            return Err(MatError::Precondition("1 + ba is not invertible".into()));
        }
        let one_minus_gamma = self.sub(&one, &gamma.inv);
        let one_minus_b = self
            .invert(&self.sub(&one, b))
            .map_err(|_| MatError::Precondition("1 − b is not invertible".into()))?;
        let one_plus_a = self
            .invert(&self.add(&one, a))
            .map_err(|_| MatError::Precondition("1 + a is not invertible".into()))?;
        let factors = vec![
            Factor::classified(self, self.add(&one, &self.mul(b, &one_minus_gamma)), "1+b(1-γ)"),
            Factor::classified(self, self.comm(&one_minus_b, &one_plus_a), "[1-b,1+a]"),
            Factor::classified(self, self.add(&one, &self.mul(&one_minus_gamma, a)), "1+(1-γ)a"),
            Factor::classified(self, one_ba, "1+ba"),
        ];
        let word = FactorWord {
            target: one_ab,
            factors,
        };
        debug_assert!(word.verify(self));
        Ok(word)
    }
}

/// What kind of matrix a factor is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FactorKind {
    Transvection { t: Transvection },
    Diagonal,
    Explicit,
}

/// One factor of a [`FactorWord`], labelled with its role in the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub role: String,
    pub kind: FactorKind,
    pub mat: Mat,
}

impl Factor {
    pub fn transvection(space: &MatSpace, t: Transvection, role: impl Into<String>) -> Self {
        Factor {
            role: role.into(),
            kind: FactorKind::Transvection { t },
            mat: space.transvection_mat(&t),
        }
    }

    /// Tags the matrix as a transvection or diagonal when it is one.
    pub fn classified(space: &MatSpace, mat: Mat, role: impl Into<String>) -> Self {
        let kind = if let Some(t) = space.as_transvection(&mat) {
            FactorKind::Transvection { t }
        } else if space.is_diagonal(&mat) {
            FactorKind::Diagonal
        } else {
            FactorKind::Explicit
        };
        Factor {
            role: role.into(),
            kind,
            mat,
        }
    }
}

/// An ordered factorization certificate: the product of `factors` is `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorWord {
    pub target: Mat,
    pub factors: Vec<Factor>,
}

impl FactorWord {
    pub fn product(&self, space: &MatSpace) -> Mat {
        self.factors
            .iter()
            .fold(space.identity(), |acc, f| space.mul(&acc, &f.mat))
    }

    /// Exact product equality, plus consistency of every transvection tag.
    pub fn verify(&self, space: &MatSpace) -> bool {
        let tags_ok = self.factors.iter().all(|f| match f.kind {
            FactorKind::Transvection { t } => t.i != t.j && space.transvection_mat(&t) == f.mat,
            FactorKind::Diagonal => space.is_diagonal(&f.mat),
            FactorKind::Explicit => true,
        });
        tags_ok && self.product(space) == self.target
    }

    /// Transvections appearing as factors, in order.
    pub fn transvections(&self) -> impl Iterator<Item = Transvection> + '_ {
        self.factors.iter().filter_map(|f| match f.kind {
            FactorKind::Transvection { t } => Some(t),
            _ => None,
        })
    }

    /// Role labels, in order.
    pub fn roles(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.role.as_str()).collect()
    }
}

/// `diag(x, x⁻¹)` over `R` as six elementary 2×2 factors:
/// `t12(x)·t21(−x⁻¹)·t12(x)·t12(−1)·t21(1)·t12(−1)`.
pub fn diag2_factor(ring: &Arc<FiniteRing>, x: Elem) -> Result<FactorWord, MatError> {
    let x_inv = ring.inv(x).ok_or(MatError::NotUnit(x))?;
    let space = MatSpace::new(ring.clone(), 2)?;
    let minus_one = ring.neg(ring.one());
    let steps = [
        (0, 1, x),
        (1, 0, ring.neg(x_inv)),
        (0, 1, x),
        (0, 1, minus_one),
        (1, 0, ring.one()),
        (0, 1, minus_one),
    ];
    let factors = steps
        .iter()
        .enumerate()
        .map(|(idx, &(i, j, r))| {
            Factor::transvection(&space, Transvection { i, j, r }, format!("diag2[{}]", idx + 1))
        })
        .collect();
    let word = FactorWord {
        target: space.diagonal(&[x, x_inv]),
        factors,
    };
    debug_assert!(word.verify(&space));
    Ok(word)
}

/// Embeds a 2×2 word on rows/columns `(p, q)` of `space` (dimension `n`).
pub fn embed_word_2x2(
    word: &FactorWord,
    space: &MatSpace,
    p: usize,
    q: usize,
) -> Result<FactorWord, MatError> {
    let map = |idx: usize| if idx == 0 { p } else { q };
    let factors = word
        .factors
        .iter()
        .map(|f| {
            let mat = space.embed_2x2(&f.mat, p, q)?;
            Ok(match f.kind {
                FactorKind::Transvection { t } => Factor {
                    role: f.role.clone(),
                    kind: FactorKind::Transvection {
                        t: Transvection {
                            i: map(t.i),
                            j: map(t.j),
                            r: t.r,
                        },
                    },
                    mat,
                },
                kind => Factor {
                    role: f.role.clone(),
                    kind,
                    mat,
                },
            })
        })
        .collect::<Result<Vec<_>, MatError>>()?;
    Ok(FactorWord {
        target: space.embed_2x2(&word.target, p, q)?,
        factors,
    })
}

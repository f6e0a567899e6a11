//! Integer lattices with a (skew-)symmetric Gram form, Picard–Lefschetz
//! twists acting on them, and Smith normal form.
//!
//! Sign convention: for a twist center `S` the twist acts by
//! `x ↦ x + ε⟨x,S⟩S`. For even `n` the center must satisfy
//! `⟨S,S⟩ = (−1)^{n(n+1)/2}·2` and `ε = −2/⟨S,S⟩`, so the twist is a
//! reflection with `τ_S(S) = −S`. For odd `n` the form is skew and we take
//! `ε = +1`; the opposite choice gives a conjugate (mirror) calculus.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix must be {0} for n = {1}")]
    WrongSymmetry(&'static str, u32),
    #[error("invalid twist center {center}: self-pairing {self_pairing}, expected {expected}")]
    InvalidTwistCenter {
        center: String,
        self_pairing: Int,
        expected: Int,
    },
    #[error("n must be positive")]
    ZeroDimension,
}

/// Self-pairing of a Lagrangian sphere class in a 2n-dimensional fiber.
pub fn sphere_self_pairing(n: u32) -> Int {
    if n % 2 == 1 {
        return Int::zero();
    }
    let n = n as u64;
    if (n * (n + 1) / 2) % 2 == 0 {
        Int::from(2)
    } else {
        Int::from(-2)
    }
}

/// Sign relating `Q(x, y)` and `Q(y, x)` for a form on middle homology of
/// a 2n-manifold: `+1` when `n` is even, `−1` when `n` is odd.
pub fn form_sign(n: u32) -> i32 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SphereClass {
    pub coords: Vec<Int>,
    pub label: Option<String>,
}

impl SphereClass {
    pub fn new(coords: Vec<Int>) -> Self {
        SphereClass {
            coords,
            label: None,
        }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        SphereClass::new(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        SphereClass::new(vec![Int::zero(); rank])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut coords = vec![Int::zero(); rank];
        coords[i] = Int::one();
        SphereClass::new(coords)
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Same vector, ignoring the label.
    pub fn same_vector(&self, other: &SphereClass) -> bool {
        self.coords == other.coords
    }

    pub fn neg(&self) -> SphereClass {
        SphereClass {
            coords: self.coords.iter().map(|c| -c).collect(),
            label: self.label.clone(),
        }
    }

    /// Representative of `±self` whose first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> SphereClass {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Equality up to a global sign.
    pub fn eq_up_to_sign(&self, other: &SphereClass) -> bool {
        self.sign_normalized().coords == other.sign_normalized().coords
    }

    /// Pads with zeros (or truncates) to `rank` coordinates.
    pub fn extended(&self, rank: usize) -> SphereClass {
        let mut coords = self.coords.clone();
        coords.resize(rank, Int::zero());
        SphereClass {
            coords,
            label: self.label.clone(),
        }
    }

    fn axpy(&self, k: &Int, s: &SphereClass) -> SphereClass {
        SphereClass {
            coords: self
                .coords
                .iter()
                .zip(&s.coords)
                .map(|(x, y)| x + k * y)
                .collect(),
            label: self.label.clone(),
        }
    }
}

impl fmt::Display for SphereClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            return write!(f, "{l}");
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Free abelian group with an integer Gram form on `H_n` of a 2n-manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    n: u32,
    gram: Vec<Vec<Int>>,
    labels: Vec<String>,
}

impl IntLattice {
    pub fn new(n: u32, gram: Vec<Vec<Int>>, labels: Vec<String>) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        let rank = gram.len();
        if gram.iter().any(|row| row.len() != rank) {
            return Err(LatticeError::NotSquare);
        }
        if labels.len() != rank {
            return Err(LatticeError::DimensionMismatch {
                expected: rank,
                got: labels.len(),
            });
        }
        for i in 0..rank {
            for j in 0..rank {
                let ok = if n % 2 == 0 {
                    gram[i][j] == gram[j][i]
                } else {
                    gram[i][j] == -&gram[j][i]
                };
                if !ok {
                    let kind = if n % 2 == 0 { "symmetric" } else { "antisymmetric" };
                    return Err(LatticeError::WrongSymmetry(kind, n));
                }
            }
        }
        Ok(IntLattice { n, gram, labels })
    }

    /// Builds a lattice from small integer entries with default labels `e1..ek`.
    pub fn from_i64(n: u32, gram: &[&[i64]]) -> Result<Self, LatticeError> {
        let g = gram
            .iter()
            .map(|row| row.iter().map(|&v| Int::from(v)).collect())
            .collect::<Vec<_>>();
        let labels = (1..=gram.len()).map(|i| format!("e{i}")).collect();
        IntLattice::new(n, g, labels)
    }

    pub fn empty(n: u32) -> Self {
        IntLattice {
            n,
            gram: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Int>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_symmetric(&self) -> bool {
        self.n % 2 == 0
    }

    pub fn basis(&self, i: usize) -> SphereClass {
        SphereClass::basis(self.rank(), i).labeled(self.labels[i].clone())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn check_len(&self, x: &SphereClass) -> Result<(), LatticeError> {
        if x.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: x.rank(),
            });
        }
        Ok(())
    }

    /// `xᵀ·gram·y`.
    pub fn pairing(&self, x: &SphereClass, y: &SphereClass) -> Result<Int, LatticeError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut acc = Int::zero();
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row = Int::zero();
            for (g, yj) in self.gram[i].iter().zip(&y.coords) {
                if !g.is_zero() && !yj.is_zero() {
                    row += g * yj;
                }
            }
            acc += xi * row;
        }
        Ok(acc)
    }

    /// Checks that `s` may serve as a twist center and returns `ε`.
    pub fn twist_epsilon(&self, s: &SphereClass) -> Result<Int, LatticeError> {
        let ss = self.pairing(s, s)?;
        if self.n % 2 == 1 {
            return Ok(Int::one());
        }
        let expected = sphere_self_pairing(self.n);
        if ss != expected {
            return Err(LatticeError::InvalidTwistCenter {
                center: s.to_string(),
                self_pairing: ss,
                expected,
            });
        }
        Ok(Int::from(-2) / ss)
    }

    /// Picard–Lefschetz twist `τ_S(x) = x + ε⟨x,S⟩S`.
    pub fn dehn_twist(&self, s: &SphereClass, x: &SphereClass) -> Result<SphereClass, LatticeError> {
        self.twist_power(s, 1, x)
    }

    /// `τ_S^k(x)` for any integer `k`. For even `n` the twist is an
    /// involution on homology; for odd `n`, `τ_S^k(x) = x + k⟨x,S⟩S`.
    pub fn twist_power(
        &self,
        s: &SphereClass,
        k: i64,
        x: &SphereClass,
    ) -> Result<SphereClass, LatticeError> {
        let eps = self.twist_epsilon(s)?;
        self.check_len(x)?;
        let effective = if self.n % 2 == 0 {
            Int::from(k.rem_euclid(2))
        } else {
            Int::from(k)
        };
        if effective.is_zero() {
            return Ok(x.clone());
        }
        let p = self.pairing(x, s)?;
        Ok(x.axpy(&(effective * eps * p), s))
    }

    /// Applies the letters of `w` right to left to its base class.
    pub fn evaluate_word(&self, w: &TwistWord) -> Result<SphereClass, LatticeError> {
        let mut x = w.base.clone();
        for (center, exp) in w.letters.iter().rev() {
            x = self.twist_power(center, *exp, &x)?;
        }
        Ok(x)
    }

    /// Orthogonal direct sum; labels of `other` are kept as given.
    pub fn direct_sum(&self, other: &IntLattice) -> Result<IntLattice, LatticeError> {
        if self.n % 2 != other.n % 2 {
            return Err(LatticeError::WrongSymmetry(
                if self.is_symmetric() { "symmetric" } else { "antisymmetric" },
                other.n,
            ));
        }
        let r1 = self.rank();
        let r = r1 + other.rank();
        let mut gram = vec![vec![Int::zero(); r]; r];
        for i in 0..r1 {
            gram[i][..r1].clone_from_slice(&self.gram[i]);
        }
        for i in 0..other.rank() {
            gram[r1 + i][r1..].clone_from_slice(&other.gram[i]);
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(IntLattice {
            n: self.n,
            gram,
            labels,
        })
    }

    /// Adds one basis vector with the given pairings against the existing
    /// basis and the parity-determined self-pairing.
    pub fn extended(&self, pairings: &[Int], label: String) -> Result<IntLattice, LatticeError> {
        if pairings.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: pairings.len(),
            });
        }
        let sign = form_sign(self.n);
        let mut gram = self.gram.clone();
        for (row, p) in gram.iter_mut().zip(pairings) {
            // ⟨b_j, s⟩ = sign·⟨s, b_j⟩
            row.push(p * sign);
        }
        let mut last = pairings.to_vec();
        last.push(sphere_self_pairing(self.n));
        gram.push(last);
        let mut labels = self.labels.clone();
        labels.push(label);
        Ok(IntLattice {
            n: self.n,
            gram,
            labels,
        })
    }

    /// Drops the last basis vector.
    pub fn truncated(&self) -> IntLattice {
        let r = self.rank().saturating_sub(1);
        IntLattice {
            n: self.n,
            gram: self.gram[..r].iter().map(|row| row[..r].to_vec()).collect(),
            labels: self.labels[..r].to_vec(),
        }
    }
}

/// A class written as a word of twists applied to a base class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistWord {
    pub letters: Vec<(SphereClass, i64)>,
    pub base: SphereClass,
}

impl TwistWord {
    pub fn identity(base: SphereClass) -> Self {
        TwistWord {
            letters: Vec::new(),
            base,
        }
    }

    /// Builds a freely reduced word.
    pub fn new(letters: Vec<(SphereClass, i64)>, base: SphereClass) -> Self {
        let mut w = TwistWord { letters, base };
        w.reduce();
        w
    }

    /// Prepends (outermost position) `τ_center^exp` and reduces.
    pub fn prepend(&self, center: SphereClass, exp: i64) -> TwistWord {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push((center, exp));
        letters.extend(self.letters.iter().cloned());
        TwistWord::new(letters, self.base.clone())
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.iter().all(|(_, e)| *e != 0)
            && self
                .letters
                .windows(2)
                .all(|w| !w[0].0.same_vector(&w[1].0))
    }

    /// Merges adjacent letters with equal centers and removes zero exponents.
    pub fn reduce(&mut self) {
        let mut out: Vec<(SphereClass, i64)> = Vec::with_capacity(self.letters.len());
        for (c, e) in self.letters.drain(..) {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((last, le)) if last.same_vector(&c) => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((c, e)),
            }
        }
        self.letters = out;
    }

    /// Extends every vector in the word to `rank` coordinates.
    pub fn extended(&self, rank: usize) -> TwistWord {
        TwistWord {
            letters: self
                .letters
                .iter()
                .map(|(c, e)| (c.extended(rank), *e))
                .collect(),
            base: self.base.extended(rank),
        }
    }

    /// `Some(rest)` when the outermost letter is exactly `τ_center^{+1}`.
    pub fn strip_leading(&self, center: &SphereClass) -> Option<TwistWord> {
        match self.letters.first() {
            Some((c, 1)) if c.same_vector(center) => Some(TwistWord {
                letters: self.letters[1..].to_vec(),
                base: self.base.clone(),
            }),
            _ => None,
        }
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, e) in &self.letters {
            write!(f, "tw({c})^{e} ")?;
        }
        write!(f, "{}", self.base)
    }
}

pub type IntMatrix = Vec<Vec<Int>>;

pub fn identity_matrix(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn matrix_from_i64(rows: &[&[i64]]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&v| Int::from(v)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize) -> IntMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Int::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Result of [`smith_normal_form`]: `u · m · v = d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let r = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..r)
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form of an integer `rows × cols` matrix.
///
/// Pivots on the entry of smallest absolute value in the remaining block,
/// ties broken by lowest row then lowest column, so `u` and `v` are
/// reproducible.
pub fn smith_normal_form(m: &IntMatrix, rows: usize, cols: usize) -> SmithForm {
    let mut d: IntMatrix = m.clone();
    let mut u = identity_matrix(rows);
    let mut v = identity_matrix(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t, rows, cols) else {
                return SmithForm { u, d, v };
            };
            if pi != t {
                d.swap(pi, t);
                u.swap(pi, t);
            }
            if pj != t {
                for row in d.iter_mut() {
                    row.swap(pj, t);
                }
                for row in v.iter_mut() {
                    row.swap(pj, t);
                }
            }
            let p = d[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&p);
                add_row(&mut d, i, t, &q);
                add_row(&mut u, i, t, &q);
                dirty |= !d[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&p);
                add_col(&mut d, j, t, &q);
                add_col(&mut v, j, t, &q);
                dirty |= !d[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // Divisibility: fold any row whose entries p does not divide.
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&d[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i, &Int::from(-1));
                    add_row(&mut u, t, i, &Int::from(-1));
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    SmithForm { u, d, v }
}

fn smallest_entry(d: &IntMatrix, t: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            if d[i][j].is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => d[i][j].abs() < d[bi][bj].abs(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

// row[i] -= q·row[k]
fn add_row(m: &mut IntMatrix, i: usize, k: usize, q: &Int) {
    let src = m[k].clone();
    for (x, s) in m[i].iter_mut().zip(&src) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

// col[j] -= q·col[k]
fn add_col(m: &mut IntMatrix, j: usize, k: usize, q: &Int) {
    for row in m.iter_mut() {
        if !row[k].is_zero() {
            let s = row[k].clone();
            row[j] -= q * s;
        }
    }
}

//! Isotopy classes of matching arcs in a disk with `m` marked points.
//!
//! The marked points sit on a horizontal line, numbered `1..=m`. An arc is
//! recorded by a braid word `β` and a base index `i` with `arc = β(straight
//! arc (i, i+1))`. Its isotopy class is identified with the boundary curve
//! of a thin neighbourhood, which is a conjugacy class in the free group
//! `π₁ = ⟨x₁, …, x_m⟩` (basepoint on the left boundary, `x_i` a loop around
//! point `i` passing above the points to its left). Half twists act through
//! the Artin automorphisms.
//!
//! The canonical coordinates of an arc are geometric intersection numbers
//! of that curve with a fixed arc system:
//!
//! * `β_j` for the vertical line between points `j` and `j+1`,
//! * `d_i` for the ray from point `i` straight down to the boundary,
//! * `u_i` for the ray from point `i` straight up to the boundary.
//!
//! The vertical lines together with the rays of the interior points are the
//! Dynnikov system, so these numbers determine the curve.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::fiber::plumbing_chain;
use crate::lattice::{IntLattice, LatticeError, SphereClass, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("standard arc index {index} out of range for {m} marked points")]
    OutOfRange { index: usize, m: usize },
    #[error("a system needs at least 2 marked points, got {0}")]
    TooFewPoints(usize),
    #[error("braid generator {gen} out of range for {m} marked points")]
    BadGenerator { gen: usize, m: usize },
    #[error("unknown arc preset `{0}`")]
    UnknownPreset(String),
    #[error("arcs belong to systems with different numbers of marked points")]
    SystemMismatch,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Braid word over half twists about the straight arcs; letter `(i, e)` is
/// `σ_i^e`. Letters apply right to left.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BraidWord(pub Vec<(usize, i64)>);

impl BraidWord {
    pub fn new(letters: Vec<(usize, i64)>) -> Self {
        let mut w = BraidWord(letters);
        w.reduce();
        w
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// Concatenation `self · other` (other applied first).
    pub fn then_after(&self, other: &BraidWord) -> BraidWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        BraidWord::new(v)
    }

    fn reduce(&mut self) {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(self.0.len());
        for (g, e) in self.0.drain(..) {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        self.0 = out;
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(g, e)| format!("s{g}^{e}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Free group words: letter `±g` is `x_g^{±1}`.
pub mod free {
    /// Freely reduces a word.
    pub fn reduce(w: &[i32]) -> Vec<i32> {
        let mut out: Vec<i32> = Vec::with_capacity(w.len());
        for &l in w {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    /// Freely and cyclically reduces a word.
    pub fn cyclic_reduce(w: &[i32]) -> Vec<i32> {
        let r = reduce(w);
        let mut lo = 0;
        let mut hi = r.len();
        while hi - lo >= 2 && r[lo] == -r[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        r[lo..hi].to_vec()
    }

    pub fn inverse(w: &[i32]) -> Vec<i32> {
        w.iter().rev().map(|l| -l).collect()
    }

    /// Lexicographically least rotation of a cyclically reduced word or of
    /// its inverse; a complete invariant of an unoriented conjugacy class.
    pub fn canonical_cyclic(w: &[i32]) -> Vec<i32> {
        let c = cyclic_reduce(w);
        let inv = inverse(&c);
        let mut best = c.clone();
        for word in [&c, &inv] {
            for k in 0..word.len() {
                let rot: Vec<i32> = word[k..].iter().chain(&word[..k]).copied().collect();
                if rot < best {
                    best = rot;
                }
            }
        }
        best
    }

    /// Image of a single letter under the Artin automorphism of `σ_gen^{±1}`.
    fn artin_letter(gen: usize, positive: bool, letter: i32, out: &mut Vec<i32>) {
        let g = letter.unsigned_abs() as usize;
        let i = gen as i32;
        let image: &[i32] = if g == gen {
            if positive {
                &[i, i + 1, -i]
            } else {
                &[i + 1]
            }
        } else if g == gen + 1 {
            if positive {
                &[i]
            } else {
                &[-(i + 1), i, i + 1]
            }
        } else {
            out.push(letter);
            return;
        };
        if letter > 0 {
            out.extend_from_slice(image);
        } else {
            out.extend(image.iter().rev().map(|l| -l));
        }
    }

    /// Applies `σ_gen^exp` to a cyclic word, returning a cyclically reduced word.
    pub fn apply_generator(gen: usize, exp: i64, w: &[i32]) -> Vec<i32> {
        let mut cur = w.to_vec();
        for _ in 0..exp.unsigned_abs() {
            let mut next = Vec::with_capacity(cur.len() * 2);
            for &l in &cur {
                artin_letter(gen, exp > 0, l, &mut next);
            }
            cur = cyclic_reduce(&next);
        }
        cur
    }

    /// Rewrites a word in the basis `y_i` dual to the upward rays, where
    /// `x_i = P_i⁻¹ y_i P_i` with `P_i = y_{i-1} ⋯ y_1`.
    pub fn to_upper_basis(w: &[i32]) -> Vec<i32> {
        let mut out = Vec::with_capacity(w.len() * 4);
        for &l in w {
            let g = l.unsigned_abs() as i32;
            // P_i⁻¹ = y_1⁻¹ ⋯ y_{i-1}⁻¹
            let conj: Vec<i32> = (1..g).map(|k| -k).collect();
            let core = if l > 0 { g } else { -g };
            out.extend(conj.iter().copied());
            out.push(core);
            out.extend(inverse(&conj));
        }
        cyclic_reduce(&out)
    }
}

/// Catalogue entry: a named arc configuration with a provenance note.
#[derive(Debug, Clone)]
pub struct ArcPreset {
    pub name: String,
    pub braid: BraidWord,
    pub base: usize,
    pub note: &'static str,
}

fn preset_table() -> Vec<(&'static str, usize, Vec<(usize, i64)>, usize, &'static str)> {
    // (name, minimal m, braid, base, note)
    vec![
        ("x1.v1", 3, vec![], 1, "X1 first matching path: straight arc (1,2)"),
        ("x1.v2", 3, vec![(2, 2)], 1, "X1 second matching path: arc (1,2) wrapped twice around arc (2,3)"),
        ("x2.w1", 5, vec![], 1, "X2 matching path W1: straight arc (1,2)"),
        ("x2.w2", 5, vec![], 2, "X2 matching path W2: straight arc (2,3)"),
        ("x2.w3", 5, vec![(3, 2), (2, 1)], 1, "X2 matching path W3: arc (1,3) over point 2, wrapped twice around arc (3,4)"),
        ("x2.w4", 5, vec![], 3, "X2 matching path W4: straight arc (3,4)"),
    ]
}

/// Disk with `m` marked points and the `A_{m-1}` lattice of its matching cycles.
#[derive(Debug, Clone)]
pub struct ArcSystem {
    m: usize,
    lattice: IntLattice,
    catalogue: BTreeMap<String, ArcPreset>,
}

/// Isotopy class of an arc between two marked points.
#[derive(Debug, Clone)]
pub struct MatchingArc {
    m: usize,
    endpoints: (usize, usize),
    coords: Vec<u64>,
    braid: BraidWord,
    base: usize,
}

impl MatchingArc {
    pub fn endpoints(&self) -> (usize, usize) {
        self.endpoints
    }

    /// `[β_1..β_{m-1}, d_1..d_m, u_1..u_m]`.
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Canonical free-group word of the boundary curve.
    pub fn curve(&self) -> Vec<i32> {
        free::canonical_cyclic(&curve_of(&self.braid, self.base))
    }

    /// Word in lattice twists whose evaluation is the class of this arc.
    pub fn twist_word(&self, lattice: &IntLattice) -> TwistWord {
        TwistWord::new(
            self.braid
                .letters()
                .iter()
                .map(|&(g, e)| (lattice.basis(g - 1), e))
                .collect(),
            lattice.basis(self.base - 1),
        )
    }
}

fn curve_of(braid: &BraidWord, base: usize) -> Vec<i32> {
    let start = [base as i32, base as i32 + 1];
    apply_braid(braid, &start)
}

fn apply_braid(braid: &BraidWord, curve: &[i32]) -> Vec<i32> {
    let mut c = free::cyclic_reduce(curve);
    for &(g, e) in braid.letters().iter().rev() {
        c = free::apply_generator(g, e, &c);
    }
    c
}

/// Intersection coordinates of a cyclically reduced curve word.
fn curve_coords(m: usize, c: &[i32]) -> Vec<u64> {
    let mut coords = vec![0u64; 3 * m - 1];
    let len = c.len();
    for j in 1..m {
        let side = |l: i32| l.unsigned_abs() as usize <= j;
        coords[j - 1] = (0..len).filter(|&k| side(c[k]) != side(c[(k + 1) % len])).count() as u64;
    }
    for &l in c {
        coords[m - 1 + l.unsigned_abs() as usize - 1] += 1;
    }
    for l in free::to_upper_basis(c) {
        coords[2 * m - 1 + l.unsigned_abs() as usize - 1] += 1;
    }
    coords
}

fn curve_endpoints(c: &[i32]) -> (usize, usize) {
    let mut sums: BTreeMap<usize, i64> = BTreeMap::new();
    for &l in c {
        *sums.entry(l.unsigned_abs() as usize).or_default() += l.signum() as i64;
    }
    let ends: Vec<usize> = sums
        .into_iter()
        .filter(|(_, s)| *s != 0)
        .map(|(g, _)| g)
        .collect();
    debug_assert_eq!(ends.len(), 2, "arc curve must enclose two points");
    (ends[0], ends[1])
}

impl ArcSystem {
    /// Disk with `m` marked points; matching cycles live in `A_{m-1}` of
    /// half-dimension `n`.
    pub fn new(m: usize, n: u32) -> Result<Self, ArcError> {
        if m < 2 {
            return Err(ArcError::TooFewPoints(m));
        }
        let lattice = plumbing_chain(m - 1, n)?;
        let mut catalogue = BTreeMap::new();
        for (name, min_m, braid, base, note) in preset_table() {
            if m >= min_m {
                catalogue.insert(
                    name.to_string(),
                    ArcPreset {
                        name: name.to_string(),
                        braid: BraidWord::new(braid),
                        base,
                        note,
                    },
                );
            }
        }
        Ok(ArcSystem {
            m,
            lattice,
            catalogue,
        })
    }

    pub fn marked_points(&self) -> usize {
        self.m
    }

    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn catalogue(&self) -> &BTreeMap<String, ArcPreset> {
        &self.catalogue
    }

    /// Arc `braid(straight arc (base, base+1))`.
    pub fn arc(&self, braid: BraidWord, base: usize) -> Result<MatchingArc, ArcError> {
        if base == 0 || base >= self.m {
            return Err(ArcError::OutOfRange {
                index: base,
                m: self.m,
            });
        }
        if let Some(&(gen, _)) = braid.letters().iter().find(|(g, _)| *g == 0 || *g >= self.m) {
            return Err(ArcError::BadGenerator { gen, m: self.m });
        }
        let c = curve_of(&braid, base);
        Ok(MatchingArc {
            m: self.m,
            endpoints: curve_endpoints(&c),
            coords: curve_coords(self.m, &c),
            braid,
            base,
        })
    }

    /// Straight arc `(i, i+1)`.
    pub fn standard_arc(&self, i: usize) -> Result<MatchingArc, ArcError> {
        self.arc(BraidWord::default(), i)
    }

    pub fn preset(&self, name: &str) -> Result<MatchingArc, ArcError> {
        let p = self
            .catalogue
            .get(name)
            .ok_or_else(|| ArcError::UnknownPreset(name.to_string()))?;
        self.arc(p.braid.clone(), p.base)
    }

    fn check(&self, a: &MatchingArc) -> Result<(), ArcError> {
        if a.m != self.m {
            return Err(ArcError::SystemMismatch);
        }
        Ok(())
    }

    /// `t_a^exp(b)`: the half twist about `a` (positive for `exp = 1`).
    ///
    /// The half twist about `a = β(σ-arc i)` is `β σ_i β⁻¹`.
    pub fn apply_half_twist_power(
        &self,
        a: &MatchingArc,
        exp: i64,
        b: &MatchingArc,
    ) -> Result<MatchingArc, ArcError> {
        self.check(a)?;
        self.check(b)?;
        let conj = a
            .braid
            .then_after(&BraidWord::new(vec![(a.base, exp)]))
            .then_after(&a.braid.inverse());
        let braid = conj.then_after(&b.braid);
        let c = apply_braid(&conj, &curve_of(&b.braid, b.base));
        Ok(MatchingArc {
            m: self.m,
            endpoints: curve_endpoints(&c),
            coords: curve_coords(self.m, &c),
            braid,
            base: b.base,
        })
    }

    pub fn apply_half_twist(&self, a: &MatchingArc, b: &MatchingArc) -> Result<MatchingArc, ArcError> {
        self.apply_half_twist_power(a, 1, b)
    }

    /// Isotopy test: equal unordered endpoints and equal coordinates.
    pub fn arcs_isotopic(&self, a: &MatchingArc, b: &MatchingArc) -> bool {
        a.m == b.m && a.endpoints == b.endpoints && a.coords == b.coords
    }

    /// Homology class of the matching cycle over `a`, sign-normalized.
    pub fn arc_to_class(&self, a: &MatchingArc) -> Result<SphereClass, ArcError> {
        self.check(a)?;
        let w = a.twist_word(&self.lattice);
        let mut c = self.lattice.evaluate_word(&w)?.sign_normalized();
        c.label = None;
        Ok(c)
    }

    /// Number of interior crossings of `a` and `b` in minimal position.
    pub fn geometric_intersection(&self, a: &MatchingArc, b: &MatchingArc) -> Result<u64, ArcError> {
        self.check(a)?;
        self.check(b)?;
        if self.arcs_isotopic(a, b) {
            return Ok(0);
        }
        // Move a to the straight arc (j, j+1) and count crossings of b there.
        let c = apply_braid(&a.braid.inverse(), &curve_of(&b.braid, b.base));
        let j = a.base;
        let crossings = straight_arc_crossings(self.m, &curve_coords(self.m, &c), j);
        let (p, q) = curve_endpoints(&c);
        let shared = [p, q].iter().filter(|&&x| x == j || x == j + 1).count() as i64;
        let interior = crossings - shared;
        debug_assert!(interior >= 0 && interior % 2 == 0);
        Ok((interior / 2) as u64)
    }
}

/// Crossings of a curve with the straight arc `(j, j+1)`, from the normal
/// arcs of the curve in the region between the rays at `j` and `j+1`.
fn straight_arc_crossings(m: usize, coords: &[u64], j: usize) -> i64 {
    let beta = coords[j - 1] as i64;
    let d = |i: usize| coords[m - 1 + i - 1] as i64;
    let u = |i: usize| coords[2 * m - 1 + i - 1] as i64;
    let around_left = (u(j) + d(j) - beta) / 2;
    let around_right = (u(j + 1) + d(j + 1) - beta) / 2;
    let top_minus_bottom = (u(j) + u(j + 1) - d(j) - d(j + 1)) / 2;
    let diagonal = (u(j) - d(j) - top_minus_bottom).abs();
    around_left + around_right + diagonal
}

/// Checks the local consistency conditions of intersection coordinates:
/// in every region between consecutive points the corner counts are
/// nonnegative integers.
pub fn coords_are_normal(m: usize, coords: &[u64]) -> bool {
    if coords.len() != 3 * m - 1 {
        return false;
    }
    (1..m).all(|j| {
        let beta = coords[j - 1] as i64;
        let d = |i: usize| coords[m - 1 + i - 1] as i64;
        let u = |i: usize| coords[2 * m - 1 + i - 1] as i64;
        let l = u(j) + d(j) - beta;
        let r = u(j + 1) + d(j + 1) - beta;
        l >= 0 && r >= 0 && l % 2 == 0 && r % 2 == 0
    })
}

impl MatchingArc {
    pub fn is_standard(&self) -> bool {
        self.braid.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Int;

    fn sys(m: usize) -> ArcSystem {
        ArcSystem::new(m, 2).unwrap()
    }

    fn class(v: &[i64]) -> SphereClass {
        SphereClass::from_i64(v)
    }

    #[test]
    fn standard_arcs() {
        let s = sys(3);
        let a1 = s.standard_arc(1).unwrap();
        let a2 = s.standard_arc(2).unwrap();
        assert_eq!(a1.endpoints(), (1, 2));
        assert_eq!(a2.endpoints(), (2, 3));
        // β1 β2 | d1 d2 d3 | u1 u2 u3
        assert_eq!(a1.coords(), &[2, 0, 1, 1, 0, 1, 1, 0]);
        assert!(s.arcs_isotopic(&a1, &a1));
        assert!(!s.arcs_isotopic(&a1, &a2));
        assert!(s.standard_arc(3).is_err());
        assert!(s.standard_arc(0).is_err());
    }

    #[test]
    fn twist_fixes_its_core() {
        let s = sys(4);
        for i in 1..4 {
            let a = s.standard_arc(i).unwrap();
            let t = s.apply_half_twist(&a, &a).unwrap();
            assert!(s.arcs_isotopic(&t, &a));
        }
        let b = s.arc(BraidWord::new(vec![(2, 1), (3, -2)]), 1).unwrap();
        assert!(s.arcs_isotopic(&s.apply_half_twist(&b, &b).unwrap(), &b));
    }

    #[test]
    fn braid_relation_m3() {
        let s = sys(3);
        let t1 = s.standard_arc(1).unwrap();
        let t2 = s.standard_arc(2).unwrap();
        for e in 1..3 {
            let x = s.standard_arc(e).unwrap();
            let lhs = s
                .apply_half_twist(&t1, &s.apply_half_twist(&t2, &s.apply_half_twist(&t1, &x).unwrap()).unwrap())
                .unwrap();
            let rhs = s
                .apply_half_twist(&t2, &s.apply_half_twist(&t1, &s.apply_half_twist(&t2, &x).unwrap()).unwrap())
                .unwrap();
            assert!(s.arcs_isotopic(&lhs, &rhs));
            assert_eq!(lhs.curve(), rhs.curve());
        }
    }

    #[test]
    fn squared_twist_fragility_gap() {
        let s = sys(3);
        let e1 = s.standard_arc(1).unwrap();
        let e2 = s.standard_arc(2).unwrap();
        let sq = s.apply_half_twist_power(&e2, 2, &e1).unwrap();
        assert!(!s.arcs_isotopic(&sq, &e1));
        assert_eq!(sq.endpoints(), e1.endpoints());
        let c = s.arc_to_class(&sq).unwrap();
        assert_eq!(c.coords, class(&[1, 0]).coords);
    }

    #[test]
    fn arc_classes() {
        let s = sys(3);
        let e1 = s.standard_arc(1).unwrap();
        let e2 = s.standard_arc(2).unwrap();
        assert_eq!(s.arc_to_class(&e1).unwrap().coords, class(&[1, 0]).coords);
        let t = s.apply_half_twist(&e2, &e1).unwrap();
        assert_eq!(t.endpoints(), (1, 3));
        assert!(s.arc_to_class(&t).unwrap().eq_up_to_sign(&class(&[1, 1])));
    }

    #[test]
    fn composition_order_matches_permutation() {
        // σ1 σ2 applied to arc (1,2): σ2 first sends it to (1,3), σ1 then to (2,3).
        let s = sys(3);
        let a = s.arc(BraidWord::new(vec![(1, 1), (2, 1)]), 1).unwrap();
        assert_eq!(a.endpoints(), (2, 3));
        assert!(s.arc_to_class(&a).unwrap().eq_up_to_sign(&class(&[0, 1])));
    }

    #[test]
    fn inverse_twist_restores() {
        let s = sys(4);
        let a = s.arc(BraidWord::new(vec![(2, 1), (1, -1)]), 3).unwrap();
        let b = s.arc(BraidWord::new(vec![(3, 2)]), 1).unwrap();
        let t = s.apply_half_twist(&a, &b).unwrap();
        let back = s.apply_half_twist_power(&a, -1, &t).unwrap();
        assert_eq!(back.coords(), b.coords());
        assert!(s.arcs_isotopic(&back, &b));
    }

    #[test]
    fn crossing_arcs_move() {
        let s = sys(3);
        let a = s.arc(BraidWord::new(vec![(2, 1)]), 1).unwrap(); // (1,3) over 2
        let b = s.standard_arc(2).unwrap();
        assert!(s.geometric_intersection(&a, &b).unwrap() == 0);
        let c = s.arc(BraidWord::new(vec![(1, 1)]), 2).unwrap();
        let t = s.apply_half_twist(&c, &b).unwrap();
        assert!(!s.arcs_isotopic(&t, &b));
    }

    #[test]
    fn word_reexpression_is_invisible() {
        let s = sys(4);
        let e1 = s.standard_arc(1).unwrap();
        let e3 = s.standard_arc(3).unwrap();
        let a = s.arc(BraidWord(vec![(1, 1), (1, -1), (2, 1)]), 1).unwrap();
        let b = s.arc(BraidWord::new(vec![(2, 1)]), 1).unwrap();
        assert!(s.arcs_isotopic(&a, &b));
        // disjoint twist does nothing
        let c = s.apply_half_twist(&e3, &e1).unwrap();
        assert!(s.arcs_isotopic(&c, &e1));
        // σ1 fixes arc 1
        let d = s.arc(BraidWord::new(vec![(1, 3)]), 1).unwrap();
        assert!(s.arcs_isotopic(&d, &e1));
    }

    #[test]
    fn intersection_examples() {
        let s = sys(4);
        let e1 = s.standard_arc(1).unwrap();
        let e2 = s.standard_arc(2).unwrap();
        let e3 = s.standard_arc(3).unwrap();
        assert_eq!(s.geometric_intersection(&e1, &e3).unwrap(), 0);
        assert_eq!(s.geometric_intersection(&e1, &e2).unwrap(), 0);
        // t2²(e1) winds around point 3, so it must cross the segment (3,4) once.
        let sq = s.apply_half_twist_power(&e2, 2, &e1).unwrap();
        assert_eq!(s.geometric_intersection(&sq, &e3).unwrap(), 1);
        // over and under 2 share both endpoints and bound a disk around 2.
        let over = s.arc(BraidWord::new(vec![(2, 1)]), 1).unwrap();
        let under = s.arc(BraidWord::new(vec![(2, -1)]), 1).unwrap();
        assert_eq!(s.geometric_intersection(&over, &under).unwrap(), 0);
        // straight (2,3) vs arc (1,4) passing under 2,3 after twisting:
        let long = s.arc(BraidWord::new(vec![(3, 1), (2, 1)]), 1).unwrap();
        assert_eq!(long.endpoints(), (1, 4));
        assert_eq!(s.geometric_intersection(&long, &e2).unwrap(), 0);
    }

    #[test]
    fn presets_exist() {
        let s3 = sys(3);
        assert!(s3.preset("x1.v2").is_ok());
        assert!(s3.preset("x2.w3").is_err());
        let s5 = sys(5);
        let w3 = s5.preset("x2.w3").unwrap();
        assert_eq!(w3.endpoints(), (1, 3));
        assert!(s5.arc_to_class(&w3).unwrap().eq_up_to_sign(&class(&[1, 1, 0, 0])));
    }

    #[test]
    fn free_word_basics() {
        assert_eq!(free::cyclic_reduce(&[1, 2, -2, 3, -1]), vec![3]);
        assert_eq!(free::canonical_cyclic(&[2, 1]), free::canonical_cyclic(&[1, 2]));
        assert_eq!(free::canonical_cyclic(&[-1, -2]), free::canonical_cyclic(&[1, 2]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn braid(m: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
            prop::collection::vec((1..m, prop::sample::select(vec![-1i64, 1])), 0..=max_len)
                .prop_map(BraidWord::new)
        }

        fn arc(m: usize, max_len: usize) -> impl Strategy<Value = (BraidWord, usize)> {
            (braid(m, max_len), 1..m)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn coords_match_free_group_oracle(
                m in 3usize..=5,
                seed in any::<u64>(),
            ) {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let s = sys(m);
                let rand_arc = |rng: &mut rand_chacha::ChaCha8Rng| {
                    let len = rng.gen_range(0..=5);
                    let w = BraidWord::new((0..len).map(|_| (rng.gen_range(1..m), if rng.gen_bool(0.5) { 1 } else { -1 })).collect());
                    s.arc(w, rng.gen_range(1..m)).unwrap()
                };
                let a = rand_arc(&mut rng);
                let b = rand_arc(&mut rng);
                prop_assert!(coords_are_normal(m, a.coords()));
                let same_curve = a.curve() == b.curve();
                prop_assert_eq!(s.arcs_isotopic(&a, &b), same_curve);
                // a derivation through a twist and its inverse is the same arc
                let c = s.apply_half_twist_power(&b, -1, &s.apply_half_twist(&b, &a).unwrap()).unwrap();
                prop_assert!(s.arcs_isotopic(&a, &c));
                prop_assert_eq!(a.curve(), c.curve());
            }

            #[test]
            fn commuting_square((wa, ia) in arc(5, 4), (wb, ib) in arc(5, 4)) {
                let s = sys(5);
                let a = s.arc(wa, ia).unwrap();
                let b = s.arc(wb, ib).unwrap();
                let t = s.apply_half_twist(&a, &b).unwrap();
                let lhs = s.arc_to_class(&t).unwrap();
                let ca = s.arc_to_class(&a).unwrap();
                let cb = s.arc_to_class(&b).unwrap();
                let rhs = s.lattice().dehn_twist(&ca, &cb).unwrap();
                prop_assert!(lhs.eq_up_to_sign(&rhs));
            }

            #[test]
            fn intersection_bounds_pairing((wa, ia) in arc(5, 4), (wb, ib) in arc(5, 4)) {
                let s = sys(5);
                let a = s.arc(wa, ia).unwrap();
                let b = s.arc(wb, ib).unwrap();
                let i_ab = s.geometric_intersection(&a, &b).unwrap();
                let i_ba = s.geometric_intersection(&b, &a).unwrap();
                prop_assert_eq!(i_ab, i_ba);
                let (p, q) = a.endpoints();
                let (r, t) = b.endpoints();
                let shared = [p, q].iter().filter(|x| **x == r || **x == t).count() as i64;
                let pairing = s.lattice().pairing(&s.arc_to_class(&a).unwrap(), &s.arc_to_class(&b).unwrap()).unwrap();
                if !s.arcs_isotopic(&a, &b) {
                    prop_assert!(num_traits::Signed::abs(&pairing) <= Int::from(i_ab as i64 + shared));
                }
            }

            #[test]
            fn class_is_isotopy_invariant((wa, ia) in arc(4, 5)) {
                let s = ArcSystem::new(4, 3).unwrap();
                let a = s.arc(wa.clone(), ia).unwrap();
                // Re-express a through a conjugate word that fixes it.
                let fix = BraidWord::new(vec![(ia, 1)]);
                let w2 = wa.then_after(&fix);
                let b = s.arc(w2, ia).unwrap();
                prop_assert!(s.arcs_isotopic(&a, &b));
                prop_assert!(s.arc_to_class(&a).unwrap().eq_up_to_sign(&s.arc_to_class(&b).unwrap()));
            }
        }
    }
}

//! Lefschetz data `W(M; V_1, …, V_k)` and the moves relating presentations.
//!
//! Positions are 1-based. A move at position `i` acts on the cyclically
//! adjacent pair `(i, i+1 mod k)`; position `k` wraps across the basepoint.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arcs::{ArcError, MatchingArc};
use crate::fiber::{FiberError, FiberModel};
use crate::lattice::{Int, LatticeError, SphereClass, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("move needs at least 2 vanishing cycles, datum has {0}")]
    TooFewCycles(usize),
    #[error("position {index} out of range 1..={k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("expected {expected} pairing entries, got {got}")]
    PairingLength { expected: usize, got: usize },
    #[error("expected {expected} disks, one per vanishing cycle, got {got}")]
    DiskCount { expected: usize, got: usize },
    #[error("disk T_{index} meets V_{index} algebraically {pairing} times, needs ±1")]
    NotSingleIntersection { index: usize, pairing: Int },
    #[error("dimension mismatch: n={0} vs n={1}")]
    ParityMismatch(u32, u32),
    #[error("cycle {index}: word base {base} is not a basis sphere")]
    NonBasisBase { index: usize, base: SphereClass },
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CycleFlags {
    pub stabilization_sphere: bool,
    pub loose_certified: bool,
}

#[derive(Debug, Clone)]
pub struct VanishingCycle {
    pub word: TwistWord,
    pub klass: SphereClass,
    pub arc: Option<MatchingArc>,
    pub flags: CycleFlags,
}

impl PartialEq for VanishingCycle {
    fn eq(&self, other: &Self) -> bool {
        let arcs_eq = match (&self.arc, &other.arc) {
            (None, None) => true,
            (Some(a), Some(b)) => a.endpoints() == b.endpoints() && a.coords() == b.coords(),
            _ => false,
        };
        self.word == other.word && self.klass == other.klass && self.flags == other.flags && arcs_eq
    }
}

impl Eq for VanishingCycle {}

/// Record left by `subflexibilize`: the fiber index of each `S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfProvenance {
    pub spheres: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LefschetzDatum {
    fiber: FiberModel,
    cycles: Vec<VanishingCycle>,
    provenance: Option<SfProvenance>,
}

impl PartialEq for LefschetzDatum {
    fn eq(&self, other: &Self) -> bool {
        self.fiber.lattice() == other.fiber.lattice()
            && self.cycles == other.cycles
            && self.provenance == other.provenance
    }
}

fn basis_index(c: &SphereClass) -> Option<usize> {
    let mut idx = None;
    for (i, x) in c.coords.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if idx.is_some() || !x.is_one() {
            return None;
        }
        idx = Some(i);
    }
    idx
}

/// Word for `τ_{W(b)}^exp`, written `W τ_b^exp W^{-1}`.
fn conjugated_letter(w: &TwistWord, exp: i64) -> Vec<(SphereClass, i64)> {
    let mut out: Vec<(SphereClass, i64)> = w.letters.clone();
    out.push((w.base.clone(), exp));
    out.extend(w.letters.iter().rev().map(|(c, e)| (c.clone(), -e)));
    out
}

fn shift_class(c: &SphereClass, offset: usize, rank: usize) -> SphereClass {
    let mut coords = vec![Int::zero(); rank];
    for (i, x) in c.coords.iter().enumerate() {
        coords[offset + i] = x.clone();
    }
    SphereClass {
        coords,
        label: c.label.clone(),
    }
}

fn shift_word(w: &TwistWord, offset: usize, rank: usize) -> TwistWord {
    TwistWord {
        letters: w
            .letters
            .iter()
            .map(|(c, e)| (shift_class(c, offset, rank), *e))
            .collect(),
        base: shift_class(&w.base, offset, rank),
    }
}

impl LefschetzDatum {
    /// Builds a datum from twist words whose letters and bases are basis spheres.
    pub fn new(fiber: FiberModel, words: Vec<TwistWord>) -> Result<Self, LefschetzError> {
        let mut cycles = Vec::with_capacity(words.len());
        for (i, w) in words.into_iter().enumerate() {
            cycles.push(Self::make_cycle(&fiber, w, None, i + 1)?);
        }
        Ok(LefschetzDatum {
            fiber,
            cycles,
            provenance: None,
        })
    }

    /// Builds a datum whose cycles are matching cycles over arcs.
    pub fn from_arcs(fiber: FiberModel, arcs: Vec<MatchingArc>) -> Result<Self, LefschetzError> {
        let mut cycles = Vec::with_capacity(arcs.len());
        for (i, a) in arcs.into_iter().enumerate() {
            let w = a.twist_word(fiber.lattice());
            cycles.push(Self::make_cycle(&fiber, w, Some(a), i + 1)?);
        }
        Ok(LefschetzDatum {
            fiber,
            cycles,
            provenance: None,
        })
    }

    /// Datum with no vanishing cycles.
    pub fn empty(fiber: FiberModel) -> Self {
        LefschetzDatum {
            fiber,
            cycles: Vec::new(),
            provenance: None,
        }
    }

    fn make_cycle(
        fiber: &FiberModel,
        mut word: TwistWord,
        arc: Option<MatchingArc>,
        index: usize,
    ) -> Result<VanishingCycle, LefschetzError> {
        word.reduce();
        if basis_index(&word.base).is_none() {
            return Err(LefschetzError::NonBasisBase {
                index,
                base: word.base,
            });
        }
        let klass = fiber.lattice().evaluate_word(&word)?;
        Ok(VanishingCycle {
            word,
            klass,
            arc,
            flags: CycleFlags::default(),
        })
    }

    pub fn fiber(&self) -> &FiberModel {
        &self.fiber
    }

    pub fn n(&self) -> u32 {
        self.fiber.n()
    }

    pub fn cycles(&self) -> &[VanishingCycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn provenance(&self) -> Option<&SfProvenance> {
        self.provenance.as_ref()
    }

    pub fn classes(&self) -> Vec<SphereClass> {
        self.cycles.iter().map(|c| c.klass.clone()).collect()
    }

    /// Whether a move at position `i` pairs the last cycle with the first.
    pub fn wraps(&self, i: usize) -> bool {
        self.cycles.len() >= 2 && i == self.cycles.len()
    }

    fn pair(&self, i: usize) -> Result<(usize, usize), LefschetzError> {
        let k = self.cycles.len();
        if k < 2 {
            return Err(LefschetzError::TooFewCycles(k));
        }
        if i == 0 || i > k {
            return Err(LefschetzError::IndexOutOfRange { index: i, k });
        }
        Ok((i - 1, i % k))
    }

    /// `(V_i, V_{i+1}) ↦ (τ_{V_i} V_{i+1}, V_i)`.
    pub fn hurwitz_left(&self, i: usize) -> Result<LefschetzDatum, LefschetzError> {
        let (a, b) = self.pair(i)?;
        let va = &self.cycles[a];
        let vb = &self.cycles[b];
        let moved = self.twisted_cycle(va, 1, vb)?;
        let mut out = self.without_provenance();
        out.cycles[b] = va.clone();
        out.cycles[a] = moved;
        Ok(out)
    }

    /// `(V_i, V_{i+1}) ↦ (V_{i+1}, τ_{V_{i+1}}^{-1} V_i)`.
    pub fn hurwitz_right(&self, i: usize) -> Result<LefschetzDatum, LefschetzError> {
        let (a, b) = self.pair(i)?;
        let va = &self.cycles[a];
        let vb = &self.cycles[b];
        let moved = self.twisted_cycle(vb, -1, va)?;
        let mut out = self.without_provenance();
        out.cycles[a] = vb.clone();
        out.cycles[b] = moved;
        Ok(out)
    }

    /// `τ_{center}^exp` applied to `target`, as a fresh unflagged cycle.
    fn twisted_cycle(
        &self,
        center: &VanishingCycle,
        exp: i64,
        target: &VanishingCycle,
    ) -> Result<VanishingCycle, LefschetzError> {
        let mut letters = conjugated_letter(&center.word, exp);
        letters.extend(target.word.letters.iter().cloned());
        let word = TwistWord::new(letters, target.word.base.clone());
        let klass = self.fiber.lattice().evaluate_word(&word)?;
        let arc = match (self.fiber.arc_system(), &center.arc, &target.arc) {
            (Some(sys), Some(c), Some(t)) => Some(sys.apply_half_twist_power(c, exp, t)?),
            _ => None,
        };
        Ok(VanishingCycle {
            word,
            klass,
            arc,
            flags: CycleFlags::default(),
        })
    }

    /// `(V_1, V_2, …, V_k) ↦ (V_2, …, V_k, V_1)`.
    pub fn rotate(&self) -> LefschetzDatum {
        let mut out = self.without_provenance();
        if !out.cycles.is_empty() {
            out.cycles.rotate_left(1);
        }
        out
    }

    /// Attaches a handle along the boundary of a disk with the given pairings
    /// and appends the resulting sphere as a new last cycle.
    pub fn stabilize(&self, pairings: &[Int], label: &str) -> Result<LefschetzDatum, LefschetzError> {
        let r = self.fiber.rank();
        if pairings.len() != r {
            return Err(LefschetzError::PairingLength {
                expected: r,
                got: pairings.len(),
            });
        }
        let (fiber, s) = self.fiber.attach_stabilizing_handle(pairings, label)?;
        let mut cycles: Vec<VanishingCycle> = self
            .cycles
            .iter()
            .map(|c| VanishingCycle {
                word: c.word.extended(r + 1),
                klass: c.klass.extended(r + 1),
                arc: c.arc.clone(),
                flags: c.flags,
            })
            .collect();
        cycles.push(VanishingCycle {
            word: TwistWord::identity(s.clone()),
            klass: s,
            arc: None,
            flags: CycleFlags {
                stabilization_sphere: true,
                loose_certified: false,
            },
        });
        Ok(LefschetzDatum {
            fiber,
            cycles,
            provenance: None,
        })
    }

    /// First label of the form `{prefix}{j}` not used by the fiber.
    pub fn fresh_label(&self, prefix: &str) -> String {
        (1..)
            .map(|j| format!("{prefix}{j}"))
            .find(|l| self.fiber.lattice().index_of(l).is_none())
            .expect("unbounded label supply")
    }

    /// For each cycle `V_i`, attaches a handle `H_i` along `∂T_i` and replaces
    /// `V_i` by `τ_{S_i}^2 V_i`. Each `T_pairings[i]` lists the pairings of
    /// `T_i` with the original fiber basis; pairings with other new spheres
    /// are zero.
    pub fn subflexibilize(&self, t_pairings: &[Vec<Int>]) -> Result<LefschetzDatum, LefschetzError> {
        let k = self.cycles.len();
        if t_pairings.len() != k {
            return Err(LefschetzError::DiskCount {
                expected: k,
                got: t_pairings.len(),
            });
        }
        let r = self.fiber.rank();
        let mut fiber = self.fiber.clone();
        let mut spheres = Vec::with_capacity(k);
        for (i, p) in t_pairings.iter().enumerate() {
            if p.len() != r {
                return Err(LefschetzError::PairingLength {
                    expected: r,
                    got: p.len(),
                });
            }
            let mut full = p.clone();
            full.resize(fiber.rank(), Int::zero());
            let label = (1..)
                .map(|j| format!("s{j}"))
                .find(|l| fiber.lattice().index_of(l).is_none())
                .expect("unbounded label supply");
            let (next, s) = fiber.attach_stabilizing_handle(&full, label)?;
            let v = self.cycles[i].klass.extended(next.rank());
            let p = next.lattice().pairing(&s, &v)?;
            if p.abs() != Int::one() {
                return Err(LefschetzError::NotSingleIntersection {
                    index: i + 1,
                    pairing: p,
                });
            }
            fiber = next;
            spheres.push(s);
        }
        let total = fiber.rank();
        let mut cycles = Vec::with_capacity(k);
        for (c, s) in self.cycles.iter().zip(&spheres) {
            let word = c.word.extended(total).prepend(s.extended(total), 2);
            let klass = fiber.lattice().evaluate_word(&word)?;
            cycles.push(VanishingCycle {
                word,
                klass,
                arc: None,
                flags: CycleFlags::default(),
            });
        }
        Ok(LefschetzDatum {
            fiber,
            cycles,
            provenance: Some(SfProvenance {
                spheres: (r..r + k).collect(),
            }),
        })
    }

    /// Boundary connect sum: orthogonal sum of fibers, cycles of `self` then `other`.
    pub fn boundary_connect_sum(&self, other: &LefschetzDatum) -> Result<LefschetzDatum, LefschetzError> {
        if self.n() != other.n() {
            return Err(LefschetzError::ParityMismatch(self.n(), other.n()));
        }
        let fiber = self.fiber.direct_sum(&other.fiber)?;
        let total = fiber.rank();
        let off = self.fiber.rank();
        let mut cycles = Vec::with_capacity(self.len() + other.len());
        for c in &self.cycles {
            cycles.push(VanishingCycle {
                word: c.word.extended(total),
                klass: c.klass.extended(total),
                arc: None,
                flags: c.flags,
            });
        }
        for c in &other.cycles {
            cycles.push(VanishingCycle {
                word: shift_word(&c.word, off, total),
                klass: shift_class(&c.klass, off, total),
                arc: None,
                flags: c.flags,
            });
        }
        Ok(LefschetzDatum {
            fiber,
            cycles,
            provenance: None,
        })
    }

    /// Freely reduces every word and refreshes the class caches.
    pub fn normalize(&self) -> Result<LefschetzDatum, LefschetzError> {
        let mut out = self.clone();
        for c in &mut out.cycles {
            c.word.reduce();
            c.klass = self.fiber.lattice().evaluate_word(&c.word)?;
        }
        Ok(out)
    }

    /// Checks `klass = evaluate(word)` and the arc/class agreement for every cycle.
    pub fn check_caches(&self) -> Result<bool, LefschetzError> {
        let lat = self.fiber.lattice();
        for c in &self.cycles {
            if !lat.evaluate_word(&c.word)?.same_vector(&c.klass) {
                return Ok(false);
            }
            if let (Some(sys), Some(a)) = (self.fiber.arc_system(), &c.arc) {
                let ac = sys.arc_to_class(a)?.extended(lat.rank());
                if !ac.eq_up_to_sign(&c.klass) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Same datum with the given per-cycle flags.
    pub fn with_flags(&self, flags: &[CycleFlags]) -> LefschetzDatum {
        let mut out = self.clone();
        for (c, f) in out.cycles.iter_mut().zip(flags) {
            c.flags = *f;
        }
        out
    }

    fn without_provenance(&self) -> LefschetzDatum {
        LefschetzDatum {
            fiber: self.fiber.clone(),
            cycles: self.cycles.clone(),
            provenance: None,
        }
    }

    /// Fiber index of cycle `i`'s base sphere (0-based), when it is a basis vector.
    pub fn base_index(&self, i: usize) -> Option<usize> {
        basis_index(&self.cycles[i].word.base)
    }

    /// Largest fiber index (0-based) appearing in cycle `i`'s word.
    pub fn word_support_max(&self, i: usize) -> Option<usize> {
        let w = &self.cycles[i].word;
        std::iter::once(&w.base)
            .chain(w.letters.iter().map(|(c, _)| c))
            .filter_map(|c| c.coords.iter().rposition(|x| !x.is_zero()))
            .max()
    }
}

impl fmt::Display for LefschetzDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W(rank {}, n={}; ", self.fiber.rank(), self.n())?;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c.word)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::BraidWord;
    use crate::fiber::PlumbingTree;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn ak(k: usize, n: u32) -> FiberModel {
        FiberModel::plumbing(&PlumbingTree::chain(k), n).unwrap()
    }

    fn e(f: &FiberModel, i: usize) -> SphereClass {
        f.lattice().basis(i - 1)
    }

    fn x1() -> LefschetzDatum {
        let f = ak(2, 2);
        let w1 = TwistWord::identity(e(&f, 1));
        let w2 = TwistWord::new(vec![(e(&f, 2), 2)], e(&f, 1));
        LefschetzDatum::new(f, vec![w1, w2]).unwrap()
    }

    #[test]
    fn hurwitz_displayed_moves() {
        let f = ak(2, 2);
        let d = LefschetzDatum::new(
            f.clone(),
            vec![TwistWord::identity(e(&f, 1)), TwistWord::identity(e(&f, 2))],
        )
        .unwrap();
        let l = d.hurwitz_left(1).unwrap();
        assert_eq!(l.cycles()[0].word, TwistWord::new(vec![(e(&f, 1), 1)], e(&f, 2)));
        assert_eq!(l.cycles()[1].word, TwistWord::identity(e(&f, 1)));
        assert!(l.cycles()[0].klass.same_vector(&SphereClass::from_i64(&[1, 1])));
        let r = d.hurwitz_right(1).unwrap();
        assert_eq!(r.cycles()[0].word, TwistWord::identity(e(&f, 2)));
        assert_eq!(r.cycles()[1].word, TwistWord::new(vec![(e(&f, 2), -1)], e(&f, 1)));
    }

    #[test]
    fn squared_pair_resolves() {
        // (τ_S^2 V, S) ↦ (S, τ_S V)
        let d = x1();
        let f = d.fiber().clone();
        let d = LefschetzDatum::new(
            f.clone(),
            vec![
                TwistWord::new(vec![(e(&f, 2), 2)], e(&f, 1)),
                TwistWord::identity(e(&f, 2)),
            ],
        )
        .unwrap();
        let r = d.hurwitz_right(1).unwrap();
        assert_eq!(r.cycles()[0].word, TwistWord::identity(e(&f, 2)));
        assert_eq!(r.cycles()[1].word, TwistWord::new(vec![(e(&f, 2), 1)], e(&f, 1)));
    }

    #[test]
    fn hurwitz_round_trip_is_exact() {
        let d = x1();
        for i in 1..=2 {
            assert_eq!(d.hurwitz_left(i).unwrap().hurwitz_right(i).unwrap(), d);
            assert_eq!(d.hurwitz_right(i).unwrap().hurwitz_left(i).unwrap(), d);
        }
    }

    #[test]
    fn hurwitz_needs_two_cycles() {
        let f = ak(1, 2);
        let d = LefschetzDatum::new(f.clone(), vec![TwistWord::identity(e(&f, 1))]).unwrap();
        assert_eq!(d.hurwitz_left(1).unwrap_err(), LefschetzError::TooFewCycles(1));
        assert!(matches!(x1().hurwitz_left(3), Err(LefschetzError::IndexOutOfRange { .. })));
    }

    #[test]
    fn wrap_acts_on_last_and_first() {
        let f = ak(3, 2);
        let ws = (1..=3).map(|i| TwistWord::identity(e(&f, i))).collect();
        let d = LefschetzDatum::new(f.clone(), ws).unwrap();
        assert!(d.wraps(3));
        let l = d.hurwitz_left(3).unwrap();
        assert_eq!(l.cycles()[0].word, TwistWord::identity(e(&f, 3)));
        assert_eq!(l.cycles()[2].word, TwistWord::new(vec![(e(&f, 3), 1)], e(&f, 1)));
    }

    #[test]
    fn rotation_cycles() {
        let f = ak(3, 2);
        let ws: Vec<_> = (1..=3).map(|i| TwistWord::identity(e(&f, i))).collect();
        let d = LefschetzDatum::new(f.clone(), ws).unwrap();
        let r = d.rotate();
        assert!(r.cycles()[0].klass.same_vector(&e(&f, 2)));
        assert!(r.cycles()[2].klass.same_vector(&e(&f, 1)));
        assert_eq!(r.rotate().rotate(), d);
    }

    #[test]
    fn stabilize_t_star_s3() {
        let f = ak(1, 2);
        let z = TwistWord::identity(e(&f, 1));
        let d = LefschetzDatum::new(f, vec![z.clone(), z]).unwrap();
        let s = d.stabilize(&ints(&[1]), "s").unwrap();
        assert_eq!(s.fiber().rank(), 2);
        assert_eq!(s.fiber().lattice().gram(), &[ints(&[-2, 1]), ints(&[1, -2])]);
        assert_eq!(s.len(), 3);
        assert!(s.cycles()[2].flags.stabilization_sphere);
        assert!(s.check_caches().unwrap());
        assert!(d.stabilize(&ints(&[1, 0]), "s").is_err());
    }

    #[test]
    fn subflex_t_star_s3() {
        let f = ak(1, 2);
        let z = TwistWord::identity(e(&f, 1));
        let d = LefschetzDatum::new(f, vec![z.clone(), z]).unwrap();
        let sf = d.subflexibilize(&[ints(&[1]), ints(&[1])]).unwrap();
        assert_eq!(sf.fiber().rank(), 3);
        for c in sf.cycles() {
            assert!(c.klass.same_vector(&SphereClass::from_i64(&[1, 0, 0])));
            assert_eq!(c.word.letters.len(), 1);
            assert_eq!(c.word.letters[0].1, 2);
        }
        assert_eq!(sf.provenance().unwrap().spheres, vec![1, 2]);
        let empty = LefschetzDatum::empty(ak(1, 2));
        assert_eq!(empty.subflexibilize(&[]).unwrap().fiber().rank(), 1);
    }

    #[test]
    fn subflex_odd_changes_class() {
        let f = ak(2, 3);
        let d = LefschetzDatum::new(f.clone(), vec![TwistWord::identity(e(&f, 1))]).unwrap();
        // the new sphere pairs with e1 through its disk's pairing with e1
        let sf = d.subflexibilize(&[ints(&[1, 0])]).unwrap();
        let k = &sf.cycles()[0].klass;
        assert!(!k.same_vector(&SphereClass::from_i64(&[1, 0, 0])));
        let err = d.subflexibilize(&[ints(&[0, 1])]).unwrap_err();
        assert!(matches!(err, LefschetzError::NotSingleIntersection { index: 1, .. }));
    }

    #[test]
    fn connect_sum_with_empty_is_identity() {
        let d = x1();
        let empty = LefschetzDatum::empty(FiberModel::ball(2));
        let s = d.boundary_connect_sum(&empty).unwrap();
        assert_eq!(s, d);
        let odd = LefschetzDatum::empty(FiberModel::ball(3));
        assert!(matches!(d.boundary_connect_sum(&odd), Err(LefschetzError::ParityMismatch(2, 3))));
        let two = d.boundary_connect_sum(&d).unwrap();
        assert_eq!(two.fiber().rank(), 4);
        assert!(two.cycles()[2].klass.same_vector(&SphereClass::from_i64(&[0, 0, 1, 0])));
    }

    #[test]
    fn normalize_is_idempotent() {
        let f = ak(2, 2);
        let w = TwistWord {
            letters: vec![(e(&f, 2), -1), (e(&f, 2), 2)],
            base: e(&f, 1),
        };
        let d = LefschetzDatum::new(f.clone(), vec![w]).unwrap();
        assert_eq!(d.cycles()[0].word.letters, vec![(e(&f, 2), 1)]);
        let n1 = d.normalize().unwrap();
        assert_eq!(n1, d);
        assert_eq!(n1.normalize().unwrap(), n1);
    }

    #[test]
    fn arc_cycles_follow_hurwitz() {
        let f = FiberModel::ak_matching(3, 2).unwrap();
        let sys = f.arc_system().unwrap().clone();
        let d = LefschetzDatum::from_arcs(
            f,
            vec![sys.standard_arc(1).unwrap(), sys.standard_arc(2).unwrap()],
        )
        .unwrap();
        let l = d.hurwitz_left(1).unwrap();
        assert!(l.check_caches().unwrap());
        assert_eq!(l.cycles()[0].arc.as_ref().unwrap().endpoints(), (1, 3));
        let a = sys.arc(BraidWord::new(vec![(2, 2)]), 1).unwrap();
        let x = LefschetzDatum::from_arcs(d.fiber().clone(), vec![sys.standard_arc(1).unwrap(), a]).unwrap();
        assert!(x.check_caches().unwrap());
        assert!(x.cycles()[1].klass.same_vector(&SphereClass::from_i64(&[1, 0])));
    }

    #[test]
    fn non_basis_base_rejected() {
        let f = ak(2, 2);
        let w = TwistWord::identity(SphereClass::from_i64(&[1, 1]));
        assert!(matches!(
            LefschetzDatum::new(f, vec![w]),
            Err(LefschetzError::NonBasisBase { index: 1, .. })
        ));
    }
}

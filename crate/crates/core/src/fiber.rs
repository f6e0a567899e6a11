//! Fiber lattices: plumbings of cotangent disk bundles of spheres along
//! trees, extended by Weinstein handles attached along Legendrian boundaries
//! of Lagrangian disks.
//!
//! Every basis sphere is recorded as a handle attached in basis order, with
//! its pairings against the earlier basis. A plumbing tree whose vertices are
//! listed parent-first is exactly such an iterated handle attachment to the
//! ball, with the disk for a child being a cotangent fiber of its parent.

use num_traits::Zero;
use thiserror::Error;

use crate::arcs::{ArcError, ArcSystem};
use crate::lattice::{sphere_self_pairing, Int, IntLattice, LatticeError, SphereClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("plumbing tree has no vertices")]
    EmptyTree,
    #[error("plumbing graph has a cycle through edge {0}-{1}")]
    NotAForest(String, String),
    #[error("edge references unknown vertex index {0}")]
    UnknownVertex(usize),
    #[error("edge sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("duplicate sphere label `{0}`")]
    DuplicateLabel(String),
    #[error("need at least 2 marked points, got {0}")]
    TooFewPoints(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

/// A forest of `D*S^n` summands; edges carry the plumbing sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingTree {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize, i64)>,
}

impl PlumbingTree {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize, i64)>) -> Result<Self, FiberError> {
        if vertices.is_empty() {
            return Err(FiberError::EmptyTree);
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(FiberError::DuplicateLabel(v.clone()));
            }
        }
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b, s) in &edges {
            if a >= vertices.len() {
                return Err(FiberError::UnknownVertex(a));
            }
            if b >= vertices.len() {
                return Err(FiberError::UnknownVertex(b));
            }
            if s != 1 && s != -1 {
                return Err(FiberError::BadSign(s));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(FiberError::NotAForest(vertices[a].clone(), vertices[b].clone()));
            }
            parent[ra] = rb;
        }
        Ok(PlumbingTree { vertices, edges })
    }

    /// Path `v1 - v2 - … - vk` with `+1` signs.
    pub fn chain(k: usize) -> Self {
        PlumbingTree {
            vertices: (1..=k).map(|i| format!("e{i}")).collect(),
            edges: (1..k).map(|i| (i - 1, i, 1)).collect(),
        }
    }
}

/// A handle-presented fiber: its homology lattice, the order in which the
/// sphere handles were attached, and optionally the matching-arc picture.
#[derive(Debug, Clone)]
pub struct FiberModel {
    lattice: IntLattice,
    /// For each basis sphere: its pairings with the basis spheres before it.
    handle_pairings: Vec<Vec<Int>>,
    /// Labels of spheres added by stabilizing handles after construction.
    stabilizing: Vec<String>,
    /// Free ranks of fiber homology below the middle degree (index = degree).
    low_betti: Vec<usize>,
    arc_system: Option<ArcSystem>,
}

pub fn plumbing_gram(tree: &PlumbingTree, n: u32) -> Vec<Vec<Int>> {
    let r = tree.vertices.len();
    let mut g = vec![vec![Int::zero(); r]; r];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = sphere_self_pairing(n);
    }
    for &(a, b, s) in &tree.edges {
        // odd n: orient each edge from the lower to the higher vertex index
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        g[lo][hi] += Int::from(s);
        if n % 2 == 0 {
            g[hi][lo] += Int::from(s);
        } else {
            g[hi][lo] -= Int::from(s);
        }
    }
    g
}

/// Gram lattice of the `A_k` chain plumbing.
pub fn plumbing_chain(k: usize, n: u32) -> Result<IntLattice, LatticeError> {
    let tree = PlumbingTree::chain(k);
    IntLattice::new(n, plumbing_gram(&tree, n), tree.vertices)
}

impl FiberModel {
    /// The `2n`-ball: rank-0 lattice.
    pub fn ball(n: u32) -> Self {
        FiberModel {
            lattice: IntLattice::empty(n),
            handle_pairings: Vec::new(),
            stabilizing: Vec::new(),
            low_betti: low_betti(n),
            arc_system: None,
        }
    }

    pub fn plumbing(tree: &PlumbingTree, n: u32) -> Result<Self, FiberError> {
        let gram = plumbing_gram(tree, n);
        let lattice = IntLattice::new(n, gram, tree.vertices.clone())?;
        let handle_pairings = (0..lattice.rank())
            .map(|i| lattice.gram()[i][..i].to_vec())
            .collect();
        Ok(FiberModel {
            lattice,
            handle_pairings,
            stabilizing: Vec::new(),
            low_betti: low_betti(n),
            arc_system: None,
        })
    }

    /// `A_{m-1}` Milnor fiber with its matching-arc system over `m` points;
    /// the straight arc `(i, i+1)` is bound to the basis sphere `e_i`.
    pub fn ak_matching(m: usize, n: u32) -> Result<Self, FiberError> {
        if m < 2 {
            return Err(FiberError::TooFewPoints(m));
        }
        let mut f = FiberModel::plumbing(&PlumbingTree::chain(m - 1), n)?;
        f.arc_system = Some(ArcSystem::new(m, n)?);
        Ok(f)
    }

    /// Attaches a Weinstein `n`-handle along the boundary of a Lagrangian disk
    /// meeting the basis spheres with the given algebraic counts. Returns the
    /// new fiber and the sphere formed by the disk and the handle core.
    pub fn attach_stabilizing_handle(
        &self,
        pairings: &[Int],
        label: impl Into<String>,
    ) -> Result<(FiberModel, SphereClass), FiberError> {
        let label = label.into();
        if self.lattice.index_of(&label).is_some() {
            return Err(FiberError::DuplicateLabel(label));
        }
        let lattice = self.lattice.extended(pairings, label.clone())?;
        let mut handle_pairings = self.handle_pairings.clone();
        handle_pairings.push(pairings.to_vec());
        let mut stabilizing = self.stabilizing.clone();
        stabilizing.push(label.clone());
        let s = lattice.basis(lattice.rank() - 1);
        Ok((
            FiberModel {
                lattice,
                handle_pairings,
                stabilizing,
                low_betti: self.low_betti.clone(),
                arc_system: self.arc_system.clone(),
            },
            s,
        ))
    }

    /// Fiber of a boundary connect sum: orthogonal direct sum of lattices.
    /// Labels of `other` that clash get a `'` suffix.
    pub fn direct_sum(&self, other: &FiberModel) -> Result<FiberModel, FiberError> {
        let mut labels: Vec<String> = self.lattice.labels().to_vec();
        let mut renamed = Vec::new();
        for l in other.lattice.labels() {
            let mut name = l.clone();
            while labels.contains(&name) {
                name.push('\'');
            }
            labels.push(name.clone());
            renamed.push(name);
        }
        let joined = self.lattice.direct_sum(&other.lattice)?;
        let lattice = IntLattice::new(self.lattice.n(), joined.gram().to_vec(), labels)?;
        let offset = self.rank();
        let mut handle_pairings = self.handle_pairings.clone();
        for p in &other.handle_pairings {
            let mut row = vec![Int::zero(); offset];
            row.extend(p.iter().cloned());
            handle_pairings.push(row);
        }
        let mut stabilizing = self.stabilizing.clone();
        for (i, l) in other.lattice.labels().iter().enumerate() {
            if other.stabilizing.contains(l) {
                stabilizing.push(renamed[i].clone());
            }
        }
        let low = self
            .low_betti
            .iter()
            .zip(&other.low_betti)
            .enumerate()
            .map(|(d, (a, b))| if d == 0 { 1 } else { a + b })
            .collect();
        Ok(FiberModel {
            lattice,
            handle_pairings,
            stabilizing,
            low_betti: low,
            arc_system: None,
        })
    }

    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn n(&self) -> u32 {
        self.lattice.n()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn stabilizing_spheres(&self) -> &[String] {
        &self.stabilizing
    }

    pub fn is_stabilizing(&self, label: &str) -> bool {
        self.stabilizing.iter().any(|l| l == label)
    }

    /// Pairings of basis sphere `i` with the spheres attached before it.
    pub fn handle_pairings(&self, i: usize) -> &[Int] {
        &self.handle_pairings[i]
    }

    pub fn arc_system(&self) -> Option<&ArcSystem> {
        self.arc_system.as_ref()
    }

    /// Free ranks of fiber homology in degrees `0..n`.
    pub fn low_betti(&self) -> &[usize] {
        &self.low_betti
    }

    /// Euler characteristic of the fiber.
    pub fn euler_characteristic(&self) -> i64 {
        let low: i64 = self
            .low_betti
            .iter()
            .enumerate()
            .map(|(d, b)| if d % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum();
        let sign = if self.n() % 2 == 0 { 1 } else { -1 };
        low + sign * self.rank() as i64
    }
}

fn low_betti(n: u32) -> Vec<usize> {
    let mut v = vec![0; n as usize];
    v[0] = 1;
    v
}

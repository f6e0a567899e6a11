//! Smooth invariants of the total space of a Lefschetz datum.
//!
//! Chain model: the thimbles `t_1..t_k` span degree `n+1` with
//! `∂t_i = [V_i]` in `H_n(fiber)`; everything below degree `n` comes from
//! the fiber's subcritical handles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{mat_mul, smith_normal_form, Int, IntMatrix};
use crate::lefschetz::LefschetzDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("Euler characteristic mismatch: formula {formula}, homology {homology}")]
    Inconsistent { formula: i64, homology: i64 },
    #[error("product with the cotangent bundle of S^0 is not supported")]
    ZeroSphere,
    #[error("Künneth Tor term in degree {0} is nonzero")]
    TorTerm(usize),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub degree: usize,
    pub free: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<Int>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Skew,
}

/// Intersection form on `H_{n+1}` in a basis of `ker ∂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MiddleForm {
    pub matrix: IntMatrix,
    pub symmetry: Symmetry,
    /// Columns are thimble coefficients of the basis vectors.
    pub basis: Vec<Vec<Int>>,
}

/// Isometry invariants of a [`MiddleForm`]; unlike the matrix these do not
/// depend on the chosen basis of `ker ∂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormInvariants {
    pub symmetry: Symmetry,
    /// Rank of the free part of `H_{n+1}`.
    pub dim: usize,
    /// Rank of the form.
    pub rank: usize,
    /// Nonzero invariant factors of the Gram matrix, ascending.
    pub invariant_factors: Vec<Int>,
    /// `|det|` of the nondegenerate part: product of nonzero invariant factors.
    pub det: Int,
    pub signature: Option<i64>,
    /// Symmetric forms only: whether every `⟨x, x⟩` is even.
    pub even: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TotalSpaceInvariants {
    pub n: u32,
    pub chi: i64,
    pub homology: Vec<HomologyGroup>,
    /// `None` when no middle form is tracked (Künneth products).
    pub form: Option<FormInvariants>,
}

/// `∂` as a `rank × k` matrix whose columns are the cycle classes.
fn boundary_matrix(d: &LefschetzDatum) -> IntMatrix {
    let r = d.fiber().rank();
    let cycles = d.cycles();
    (0..r)
        .map(|i| cycles.iter().map(|c| c.klass.coords[i].clone()).collect())
        .collect()
}

pub fn total_space_homology(d: &LefschetzDatum) -> Vec<HomologyGroup> {
    let n = d.n() as usize;
    let r = d.fiber().rank();
    let k = d.len();
    let snf = smith_normal_form(&boundary_matrix(d), r, k);
    let factors = snf.invariant_factors();
    let rho = factors.len();
    let mut out: Vec<HomologyGroup> = d
        .fiber()
        .low_betti()
        .iter()
        .enumerate()
        .map(|(degree, &free)| HomologyGroup {
            degree,
            free,
            torsion: Vec::new(),
        })
        .collect();
    out.push(HomologyGroup {
        degree: n,
        free: r - rho,
        torsion: factors.into_iter().filter(|f| !f.is_one()).collect(),
    });
    out.push(HomologyGroup {
        degree: n + 1,
        free: k - rho,
        torsion: Vec::new(),
    });
    out
}

fn alternating_sum(h: &[HomologyGroup]) -> i64 {
    h.iter()
        .map(|g| if g.degree % 2 == 0 { g.free as i64 } else { -(g.free as i64) })
        .sum()
}

/// `χ(fiber) + (-1)^{n+1} k`, checked against the homology.
pub fn euler_characteristic(d: &LefschetzDatum) -> Result<i64, InvariantsError> {
    let sign = if d.n() % 2 == 0 { -1 } else { 1 };
    let formula = d.fiber().euler_characteristic() + sign * d.len() as i64;
    let homology = alternating_sum(&total_space_homology(d));
    if formula != homology {
        return Err(InvariantsError::Inconsistent { formula, homology });
    }
    Ok(formula)
}

/// Diagonal `c` of the thimble pairing. Hurwitz moves preserve the restricted
/// form only when `c` agrees with the twist sign: `c = ⟨S,S⟩/2` for even `n`,
/// `c = ε = +1` for odd `n`.
fn thimble_diagonal(n: u32) -> i64 {
    if n % 2 == 1 {
        return 1;
    }
    if (n * (n + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn middle_intersection_form(d: &LefschetzDatum) -> Result<MiddleForm, InvariantsError> {
    let r = d.fiber().rank();
    let k = d.len();
    let lat = d.fiber().lattice();
    let snf = smith_normal_form(&boundary_matrix(d), r, k);
    let rho = snf.rank();
    let kernel: IntMatrix = (0..k).map(|i| snf.v[i][rho..].to_vec()).collect();
    let diag = Int::from(thimble_diagonal(d.n()));
    let cycles = d.cycles();
    let mut seifert = vec![vec![Int::zero(); k]; k];
    for i in 0..k {
        seifert[i][i] = diag.clone();
        for j in i + 1..k {
            seifert[i][j] = lat.pairing(&cycles[i].klass, &cycles[j].klass)?;
        }
    }
    let dim = k - rho;
    let kt: IntMatrix = (0..dim).map(|a| (0..k).map(|i| kernel[i][a].clone()).collect()).collect();
    let matrix = if dim == 0 {
        Vec::new()
    } else {
        mat_mul(&mat_mul(&kt, &seifert, k), &kernel, k)
    };
    let symmetry = if d.n() % 2 == 1 {
        Symmetry::Symmetric
    } else {
        Symmetry::Skew
    };
    debug_assert!((0..dim).all(|a| (0..dim).all(|b| match symmetry {
        Symmetry::Symmetric => matrix[a][b] == matrix[b][a],
        Symmetry::Skew => matrix[a][b] == -&matrix[b][a],
    })));
    Ok(MiddleForm {
        matrix,
        symmetry,
        basis: kt,
    })
}

pub fn form_invariants(q: &MiddleForm) -> FormInvariants {
    let dim = q.matrix.len();
    let snf = smith_normal_form(&q.matrix, dim, dim);
    let factors = snf.invariant_factors();
    let invariant_factors: Vec<Int> = factors.iter().map(|f| f.abs()).collect();
    let det = invariant_factors.iter().fold(Int::one(), |acc, f| acc * f);
    let (signature, even) = match q.symmetry {
        Symmetry::Symmetric => (
            Some(signature(&q.matrix)),
            Some((0..dim).all(|i| q.matrix[i][i].is_even())),
        ),
        Symmetry::Skew => (None, None),
    };
    FormInvariants {
        symmetry: q.symmetry,
        dim,
        rank: invariant_factors.len(),
        invariant_factors,
        det,
        signature,
        even,
    }
}

/// Signature of a symmetric integer matrix by rational congruence diagonalization.
pub fn signature(m: &IntMatrix) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut sig = 0i64;
    let mut t = 0;
    while t < n {
        if a[t][t].is_zero() {
            let p = (t + 1..n).find(|&i| !a[i][i].is_zero());
            match p {
                Some(p) => {
                    a.swap(t, p);
                    for row in a.iter_mut() {
                        row.swap(t, p);
                    }
                }
                None => match (t + 1..n).find(|&j| !a[t][j].is_zero()) {
                    // row/col t += row/col j makes the pivot 2·a[t][j]
                    Some(j) => {
                        for c in 0..n {
                            let v = a[j][c].clone();
                            a[t][c] += v;
                        }
                        for row in a.iter_mut() {
                            let v = row[j].clone();
                            row[t] += v;
                        }
                    }
                    None => {
                        t += 1;
                        continue;
                    }
                },
            }
        }
        let p = a[t][t].clone();
        if p.is_positive() {
            sig += 1;
        } else {
            sig -= 1;
        }
        for i in t + 1..n {
            if a[i][t].is_zero() {
                continue;
            }
            let f = &a[i][t] / &p;
            for c in t..n {
                let v = &f * &a[t][c];
                a[i][c] -= v;
            }
            for row in a.iter_mut() {
                let v = &f * &row[t];
                row[i] -= v;
            }
        }
        t += 1;
    }
    sig
}

pub fn compute_invariants(d: &LefschetzDatum) -> Result<TotalSpaceInvariants, InvariantsError> {
    let homology = total_space_homology(d);
    let chi = euler_characteristic(d)?;
    let form = form_invariants(&middle_intersection_form(d)?);
    Ok(TotalSpaceInvariants {
        n: d.n(),
        chi,
        homology,
        form: Some(form),
    })
}

/// Homology and χ of the product with `D*S^j`.
pub fn product_with_cotangent_sphere(
    inv: &TotalSpaceInvariants,
    j: usize,
) -> Result<TotalSpaceInvariants, InvariantsError> {
    if j == 0 {
        return Err(InvariantsError::ZeroSphere);
    }
    let sphere = vec![
        HomologyGroup {
            degree: 0,
            free: 1,
            torsion: Vec::new(),
        },
        HomologyGroup {
            degree: j,
            free: 1,
            torsion: Vec::new(),
        },
    ];
    let homology = kunneth(&inv.homology, &sphere)?;
    let chi = alternating_sum(&homology);
    debug_assert_eq!(chi, inv.chi * if j % 2 == 0 { 2 } else { 0 });
    Ok(TotalSpaceInvariants {
        n: inv.n,
        chi,
        homology,
        form: None,
    })
}

/// Künneth for finitely generated groups; errors when a Tor term survives.
fn kunneth(a: &[HomologyGroup], b: &[HomologyGroup]) -> Result<Vec<HomologyGroup>, InvariantsError> {
    let top = a.iter().map(|g| g.degree).max().unwrap_or(0) + b.iter().map(|g| g.degree).max().unwrap_or(0);
    let mut out: Vec<HomologyGroup> = (0..=top)
        .map(|degree| HomologyGroup {
            degree,
            free: 0,
            torsion: Vec::new(),
        })
        .collect();
    for x in a {
        for y in b {
            let g = &mut out[x.degree + y.degree];
            g.free += x.free * y.free;
            for t in &x.torsion {
                for _ in 0..y.free {
                    g.torsion.push(t.clone());
                }
            }
            for t in &y.torsion {
                for _ in 0..x.free {
                    g.torsion.push(t.clone());
                }
            }
            for s in &x.torsion {
                for t in &y.torsion {
                    if !s.gcd(t).is_one() {
                        return Err(InvariantsError::TorTerm(x.degree + y.degree + 1));
                    }
                }
            }
        }
    }
    for g in &mut out {
        g.torsion = canonical_torsion(&g.torsion);
    }
    Ok(out)
}

/// Rewrites a list of cyclic orders as an invariant-factor chain.
fn canonical_torsion(ts: &[Int]) -> Vec<Int> {
    if ts.is_empty() {
        return Vec::new();
    }
    let m: IntMatrix = (0..ts.len())
        .map(|i| (0..ts.len()).map(|j| if i == j { ts[i].clone() } else { BigInt::zero() }).collect())
        .collect();
    smith_normal_form(&m, ts.len(), ts.len())
        .invariant_factors()
        .into_iter()
        .filter(|f| !f.is_one())
        .collect()
}

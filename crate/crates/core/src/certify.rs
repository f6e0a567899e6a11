//! Syntactic flexibility certificates.
//!
//! Two rules grant a cycle its status, both read positionally from the
//! front of the cyclic word:
//!
//! * **stab**: cycle `i` is a bare basis sphere `e_s` and every earlier cycle
//!   lives on handles `< s`, so its thimble cancels the handle of `e_s`.
//! * **loose**: cycle `i` is stab-valid with sphere `S` and cycle `i+1` is
//!   `τ_S(L)` with `L` meeting `S` algebraically once; it is then attached
//!   along a loose Legendrian.
//!
//! A datum whose every cycle is granted one of the two is certified flexible.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{Int, TwistWord};
use crate::lefschetz::{LefschetzDatum, LefschetzError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("step {step}: {reason}")]
    Rejected { step: usize, reason: String },
    #[error("datum carries no subflexibilization record")]
    MissingProvenance,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Lefschetz(#[from] LefschetzError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    HurwitzLeft(usize),
    HurwitzRight(usize),
    Rotate,
    Stabilize(Vec<Int>),
    CertifyStab(usize),
    CertifyLoose(usize),
}

impl Step {
    pub fn is_move(&self) -> bool {
        !matches!(self, Step::CertifyStab(_) | Step::CertifyLoose(_))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::HurwitzLeft(i) => write!(f, "hurwitzL {i}"),
            Step::HurwitzRight(i) => write!(f, "hurwitzR {i}"),
            Step::Rotate => write!(f, "rotate"),
            Step::Stabilize(p) => {
                write!(f, "stabilize [")?;
                for (j, x) in p.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Step::CertifyStab(i) => write!(f, "certify-stab {i}"),
            Step::CertifyLoose(i) => write!(f, "certify-loose {i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    Flexible,
    Subcritical,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Flexible => "flexible",
            Claim::Subcritical => "subcritical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub steps: Vec<Step>,
    pub claim: Claim,
}

impl Certificate {
    pub fn new(steps: Vec<Step>, claim: Claim) -> Self {
        Certificate { steps, claim }
    }

    pub fn moves(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.is_move())
    }

    pub fn certifications(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| !s.is_move())
    }

    pub fn hurwitz_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::HurwitzLeft(_) | Step::HurwitzRight(_)))
            .count()
    }
}

/// One step per line, then `claim <flexible|subcritical>`.
impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        writeln!(f, "claim {}", self.claim)
    }
}

impl FromStr for Certificate {
    type Err = CertifyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut steps = Vec::new();
        let mut claim = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| CertifyError::Parse { line: ln + 1, reason };
            if claim.is_some() {
                return Err(err("steps after the claim line".into()));
            }
            let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest = rest.trim();
            let index = || -> Result<usize, CertifyError> {
                rest.parse::<usize>()
                    .map_err(|_| err(format!("`{head}` needs a positive index, got `{rest}`")))
            };
            let step = match head {
                "hurwitzL" => Step::HurwitzLeft(index()?),
                "hurwitzR" => Step::HurwitzRight(index()?),
                "rotate" => Step::Rotate,
                "certify-stab" => Step::CertifyStab(index()?),
                "certify-loose" => Step::CertifyLoose(index()?),
                "stabilize" => {
                    let inner = rest
                        .strip_prefix('[')
                        .and_then(|r| r.strip_suffix(']'))
                        .ok_or_else(|| err("stabilize expects `[a,b,...]`".into()))?;
                    let vals = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<Int>().map_err(|_| err(format!("bad integer `{s}`"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    Step::Stabilize(vals)
                }
                "claim" => {
                    claim = Some(match rest {
                        "flexible" => Claim::Flexible,
                        "subcritical" => Claim::Subcritical,
                        other => return Err(err(format!("unknown claim `{other}`"))),
                    });
                    continue;
                }
                other => return Err(err(format!("unknown step `{other}`"))),
            };
            steps.push(step);
        }
        Ok(Certificate {
            steps,
            claim: claim.unwrap_or(Claim::Flexible),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub accepted: bool,
    pub trace: Vec<String>,
    /// `(step, reason)`; step 0 is the final check.
    pub failure: Option<(usize, String)>,
    pub final_datum: LefschetzDatum,
}

/// 0-based position `p` is stab-valid.
fn stab_reason(d: &LefschetzDatum, p: usize) -> Result<usize, String> {
    let c = &d.cycles()[p];
    if !c.word.letters.is_empty() {
        return Err(format!("cycle {} is not a bare sphere: {}", p + 1, c.word));
    }
    let s = d
        .base_index(p)
        .ok_or_else(|| format!("cycle {} is not a basis sphere", p + 1))?;
    for q in 0..p {
        if d.word_support_max(q).is_some_and(|m| m >= s) {
            return Err(format!(
                "earlier cycle {} runs over the handle of sphere {}",
                q + 1,
                s + 1
            ));
        }
    }
    Ok(s)
}

/// Cycle `p+1` (0-based) is loose relative to the stab sphere at `p`.
fn loose_reason(d: &LefschetzDatum, p: usize) -> Result<(), String> {
    if p + 1 >= d.len() {
        return Err(format!("no cycle after position {}", p + 1));
    }
    stab_reason(d, p)?;
    let s = d.cycles()[p].word.base.clone();
    let next = &d.cycles()[p + 1].word;
    let rest = next.strip_leading(&s).ok_or_else(|| {
        format!(
            "cycle {} is not of the form tw({})^1 applied to a sphere: {}",
            p + 2,
            s,
            next
        )
    })?;
    let lat = d.fiber().lattice();
    let l = lat.evaluate_word(&rest).map_err(|e| e.to_string())?;
    let pairing = lat.pairing(&s, &l).map_err(|e| e.to_string())?;
    if pairing.abs() != Int::one() {
        return Err(format!(
            "sphere {} meets the twisted cycle algebraically {} times, needs ±1",
            p + 1,
            pairing
        ));
    }
    Ok(())
}

/// Flags cycle `i` (1-based) as a canceling stabilization sphere.
pub fn rule_stab(d: &LefschetzDatum, i: usize) -> Result<LefschetzDatum, String> {
    if i == 0 || i > d.len() {
        return Err(format!("position {i} out of range 1..={}", d.len()));
    }
    stab_reason(d, i - 1)?;
    let mut out = d.clone();
    set_flags(&mut out, i - 1, true, false);
    Ok(out)
}

/// Flags cycle `i+1` loose: cycle `i` is a flagged stabilization sphere `S`
/// and cycle `i+1` is `τ_S w` with `|⟨S, w⟩| = 1`.
pub fn rule_loose_pair(d: &LefschetzDatum, i: usize) -> Result<LefschetzDatum, String> {
    if i == 0 || i >= d.len() {
        return Err(format!("position {i} needs a following cycle in 1..={}", d.len()));
    }
    if !d.cycles()[i - 1].flags.stabilization_sphere {
        return Err(format!("cycle {i} is not flagged as a stabilization sphere"));
    }
    loose_reason(d, i - 1)?;
    let mut out = d.clone();
    set_flags(&mut out, i, false, true);
    Ok(out)
}

fn set_flags(d: &mut LefschetzDatum, p: usize, stab: bool, loose: bool) {
    let words: Vec<TwistWord> = d.cycles().iter().map(|c| c.word.clone()).collect();
    let mut flags: Vec<_> = d.cycles().iter().map(|c| c.flags).collect();
    flags[p].stabilization_sphere |= stab;
    flags[p].loose_certified |= loose;
    *d = d.with_flags(&flags);
    debug_assert!(d.cycles().iter().zip(&words).all(|(c, w)| &c.word == w));
}

fn final_check(d: &LefschetzDatum, claim: Claim) -> Result<(), String> {
    for p in 0..d.len() {
        let f = d.cycles()[p].flags;
        let stab_ok = f.stabilization_sphere && stab_reason(d, p).is_ok();
        let loose_ok = f.loose_certified && p > 0 && loose_reason(d, p - 1).is_ok();
        if claim == Claim::Subcritical && !stab_ok {
            return Err(format!("cycle {} is not a canceling sphere", p + 1));
        }
        if !stab_ok && !loose_ok {
            let why = if f.stabilization_sphere {
                stab_reason(d, p).err().unwrap_or_default()
            } else if f.loose_certified {
                if p == 0 {
                    "first cycle has no preceding sphere".to_string()
                } else {
                    loose_reason(d, p - 1).err().unwrap_or_default()
                }
            } else {
                "uncertified".to_string()
            };
            return Err(format!("cycle {} not certified: {}", p + 1, why));
        }
    }
    Ok(())
}

/// Applies one move or certification rule.
pub fn apply_step(d: &LefschetzDatum, step: &Step) -> Result<LefschetzDatum, String> {
    match step {
        Step::HurwitzLeft(i) => d.hurwitz_left(*i).map_err(|e| e.to_string()),
        Step::HurwitzRight(i) => d.hurwitz_right(*i).map_err(|e| e.to_string()),
        Step::Rotate => Ok(d.rotate()),
        Step::Stabilize(p) => d
            .stabilize(p, &d.fresh_label("t"))
            .map_err(|e| e.to_string()),
        Step::CertifyStab(i) => rule_stab(d, *i),
        Step::CertifyLoose(i) => rule_loose_pair(d, *i),
    }
}

/// Replays `c` from `d`, checking each rule, then checks every final cycle.
pub fn verify_certificate(d: &LefschetzDatum, c: &Certificate) -> Verdict {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    for (k, step) in c.steps.iter().enumerate() {
        let wrap = match step {
            Step::HurwitzLeft(i) | Step::HurwitzRight(i) if cur.wraps(*i) => " (wraps basepoint)",
            _ => "",
        };
        match apply_step(&cur, step) {
            Ok(next) => {
                trace.push(format!("{}: {step}{wrap}", k + 1));
                cur = next;
            }
            Err(reason) => {
                trace.push(format!("{}: {step} rejected: {reason}", k + 1));
                return Verdict {
                    accepted: false,
                    trace,
                    failure: Some((k + 1, reason)),
                    final_datum: cur,
                };
            }
        }
    }
    if let Err(reason) = final_check(&cur, c.claim) {
        trace.push(format!("final: rejected: {reason}"));
        return Verdict {
            accepted: false,
            trace,
            failure: Some((0, reason)),
            final_datum: cur,
        };
    }
    let second = replay_independently(d, c);
    if let Err((step, reason)) = second {
        trace.push(format!("second pass: rejected at step {step}: {reason}"));
        return Verdict {
            accepted: false,
            trace,
            failure: Some((step, reason)),
            final_datum: cur,
        };
    }
    trace.push(format!("final: accepted, {} cycles {}", cur.len(), c.claim));
    Verdict {
        accepted: true,
        trace,
        failure: None,
        final_datum: cur,
    }
}

/// Second pass: tracks granted positions itself instead of trusting flags,
/// and rechecks the class caches after every move.
fn replay_independently(d: &LefschetzDatum, c: &Certificate) -> Result<(), (usize, String)> {
    let mut cur = d.clone();
    // granted[p]: Some(true) stab, Some(false) loose
    let mut granted: Vec<Option<bool>> = cur
        .cycles()
        .iter()
        .map(|x| x.flags.stabilization_sphere.then_some(true))
        .collect();
    for (k, step) in c.steps.iter().enumerate() {
        let at = k + 1;
        match step {
            Step::CertifyStab(i) => {
                let p = i.checked_sub(1).ok_or((at, "index 0".to_string()))?;
                if p >= cur.len() {
                    return Err((at, "index out of range".into()));
                }
                independent_stab(&cur, p).map_err(|r| (at, r))?;
                granted[p] = Some(true);
            }
            Step::CertifyLoose(i) => {
                let p = i.checked_sub(1).ok_or((at, "index 0".to_string()))?;
                if p + 1 >= cur.len() || granted[p] != Some(true) {
                    return Err((at, "no granted sphere before the loose cycle".into()));
                }
                independent_loose(&cur, p).map_err(|r| (at, r))?;
                granted[p + 1] = Some(false);
            }
            _ => {
                let next = apply_step(&cur, step).map_err(|r| (at, r))?;
                if !next.check_caches().unwrap_or(false) {
                    return Err((at, "class cache out of sync with word".into()));
                }
                granted = track_granted(&cur, &next, step, granted);
                cur = next;
            }
        }
    }
    for p in 0..cur.len() {
        let ok = match granted[p] {
            Some(true) => independent_stab(&cur, p).is_ok(),
            Some(false) => p > 0 && granted[p - 1] == Some(true) && independent_loose(&cur, p - 1).is_ok(),
            None => false,
        };
        if !ok {
            return Err((0, format!("cycle {} not granted", p + 1)));
        }
    }
    Ok(())
}

fn track_granted(
    before: &LefschetzDatum,
    after: &LefschetzDatum,
    step: &Step,
    mut g: Vec<Option<bool>>,
) -> Vec<Option<bool>> {
    let k = before.len();
    match step {
        Step::Rotate => {
            if k > 0 {
                g.rotate_left(1);
            }
        }
        Step::HurwitzLeft(i) => {
            let (a, b) = (i - 1, i % k);
            g[b] = g[a];
            g[a] = None;
        }
        Step::HurwitzRight(i) => {
            let (a, b) = (i - 1, i % k);
            g[a] = g[b];
            g[b] = None;
        }
        Step::Stabilize(_) => {
            debug_assert_eq!(after.len(), k + 1);
            g.push(Some(true));
        }
        _ => {}
    }
    g
}

fn independent_stab(d: &LefschetzDatum, p: usize) -> Result<(), String> {
    let w = &d.cycles()[p].word;
    if !w.letters.is_empty() {
        return Err("not a bare sphere".into());
    }
    let nonzero: Vec<usize> = (0..w.base.coords.len())
        .filter(|&j| !w.base.coords[j].is_zero())
        .collect();
    if nonzero.len() != 1 || !w.base.coords[nonzero[0]].is_one() {
        return Err("not a basis sphere".into());
    }
    let s = nonzero[0];
    for q in 0..p {
        let wq = &d.cycles()[q].word;
        let mut vectors = vec![&wq.base];
        vectors.extend(wq.letters.iter().map(|(c, _)| c));
        if vectors.iter().any(|v| v.coords[s..].iter().any(|x| !x.is_zero())) {
            return Err(format!("cycle {} meets handle {}", q + 1, s + 1));
        }
    }
    Ok(())
}

fn independent_loose(d: &LefschetzDatum, p: usize) -> Result<(), String> {
    let s = &d.cycles()[p].word.base;
    let next = &d.cycles()[p + 1].word;
    let Some((first, rest)) = next.letters.split_first() else {
        return Err("no leading twist".into());
    };
    if first.1 != 1 || first.0.coords != s.coords {
        return Err("leading twist is not the sphere to the first power".into());
    }
    let lat = d.fiber().lattice();
    let inner = TwistWord {
        letters: rest.to_vec(),
        base: next.base.clone(),
    };
    let l = lat.evaluate_word(&inner).map_err(|e| e.to_string())?;
    let x = lat.pairing(s, &l).map_err(|e| e.to_string())?;
    if x.abs().is_one() {
        Ok(())
    } else {
        Err("pairing is not ±1".into())
    }
}

/// Builds `D̃` from a subflexibilized datum by interleaving the new spheres
/// `(…, τ_{S_i}^2 V_i, S_i, …)`, and the certificate turning every pair into
/// `(S_i, τ_{S_i} V_i)`.
pub fn flexify_after_handles(d_sf: &LefschetzDatum) -> Result<(LefschetzDatum, Certificate), CertifyError> {
    let prov = d_sf.provenance().ok_or(CertifyError::MissingProvenance)?;
    let lat = d_sf.fiber().lattice();
    let mut words = Vec::with_capacity(2 * d_sf.len());
    for (c, &s) in d_sf.cycles().iter().zip(&prov.spheres) {
        words.push(c.word.clone());
        words.push(TwistWord::identity(lat.basis(s)));
    }
    let tilde = LefschetzDatum::new(d_sf.fiber().clone(), words)?;
    let k = d_sf.len();
    let mut steps: Vec<Step> = (0..k).map(|i| Step::HurwitzRight(2 * i + 1)).collect();
    for i in 0..k {
        steps.push(Step::CertifyStab(2 * i + 1));
        steps.push(Step::CertifyLoose(2 * i + 1));
    }
    Ok((tilde, Certificate::new(steps, Claim::Flexible)))
}

/// Certification steps for a datum whose every cycle is positionally granted,
/// or `None`.
pub fn auto_certify(d: &LefschetzDatum) -> Option<Vec<Step>> {
    let mut steps = Vec::new();
    let mut p = 0;
    while p < d.len() {
        stab_reason(d, p).ok()?;
        if !d.cycles()[p].flags.stabilization_sphere {
            steps.push(Step::CertifyStab(p + 1));
        }
        if p + 1 < d.len() && stab_reason(d, p + 1).is_err() {
            loose_reason(d, p).ok()?;
            steps.push(Step::CertifyLoose(p + 1));
            p += 2;
        } else {
            p += 1;
        }
    }
    Some(steps)
}

fn words_key(d: &LefschetzDatum) -> Vec<TwistWord> {
    d.cycles().iter().map(|c| c.word.clone()).collect()
}

/// Breadth-first search for an accepting certificate. Depth counts moves;
/// at most `width` nodes are kept per level. Children are generated in the
/// order rotate, hurwitzL 1..k, hurwitzR 1..k, then stabilizations along a
/// unit disk through each basis sphere; the first certifiable node in that
/// order wins, so the result does not depend on thread scheduling.
pub fn search_certificate(d: &LefschetzDatum, depth: usize, width: usize) -> Option<Certificate> {
    let mut frontier: Vec<(LefschetzDatum, Vec<Step>)> = vec![(d.clone(), Vec::new())];
    let mut seen: HashSet<Vec<TwistWord>> = HashSet::new();
    seen.insert(words_key(d));
    for level in 0..=depth {
        let hit = frontier
            .par_iter()
            .map(|(node, path)| auto_certify(node).map(|c| (path.clone(), c)))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        if let Some((mut path, certs)) = hit {
            path.extend(certs);
            let cert = Certificate::new(path, Claim::Flexible);
            debug_assert!(verify_certificate(d, &cert).accepted);
            return Some(cert);
        }
        if level == depth {
            break;
        }
        let children: Vec<Vec<(LefschetzDatum, Vec<Step>)>> =
            frontier.par_iter().map(|(node, path)| expand(node, path)).collect();
        let mut next = Vec::new();
        'outer: for group in children {
            for (child, path) in group {
                if seen.insert(words_key(&child)) {
                    next.push((child, path));
                    if next.len() >= width {
                        break 'outer;
                    }
                }
            }
        }
        frontier = next;
    }
    None
}

fn expand(node: &LefschetzDatum, path: &[Step]) -> Vec<(LefschetzDatum, Vec<Step>)> {
    let k = node.len();
    let mut steps = Vec::new();
    if k >= 2 {
        steps.push(Step::Rotate);
        steps.extend((1..=k).map(Step::HurwitzLeft));
        steps.extend((1..=k).map(Step::HurwitzRight));
    }
    let r = node.fiber().rank();
    for j in 0..r {
        let mut p = vec![Int::zero(); r];
        p[j] = Int::one();
        steps.push(Step::Stabilize(p));
    }
    steps
        .into_iter()
        .filter_map(|s| {
            let child = apply_step(node, &s).ok()?;
            let mut p = path.to_vec();
            p.push(s);
            Some((child, p))
        })
        .collect()
}

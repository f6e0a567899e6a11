//! Evaluates a parsed workspace.

use std::collections::BTreeMap;

use lefweave_core::arcs::{ArcSystem, MatchingArc};
use lefweave_core::certify::{
    self, flexify_after_handles, search_certificate, verify_certificate, Certificate, Claim, Step,
};
use lefweave_core::fiber::{FiberModel, PlumbingTree};
use lefweave_core::invariants::{compute_invariants, middle_intersection_form, MiddleForm, TotalSpaceInvariants};
use lefweave_core::lattice::{SphereClass, TwistWord};
use lefweave_core::lefschetz::LefschetzDatum;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dsl::{CycleExpr, FiberDef, Item, Pos, ScriptStep, Workspace};
use crate::json;

#[derive(Debug, Error)]
#[error("{pos}: {message}")]
pub struct RunError {
    pub pos: Pos,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Rejected = 1,
    Error = 2,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub depth: Option<usize>,
    pub width: Option<usize>,
    pub seed: Option<u64>,
}

/// One JSON value per command, in order.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub results: Vec<Value>,
    pub status: Status,
}

impl RunOutput {
    /// Canonical text: one compact JSON object per line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for v in &self.results {
            s.push_str(&json::to_canonical(v));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone)]
struct DatumEntry {
    datum: LefschetzDatum,
    presets: Vec<(String, String)>,
}

/// A script evaluated as far as it goes.
#[derive(Debug, Clone)]
pub struct ScriptRun {
    /// Datum the certificate starts from.
    pub base: LefschetzDatum,
    pub certificate: Certificate,
    pub current: LefschetzDatum,
    /// `(step, reason)` of the first failing step.
    pub failure: Option<(usize, String)>,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, RunError> {
    Err(RunError {
        pos,
        message: message.into(),
    })
}

fn build_fiber(def: &FiberDef, pos: Pos) -> Result<FiberModel, RunError> {
    match def {
        FiberDef::Ak { m, n } => FiberModel::ak_matching(*m, *n).or_else(|e| err(pos, e.to_string())),
        FiberDef::Plumbing { chains, n } => {
            let mut vertices: Vec<String> = Vec::new();
            let index = |v: &String, vs: &mut Vec<String>| match vs.iter().position(|x| x == v) {
                Some(i) => i,
                None => {
                    vs.push(v.clone());
                    vs.len() - 1
                }
            };
            let mut edges = Vec::new();
            for c in chains {
                let ids: Vec<usize> = c.vertices.iter().map(|v| index(v, &mut vertices)).collect();
                for w in ids.windows(2) {
                    edges.push((w[0], w[1], c.sign));
                }
            }
            let tree = PlumbingTree::new(vertices, edges).or_else(|e| err(pos, e.to_string()))?;
            FiberModel::plumbing(&tree, *n).or_else(|e| err(pos, e.to_string()))
        }
    }
}

fn sphere(fiber: &FiberModel, name: &str, pos: Pos) -> Result<SphereClass, RunError> {
    let lat = fiber.lattice();
    if let Some(i) = lat.index_of(name) {
        return Ok(lat.basis(i));
    }
    if let Some(i) = name.strip_prefix('e').and_then(|d| d.parse::<usize>().ok()) {
        if (1..=lat.rank()).contains(&i) {
            return Ok(lat.basis(i - 1));
        }
    }
    let labels: Vec<&str> = lat.labels().iter().map(String::as_str).collect();
    err(
        pos,
        format!(
            "unknown sphere `{name}` in a rank-{} fiber{}",
            lat.rank(),
            crate::dsl::suggestion(name, labels.into_iter())
        ),
    )
}

fn arc_for(sys: &ArcSystem, i: usize, j: usize, preset: &str, pos: Pos) -> Result<MatchingArc, RunError> {
    let a = if preset == "std" {
        if j != i + 1 {
            return err(pos, format!("straight arc needs adjacent points, got ({i},{j})"));
        }
        sys.standard_arc(i)
    } else {
        sys.preset(preset)
    }
    .or_else(|e| err(pos, e.to_string()))?;
    let (p, q) = a.endpoints();
    if (p, q) != (i.min(j), i.max(j)) {
        return err(
            pos,
            format!("preset `{preset}` joins points ({p},{q}), not ({i},{j})"),
        );
    }
    Ok(a)
}

fn build_datum(
    fiber: &FiberModel,
    cycles: &[CycleExpr],
    pos: Pos,
) -> Result<DatumEntry, RunError> {
    let mut words = Vec::new();
    let mut arcs = Vec::new();
    let mut presets = Vec::new();
    for c in cycles {
        let mut letters = Vec::new();
        let mut cur = c;
        loop {
            match cur {
                CycleExpr::Twist { center, exp, inner } => {
                    letters.push((sphere(fiber, center, pos)?, *exp));
                    cur = inner;
                }
                CycleExpr::Sphere(s) => {
                    words.push(TwistWord::new(letters, sphere(fiber, s, pos)?));
                    arcs.push(None);
                    break;
                }
                CycleExpr::Arc { i, j, preset } => {
                    let Some(sys) = fiber.arc_system() else {
                        return err(pos, "arc(...) needs a fiber declared with `ak`");
                    };
                    let a = arc_for(sys, *i, *j, preset, pos)?;
                    if let Some(p) = sys.catalogue().get(preset) {
                        if !presets.iter().any(|(n, _)| n == preset) {
                            presets.push((preset.clone(), p.note.to_string()));
                        }
                    }
                    let w = a.twist_word(fiber.lattice());
                    letters.extend(w.letters);
                    words.push(TwistWord::new(letters, w.base));
                    arcs.push(if matches!(cur, CycleExpr::Arc { .. }) && std::ptr::eq(cur, c) {
                        Some(a)
                    } else {
                        None
                    });
                    break;
                }
            }
        }
    }
    let datum = if !arcs.is_empty() && arcs.iter().all(Option::is_some) {
        LefschetzDatum::from_arcs(fiber.clone(), arcs.into_iter().flatten().collect())
    } else {
        LefschetzDatum::new(fiber.clone(), words)
    }
    .or_else(|e| err(pos, e.to_string()))?;
    Ok(DatumEntry { datum, presets })
}

fn to_step(s: &ScriptStep) -> Option<Step> {
    Some(match s {
        ScriptStep::HurwitzL(i) => Step::HurwitzLeft(*i),
        ScriptStep::HurwitzR(i) => Step::HurwitzRight(*i),
        ScriptStep::Rotate => Step::Rotate,
        ScriptStep::Stabilize(p) => Step::Stabilize(p.clone()),
        ScriptStep::CertifyLoose(i) => Step::CertifyLoose(*i),
        ScriptStep::CertifyStab(i) => Step::CertifyStab(*i),
        _ => return None,
    })
}

/// Runs a script. Construction steps (`subflex`, `bsum`, `flexify`) reset the
/// certificate's starting datum; every other step is recorded in it.
pub fn run_script(
    start: &LefschetzDatum,
    steps: &[ScriptStep],
    data: &BTreeMap<String, LefschetzDatum>,
) -> ScriptRun {
    let mut base = start.clone();
    let mut cur = start.clone();
    let mut recorded: Vec<Step> = Vec::new();
    for (k, s) in steps.iter().enumerate() {
        let fail = |reason: String, base: LefschetzDatum, cur: LefschetzDatum, rec: Vec<Step>| ScriptRun {
            base,
            certificate: Certificate::new(rec, Claim::Flexible),
            current: cur,
            failure: Some((k + 1, reason)),
        };
        if let Some(step) = to_step(s) {
            match certify::apply_step(&cur, &step) {
                Ok(next) => {
                    cur = next;
                    recorded.push(step);
                }
                Err(reason) => return fail(reason, base, cur, recorded),
            }
            continue;
        }
        let built = match s {
            ScriptStep::Subflex(t) => cur.subflexibilize(t).map_err(|e| e.to_string()),
            ScriptStep::Bsum(name) => cur
                .boundary_connect_sum(&data[name])
                .map_err(|e| e.to_string()),
            ScriptStep::Flexify => match flexify_after_handles(&cur) {
                Ok((tilde, cert)) => {
                    let mut d = tilde.clone();
                    for st in &cert.steps {
                        match certify::apply_step(&d, st) {
                            Ok(next) => d = next,
                            Err(reason) => return fail(reason, tilde, d, cert.steps.clone()),
                        }
                    }
                    base = tilde;
                    recorded = cert.steps;
                    cur = d;
                    continue;
                }
                Err(e) => Err(e.to_string()),
            },
            _ => unreachable!("moves handled above"),
        };
        match built {
            Ok(d) => {
                base = d.clone();
                cur = d;
                recorded.clear();
            }
            Err(reason) => return fail(reason, base, cur, recorded),
        }
    }
    ScriptRun {
        base,
        certificate: Certificate::new(recorded, Claim::Flexible),
        current: cur,
        failure: None,
    }
}

/// Applies a seeded random sequence of Hurwitz moves and rotations.
fn random_moves(d: &LefschetzDatum, seed: u64, count: usize) -> (LefschetzDatum, Vec<String>) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut log = Vec::new();
    let k = d.len();
    if k < 2 {
        return (cur, log);
    }
    for _ in 0..count {
        let step = match rng.gen_range(0..3) {
            0 => Step::Rotate,
            1 => Step::HurwitzLeft(rng.gen_range(1..=k)),
            _ => Step::HurwitzRight(rng.gen_range(1..=k)),
        };
        cur = certify::apply_step(&cur, &step).expect("moves on k >= 2 always apply");
        log.push(step.to_string());
    }
    (cur, log)
}

fn invariants_value(
    name: &str,
    inv: &TotalSpaceInvariants,
    q: &MiddleForm,
    presets: &[(String, String)],
) -> Value {
    let mut v = json::invariants(inv);
    let obj = v.as_object_mut().expect("object");
    obj.insert("middle_form".into(), json::middle_form(q));
    obj.insert("command".into(), json!("invariants"));
    obj.insert("target".into(), json!(name));
    if !presets.is_empty() {
        obj.insert(
            "preset".into(),
            Value::Array(
                presets
                    .iter()
                    .map(|(n, note)| json!({"name": n, "note": note}))
                    .collect(),
            ),
        );
    }
    v
}

/// Evaluates every item in order.
pub fn run(ws: &Workspace, opts: &Options) -> Result<RunOutput, RunError> {
    let mut fibers: BTreeMap<String, FiberModel> = BTreeMap::new();
    let mut data: BTreeMap<String, DatumEntry> = BTreeMap::new();
    let mut plain: BTreeMap<String, LefschetzDatum> = BTreeMap::new();
    let mut scripts: BTreeMap<String, (String, ScriptRun)> = BTreeMap::new();
    let mut results = Vec::new();
    let mut status = Status::Ok;
    for (item, &pos) in ws.items.iter().zip(&ws.positions) {
        match item {
            Item::Fiber { name, def } => {
                fibers.insert(name.clone(), build_fiber(def, pos)?);
            }
            Item::Datum { name, fiber, cycles } => {
                let entry = build_datum(&fibers[fiber], cycles, pos)?;
                plain.insert(name.clone(), entry.datum.clone());
                data.insert(name.clone(), entry);
            }
            Item::Script { name, datum, steps } => {
                let r = run_script(&data[datum].datum, steps, &plain);
                scripts.insert(name.clone(), (datum.clone(), r));
            }
            Item::PrintInvariants { target } => {
                let (d, presets) = match data.get(target) {
                    Some(e) => (&e.datum, e.presets.clone()),
                    None => {
                        let (on, r) = &scripts[target];
                        if let Some((step, reason)) = &r.failure {
                            return err(pos, format!("script `{target}` failed at step {step}: {reason}"));
                        }
                        (&r.current, data[on].presets.clone())
                    }
                };
                let inv = compute_invariants(d).or_else(|e| err(pos, e.to_string()))?;
                let q = middle_intersection_form(d).or_else(|e| err(pos, e.to_string()))?;
                let mut v = invariants_value(target, &inv, &q, &presets);
                if let Some(seed) = opts.seed {
                    let (moved, log) = random_moves(d, seed, 20);
                    let again = compute_invariants(&moved).or_else(|e| err(pos, e.to_string()))?;
                    let same = again == inv;
                    if !same {
                        status = status.max(Status::Rejected);
                    }
                    v.as_object_mut().expect("object").insert(
                        "replay".into(),
                        json!({"seed": seed, "moves": log, "invariant": same}),
                    );
                }
                results.push(v);
            }
            Item::Verify { script } => {
                let (on, r) = &scripts[script];
                let (accepted, trace, failure) = match &r.failure {
                    Some((step, reason)) => (
                        false,
                        vec![format!("script step {step} rejected: {reason}")],
                        Some(json!({"step": step, "reason": reason})),
                    ),
                    None => {
                        let v = verify_certificate(&r.base, &r.certificate);
                        let f = v
                            .failure
                            .as_ref()
                            .map(|(s, reason)| json!({"step": s, "reason": reason}));
                        (v.accepted, v.trace, f)
                    }
                };
                if !accepted {
                    status = status.max(Status::Rejected);
                }
                let mut v = json!({
                    "command": "verify",
                    "script": script,
                    "datum": on,
                    "accepted": accepted,
                    "certificate": json::certificate_lines(&r.certificate),
                    "hurwitz_moves": r.certificate.hurwitz_count(),
                    "cycles": r.current.len(),
                    "trace": trace,
                });
                if let Some(f) = failure {
                    v.as_object_mut().expect("object").insert("failure".into(), f);
                }
                results.push(v);
            }
            Item::Search { datum, depth, width } => {
                let depth = opts.depth.unwrap_or(*depth);
                let width = opts.width.unwrap_or(*width);
                let found = search_certificate(&data[datum].datum, depth, width);
                let result = match &found {
                    Some(c) => json!(json::certificate_lines(c)),
                    None => {
                        status = status.max(Status::Rejected);
                        json!("none")
                    }
                };
                results.push(json!({
                    "command": "search",
                    "datum": datum,
                    "depth": depth,
                    "width": width,
                    "result": result,
                }));
            }
        }
    }
    Ok(RunOutput { results, status })
}

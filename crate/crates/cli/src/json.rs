//! Canonical JSON: sorted keys, compact, integers written exactly.

use lefweave_core::certify::Certificate;
use lefweave_core::invariants::{FormInvariants, MiddleForm, Symmetry, TotalSpaceInvariants};
use lefweave_core::lattice::Int;
use serde_json::{json, Number, Value};

pub fn int(x: &Int) -> Value {
    // arbitrary_precision keeps every digit
    Value::Number(x.to_string().parse::<Number>().expect("decimal integer"))
}

pub fn matrix(m: &[Vec<Int>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

fn symmetry(s: Symmetry) -> Value {
    json!(match s {
        Symmetry::Symmetric => "symmetric",
        Symmetry::Skew => "skew",
    })
}

fn form(f: &FormInvariants) -> Value {
    json!({
        "symmetry": symmetry(f.symmetry),
        "dim": f.dim,
        "rank": f.rank,
        "invariant_factors": f.invariant_factors.iter().map(int).collect::<Vec<_>>(),
        "det": int(&f.det),
        "signature": f.signature,
        "even": f.even,
    })
}

/// Gram matrix in the basis the engine picked; display only.
pub fn middle_form(q: &MiddleForm) -> Value {
    json!({"matrix": matrix(&q.matrix), "symmetry": symmetry(q.symmetry)})
}

/// The move-invariant part of a computation.
pub fn invariants(inv: &TotalSpaceInvariants) -> Value {
    let homology: Vec<Value> = inv
        .homology
        .iter()
        .map(|g| {
            json!({
                "degree": g.degree,
                "free": g.free,
                "torsion": g.torsion.iter().map(int).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "n": inv.n,
        "chi": inv.chi,
        "homology": homology,
        "form": inv.form.as_ref().map_or(Value::Null, form),
    })
}

pub fn certificate_lines(c: &Certificate) -> Vec<String> {
    c.to_string().lines().map(str::to_string).collect()
}

/// Compact serialization; object keys come out sorted.
pub fn to_canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values built here always serialize")
}

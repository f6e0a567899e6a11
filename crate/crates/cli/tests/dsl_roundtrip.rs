use lefweave::dsl::{Chain, CycleExpr, FiberDef, Item, ScriptStep};
use lefweave::{parse, Workspace};
use lefweave_core::lattice::Int;
use proptest::prelude::*;

fn fiber() -> impl Strategy<Value = (FiberDef, Vec<String>, bool)> {
    let ak = (2usize..7, 1u32..6).prop_map(|(m, n)| {
        let labels = (1..m).map(|i| format!("e{i}")).collect();
        (FiberDef::Ak { m, n }, labels, true)
    });
    let plumbing = (prop::collection::vec((1usize..4, prop::bool::ANY), 1..4), 1u32..6).prop_map(|(shape, n)| {
        let mut next = 0;
        let mut labels = Vec::new();
        let chains = shape
            .into_iter()
            .map(|(len, neg)| {
                let vertices: Vec<String> = (0..len)
                    .map(|_| {
                        next += 1;
                        format!("v{next}")
                    })
                    .collect();
                labels.extend(vertices.clone());
                Chain { vertices, sign: if neg && len > 1 { -1 } else { 1 } }
            })
            .collect();
        (FiberDef::Plumbing { chains, n }, labels, false)
    });
    prop_oneof![ak, plumbing]
}

fn cycle(labels: Vec<String>, arcs: Option<usize>) -> impl Strategy<Value = CycleExpr> {
    let leaf = prop::sample::select(labels.clone()).prop_map(CycleExpr::Sphere);
    let leaf = match arcs {
        Some(m) => prop_oneof![leaf, (1..m).prop_map(|i| CycleExpr::Arc { i, j: i + 1, preset: "std".into() })].boxed(),
        None => leaf.boxed(),
    };
    leaf.prop_recursive(3, 8, 1, move |inner| {
        (prop::sample::select(labels.clone()), (-3i64..=3).prop_filter("nonzero", |e| *e != 0), inner).prop_map(
            |(center, exp, inner)| CycleExpr::Twist {
                center,
                exp,
                inner: Box::new(inner),
            },
        )
    })
}

fn ints(len: usize) -> impl Strategy<Value = Vec<Int>> {
    prop::collection::vec((-4i64..=4).prop_map(Int::from), len..=len)
}

fn step(rank: usize) -> impl Strategy<Value = ScriptStep> {
    prop_oneof![
        (1usize..6).prop_map(ScriptStep::HurwitzL),
        (1usize..6).prop_map(ScriptStep::HurwitzR),
        Just(ScriptStep::Rotate),
        ints(rank).prop_map(ScriptStep::Stabilize),
        prop::collection::vec(ints(rank), 1..3).prop_map(ScriptStep::Subflex),
        Just(ScriptStep::Bsum("D".into())),
        (1usize..6).prop_map(ScriptStep::CertifyLoose),
        (1usize..6).prop_map(ScriptStep::CertifyStab),
        Just(ScriptStep::Flexify),
    ]
}

fn workspace() -> impl Strategy<Value = Workspace> {
    fiber().prop_flat_map(|(def, labels, is_ak)| {
        let arcs = match (&def, is_ak) {
            (FiberDef::Ak { m, .. }, true) => Some(*m),
            _ => None,
        };
        let rank = labels.len();
        (
            Just(def),
            prop::collection::vec(cycle(labels, arcs), 1..5),
            prop::collection::vec(step(rank), 0..6),
            0usize..5,
            1usize..20000,
        )
            .prop_map(|(def, cycles, steps, depth, width)| Workspace {
                items: vec![
                    Item::Fiber { name: "F".into(), def },
                    Item::Datum {
                        name: "D".into(),
                        fiber: "F".into(),
                        cycles,
                    },
                    Item::Script {
                        name: "S".into(),
                        datum: "D".into(),
                        steps,
                    },
                    Item::PrintInvariants { target: "D".into() },
                    Item::Verify { script: "S".into() },
                    Item::Search {
                        datum: "D".into(),
                        depth,
                        width,
                    },
                ],
                ..Workspace::default()
            })
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(ws in workspace()) {
        let text = ws.to_string();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &ws);
        prop_assert_eq!(back.to_string(), text);
    }
}

use lefweave_core::certify::{flexify_after_handles, verify_certificate, Certificate, Claim, Step};
use lefweave_core::fiber::{FiberModel, PlumbingTree};
use lefweave_core::invariants::{compute_invariants, total_space_homology};
use lefweave_core::lattice::{Int, SphereClass, TwistWord};
use lefweave_core::lefschetz::LefschetzDatum;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_fiber(rng: &mut ChaCha8Rng, n: u32, max_rank: usize) -> FiberModel {
    let r = rng.gen_range(1..=max_rank);
    let vertices = (1..=r).map(|i| format!("e{i}")).collect();
    let edges = (1..r)
        .map(|i| (rng.gen_range(0..i), i, if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    FiberModel::plumbing(&PlumbingTree::new(vertices, edges).unwrap(), n).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, f: &FiberModel, max_len: usize) -> TwistWord {
    let r = f.rank();
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            (f.lattice().basis(rng.gen_range(0..r)), e * rng.gen_range(1..=2))
        })
        .collect();
    TwistWord::new(letters, f.lattice().basis(rng.gen_range(0..r)))
}

fn random_datum(seed: u64, n: u32, max_rank: usize, max_k: usize) -> LefschetzDatum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_fiber(&mut rng, n, max_rank);
    let k = rng.gen_range(1..=max_k);
    let words = (0..k).map(|_| random_word(&mut rng, &f, 3)).collect();
    LefschetzDatum::new(f, words).unwrap()
}

fn random_move(rng: &mut ChaCha8Rng, d: &LefschetzDatum) -> LefschetzDatum {
    let k = d.len();
    let lo = if k < 2 { 2 } else { 0 };
    match rng.gen_range(lo..4) {
        0 => d.hurwitz_left(rng.gen_range(1..=k)).unwrap(),
        1 => d.hurwitz_right(rng.gen_range(1..=k)).unwrap(),
        2 => d.rotate(),
        _ => {
            let p: Vec<Int> = (0..d.fiber().rank()).map(|_| Int::from(rng.gen_range(-1..=1))).collect();
            d.stabilize(&p, &d.fresh_label("t")).unwrap()
        }
    }
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Disk pairings `T = ±e_j` meeting `v` once, if `v` has a unit coordinate.
fn unit_pairing(d: &LefschetzDatum, v: &SphereClass) -> Option<Vec<Int>> {
    let j = v.coords.iter().position(|c| c.abs().is_one())?;
    let mut t = vec![Int::zero(); d.fiber().rank()];
    t[j] = Int::one();
    Some(t)
}

/// Same fiber with the handles attached, cycles left untwisted.
fn untwisted_with_handles(d: &LefschetzDatum, ts: &[Vec<Int>]) -> LefschetzDatum {
    let mut f = d.fiber().clone();
    for (i, t) in ts.iter().enumerate() {
        let mut p = t.clone();
        p.resize(f.rank(), Int::zero());
        f = f.attach_stabilizing_handle(&p, &format!("s{}", i + 1)).unwrap().0;
    }
    let total = f.rank();
    let words = d.cycles().iter().map(|c| c.word.extended(total)).collect();
    LefschetzDatum::new(f, words).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn moves_preserve_invariants(seed in any::<u64>(), n in 1u32..=4, steps in 1usize..8) {
        let d = random_datum(seed, n, 4, 5);
        let before = compute_invariants(&d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut cur = d;
        for _ in 0..steps {
            cur = random_move(&mut rng, &cur);
            prop_assert!(cur.check_caches().unwrap());
        }
        prop_assert_eq!(compute_invariants(&cur).unwrap(), before);
    }

    #[test]
    fn hurwitz_moves_are_inverse(seed in any::<u64>(), n in 1u32..=4, i in 1usize..5) {
        let d = random_datum(seed, n, 4, 5);
        prop_assume!(d.len() >= 2);
        let i = (i - 1) % d.len() + 1;
        let there = d.hurwitz_right(i).unwrap().hurwitz_left(i).unwrap();
        let back = d.hurwitz_left(i).unwrap().hurwitz_right(i).unwrap();
        for e in [there, back] {
            let same = e.cycles().iter().zip(d.cycles()).all(|(a, b)| a.klass.same_vector(&b.klass));
            prop_assert!(same);
            if i < d.len() {
                prop_assert_eq!(e.cycles().iter().map(|c| c.word.clone()).collect::<Vec<_>>(),
                                d.cycles().iter().map(|c| c.word.clone()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn full_rotation_is_identity(seed in any::<u64>(), n in 1u32..=4) {
        let d = random_datum(seed, n, 4, 5);
        let mut r = d.clone();
        for _ in 0..d.len() {
            r = r.rotate();
        }
        prop_assert_eq!(r.classes(), d.classes());
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>(), n in 1u32..=4) {
        let d = random_datum(seed, n, 4, 5);
        let once = d.normalize().unwrap();
        prop_assert!(once.check_caches().unwrap());
        prop_assert_eq!(once.normalize().unwrap().classes(), once.classes());
        prop_assert_eq!(compute_invariants(&once).unwrap(), compute_invariants(&d).unwrap());
    }

    #[test]
    fn twists_are_isometries(seed in any::<u64>(), n in 1u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_fiber(&mut rng, n, 4);
        let lat = f.lattice();
        let s = lat.evaluate_word(&random_word(&mut rng, &f, 3)).unwrap();
        let x = SphereClass::new((0..lat.rank()).map(|_| Int::from(rng.gen_range(-5..=5))).collect());
        let y = SphereClass::new((0..lat.rank()).map(|_| Int::from(rng.gen_range(-5..=5))).collect());
        let (tx, ty) = (lat.dehn_twist(&s, &x).unwrap(), lat.dehn_twist(&s, &y).unwrap());
        prop_assert_eq!(lat.pairing(&tx, &ty).unwrap(), lat.pairing(&x, &y).unwrap());
        prop_assert!(lat.twist_power(&s, -1, &tx).unwrap().same_vector(&x));
        // oracle: x + ε⟨x, S⟩ S with ε from the self-pairing
        let sx = lat.pairing(&x, &s).unwrap();
        let eps = if n % 2 == 1 { Int::one() } else { Int::from(-2) / lat.pairing(&s, &s).unwrap() };
        let want: Vec<Int> = x.coords.iter().zip(&s.coords).map(|(a, b)| a + &eps * &sx * b).collect();
        prop_assert_eq!(&tx.coords, &want);
    }

    #[test]
    fn subflex_keeps_homology_in_even_dimensions(seed in any::<u64>(), n in prop::sample::select(vec![2u32, 4])) {
        let d = random_datum(seed, n, 4, 4);
        let ts: Option<Vec<Vec<Int>>> = d.cycles().iter().map(|c| unit_pairing(&d, &c.klass)).collect();
        prop_assume!(ts.is_some());
        let ts = ts.unwrap();
        let sf = d.subflexibilize(&ts).unwrap();
        prop_assert_eq!(total_space_homology(&sf), total_space_homology(&untwisted_with_handles(&d, &ts)));
    }

    #[test]
    fn flexify_always_verifies(seed in any::<u64>(), n in 1u32..=4) {
        let d = random_datum(seed, n, 3, 4);
        let ts: Option<Vec<Vec<Int>>> = d.cycles().iter().map(|c| unit_pairing(&d, &c.klass)).collect();
        prop_assume!(ts.is_some());
        let sf = d.subflexibilize(&ts.unwrap()).unwrap();
        let (tilde, cert) = flexify_after_handles(&sf).unwrap();
        prop_assert_eq!(cert.hurwitz_count(), d.len());
        prop_assert_eq!(tilde.len(), 2 * d.len());
        prop_assert!(verify_certificate(&tilde, &cert).accepted);
        prop_assert_eq!(cert.to_string().parse::<Certificate>().unwrap(), cert);
    }

    #[test]
    fn replayed_certificates_keep_invariants(seed in any::<u64>(), n in 1u32..=4) {
        let d = random_datum(seed, n, 4, 5);
        prop_assume!(d.len() >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let k = d.len();
        let steps = (0..rng.gen_range(1..6))
            .map(|_| match rng.gen_range(0..3) {
                0 => Step::HurwitzLeft(rng.gen_range(1..=k)),
                1 => Step::HurwitzRight(rng.gen_range(1..=k)),
                _ => Step::Rotate,
            })
            .collect();
        let v = verify_certificate(&d, &Certificate::new(steps, Claim::Flexible));
        // a rejection here can only come from the final check
        prop_assert!(v.failure.as_ref().map_or(true, |(step, _)| *step == 0));
        prop_assert_eq!(compute_invariants(&v.final_datum).unwrap(), compute_invariants(&d).unwrap());
    }

    #[test]
    fn boundary_sum_adds_reduced_homology(a in any::<u64>(), b in any::<u64>(), n in 1u32..=4) {
        let (x, y) = (random_datum(a, n, 3, 3), random_datum(b, n, 3, 3));
        let s = x.boundary_connect_sum(&y).unwrap();
        let (hx, hy, hs) = (total_space_homology(&x), total_space_homology(&y), total_space_homology(&s));
        for g in &hs {
            let pick = |h: &[lefweave_core::invariants::HomologyGroup]| h.iter().find(|q| q.degree == g.degree).map_or(0, |q| q.free);
            let expect = if g.degree == 0 { 1 } else { pick(&hx) + pick(&hy) };
            prop_assert_eq!(g.free, expect);
        }
    }
}

#[test]
fn random_certificate_text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let steps = (0..rng.gen_range(0..6))
            .map(|_| match rng.gen_range(0..6) {
                0 => Step::HurwitzLeft(rng.gen_range(1..9)),
                1 => Step::HurwitzRight(rng.gen_range(1..9)),
                2 => Step::Rotate,
                3 => Step::Stabilize(ints(&[rng.gen_range(-3..=3), 0, rng.gen_range(-3..=3)])),
                4 => Step::CertifyStab(rng.gen_range(1..9)),
                _ => Step::CertifyLoose(rng.gen_range(1..9)),
            })
            .collect();
        let claim = if rng.gen_bool(0.5) { Claim::Flexible } else { Claim::Subcritical };
        let c = Certificate::new(steps, claim);
        assert_eq!(c.to_string().parse::<Certificate>().unwrap(), c);
    }
}

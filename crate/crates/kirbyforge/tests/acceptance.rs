//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass/fail line and enforcing its runtime budget.  Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use kirbyforge::diagram::{catalog, ComponentId, Diagram, Framing, Role};
use kirbyforge::groups::{self, fox, GenId, Word};
use kirbyforge::homology::{
    h1_of_surgery, is_homology_sphere, linking_framing_matrix, smith, IntMatrix, Matrix,
    RoleFilter,
};
use kirbyforge::moves::gadget::{fig3_tangle, gadget_insert, gadget_resolve};
use kirbyforge::moves::{clasp, flip_crossing, handle_slide, r1_insert, splits_under};
use kirbyforge::oracle::{self, GenConfig};
use kirbyforge::unlink::{self, CheckLevel, CurveStep};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn finish(name: &str, t: Instant, budget: Duration) {
    let elapsed = t.elapsed();
    println!("acceptance {name}: PASS ({elapsed:?})");
    assert!(
        elapsed < budget,
        "{name} exceeded its budget: {elapsed:?} > {budget:?}"
    );
}

/// 1. Inserting 1-3 helper pairs into seeded homology-sphere presentations
/// leaves H1 trivial, and the helper-block linking-framing matrix is exactly
/// a direct sum of hyperbolic blocks.
#[test]
fn acceptance_1_gadget_homology_invariance() {
    let t = Instant::now();
    let cfg = GenConfig::default();
    let mut done = 0u32;
    let mut seed = 0u64;
    while done < 100 {
        seed += 1;
        let d = oracle::generate(seed, &cfg).expect("generator");
        assert!(d.components_with_role(Role::Surgery).len() <= 4);
        assert!(d.crossings().count() <= 12);
        let (staged, _) = unlink::kill_linking(&d).expect("kill_linking");
        let pairs = unlink::pair_crossings(&staged).expect("pairing");
        if pairs.is_empty() {
            continue;
        }
        let mut cur = staged;
        let mut inserted = 0usize;
        for (_, _, x1, x2) in pairs.into_iter().take(3) {
            let (next, _) = gadget_insert(&cur, (x1, x2)).expect("insert");
            cur = next;
            inserted += 1;
        }
        assert!((1..=3).contains(&inserted));
        // H1 stays trivial with the helpers as 0-framed surgery curves
        assert!(
            h1_of_surgery(&cur).expect("h1").is_trivial(),
            "seed {seed}: H1 nontrivial after {inserted} inserts"
        );
        assert!(is_homology_sphere(&cur).unwrap());
        // helper-block matrix: hyperbolic blocks exactly
        let m = linking_framing_matrix(&cur, RoleFilter::Helpers).unwrap();
        assert_eq!(m.rows, 2 * inserted);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let expected = if i / 2 == j / 2 && i != j {
                    1i64
                } else {
                    0
                };
                assert_eq!(
                    m[(i, j)],
                    BigInt::from(expected),
                    "seed {seed}: helper block entry ({i},{j})"
                );
            }
        }
        done += 1;
    }
    finish("1 gadget-homology-invariance", t, Duration::from_secs(5));
}

/// 2. On the shipped reference tangle, insert followed by resolve equals the
/// independently built two-crossings-changed diagram, canonically.
#[test]
fn acceptance_2_figure_roundtrip() {
    let t = Instant::now();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../diagrams");
    let shipped = std::fs::read_to_string(format!("{dir}/fig3_tangle.kf")).expect("template");
    let d = Diagram::parse(&shipped).expect("parse template");
    let (built, pair) = fig3_tangle();
    assert_eq!(
        d.serialize(),
        built.serialize(),
        "shipped template matches the generator"
    );

    let (with_gadget, handle) = gadget_insert(&d, pair).expect("insert");
    // shipped post-insert file is bit-identical
    let shipped_gadget =
        std::fs::read_to_string(format!("{dir}/fig3_gadget.kf")).expect("gadget file");
    let expect_gadget = Diagram::parse(&shipped_gadget).unwrap();
    assert_eq!(with_gadget.serialize(), expect_gadget.serialize());

    let resolved = gadget_resolve(&with_gadget, &handle).expect("resolve");
    // independent construction: switch the two crossings directly
    let mut switched = d.clone();
    switched = flip_crossing(&switched, pair.0).unwrap();
    switched = flip_crossing(&switched, pair.1).unwrap();
    assert_eq!(
        resolved.serialize(),
        switched.serialize(),
        "insert-resolve equals the double crossing change"
    );
    finish("2 figure-roundtrip", t, Duration::from_secs(1));
}

/// 3. verify(unlink(d), d) is all-true on the 100-diagram oracle suite, the
/// final diagram splits with the pattern under everything, and stays planar.
#[test]
fn acceptance_3_certificate_soundness() {
    let t = Instant::now();
    let cfg = GenConfig::default();
    for i in 0..100u64 {
        let seed = 1u64.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(i);
        let d = oracle::generate(seed, &cfg).expect("generator");
        let cert = unlink::unlink(&d, CheckLevel::Level1).expect("unlink");
        let outcome = unlink::verify_certificate(&cert, &d).expect("verify");
        assert!(outcome.ok, "seed {seed}: {:?}", outcome.mismatches);
        assert!(unlink::report_all_true(&outcome.report), "seed {seed}");
        let pats = cert.final_diagram.components_with_role(Role::Pattern);
        assert!(splits_under(&cert.final_diagram, &pats).unwrap(), "seed {seed}");
        assert_eq!(cert.final_diagram.genus(), 0, "seed {seed}");
    }
    finish("3 certificate-soundness", t, Duration::from_secs(30));
}

fn random_framed_diagram(rng: &mut ChaCha8Rng) -> Diagram {
    let n = rng.gen_range(2..=4u32);
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!(
            "component {} role=surgery framing={} arcs={}\n",
            i + 1,
            rng.gen_range(-3i64..=3),
            i + 1
        ));
    }
    let mut d = Diagram::parse(&text).unwrap();
    for _ in 0..rng.gen_range(0..4) {
        let a = ComponentId(rng.gen_range(1..=n));
        let b = ComponentId(rng.gen_range(1..=n));
        if a == b {
            continue;
        }
        let aa = d.component(a).unwrap().arcs[rng.gen_range(0..d.component(a).unwrap().arcs.len())];
        let bb = d.component(b).unwrap().arcs[rng.gen_range(0..d.component(b).unwrap().arcs.len())];
        if let Ok((d2, _)) = clasp(&d, aa, bb, if rng.gen() { 1 } else { -1 }) {
            d = d2;
        }
    }
    if rng.gen_bool(0.3) {
        let c = ComponentId(rng.gen_range(1..=n));
        let arc = d.component(c).unwrap().arcs[0];
        if let Ok((d2, _)) = r1_insert(&d, arc, rng.gen()) {
            d = d2;
        }
    }
    d
}

/// 4. A handle slide changes the framed linking matrix by the congruence
/// E^T A E for the logged elementary matrix E, and the Smith invariant
/// factors are unchanged.
#[test]
fn acceptance_4_handle_slide_congruence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut done = 0;
    while done < 200 {
        let d = random_framed_diagram(&mut rng);
        let comps = d.component_ids();
        let slid = comps[rng.gen_range(0..comps.len())];
        let over = comps[rng.gen_range(0..comps.len())];
        if slid == over {
            continue;
        }
        let sign: i8 = if rng.gen() { 1 } else { -1 };
        let a = linking_framing_matrix(&d, RoleFilter::Framed).unwrap();
        let Ok((d2, rec)) = handle_slide(&d, slid, over, sign) else {
            continue;
        };
        let a2 = linking_framing_matrix(&d2, RoleFilter::Framed).unwrap();
        // E = I + sign * e_{over_idx, slid_idx}
        let idx = |c: ComponentId| comps.iter().position(|&x| x == c).unwrap();
        let mut e = IntMatrix::identity(a.rows);
        e[(idx(over), idx(slid))] = BigInt::from(sign);
        let expect = e.transpose().mul(&a).mul(&e);
        assert!(a2 == expect, "congruence failed for slide {rec:?}");
        let f1 = smith(&a).invariant_factors();
        let f2 = smith(&a2).invariant_factors();
        assert_eq!(f1, f2, "invariant factors changed");
        done += 1;
    }
    finish("4 handle-slide-congruence", t, Duration::from_secs(10));
}

/// 5. Smith normal form: U A V = D with unimodular witnesses on 500 random
/// matrices up to 12x12 with entries in [-9, 9]; |det A| equals the product
/// of the invariant factors for square A.
#[test]
fn acceptance_5_snf_correctness() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..500 {
        let rows = rng.gen_range(1..=12);
        let cols = rng.gen_range(1..=12);
        let a = Matrix::from_rows(
            (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
                        .collect::<Vec<_>>()
                })
                .collect(),
        );
        let s = smith(&a);
        // U A V = D re-checked here, independently of the library's assert
        assert!(s.u.mul(&a).mul(&s.v) == s.d, "U A V != D");
        assert!(s.u.det().abs().is_one(), "|det U| != 1");
        assert!(s.v.det().abs().is_one(), "|det V| != 1");
        let factors = s.invariant_factors();
        for w in factors.windows(2) {
            assert!(
                (&w[1] % &w[0]).is_zero(),
                "divisibility chain violated"
            );
        }
        if rows == cols {
            let det = a.det();
            let prod = factors.iter().fold(BigInt::one(), |acc, f| acc * f);
            if factors.len() == rows {
                assert_eq!(det.abs(), prod, "|det| != product of factors");
            } else {
                assert!(det.is_zero());
            }
        }
    }
    finish("5 snf-correctness", t, Duration::from_secs(10));
}

/// 6. Fox-calculus anchors: the stock Alexander polynomials, delta(1) = +-1
/// on generated knot presentations, and the fundamental identities on 500
/// random words.
#[test]
fn acceptance_6_fox_anchors() {
    let t = Instant::now();
    use kirbyforge::groups::laurent::ZLaurent;
    let zp = |pairs: &[(i64, i64)]| {
        ZLaurent::from_pairs(pairs.iter().map(|&(e, c)| (e, BigInt::from(c))))
    };

    let unknot = catalog::unknot(Role::Pattern, Framing::Unframed);
    let p = groups::wirtinger(&unknot, &[ComponentId(1)]).unwrap();
    assert_eq!(fox::alexander_polynomial(&p).unwrap(), zp(&[(0, 1)]));

    let p = groups::wirtinger(&catalog::trefoil(), &[ComponentId(1)]).unwrap();
    assert_eq!(
        fox::alexander_polynomial(&p).unwrap(),
        zp(&[(0, 1), (1, -1), (2, 1)])
    );

    let p = groups::wirtinger(&catalog::figure_eight(), &[ComponentId(1)]).unwrap();
    assert_eq!(
        fox::alexander_polynomial(&p).unwrap(),
        zp(&[(0, 1), (1, -3), (2, 1)])
    );

    // delta(1) = +-1 on generated knot presentations (random braid closures
    // with one component)
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let mut knots = 0;
    while knots < 25 {
        let strands = rng.gen_range(2..=3);
        let len = rng.gen_range(1..=6);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands) as i32;
                if rng.gen() {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let d = catalog::braid_closure(strands, &word);
        if d.components().count() != 1 {
            continue;
        }
        let p = groups::wirtinger(&d, &[ComponentId(1)]).unwrap();
        let delta = fox::alexander_polynomial(&p).unwrap();
        let v = delta.eval_one();
        assert!(
            v.clone().abs().is_one(),
            "delta(1) = {v} for braid {word:?}"
        );
        knots += 1;
    }

    // product rule and t=1 identity on 500 random words
    for _ in 0..500 {
        let mk = |rng: &mut ChaCha8Rng| {
            let len = rng.gen_range(0..10);
            Word::from_letters(
                (0..len)
                    .map(|_| (GenId(rng.gen_range(1..=4)), if rng.gen() { 1 } else { -1 }))
                    .collect(),
            )
        };
        let u = mk(&mut rng);
        let v = mk(&mut rng);
        let fu = fox::fox_vector(&u, 4);
        let fv = fox::fox_vector(&v, 4);
        let fuv = fox::fox_vector(&u.concat(&v), 4);
        let tu: i64 = u.exponent_vector(4).iter().sum();
        for k in 0..4 {
            use kirbyforge::homology::ring::Ring;
            assert_eq!(fuv[k], fu[k].add(&fv[k].shifted(tu)), "product rule");
            assert_eq!(
                fu[k].eval_one(),
                BigInt::from(u.exponent_vector(4)[k]),
                "t=1 identity"
            );
        }
    }
    finish("6 fox-anchors", t, Duration::from_secs(10));
}

/// 7. Every helper curve in every passing certificate is level-1 in the
/// derived series, agreeing with the linking-number report entry for entry.
#[test]
fn acceptance_7_derived_level_consistency() {
    let t = Instant::now();
    let cfg = GenConfig::default();
    for i in 0..40u64 {
        let seed = 7u64.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(i);
        let d = oracle::generate(seed, &cfg).expect("generator");
        let cert = unlink::unlink(&d, CheckLevel::Level1).expect("unlink");
        let pres = groups::wirtinger(&d, &d.component_ids()).unwrap();
        for (pi, pair) in cert.pairs.iter().enumerate() {
            for (name, rec) in [("alpha", &pair.alpha), ("beta", &pair.beta)] {
                let w = unlink::route_word(rec, &pres);
                let l1 = groups::derived_level_1(&w, &pres);
                assert!(l1, "seed {seed} pair {pi} {name} not level-1");
                // agreement with the linking data, component by component
                for c in d.component_ids() {
                    assert_eq!(
                        rec.linking_with(&d, c).unwrap(),
                        0,
                        "seed {seed} pair {pi} {name} links component {c}"
                    );
                }
                // report entry matches
                let key = format!("level1-{}-{}", name, pi + 1);
                assert_eq!(cert.report[&key], "true", "seed {seed} {key}");
                // the word's letters all come from under-passes in the route
                let under_steps = rec
                    .steps
                    .iter()
                    .filter(|s| matches!(s, CurveStep::Arc { over: false, .. }))
                    .count();
                assert!(w.letters().len() <= under_steps);
            }
        }
    }
    finish("7 derived-level-consistency", t, Duration::from_secs(5));
}

/// 8. The oracle command is deterministic: a fixed seed gives byte-identical
/// output across two runs of the binary.
#[test]
fn acceptance_8_oracle_determinism() {
    let t = Instant::now();
    let bin = env!("CARGO_BIN_EXE_kirbyforge");
    let run = || {
        std::process::Command::new(bin)
            .args(["oracle", "--seed", "11", "--count", "25"])
            .env("KIRBYFORGE_COLOR", "0")
            .output()
            .expect("run oracle")
    };
    let a = run();
    let b = run();
    assert!(a.status.success(), "oracle run failed: {:?}", a);
    assert_eq!(a.stdout, b.stdout, "oracle output differs between runs");
    assert_eq!(a.stderr, b.stderr);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("pass 25/25"), "{text}");
    finish("8 oracle-determinism", t, Duration::from_secs(60));
}

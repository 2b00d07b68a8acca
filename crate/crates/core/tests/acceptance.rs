//! Acceptance criteria 1–9. Each test prints one PASS/FAIL line.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

use ualg::algebra::{make_chain_lattice, make_ujm_reduct, FiniteAlgebra, Operation};
use ualg::claims::{certify_identity, certify_level, certify_search, LevelExpectation, TripleSource};
use ualg::constructions::{
    build_b, canonical_witness_chain, lemma22_build, shortest_ad_chain, type_tags, verify_induction, verify_prop41,
    Lemma22Input, SharpnessParams,
};
use ualg::boxes::BoxUnion;
use ualg::fixtures::load_fixtures;
use ualg::free::Caps;
use ualg::identity::{check_identity, CheckMode, Family, IdentityParams, IdentityVerdict};
use ualg::partition::{congruence_generated, Partition};
use ualg::recheck::recheck;
use ualg::search::{
    absorption_search, chain_level, verify_absorption, AbsorptionOutcome, AbsorptionPreset, ChainOutcome, ChainPreset,
};
use ualg::toolkit::{require_lone_dissent, run_toolkit, ArityTerm, Construction};
use ualg::{Certificate, Exec, Term};

const EXEC: Exec = Exec::Parallel;

fn report(n: usize, title: &str, started: Instant, limit: Duration, failures: &[String]) {
    let took = started.elapsed();
    let mut all = failures.to_vec();
    if took > limit {
        all.push(format!("runtime {took:?} exceeds {limit:?}"));
    }
    if all.is_empty() {
        println!("criterion {n} PASS: {title} ({took:.2?})");
    } else {
        println!("criterion {n} FAIL: {title} ({took:.2?}): {}", all.join("; "));
        panic!("criterion {n} failed: {}", all.join("; "));
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn pair_verdict(w: &ualg::constructions::SharpnessWitness, family: Family, params: IdentityParams) -> IdentityVerdict {
    check_identity::<FiniteAlgebra>(family, params, w.triple(), None, CheckMode::Pair(w.a, w.d), EXEC)
        .unwrap()
        .verdict
}

fn full_verdict(w: &ualg::constructions::SharpnessWitness, family: Family, params: IdentityParams) -> IdentityVerdict {
    check_identity::<FiniteAlgebra>(family, params, w.triple(), None, CheckMode::Full, EXEC)
        .unwrap()
        .verdict
}

#[test]
fn criterion_1_sharpness_witnesses() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in 3..=8 {
        for q in 2..=3 {
            let p = SharpnessParams::new(m, q).unwrap();
            let w = build_b(p, EXEC).unwrap();
            check(&mut bad, w.boxes.closure_violation(&w.product, EXEC).unwrap().is_none(), format!("B({m},{q}) not closed"));
            let cert = verify_prop41(p, EXEC).unwrap();
            check(&mut bad, cert.is_verified(), format!("B({m},{q}): {:?}", cert.evidence["problems"]));
            if q == 2 {
                let c = w.mid[0];
                let ok = w.alpha.related(w.a, w.d) && w.beta.related(w.a, c) && w.gamma.related(c, w.d);
                check(&mut bad, ok, format!("B({m},2): c does not witness α∧(β∘γ)"));
            }
            let v = pair_verdict(&w, Family::Eq33, IdentityParams::mq(m, q));
            check(&mut bad, v == IdentityVerdict::Fails, format!("B({m},{q}): eq3.3 does not fail at (a,d)"));
        }
    }
    report(1, "B(m,q) closed, (a,d) in α∧(β∘γ) via c, eq3.3 fails, m = 3..8, q = 2,3", t, Duration::from_secs(10), &bad);
}

#[test]
fn criterion_2_exact_distributivity_gap() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in 3..=8 {
        let w = build_b(SharpnessParams::new(m, 2).unwrap(), EXEC).unwrap();
        let n = 2 * m - 4;
        let dist = |k| pair_verdict(&w, Family::NDistributive, IdentityParams::n(k));
        let alvin = |k| pair_verdict(&w, Family::NAlvin, IdentityParams::n(k));
        check(&mut bad, dist(n - 1) == IdentityVerdict::Fails, format!("m={m}: (a,d) in the {}-factor αβ chain", n - 1));
        check(&mut bad, alvin(n) == IdentityVerdict::Fails, format!("m={m}: (a,d) in the {n}-factor αγ chain"));
        check(&mut bad, dist(n) == IdentityVerdict::PairNotCounterexample, format!("m={m}: (a,d) outside the {n}-factor αβ chain"));
        let shortest = shortest_ad_chain(&w, 4 * m).unwrap().expect("a chain exists");
        let canon: Vec<usize> = canonical_witness_chain(&w.params)
            .unwrap()
            .iter()
            .map(|t| w.b_index_of(t).unwrap())
            .collect();
        check(&mut bad, shortest.factors == n && shortest.starts_with_first, format!("m={m}: shortest chain has {} factors", shortest.factors));
        check(&mut bad, shortest.elements == canon, format!("m={m}: shortest chain differs from the canonical chain"));
    }
    report(2, "(a,d) ∉ 2m−5 αβ-chain, ∉ 2m−4 αγ-chain, ∈ 2m−4 αβ-chain = canonical, m = 3..8", t, Duration::from_secs(10), &bad);
}

#[test]
fn criterion_3_reversed_instance() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in 3..=6 {
        let w2 = build_b(SharpnessParams::new(m, 2).unwrap(), EXEC).unwrap();
        check(&mut bad, pair_verdict(&w2, Family::Eq32, IdentityParams::mq(m, 2)) == IdentityVerdict::Fails, format!("m={m}: (a,d) ∈ (α∧(γ∘β))^(m−2)"));
        let w3 = build_b(SharpnessParams::new(m, 3).unwrap(), EXEC).unwrap();
        check(&mut bad, pair_verdict(&w3, Family::Eq34, IdentityParams::mq(m, 3)) == IdentityVerdict::Fails, format!("m={m}: eq3.4 holds at (a,d)"));
    }
    report(3, "(a,d) ∉ (α∧(γ∘β))^(m−2) on B(m,2) and eq3.4 fails on B(m,3), m = 3..6", t, Duration::from_secs(10), &bad);
}

#[test]
fn criterion_4_upper_bounds_relational() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in 3..=6 {
        for q in 2..=3 {
            let w = build_b(SharpnessParams::new(m, q).unwrap(), EXEC).unwrap();
            let (plain, swapped) = if q % 2 == 0 { (Family::Eq37, Family::Eq37Swapped) } else { (Family::Eq38, Family::Eq38Swapped) };
            let p = IdentityParams::mq(m, q);
            check(&mut bad, full_verdict(&w, plain, p) == IdentityVerdict::Holds, format!("B({m},{q}): {plain} fails"));
            check(&mut bad, full_verdict(&w, swapped, p) == IdentityVerdict::Fails, format!("B({m},{q}): {swapped} holds"));
        }
    }
    report(4, "eq3.7/eq3.8 hold and their swapped-start variants fail on B(m,q), m = 3..6, q = 2,3", t, Duration::from_secs(10), &bad);
}

fn level_of(fixture: &str, preset: ChainPreset) -> Option<usize> {
    let gens = load_fixtures(fixture).unwrap();
    let cert = certify_level(&gens, preset, 40, None, Caps::default(), EXEC).unwrap();
    cert.evidence_field::<Option<usize>>("level").unwrap()
}

#[test]
fn criterion_5_variety_levels() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let expected = [
        ("N:2:3", ChainPreset::Jonsson, 2),
        ("N:2:4", ChainPreset::Jonsson, 4),
        ("Nm:5", ChainPreset::Jonsson, 6),
        ("N:2:3", ChainPreset::Alvin, 3),
        ("N:2:4", ChainPreset::Alvin, 5),
        ("N:2:3", ChainPreset::Day, 3),
        ("N:2:4", ChainPreset::Day, 5),
    ];
    for (fixture, preset, want) in expected {
        let got = level_of(fixture, preset);
        check(&mut bad, got == Some(want), format!("{preset} level of {fixture}: {got:?}, expected {want}"));
    }
    report(5, "Jónsson 2, 4, 6; alvin 3, 5; Day 3, 5", t, Duration::from_secs(600), &bad);
}

#[test]
#[ignore = "about 13 minutes; beyond the desk-scale acceptance list"]
fn day_level_of_n5() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let got = level_of("Nm:5", ChainPreset::Day);
    check(&mut bad, got == Some(7), format!("Day level of N_5: {got:?}, expected 7"));
    report(5, "Day level of V(N^{2,5}, N^{3,5}) = 7", t, Duration::from_secs(1800), &bad);
}

fn nu_found(fixture: &str, arity: usize) -> bool {
    let gens = load_fixtures(fixture).unwrap();
    absorption_search(&gens, AbsorptionPreset::Nu { arity }, Caps::default(), EXEC).unwrap().is_found()
}

#[test]
fn criterion_6_nu_boundary() {
    let t = Instant::now();
    let mut bad = Vec::new();
    check(&mut bad, !nu_found("N:2:4", 3), "V(N^{2,4}) has a 3-ary NU term");
    check(&mut bad, !nu_found("Nm:5", 4), "V(N^{2,5}, N^{3,5}) has a 4-ary NU term");
    for (fixture, m) in [("N:2:4", 4), ("Nm:5", 5)] {
        for g in load_fixtures(fixture).unwrap() {
            check(&mut bad, g.is_k_majority(0, m - 1).unwrap(), format!("{} is not an {m}-ary NU", g.label()));
        }
    }
    let n24 = load_fixtures("N:2:4").unwrap();
    let jonsson = chain_level(&n24, ChainPreset::Jonsson, 3, Caps::default(), EXEC).unwrap();
    check(&mut bad, matches!(jonsson, ChainOutcome::NotFoundUpTo { .. }), "V(N^{2,4}) is 3-distributive");
    let day = chain_level(&n24, ChainPreset::Day, 4, Caps::default(), EXEC).unwrap();
    check(&mut bad, matches!(day, ChainOutcome::NotFoundUpTo { .. }), "V(N^{2,4}) is 4-modular");
    report(6, "no 3-ary NU for N_4, no 4-ary NU for N_5, m-ary NU per generator, N_4 not 3-distributive nor 4-modular", t, Duration::from_secs(300), &bad);
}

#[test]
fn criterion_7_interval_reducts() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in [4, 5] {
        for kind in ["I", "If"] {
            let key = format!("{kind}:{m}");
            check(&mut bad, level_of(&key, ChainPreset::Jonsson) == Some(3), format!("{key}: Jónsson level ≠ 3"));
            check(&mut bad, level_of(&key, ChainPreset::HagemannMitschke) == Some(3), format!("{key}: HM level ≠ 3"));
            check(&mut bad, nu_found(&key, m), format!("{key}: no {m}-ary NU"));
            check(&mut bad, !nu_found(&key, m - 1), format!("{key}: has an {}-ary NU", m - 1));
        }
    }
    report(7, "I_m, I_m^- (m = 4,5): Jónsson 3, HM 3, m-ary NU, no (m−1)-ary NU", t, Duration::from_secs(300), &bad);
}

fn basic(fixture: &str, op: &str) -> (Vec<FiniteAlgebra>, ArityTerm) {
    let gens = load_fixtures(fixture).unwrap();
    let t = ArityTerm::basic(&gens[0], op).unwrap();
    (gens, t)
}

fn roles_hold(cert: &Certificate, roles: &[&str]) -> bool {
    let outputs = cert.evidence["outputs"].as_array().unwrap();
    cert.is_verified()
        && roles.iter().all(|r| outputs.iter().any(|o| o["role"] == *r && o["holds"] == true))
}

#[test]
fn criterion_8_term_toolkit() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let caps = Caps::default();
    let (z2, minority) = basic("sum:2:3", "s");
    let (z3, sum4) = basic("sum:3:4", "s");
    check(&mut bad, require_lone_dissent(&z2, "d", &minority).is_ok(), "minority is not lone-dissent");
    check(&mut bad, require_lone_dissent(&z3, "d", &sum4).is_ok(), "4-ary sum mod 3 is not lone-dissent");
    for k in [2, 3] {
        let c = run_toolkit(&z2, Construction::Power { k }, &minority, None, caps, EXEC).unwrap();
        check(&mut bad, roles_hold(&c, &[&format!("power {k}")]), format!("power {k} of minority"));
    }
    let c = run_toolkit(&z3, Construction::Pair, &sum4, Some(&sum4), caps, EXEC).unwrap();
    check(&mut bad, roles_hold(&c, &["pair"]), "pair of 4-ary sums");
    let (ld2, d) = basic("ld2", "d");
    let e = ArityTerm::basic(&ld2[0], "e").unwrap();
    let c = run_toolkit(&ld2, Construction::Pair, &d, Some(&e), caps, EXEC).unwrap();
    check(&mut bad, roles_hold(&c, &["pair"]) && c.evidence["outputs"][0]["arity"] == 6, "pair of d and e");
    for (gens, term) in [(&z2, &minority), (&z3, &sum4)] {
        let c = run_toolkit(gens, Construction::Maltsev, term, None, caps, EXEC).unwrap();
        check(&mut bad, roles_hold(&c, &["maltsev"]), format!("Maltsev from {}", gens[0].label()));
    }
    let c = run_toolkit(&ld2, Construction::Nu, &d, Some(&e), caps, EXEC).unwrap();
    check(&mut bad, roles_hold(&c, &["nu", "majority"]), "NU from d, e with a majority term");
    let c = run_toolkit(&ld2, Construction::Coprime, &d, Some(&e), caps, EXEC).unwrap();
    check(&mut bad, roles_hold(&c, &["nu", "majority", "maltsev"]), "coprime pipeline");

    for (fixture, m) in [("N:2:3", 3), ("N:2:4", 4)] {
        let gens = load_fixtures(fixture).unwrap();
        let found = chain_level(&gens, ChainPreset::DirectedJonsson, 40, caps, EXEC).unwrap();
        check(&mut bad, found.level() == Some(m - 1), format!("{fixture}: directed Jónsson terms ≠ {}", m - 2));
        let refused = chain_level(&gens, ChainPreset::DirectedJonsson, m - 2, caps, EXEC).unwrap();
        check(&mut bad, matches!(refused, ChainOutcome::NotFoundUpTo { .. }), format!("{fixture}: {} directed terms suffice", m - 3));
    }
    for (fixture, m) in [("sum:2:3", 3), ("sum:3:4", 4)] {
        let gens = load_fixtures(fixture).unwrap();
        let out = chain_level(&gens, ChainPreset::DirectedMinority, 40, caps, EXEC).unwrap();
        check(&mut bad, out.level().is_some_and(|s| s - 1 <= m - 2), format!("{fixture}: no {}-term directed minority chain", m - 2));
    }

    for (fixture, m) in [("N:2:3", 3), ("N:2:4", 4)] {
        let gens = load_fixtures(fixture).unwrap();
        let preset = AbsorptionPreset::HalfNu { m };
        check(&mut bad, absorption_search(&gens, preset, caps, EXEC).unwrap().is_found(), format!("{fixture}: no {m}½-NU"));
        let padded = Term::basic("u", &(2..m + 2).collect::<Vec<_>>());
        check(&mut bad, verify_absorption(&gens, preset, &padded).unwrap().is_none(), format!("{fixture}: padded NU fails the m½-NU equations"));
        if let AbsorptionOutcome::Found { term, .. } = absorption_search(&gens, preset, caps, EXEC).unwrap() {
            let mut subs = vec![Term::Var(0)];
            subs.extend((0..m + 1).map(Term::Var));
            let v = term.substitute(&subs);
            let ok = verify_absorption(&gens, AbsorptionPreset::Nu { arity: m + 1 }, &v).unwrap().is_none();
            check(&mut bad, ok, format!("{fixture}: v(x1, x1, …) is not an NU term"));
        }
    }
    let n4 = load_fixtures("N:2:4").unwrap();
    let refused = absorption_search(&n4, AbsorptionPreset::HalfNu { m: 3 }, caps, EXEC).unwrap();
    check(&mut bad, !refused.is_found(), "N_4 has a 3½-NU term");
    report(8, "lone-dissent toolkit, directed Jónsson m−2 / not m−3, m½-NU found and refused", t, Duration::from_secs(60), &bad);
}

fn seed() -> u64 {
    std::env::var("UALG_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0x5eed_2024)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    })
}

/// A random algebra with one unary and one binary operation.
fn small_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (2usize..=6)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0..n, n), prop::collection::vec(0..n, n * n)))
        .prop_map(|(n, unary, binary)| {
            let f = Operation::from_fn("f", n, 1, |t| unary[t[0]]);
            let g = Operation::from_fn("g", n, 2, |t| binary[t[0] * n + t[1]]);
            FiniteAlgebra::new("random", n, vec![f, g]).unwrap()
        })
}

fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn go(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            go(i + 1, max.max(b), cur, out);
        }
    }
    if n > 0 {
        go(1, 0, &mut cur, &mut out);
    }
    out
}

fn compatible(alg: &FiniteAlgebra, labels: &[usize]) -> bool {
    let n = alg.size();
    let f = |x: usize| alg.eval(0, &[x]);
    let g = |x: usize, y: usize| alg.eval(1, &[x, y]);
    for x in 0..n {
        for y in 0..n {
            if labels[x] != labels[y] {
                continue;
            }
            if labels[f(x)] != labels[f(y)] {
                return false;
            }
            for z in 0..n {
                if labels[g(x, z)] != labels[g(y, z)] || labels[g(z, x)] != labels[g(z, y)] {
                    return false;
                }
            }
        }
    }
    true
}

/// Random `(α, β, γ)` generated by random pairs in a random unary algebra of
/// size ≤ 8.
fn random_triple() -> impl Strategy<Value = (FiniteAlgebra, [Partition; 3])> {
    (3usize..=8)
        .prop_flat_map(|n| {
            let pairs = || prop::collection::vec((0..n, 0..n), 0..4);
            (Just(n), prop::collection::vec(0..n, n), pairs(), pairs(), pairs())
        })
        .prop_map(|(n, unary, pa, pb, pc)| {
            let alg = FiniteAlgebra::new("unary", n, vec![Operation::from_fn("f", n, 1, |t| unary[t[0]])]).unwrap();
            let gen = |p: &[(usize, usize)]| congruence_generated(&alg, p).unwrap();
            let triple = [gen(&pa), gen(&pb), gen(&pc)];
            (alg, triple)
        })
}

fn full_holds(family: Family, params: IdentityParams, t: [&Partition; 3]) -> bool {
    check_identity::<FiniteAlgebra>(family, params, t, None, CheckMode::Full, Exec::Sequential).unwrap().verdict
        == IdentityVerdict::Holds
}

/// `h`-absorbing, `k`-majority and 2-absorbing order statistics of one arity.
fn lemma22_instance() -> impl Strategy<Value = (usize, usize, usize, [usize; 4], [usize; 4], Vec<usize>, u64)> {
    let shapes: Vec<(usize, usize, usize)> = (3..=4usize)
        .flat_map(|m| (1..m).flat_map(move |h| (h..m).map(move |k| (m, h, k))))
        .filter(|&(m, h, k)| h + k <= m && 2 * k > m)
        .collect();
    (prop::sample::select(shapes), any::<u64>()).prop_flat_map(|((m, h, k), salt)| {
        (
            Just(m),
            Just(h),
            Just(k),
            [1..=h, 1..=h, (m - k + 1)..=k, 1..=2usize],
            [2usize..=3, 2..=3, 2..=3, 2..=3],
            prop::collection::vec(0usize..1000, 1..4),
            Just(salt),
        )
            .prop_map(|(m, h, k, js, sizes, points, salt)| (m, h, k, js, sizes, points, salt))
    })
}

#[test]
fn criterion_9_property_suites() {
    let t = Instant::now();
    let mut bad = Vec::new();

    let r = runner(500).run(&(random_triple(), 3usize..=5, prop::sample::select(vec![3usize, 5])), |((_, tr), m, q)| {
        let p = IdentityParams::mq(m, q);
        let ag = tr[0].meet(&tr[2]).unwrap();
        let e33 = full_holds(Family::Eq33, p, [&tr[0], &tr[1], &tr[2]]);
        let e33_sub = full_holds(Family::Eq33, p, [&tr[0], &tr[1], &ag]);
        let e34 = full_holds(Family::Eq34, p, [&tr[0], &tr[1], &tr[2]]);
        prop_assert_eq!(e33_sub, e34);
        prop_assert!(!e34 || e33);
        Ok(())
    });
    check(&mut bad, r.is_ok(), format!("meet substitution vs eq3.4: {r:?}"));

    let r = runner(200).run(&(small_algebra(), prop::collection::vec((0usize..6, 0usize..6), 0..4)), |(alg, pairs)| {
        let n = alg.size();
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let got = congruence_generated(&alg, &pairs).unwrap();
        let mut best: Option<Vec<usize>> = None;
        for labels in all_partitions(n) {
            if pairs.iter().all(|&(a, b)| labels[a] == labels[b]) && compatible(&alg, &labels) {
                let finer = best.as_ref().is_none_or(|b| (0..n).all(|x| (0..n).all(|y| labels[x] != labels[y] || b[x] == b[y])));
                if finer {
                    best = Some(labels);
                }
            }
        }
        prop_assert_eq!(got, Partition::from_labels(best.unwrap()));
        Ok(())
    });
    check(&mut bad, r.is_ok(), format!("congruence generation: {r:?}"));

    let r = runner(300).run(&(2usize..=5, 3usize..=7).prop_flat_map(|(s, m)| (Just(s), Just(m), 1..=m, prop::collection::vec(0..s, m))), |(s, m, j, args)| {
        let alg = make_ujm_reduct(s, j, m).unwrap();
        let lattice = make_chain_lattice(s).unwrap();
        let (join, meet) = (|a, b| lattice.eval(0, &[a, b]), |a, b| lattice.eval(1, &[a, b]));
        let mut best = usize::MAX;
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize == j {
                let mx = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| args[i]).fold(0, join);
                best = if best == usize::MAX { mx } else { meet(best, mx) };
            }
        }
        prop_assert_eq!(alg.eval(0, &args), best);
        Ok(())
    });
    check(&mut bad, r.is_ok(), format!("order statistics: {r:?}"));

    let r = runner(200).run(&lemma22_instance(), |(m, h, k, js, sizes, points, salt)| {
        let alg = |j: usize, s: usize| make_ujm_reduct(s, j, m).unwrap();
        let (a1, a2, a3, a4) = (alg(js[0], sizes[0]), alg(js[1], sizes[1]), alg(js[2], sizes[2]), alg(js[3], sizes[3]));
        let fp = ualg::ProductAlgebra::new(vec![a3.clone(), a4.clone()]).unwrap();
        let total = fp.indexing().total();
        let gens: Vec<usize> = points.iter().map(|p| p % total).collect();
        let mut closed: std::collections::BTreeSet<usize> = gens.into_iter().collect();
        loop {
            let cur: Vec<Vec<usize>> = closed.iter().map(|&e| fp.indexing().decode(e)).collect();
            let before = closed.len();
            let mut od = ualg::tuples::Odometer::uniform(m, cur.len());
            while let Some(pick) = od.next_tuple() {
                let args: Vec<Vec<usize>> = pick.iter().map(|&i| cur[i].clone()).collect();
                closed.insert(fp.indexing().encode(&fp.apply_tuples(0, &args)).unwrap());
            }
            if closed.len() == before {
                break;
            }
        }
        let mut f = BoxUnion::new(vec![a3.size(), a4.size()]).unwrap();
        for &e in &closed {
            f.push_point(&fp.indexing().decode(e));
        }
        let a = [(salt as usize) % a3.size()];
        let d = [((salt >> 8) as usize) % a3.size()];
        let a3s = [a3];
        let inp = Lemma22Input { a1: &a1, a2: &a2, a3: &a3s, a4: &a4, zero1: 0, zero2: 0, zero4: 0, h, k, a: &a, d: &d, f: &f };
        let out = lemma22_build(&inp, Exec::Sequential).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let elems = out.elements();
        let ix = out.product.indexing();
        for &e in &elems {
            let tuple = ix.decode(e);
            prop_assert!(!type_tags(&inp, &tuple).is_empty());
            prop_assert!(f.contains(&tuple[2..]));
        }
        let set: std::collections::HashSet<usize> = elems.iter().copied().collect();
        let mut state = salt | 1;
        for _ in 0..500 {
            let args: Vec<Vec<usize>> = (0..m)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    ix.decode(elems[(state % elems.len() as u64) as usize])
                })
                .collect();
            let img = out.product.apply_tuples(0, &args);
            prop_assert!(set.contains(&ix.encode(&img).unwrap()));
        }
        Ok(())
    });
    check(&mut bad, r.is_ok(), format!("descending construction closure: {r:?}"));

    let mut certs: Vec<Certificate> = Vec::new();
    for (m, q) in [(3, 2), (4, 2), (5, 3), (6, 2)] {
        certs.push(verify_prop41(SharpnessParams::new(m, q).unwrap(), EXEC).unwrap());
        certs.push(verify_induction(m, q, EXEC).unwrap());
    }
    let src = TripleSource::Sharpness { m: 4, q: 3 };
    certs.push(certify_identity(&src, Family::Eq33, IdentityParams::mq(4, 3), true, None, EXEC).unwrap());
    certs.push(certify_identity(&src, Family::Eq38, IdentityParams::mq(4, 3), false, None, EXEC).unwrap());
    let ind = TripleSource::Induction { m: 6, q: 2, j: 3 };
    certs.push(certify_identity(&ind, Family::Eq35, IdentityParams { j: Some(3), ..IdentityParams::mq(6, 2) }, true, None, EXEC).unwrap());
    let n24 = load_fixtures("N:2:4").unwrap();
    certs.push(certify_level(&n24, ChainPreset::Jonsson, 40, Some(LevelExpectation::Exactly(4)), Caps::default(), EXEC).unwrap());
    certs.push(certify_level(&n24, ChainPreset::HagemannMitschke, 40, Some(LevelExpectation::Absent), Caps::default(), EXEC).unwrap());
    certs.push(certify_search(&n24, AbsorptionPreset::Nu { arity: 3 }, false, Caps::default(), EXEC).unwrap());
    certs.push(certify_search(&n24, AbsorptionPreset::Nu { arity: 4 }, true, Caps::default(), EXEC).unwrap());
    let (ld2, d) = basic("ld2", "d");
    let e = ArityTerm::basic(&ld2[0], "e").unwrap();
    certs.push(run_toolkit(&ld2, Construction::Coprime, &d, Some(&e), Caps::default(), EXEC).unwrap());
    let mut kinds: HashMap<&str, usize> = HashMap::new();
    for c in &certs {
        match recheck(c) {
            Ok(r) => *kinds.entry(r.kind).or_default() += 1,
            Err(err) => bad.push(format!("recheck of {:?}: {err}", c.claim)),
        }
        check(&mut bad, c.is_verified(), format!("{} not verified", c.claim));
    }
    check(&mut bad, kinds.len() == 6, format!("recheck covered {kinds:?}"));
    report(9, "meet substitution (500), congruence generation, order statistics, descending construction (200), certificate recheck", t, Duration::from_secs(600), &bad);
}

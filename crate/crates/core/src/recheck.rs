//! Replays the evidence of a certificate with evaluators that share no code
//! with the engines that produced it: terms are interpreted node by node,
//! relations are evaluated as images of single points, and searches are
//! re-run sequentially.

use std::collections::{HashMap, HashSet};

use serde_json::Value;

use crate::algebra::FiniteAlgebra;
use crate::certificate::{field, Certificate, Verdict};
use crate::claims::{realize_triple, reported_level, LevelExpectation, TripleSource, IDENTITY_CLAIM, LEVEL_CLAIM, SEARCH_CLAIM};
use crate::constructions::{
    a_tuple, coordinates, d_tuple, factor_congruences, is_good_tuple, run_section3_induction, SharpnessParams,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::free::Caps;
use crate::identity::{identity_sides, CheckMode, Family, IdentityInstance, IdentityParams, IdentityVerdict, ALPHA};
use crate::relation::RelExpr;
use crate::search::{
    absorption_search, chain_level, AbsorptionOutcome, AbsorptionPreset, ChainOutcome, ChainPreset, ChainScheme,
};
use crate::term::{Equation, Term};
use crate::toolkit::{compose_pair, compose_power, coprime_exponents, maltsev_from, nu_from_pair, ArityTerm, Construction, ToolkitOutput};

/// Largest universe on which a claimed inclusion is replayed pointwise.
pub const FULL_RECHECK_LIMIT: usize = 4000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecheckReport {
    pub kind: &'static str,
    pub checks: Vec<String>,
}

fn fail(step: &str, detail: impl Into<String>) -> Error {
    Error::verification(format!("recheck {step}"), detail)
}

fn ensure(ok: bool, step: &str, detail: impl Into<String>) -> Result<()> {
    if ok { Ok(()) } else { Err(fail(step, detail)) }
}

/// Interprets `t` directly, looking operation symbols up by name.
pub fn naive_eval(t: &Term, alg: &FiniteAlgebra, asg: &[usize]) -> Result<usize> {
    match t {
        Term::Var(i) => asg.get(*i).copied().ok_or_else(|| fail("term", format!("variable x{i} unassigned"))),
        Term::App(name, args) => {
            let op = alg
                .ops()
                .iter()
                .find(|o| &o.name == name)
                .ok_or_else(|| fail("term", format!("no operation {name} in {}", alg.label())))?;
            if op.arity != args.len() {
                return Err(fail("term", format!("{name} takes {} arguments, got {}", op.arity, args.len())));
            }
            let vals = args.iter().map(|a| naive_eval(a, alg, asg)).collect::<Result<Vec<_>>>()?;
            let idx = vals.iter().fold(0, |acc, &v| acc * alg.size() + v);
            Ok(op.table[idx] as usize)
        }
    }
}

/// Checks every equation under every assignment, counting assignments with
/// a plain base-`n` counter.
pub fn naive_check(eqs: &[Equation], gens: &[FiniteAlgebra]) -> Result<()> {
    for alg in gens {
        let n = alg.size();
        for eq in eqs {
            let vars = eq.var_bound();
            let total = n.checked_pow(vars as u32).ok_or_else(|| fail("equations", "too many assignments"))?;
            let mut asg = vec![0; vars];
            for code in 0..total {
                let mut c = code;
                for slot in asg.iter_mut().rev() {
                    *slot = c % n;
                    c /= n;
                }
                let (l, r) = (naive_eval(&eq.lhs, alg, &asg)?, naive_eval(&eq.rhs, alg, &asg)?);
                if l != r {
                    return Err(fail("equations", format!("{eq} fails in {} at {asg:?}", alg.label())));
                }
            }
        }
    }
    Ok(())
}

/// Block labels of α, β, γ on a common universe.
struct Labels<'a> {
    env: [&'a [u32]; 3],
    n: usize,
}

impl Labels<'_> {
    /// All `y` with `(x, y)` in the relation.
    fn image(&self, e: &RelExpr, x: usize, memo: &mut HashMap<(usize, usize), Vec<bool>>) -> Vec<bool> {
        let key = (e as *const RelExpr as usize, x);
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let out = match e {
            RelExpr::Cong(i) => {
                let l = self.env[*i];
                (0..self.n).map(|y| l[y] == l[x]).collect()
            }
            RelExpr::Identity => (0..self.n).map(|y| y == x).collect(),
            RelExpr::Meet(a, b) => {
                let (ia, ib) = (self.image(a, x, memo), self.image(b, x, memo));
                ia.iter().zip(&ib).map(|(&p, &q)| p && q).collect()
            }
            RelExpr::Compose(items) => {
                let mut cur: Vec<bool> = (0..self.n).map(|y| y == x).collect();
                for it in items {
                    cur = self.step(it, &cur, memo);
                }
                cur
            }
            RelExpr::Power(a, k) => {
                let mut cur: Vec<bool> = (0..self.n).map(|y| y == x).collect();
                for _ in 0..*k {
                    cur = self.step(a, &cur, memo);
                }
                cur
            }
        };
        memo.insert(key, out.clone());
        out
    }

    fn step(&self, e: &RelExpr, from: &[bool], memo: &mut HashMap<(usize, usize), Vec<bool>>) -> Vec<bool> {
        let mut next = vec![false; self.n];
        for (s, _) in from.iter().enumerate().filter(|(_, &b)| b) {
            for (y, b) in self.image(e, s, memo).into_iter().enumerate() {
                next[y] |= b;
            }
        }
        next
    }
}

fn pair_is_counterexample(l: &Labels, lhs: &RelExpr, rhs: &RelExpr, x: usize, y: usize) -> bool {
    let mut memo = HashMap::new();
    l.image(lhs, x, &mut memo)[y] && !l.image(rhs, x, &mut memo)[y]
}

pub fn recheck(cert: &Certificate) -> Result<RecheckReport> {
    let kind = cert.claim.split(':').next().unwrap_or_default().trim();
    match kind {
        "sharpness" => recheck_sharpness(cert),
        "induction" => recheck_induction(cert),
        k if k == IDENTITY_CLAIM => recheck_identity(cert),
        k if k == LEVEL_CLAIM => recheck_level(cert),
        k if k == SEARCH_CLAIM => recheck_search(cert),
        "lone-dissent toolkit" => recheck_toolkit(cert),
        other => Err(Error::invalid(format!("unknown certificate kind {other:?}"))),
    }
}

fn tuple_field(v: &Value, key: &str) -> Result<Vec<usize>> {
    field(v, key)
}

fn good_elements(p: &SharpnessParams) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = coordinates(p).iter().map(|c| c.size).collect();
    let total: usize = sizes.iter().product();
    let mut out = Vec::new();
    let mut t = vec![0; sizes.len()];
    for code in 0..total {
        let mut c = code;
        for (slot, &s) in t.iter_mut().zip(&sizes).rev() {
            *slot = c % s;
            c /= s;
        }
        if is_good_tuple(p, &t) {
            out.push(t.clone());
        }
    }
    out
}

/// Element labels of α, β, γ from coordinatewise congruences.
fn product_labels(tuples: &[Vec<usize>], coord: &[Vec<crate::partition::Partition>; 3]) -> [Vec<u32>; 3] {
    let mut out: [Vec<u32>; 3] = Default::default();
    for (k, parts) in coord.iter().enumerate() {
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
        out[k] = tuples
            .iter()
            .map(|t| {
                let key: Vec<usize> = t.iter().zip(parts).map(|(&x, p)| p.block_of(x)).collect();
                let next = ids.len() as u32;
                *ids.entry(key).or_insert(next)
            })
            .collect();
    }
    out
}

fn relation_for(name: &str) -> Result<RelExpr> {
    use crate::identity::{BETA, GAMMA};
    let c = RelExpr::Cong;
    Ok(match name {
        "α" => c(ALPHA),
        "β" => c(BETA),
        "γ" => c(GAMMA),
        "αβ" => RelExpr::meet(c(ALPHA), c(BETA)),
        "αγ" => RelExpr::meet(c(ALPHA), c(GAMMA)),
        _ => return Err(fail("sharpness", format!("unknown step {name}"))),
    })
}

fn related(l: &Labels, e: &RelExpr, x: usize, y: usize) -> bool {
    l.image(e, x, &mut HashMap::new())[y]
}

fn recheck_sharpness(cert: &Certificate) -> Result<RecheckReport> {
    let p = SharpnessParams::new(cert.param("m")?, cert.param("q")?)?;
    let ev = &cert.evidence;
    let mut checks = Vec::new();
    ensure(cert.verdict == Verdict::Verified, "sharpness", "certificate is not a verified claim")?;
    let problems: Vec<String> = field(ev, "problems")?;
    ensure(problems.is_empty(), "sharpness", format!("recorded problems: {problems:?}"))?;
    let good = good_elements(&p);
    ensure(good.len() == field::<usize>(ev, "b_size")?, "sharpness", "size of B differs")?;
    checks.push(format!("B({},{}) has {} good elements", p.m, p.q, good.len()));
    let index: HashMap<&[usize], usize> = good.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let [fa, fb, fg] = factor_congruences(&p)?;
    let labels = product_labels(&good, &[fa, fb, fg]);
    let l = Labels { env: [&labels[0], &labels[1], &labels[2]], n: good.len() };
    let a = tuple_field(&ev["a"], "tuple")?;
    let d = tuple_field(&ev["d"], "tuple")?;
    ensure(a == a_tuple(&p) && d == d_tuple(&p), "sharpness", "a or d is not the canonical element")?;
    let lookup = |t: &Vec<usize>| index.get(t.as_slice()).copied().ok_or_else(|| fail("sharpness", format!("{t:?} is not good")));
    let (ia, id) = (lookup(&a)?, lookup(&d)?);
    ensure(related(&l, &RelExpr::Cong(ALPHA), ia, id), "sharpness", "a, d not α-related")?;
    let chain: Vec<Value> = field(ev, "lhs_chain")?;
    let chain: Vec<usize> = chain.iter().map(|c| tuple_field(c, "tuple").and_then(|t| lookup(&t))).collect::<Result<_>>()?;
    let steps: Vec<String> = field(ev, "lhs_chain_steps")?;
    ensure(chain.len() == steps.len() + 1 && chain[0] == ia && chain[chain.len() - 1] == id, "sharpness", "chain endpoints")?;
    for (k, s) in steps.iter().enumerate() {
        ensure(related(&l, &relation_for(s)?, chain[k], chain[k + 1]), "sharpness", format!("chain step {k} ({s})"))?;
    }
    checks.push(format!("(a,d) joined by the {}-step chain", steps.len()));
    let instances: Vec<IdentityInstance> = field(ev, "identities")?;
    ensure(!instances.is_empty(), "sharpness", "no identities recorded")?;
    for inst in &instances {
        let (lhs, rhs) = identity_sides(inst.family, &inst.params)?;
        ensure(inst.verdict == IdentityVerdict::Fails, "sharpness", format!("{} not recorded as failing", inst.family))?;
        ensure(
            pair_is_counterexample(&l, &lhs, &rhs, ia, id),
            "sharpness",
            format!("(a,d) is not a counterexample to {}", inst.family),
        )?;
        checks.push(format!("{} fails at (a,d)", inst.family));
    }
    if let Some(canon) = ev.get("canonical_chain") {
        let canon: Vec<Value> = serde_json::from_value(canon.clone()).map_err(|e| fail("sharpness", e.to_string()))?;
        let idx: Vec<usize> = canon.iter().map(|c| tuple_field(c, "tuple").and_then(|t| lookup(&t))).collect::<Result<_>>()?;
        ensure(idx[0] == ia && idx[idx.len() - 1] == id, "sharpness", "canonical chain endpoints")?;
        for k in 0..idx.len() - 1 {
            let name = if k % 2 == 0 { "αβ" } else { "αγ" };
            ensure(related(&l, &relation_for(name)?, idx[k], idx[k + 1]), "sharpness", format!("canonical step {k}"))?;
        }
        checks.push(format!("canonical chain of {} factors alternates αβ, αγ", idx.len() - 1));
    }
    Ok(RecheckReport { kind: "sharpness", checks })
}

fn recheck_induction(cert: &Certificate) -> Result<RecheckReport> {
    let (m, q): (usize, usize) = (cert.param("m")?, cert.param("q")?);
    let levels: Vec<Value> = cert.evidence_field("levels")?;
    let states = run_section3_induction(m, q, Exec::Sequential)?;
    ensure(states.len() == levels.len(), "induction", "number of levels differs")?;
    let mut checks = Vec::new();
    for (s, lv) in states.iter().zip(&levels) {
        ensure(s.j == field::<usize>(lv, "j")?, "induction", "level order")?;
        ensure(s.elements.len() == field::<usize>(lv, "f_size")?, "induction", format!("size at j = {}", s.j))?;
        ensure(s.witness_tuples() == field::<Vec<Vec<usize>>>(lv, "witness_tuples")?, "induction", "witness tuples")?;
        let inst: IdentityInstance = field(lv, "failure")?;
        let (x, y) = inst.counterexample.ok_or_else(|| fail("induction", "missing counterexample"))?;
        let env = [s.alpha.block_ids(), s.beta.block_ids(), s.gamma.block_ids()];
        let l = Labels { env, n: s.elements.len() };
        let (lhs, rhs) = identity_sides(inst.family, &inst.params)?;
        ensure(pair_is_counterexample(&l, &lhs, &rhs, x, y), "induction", format!("j = {} pair is not a counterexample", s.j))?;
        checks.push(format!("j = {}: {} fails on {} elements", s.j, inst.family, s.elements.len()));
    }
    Ok(RecheckReport { kind: "induction", checks })
}

fn recheck_identity(cert: &Certificate) -> Result<RecheckReport> {
    let family: Family = cert.param("family")?;
    let params: IdentityParams = cert.param("params")?;
    let src: TripleSource = cert.param("triple")?;
    let expect_holds: bool = cert.param("expect_holds")?;
    let inst: IdentityInstance = cert.evidence_field("instance")?;
    ensure(inst.family == family && inst.params == params, "identity", "instance does not match parameters")?;
    let t = realize_triple(&src, Exec::Sequential)?;
    let env = [t.env[0].block_ids(), t.env[1].block_ids(), t.env[2].block_ids()];
    let l = Labels { env, n: t.env[0].size() };
    let (lhs, rhs) = identity_sides(family, &params)?;
    let mut checks = Vec::new();
    if let (Some(tuples), Some((x, y))) = (&t.tuples, inst.counterexample) {
        let recorded: Option<(Option<Vec<usize>>, Option<Vec<usize>>)> = cert.evidence_field("counterexample_tuples")?;
        ensure(
            recorded == Some((Some(tuples[x].clone()), Some(tuples[y].clone()))),
            "identity",
            "counterexample tuples differ",
        )?;
    }
    let holds = match (inst.mode, inst.counterexample) {
        (_, Some((x, y))) => {
            ensure(pair_is_counterexample(&l, &lhs, &rhs, x, y), "identity", format!("({x},{y}) is not a counterexample"))?;
            checks.push(format!("({x},{y}) lies in the left side but not the right"));
            false
        }
        (CheckMode::Pair(x, y), None) => {
            ensure(!pair_is_counterexample(&l, &lhs, &rhs, x, y), "identity", format!("({x},{y}) is a counterexample"))?;
            checks.push(format!("({x},{y}) is not a counterexample"));
            true
        }
        (CheckMode::Full, None) => {
            ensure(l.n <= FULL_RECHECK_LIMIT, "identity", format!("universe of {} exceeds the replay limit", l.n))?;
            let mut memo = HashMap::new();
            for x in 0..l.n {
                let (a, b) = (l.image(&lhs, x, &mut memo), l.image(&rhs, x, &mut memo));
                if let Some(y) = (0..l.n).find(|&y| a[y] && !b[y]) {
                    return Err(fail("identity", format!("({x},{y}) violates the claimed inclusion")));
                }
            }
            checks.push(format!("inclusion holds at all {} points", l.n));
            true
        }
    };
    ensure((holds == expect_holds) == cert.is_verified(), "identity", "verdict disagrees with the replay")?;
    Ok(RecheckReport { kind: "identity", checks })
}

fn algebras(cert: &Certificate) -> Result<Vec<FiniteAlgebra>> {
    let gens: Vec<FiniteAlgebra> = cert.param("algebras")?;
    ensure(!gens.is_empty(), "algebras", "no generating algebras")?;
    Ok(gens)
}

fn recheck_level(cert: &Certificate) -> Result<RecheckReport> {
    let gens = algebras(cert)?;
    let preset: ChainPreset = cert.param("scheme")?;
    let expect: Option<LevelExpectation> = cert.param("expect")?;
    let out: ChainOutcome = cert.evidence_field("outcome")?;
    let mut checks = Vec::new();
    let ok = match &out {
        ChainOutcome::Found { level, terms, .. } => {
            ensure(terms.len() == level + 1, "level", "chain length")?;
            naive_check(&ChainScheme::preset(preset).equations(terms), &gens)?;
            checks.push(format!("{} witness terms satisfy the {preset} equations", terms.len()));
            let again = chain_level(&gens, preset, *level, Caps::default(), Exec::Sequential)?;
            ensure(again.level() == Some(*level), "level", "sequential re-run finds a different length")?;
            checks.push(format!("sequential re-run confirms minimal length {level}"));
            let reported = reported_level(preset, *level);
            ensure(cert.evidence_field::<Option<usize>>("level")? == Some(reported), "level", "reported level")?;
            match expect {
                None => true,
                Some(LevelExpectation::Exactly(n)) => n == reported,
                Some(LevelExpectation::Absent) => false,
            }
        }
        ChainOutcome::Impossible { .. } => {
            let again = chain_level(&gens, preset, usize::MAX, Caps::default(), Exec::Sequential)?;
            ensure(matches!(again, ChainOutcome::Impossible { .. }), "level", "sequential re-run finds a chain")?;
            checks.push("sequential re-run exhausts every reachable term".into());
            expect == Some(LevelExpectation::Absent)
        }
        ChainOutcome::NotFoundUpTo { .. } => return Err(fail("level", "inconclusive outcomes carry no certificate")),
    };
    ensure(ok == cert.is_verified(), "level", "verdict disagrees with the replay")?;
    Ok(RecheckReport { kind: "level", checks })
}

fn recheck_search(cert: &Certificate) -> Result<RecheckReport> {
    let gens = algebras(cert)?;
    let preset: AbsorptionPreset = cert.param("scheme")?;
    let expect_found: bool = cert.param("expect_found")?;
    let out: AbsorptionOutcome = cert.evidence_field("outcome")?;
    let mut checks = Vec::new();
    match &out {
        AbsorptionOutcome::Found { term, .. } => {
            naive_check(&preset.scheme()?.equations(term), &gens)?;
            checks.push(format!("witness term satisfies the {preset} equations"));
        }
        AbsorptionOutcome::NotFound { explored, .. } => {
            let again = absorption_search(&gens, preset, Caps::default(), Exec::Sequential)?;
            match again {
                AbsorptionOutcome::NotFound { explored: e, .. } => {
                    ensure(e == *explored, "search", "sequential re-run explores a different subalgebra")?
                }
                AbsorptionOutcome::Found { .. } => return Err(fail("search", "sequential re-run finds a term")),
            }
            checks.push(format!("sequential re-run exhausts {explored} vectors"));
        }
    }
    ensure((out.is_found() == expect_found) == cert.is_verified(), "search", "verdict disagrees with the replay")?;
    Ok(RecheckReport { kind: "search", checks })
}

fn recheck_toolkit(cert: &Certificate) -> Result<RecheckReport> {
    let gens = algebras(cert)?;
    let construction: Construction = cert.param("construction")?;
    let inputs: Vec<Value> = cert.evidence_field("inputs")?;
    let outputs: Vec<ToolkitOutput> = cert.evidence_field("outputs")?;
    let arity_term = |v: &Value| -> Result<ArityTerm> { ArityTerm::new(field(v, "term")?, field(v, "arity")?) };
    let ins: Vec<ArityTerm> = inputs.iter().map(arity_term).collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for t in &ins {
        naive_check(&AbsorptionPreset::LoneDissent { arity: t.arity }.scheme()?.equations(&t.term), &gens)?;
    }
    checks.push(format!("{} input terms are lone-dissent", ins.len()));
    let d = &ins[0];
    let mut expected: Vec<(String, ArityTerm)> = Vec::new();
    match construction {
        Construction::Power { k } => expected.push((format!("power {k}"), compose_power(d, k)?)),
        Construction::Pair => expected.push(("pair".into(), compose_pair(d, &ins[1]))),
        Construction::Maltsev => expected.push(("maltsev".into(), maltsev_from(d)?)),
        Construction::Nu => expected.push(("nu".into(), nu_from_pair(d, &ins[1])?)),
        Construction::Coprime => {
            let e = &ins[1];
            let (k, h) = coprime_exponents(d.arity - 1, e.arity - 1)?;
            ensure((k * (d.arity - 1)).abs_diff(h * (e.arity - 1)) == 1, "toolkit", "exponents")?;
            let (dk, eh) = (compose_power(d, k)?, compose_power(e, h)?);
            let (small, large) = if dk.arity < eh.arity { (&dk, &eh) } else { (&eh, &dk) };
            let nu = nu_from_pair(small, large)?;
            expected.push((format!("d power {k}"), dk.clone()));
            expected.push((format!("e power {h}"), eh.clone()));
            expected.push(("nu".into(), nu));
            expected.push(("maltsev".into(), maltsev_from(d)?));
        }
    }
    let roles: HashSet<&str> = outputs.iter().map(|o| o.role.as_str()).collect();
    for (role, t) in &expected {
        let o = outputs
            .iter()
            .find(|o| &o.role == role)
            .ok_or_else(|| fail("toolkit", format!("missing output {role}")))?;
        ensure(o.term == t.term && o.arity == t.arity, "toolkit", format!("{role} differs from its construction"))?;
    }
    for o in &outputs {
        ensure(o.holds, "toolkit", format!("{} recorded as failing", o.role))?;
        naive_check(&o.schema.scheme()?.equations(&o.term), &gens)?;
        checks.push(format!("{} ({}) satisfies the {} equations", o.role, o.arity, o.schema));
    }
    let extra = roles.len() - expected.len();
    ensure(extra == usize::from(roles.contains("majority")), "toolkit", "unexpected outputs")?;
    ensure(cert.is_verified(), "toolkit", "certificate is not a verified claim")?;
    Ok(RecheckReport { kind: "toolkit", checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_ujm_reduct;
    use crate::claims::{certify_identity, certify_level, certify_search};
    use crate::constructions::{verify_induction, verify_prop41};

    #[test]
    fn replays_each_kind() {
        let c = verify_prop41(SharpnessParams::new(4, 2).unwrap(), Exec::Parallel).unwrap();
        assert_eq!(recheck(&c).unwrap().kind, "sharpness");
        let c = verify_induction(5, 3, Exec::Parallel).unwrap();
        recheck(&c).unwrap();
        let n23 = vec![make_ujm_reduct(2, 2, 3).unwrap()];
        let c = certify_level(&n23, ChainPreset::Jonsson, 8, None, Caps::default(), Exec::Parallel).unwrap();
        recheck(&c).unwrap();
        let c = certify_search(&n23, AbsorptionPreset::Maltsev, false, Caps::default(), Exec::Parallel).unwrap();
        recheck(&c).unwrap();
        let src = TripleSource::Sharpness { m: 3, q: 3 };
        let c = certify_identity(&src, Family::Eq33, IdentityParams::mq(3, 3), true, None, Exec::Parallel).unwrap();
        recheck(&c).unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = verify_prop41(SharpnessParams::new(3, 2).unwrap(), Exec::Parallel).unwrap();
        c.evidence["lhs_chain"][1]["tuple"] = serde_json::json!([0, 0]);
        assert!(recheck(&c).is_err());
        let n23 = vec![make_ujm_reduct(2, 2, 3).unwrap()];
        let mut c = certify_search(&n23, AbsorptionPreset::Nu { arity: 3 }, true, Caps::default(), Exec::Parallel).unwrap();
        c.evidence["outcome"]["term"] = serde_json::json!("x0");
        assert!(recheck(&c).is_err());
        let mut c = certify_level(&n23, ChainPreset::Jonsson, 8, None, Caps::default(), Exec::Parallel).unwrap();
        c.verdict = Verdict::Refuted;
        assert!(recheck(&c).is_err());
    }
}

//! The congruence-identity families and their evaluation on named triples
//! `(α, β, γ)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::partition::{is_congruence, Partition};
use crate::relation::{first_counterexample, witness_path, RelExpr, RowEvaluator};

pub const ALPHA: usize = 0;
pub const BETA: usize = 1;
pub const GAMMA: usize = 2;
pub const NAMES: [&str; 3] = ["α", "β", "γ"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "n-distributive")]
    NDistributive,
    #[serde(rename = "n-alvin")]
    NAlvin,
    #[serde(rename = "eq3.2")]
    Eq32,
    #[serde(rename = "eq3.3")]
    Eq33,
    #[serde(rename = "eq3.4")]
    Eq34,
    #[serde(rename = "eq3.5")]
    Eq35,
    #[serde(rename = "eq3.7")]
    Eq37,
    #[serde(rename = "eq3.8")]
    Eq38,
    #[serde(rename = "eq3.7-swapped")]
    Eq37Swapped,
    #[serde(rename = "eq3.8-swapped")]
    Eq38Swapped,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::NDistributive,
        Family::NAlvin,
        Family::Eq32,
        Family::Eq33,
        Family::Eq34,
        Family::Eq35,
        Family::Eq37,
        Family::Eq38,
        Family::Eq37Swapped,
        Family::Eq38Swapped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::NDistributive => "n-distributive",
            Family::NAlvin => "n-alvin",
            Family::Eq32 => "eq3.2",
            Family::Eq33 => "eq3.3",
            Family::Eq34 => "eq3.4",
            Family::Eq35 => "eq3.5",
            Family::Eq37 => "eq3.7",
            Family::Eq38 => "eq3.8",
            Family::Eq37Swapped => "eq3.7-swapped",
            Family::Eq38Swapped => "eq3.8-swapped",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown identity family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exponent: Option<usize>,
}

impl IdentityParams {
    pub fn mq(m: usize, q: usize) -> Self {
        IdentityParams {
            m: Some(m),
            q: Some(q),
            ..Default::default()
        }
    }

    pub fn n(n: usize) -> Self {
        IdentityParams {
            n: Some(n),
            ..Default::default()
        }
    }
}

fn need(v: Option<usize>, name: &str, family: Family) -> Result<usize> {
    v.ok_or_else(|| Error::invalid(format!("{family} needs parameter {name}")))
}

fn cong(i: usize) -> RelExpr {
    RelExpr::Cong(i)
}

fn alpha_meet(i: usize) -> RelExpr {
    RelExpr::meet(cong(ALPHA), cong(i))
}

/// `β ∘ M ∘ γ•` under α, the middle alternating αγ, αβ, … with `q − 2` terms.
fn bulleted_lhs(q: usize) -> RelExpr {
    let (_beta_b, gamma_b) = bullets(q);
    let mut items = vec![cong(BETA)];
    for i in 2..q {
        items.push(if i % 2 == 0 { alpha_meet(GAMMA) } else { alpha_meet(BETA) });
    }
    items.push(cong(gamma_b));
    RelExpr::meet(cong(ALPHA), RelExpr::Compose(items))
}

/// `(β•, γ•)`: unchanged for even `q`, exchanged for odd `q`.
pub fn bullets(q: usize) -> (usize, usize) {
    if q % 2 == 0 {
        (BETA, GAMMA)
    } else {
        (GAMMA, BETA)
    }
}

fn bulleted_rhs(q: usize, exponent: usize) -> RelExpr {
    let block = RelExpr::meet(cong(ALPHA), RelExpr::alternating(cong(GAMMA), cong(BETA), q));
    RelExpr::power(block, exponent)
}

/// Left and right sides of the requested identity over slots α, β, γ.
pub fn identity_sides(family: Family, p: &IdentityParams) -> Result<(RelExpr, RelExpr)> {
    let get_mq = || -> Result<(usize, usize)> {
        let m = need(p.m, "m", family)?;
        let q = need(p.q, "q", family)?;
        if m < 3 {
            return Err(Error::invalid(format!("m = {m} must be at least 3")));
        }
        if q < 2 {
            return Err(Error::invalid(format!("q = {q} must be at least 2")));
        }
        Ok((m, q))
    };
    let beta_gamma = RelExpr::meet(cong(ALPHA), RelExpr::Compose(vec![cong(BETA), cong(GAMMA)]));
    Ok(match family {
        Family::NDistributive | Family::NAlvin => {
            let n = need(p.n, "n", family)?;
            let (a, b) = if family == Family::NDistributive { (BETA, GAMMA) } else { (GAMMA, BETA) };
            (beta_gamma, RelExpr::alternating(alpha_meet(a), alpha_meet(b), n))
        }
        Family::Eq32 => {
            let m = need(p.m, "m", family)?;
            if m < 3 {
                return Err(Error::invalid(format!("m = {m} must be at least 3")));
            }
            let e = p.exponent.unwrap_or(m - 2);
            (beta_gamma, bulleted_rhs(2, e))
        }
        Family::Eq33 => {
            let (m, q) = get_mq()?;
            (bulleted_lhs(q), bulleted_rhs(q, p.exponent.unwrap_or(m - 2)))
        }
        Family::Eq35 => {
            let (m, q) = get_mq()?;
            let j = need(p.j, "j", family)?;
            let ell = if m % 2 == 1 { (m + 1) / 2 } else { m / 2 };
            if j < 2 || j > ell {
                return Err(Error::invalid(format!("j = {j} outside 2..={ell}")));
            }
            (bulleted_lhs(q), bulleted_rhs(q, p.exponent.unwrap_or(m + 2 - 2 * j)))
        }
        Family::Eq34 => {
            let (m, q) = get_mq()?;
            if q % 2 == 0 || q < 3 {
                return Err(Error::invalid(format!("eq3.4 needs odd q ≥ 3, got {q}")));
            }
            let e = p.exponent.unwrap_or(m - 2);
            let inner = RelExpr::meet(cong(ALPHA), RelExpr::alternating(cong(BETA), alpha_meet(GAMMA), q - 2));
            let block = RelExpr::Compose(vec![inner, alpha_meet(GAMMA)]);
            (
                bulleted_lhs(q),
                RelExpr::Compose(vec![alpha_meet(GAMMA), RelExpr::power(block, e)]),
            )
        }
        Family::Eq37 | Family::Eq37Swapped | Family::Eq38 | Family::Eq38Swapped => {
            let (m, q) = get_mq()?;
            let even = matches!(family, Family::Eq37 | Family::Eq37Swapped);
            if even != (q % 2 == 0) {
                return Err(Error::invalid(format!("{family} needs {} q, got {q}", if even { "even" } else { "odd" })));
            }
            let count = if even { (m - 2) * q } else { 1 + (m - 2) * (q - 1) };
            let lhs = RelExpr::meet(cong(ALPHA), RelExpr::alternating(cong(BETA), cong(GAMMA), q));
            let swapped = matches!(family, Family::Eq37Swapped | Family::Eq38Swapped);
            let (a, b) = if swapped { (GAMMA, BETA) } else { (BETA, GAMMA) };
            (lhs, RelExpr::alternating(alpha_meet(a), alpha_meet(b), count))
        }
    })
}

/// Where to look for a counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    /// Scan every pair; report the least counterexample.
    Full,
    /// Decide only whether this pair is a counterexample.
    Pair(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityVerdict {
    Holds,
    Fails,
    /// Pair mode only: the given pair is not a counterexample.
    PairNotCounterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityInstance {
    pub family: Family,
    pub params: IdentityParams,
    pub lhs: String,
    pub rhs: String,
    pub mode: CheckMode,
    pub verdict: IdentityVerdict,
    pub counterexample: Option<(usize, usize)>,
    /// Element path through the composition inside the LHS meet.
    pub lhs_witness: Option<Vec<usize>>,
}

/// The congruences named by the composition inside a top-level `α ∧ (…)`.
fn lhs_steps(lhs: &RelExpr, env: &[Partition]) -> Result<Vec<Partition>> {
    let RelExpr::Meet(_, inner) = lhs else {
        return Err(Error::invalid("left side is not a meet with α"));
    };
    let items: Vec<RelExpr> = match inner.as_ref() {
        RelExpr::Compose(items) => items.clone(),
        other => vec![other.clone()],
    };
    let mut out = Vec::new();
    for it in items {
        let p = match it {
            RelExpr::Cong(i) => env[i].clone(),
            RelExpr::Meet(a, b) => match (*a, *b) {
                (RelExpr::Cong(i), RelExpr::Cong(k)) => env[i].meet(&env[k])?,
                _ => return Err(Error::invalid("nested meet in left side")),
            },
            _ => return Err(Error::invalid("unsupported left-side factor")),
        };
        out.push(p);
    }
    Ok(out)
}

pub fn lhs_witness_path(lhs: &RelExpr, env: &[Partition], x: usize, y: usize) -> Result<Option<Vec<usize>>> {
    if !env[ALPHA].related(x, y) {
        return Ok(None);
    }
    let owned = lhs_steps(lhs, env)?;
    let steps: Vec<&Partition> = owned.iter().collect();
    Ok(witness_path(&steps, x, y))
}

/// Evaluates an identity on `(α, β, γ)`; when `alg` is given the three
/// partitions are first verified to be congruences of it.
pub fn check_identity<A: Algebra + ?Sized>(
    family: Family,
    params: IdentityParams,
    triple: [&Partition; 3],
    alg: Option<&A>,
    mode: CheckMode,
    exec: Exec,
) -> Result<IdentityInstance> {
    let env: Vec<Partition> = triple.iter().map(|&p| p.clone()).collect();
    let n = env[0].size();
    if env.iter().any(|p| p.size() != n) {
        return Err(Error::invalid("α, β, γ live on different universes"));
    }
    if let Some(alg) = alg {
        for (k, p) in env.iter().enumerate() {
            if let Some(v) = is_congruence(alg, p)? {
                return Err(Error::invalid(format!(
                    "{} is not a congruence: op {} position {} pair {:?}",
                    NAMES[k], v.op, v.position, v.pair
                )));
            }
        }
    }
    let (lhs, rhs) = identity_sides(family, &params)?;
    let l = RowEvaluator::new(&lhs, &env)?;
    let r = RowEvaluator::new(&rhs, &env)?;
    let counterexample = match mode {
        CheckMode::Full => first_counterexample(&l, &r, exec),
        CheckMode::Pair(x, y) => {
            if x >= n || y >= n {
                return Err(Error::invalid(format!("pair ({x},{y}) out of range {n}")));
            }
            (l.contains(x, y) && !r.contains(x, y)).then_some((x, y))
        }
    };
    let verdict = match (counterexample, mode) {
        (Some(_), _) => IdentityVerdict::Fails,
        (None, CheckMode::Full) => IdentityVerdict::Holds,
        (None, CheckMode::Pair(..)) => IdentityVerdict::PairNotCounterexample,
    };
    let lhs_witness = match counterexample {
        Some((x, y)) => lhs_witness_path(&lhs, &env, x, y)?,
        None => None,
    };
    Ok(IdentityInstance {
        family,
        params,
        lhs: lhs.render(&NAMES),
        rhs: rhs.render(&NAMES),
        mode,
        verdict,
        counterexample,
        lhs_witness,
    })
}

/// Re-verifies stored evidence by full matrix evaluation (or row evaluation
/// when the universe is too large for matrices).
pub fn recheck_instance(inst: &IdentityInstance, triple: [&Partition; 3], exec: Exec) -> Result<()> {
    let env: Vec<Partition> = triple.iter().map(|&p| p.clone()).collect();
    let (lhs, rhs) = identity_sides(inst.family, &inst.params)?;
    let n = env[0].size();
    let matrices = n <= 1500;
    let (in_lhs, in_rhs): (Box<dyn Fn(usize, usize) -> bool>, Box<dyn Fn(usize, usize) -> bool>) = if matrices {
        let lm = lhs.eval_matrix(&env, exec)?;
        let rm = rhs.eval_matrix(&env, exec)?;
        if inst.verdict == IdentityVerdict::Holds {
            if let Some(p) = lm.first_pair_outside(&rm)? {
                return Err(Error::verification("recheck", format!("inclusion claimed but {p:?} violates it")));
            }
        }
        (Box::new(move |x, y| lm.contains(x, y)), Box::new(move |x, y| rm.contains(x, y)))
    } else {
        if inst.verdict == IdentityVerdict::Holds {
            return Err(Error::verification("recheck", "full inclusion on a large universe is not rechecked"));
        }
        let l = RowEvaluator::new(&lhs, &env)?;
        let r = RowEvaluator::new(&rhs, &env)?;
        (Box::new(move |x, y| l.contains(x, y)), Box::new(move |x, y| r.contains(x, y)))
    };
    if let Some((x, y)) = inst.counterexample {
        if !in_lhs(x, y) || in_rhs(x, y) {
            return Err(Error::verification("recheck", format!("pair ({x},{y}) is not a counterexample")));
        }
        if let Some(path) = &inst.lhs_witness {
            let steps = lhs_steps(&lhs, &env)?;
            if path.len() != steps.len() + 1 || path[0] != x || *path.last().unwrap() != y {
                return Err(Error::verification("recheck", "witness path has wrong shape"));
            }
            for (k, p) in steps.iter().enumerate() {
                if !p.related(path[k], path[k + 1]) {
                    return Err(Error::verification("recheck", format!("witness step {k} not related")));
                }
            }
        }
    } else if inst.verdict == IdentityVerdict::Fails {
        return Err(Error::verification("recheck", "failure without counterexample"));
    }
    Ok(())
}

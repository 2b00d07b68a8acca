//! Composite terms built from lone-dissent terms: powers, pairwise
//! compositions, a Maltsev term and a near-unanimity term.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::FiniteAlgebra;
use crate::certificate::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::free::Caps;
use crate::search::{absorption_search, verify_absorption, AbsorptionOutcome, AbsorptionPreset};
use crate::term::Term;

/// A term together with the number of variables it is meant to take.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArityTerm {
    pub term: Term,
    pub arity: usize,
}

impl ArityTerm {
    pub fn new(term: Term, arity: usize) -> Result<Self> {
        if term.var_bound() > arity {
            return Err(Error::invalid(format!("term {term} uses more than {arity} variables")));
        }
        Ok(ArityTerm { term, arity })
    }

    /// The basic operation `name` of `alg` applied to `x0, …`.
    pub fn basic(alg: &FiniteAlgebra, name: &str) -> Result<Self> {
        let op = alg
            .op_index(name)
            .ok_or_else(|| Error::invalid(format!("algebra {} has no operation {name:?}", alg.label())))?;
        let arity = alg.ops()[op].arity;
        Ok(ArityTerm {
            term: Term::basic(name, &(0..arity).collect::<Vec<_>>()),
            arity,
        })
    }

    fn apply(&self, args: &[Term]) -> Term {
        debug_assert_eq!(args.len(), self.arity);
        self.term.substitute(args)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum Construction {
    /// `d(d(…(d(x, …), …), …)` nested `k` times.
    Power { k: usize },
    /// `d(e(x_0, …), x_{n+1}, …)`.
    Pair,
    /// `d(x, y, …, y, z)`.
    Maltsev,
    /// The outer `e` applied to every `d` omitting one variable.
    Nu,
    /// Powers of `d` and `e` whose dissent counts differ by one, then the
    /// near-unanimity and Maltsev terms from them.
    Coprime,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Power { .. } => "power",
            Construction::Pair => "pair",
            Construction::Maltsev => "maltsev",
            Construction::Nu => "nu",
            Construction::Coprime => "coprime",
        }
    }

    fn needs_second(self) -> bool {
        matches!(self, Construction::Pair | Construction::Nu | Construction::Coprime)
    }
}

/// `k`-fold self-composition through the first argument; arity `k(a−1)+1`.
pub fn compose_power(d: &ArityTerm, k: usize) -> Result<ArityTerm> {
    if k == 0 {
        return Err(Error::invalid("power k must be at least 1"));
    }
    let mut acc = d.clone();
    for _ in 1..k {
        acc = compose_pair(d, &acc);
    }
    Ok(acc)
}

/// `d(e(x_0, …, x_n), x_{n+1}, …, x_{n+m})`.
pub fn compose_pair(d: &ArityTerm, e: &ArityTerm) -> ArityTerm {
    let inner = e.apply(&(0..e.arity).map(Term::Var).collect::<Vec<_>>());
    let mut args = vec![inner];
    args.extend((e.arity..e.arity + d.arity - 1).map(Term::Var));
    ArityTerm {
        term: d.apply(&args),
        arity: d.arity + e.arity - 1,
    }
}

/// `t(x, y, z) = d(x, y, …, y, z)`.
pub fn maltsev_from(d: &ArityTerm) -> Result<ArityTerm> {
    if d.arity < 3 {
        return Err(Error::invalid(format!("a Maltsev term needs arity ≥ 3, got {}", d.arity)));
    }
    let mut args = vec![Term::Var(0)];
    args.extend(std::iter::repeat_n(Term::Var(1), d.arity - 2));
    args.push(Term::Var(2));
    Ok(ArityTerm {
        term: d.apply(&args),
        arity: 3,
    })
}

/// `e(d(x̂_{k+1}), …, d(x̂_0))` where `x̂_i` lists all variables but `x_i`;
/// requires `e` to take one more argument than `d`. The result takes as many
/// arguments as `e`.
pub fn nu_from_pair(d: &ArityTerm, e: &ArityTerm) -> Result<ArityTerm> {
    if e.arity != d.arity + 1 {
        return Err(Error::invalid(format!(
            "outer term must take one more argument than the inner one ({} vs {})",
            e.arity, d.arity
        )));
    }
    let n = e.arity;
    let inner: Vec<Term> = (0..n)
        .map(|p| {
            let omit = n - 1 - p;
            d.apply(&(0..n).filter(|&v| v != omit).map(Term::Var).collect::<Vec<_>>())
        })
        .collect();
    Ok(ArityTerm {
        term: e.apply(&inner),
        arity: n,
    })
}

/// Least `k ≥ 1` (with its `h ≥ 1`) such that `k·m` and `h·n` differ by one.
pub fn coprime_exponents(m: usize, n: usize) -> Result<(usize, usize)> {
    if m < 2 || n < 2 {
        return Err(Error::invalid(format!("need m, n ≥ 2, got {m}, {n}")));
    }
    if gcd(m, n) != 1 {
        return Err(Error::invalid(format!("{m} and {n} are not coprime")));
    }
    for k in 1..=n {
        let km = k * m;
        if km % n == 1 {
            return Ok((k, (km - 1) / n));
        }
        if km % n == n - 1 {
            return Ok((k, (km + 1) / n));
        }
    }
    unreachable!("m is invertible modulo n")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Fails with a named hypothesis error unless `d` is lone-dissent on every
/// generating algebra.
pub fn require_lone_dissent(gens: &[FiniteAlgebra], role: &str, d: &ArityTerm) -> Result<()> {
    let preset = AbsorptionPreset::LoneDissent { arity: d.arity };
    if let Some((alg, f)) = verify_absorption(gens, preset, &d.term)? {
        let eq = &preset.scheme()?.equations(&d.term)[f.equation];
        return Err(Error::hypothesis(
            format!("{role} lone-dissent"),
            format!(
                "{eq} fails in {} at {:?} ({} ≠ {})",
                gens[alg].label(),
                f.assignment,
                f.lhs_value,
                f.rhs_value
            ),
        ));
    }
    Ok(())
}

/// One constructed term and the schema it was checked against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolkitOutput {
    pub role: String,
    pub term: Term,
    pub arity: usize,
    pub schema: AbsorptionPreset,
    pub holds: bool,
}

/// Runs a construction on lone-dissent inputs and checks every produced term.
pub fn run_toolkit(
    gens: &[FiniteAlgebra],
    construction: Construction,
    d: &ArityTerm,
    e: Option<&ArityTerm>,
    caps: Caps,
    exec: Exec,
) -> Result<Certificate> {
    if gens.is_empty() {
        return Err(Error::invalid("no generating algebras"));
    }
    require_lone_dissent(gens, "d", d)?;
    let e = match (construction.needs_second(), e) {
        (true, Some(e)) => {
            require_lone_dissent(gens, "e", e)?;
            Some(e)
        }
        (true, None) => return Err(Error::invalid(format!("construction {} needs a second term", construction.name()))),
        (false, _) => None,
    };
    let mut planned: Vec<(String, ArityTerm, AbsorptionPreset)> = Vec::new();
    let lone = |t: &ArityTerm| AbsorptionPreset::LoneDissent { arity: t.arity };
    match construction {
        Construction::Power { k } => {
            let t = compose_power(d, k)?;
            planned.push((format!("power {k}"), t.clone(), lone(&t)));
        }
        Construction::Pair => {
            let t = compose_pair(d, e.unwrap());
            planned.push(("pair".into(), t.clone(), lone(&t)));
        }
        Construction::Maltsev => {
            planned.push(("maltsev".into(), maltsev_from(d)?, AbsorptionPreset::Maltsev));
        }
        Construction::Nu => {
            let t = nu_from_pair(d, e.unwrap())?;
            planned.push(("nu".into(), t.clone(), AbsorptionPreset::Nu { arity: t.arity }));
        }
        Construction::Coprime => {
            let e = e.unwrap();
            let (k, h) = coprime_exponents(d.arity - 1, e.arity - 1)?;
            let dk = compose_power(d, k)?;
            let eh = compose_power(e, h)?;
            let (small, large) = if dk.arity < eh.arity { (dk.clone(), eh.clone()) } else { (eh.clone(), dk.clone()) };
            planned.push((format!("d power {k}"), dk.clone(), lone(&dk)));
            planned.push((format!("e power {h}"), eh.clone(), lone(&eh)));
            let nu = nu_from_pair(&small, &large)?;
            planned.push(("nu".into(), nu.clone(), AbsorptionPreset::Nu { arity: nu.arity }));
            planned.push(("maltsev".into(), maltsev_from(d)?, AbsorptionPreset::Maltsev));
        }
    }
    let mut outputs = Vec::new();
    for (role, t, schema) in planned {
        let holds = verify_absorption(gens, schema, &t.term)?.is_none();
        outputs.push(ToolkitOutput { role, term: t.term, arity: t.arity, schema, holds });
    }
    // a near-unanimity term of any arity forces a majority term; fetch it by search
    let mut majority_stats = json!(null);
    if let Some(nu) = outputs.iter().find(|o| o.role == "nu" && o.holds && o.arity > 3).cloned() {
        let preset = AbsorptionPreset::Nu { arity: 3 };
        let out = absorption_search(gens, preset, caps, exec)?;
        match out {
            AbsorptionOutcome::Found { term, explored, coords } => {
                let holds = verify_absorption(gens, preset, &term)?.is_none();
                majority_stats = json!({ "from_nu_arity": nu.arity, "explored": explored, "coords": coords });
                outputs.push(ToolkitOutput { role: "majority".into(), term, arity: 3, schema: preset, holds });
            }
            AbsorptionOutcome::NotFound { explored, coords } => {
                majority_stats = json!({ "from_nu_arity": nu.arity, "explored": explored, "coords": coords, "found": false });
            }
        }
    }
    let all_hold = outputs.iter().all(|o| o.holds);
    let majority_ok = majority_stats.is_null() || outputs.iter().any(|o| o.role == "majority");
    let verdict = if all_hold && majority_ok { Verdict::Verified } else { Verdict::Refuted };
    let mut inputs = vec![json!({ "role": "d", "term": d.term, "arity": d.arity })];
    if let Some(e) = e {
        inputs.push(json!({ "role": "e", "term": e.term, "arity": e.arity }));
    }
    Ok(Certificate::new(
        format!("lone-dissent toolkit: {} construction yields the stated terms", construction.name()),
        json!({
            "construction": construction,
            "algebras": gens,
        }),
        verdict,
        json!({ "inputs": inputs, "outputs": outputs }),
        json!({ "majority_search": majority_stats }),
    ))
}

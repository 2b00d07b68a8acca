use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{provenance_terms, FiniteAlgebra};
use crate::closure::close;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::free::{eval_vectors, op_specs, Caps};
use crate::search::{check_on_all, instantiate};
use crate::term::{Equation, EquationFailure, Term};
use crate::tuples::Odometer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum AbsorptionPreset {
    /// `arity`-ary near-unanimity.
    Nu { arity: usize },
    /// `u(x, …, x, y, x, …, x) = y` at every position.
    LoneDissent { arity: usize },
    /// `(m+2)`-ary term with the three half-step laws.
    HalfNu { m: usize },
    /// `2m`-ary: lone dissent `y` among the first `m` arguments, lone `z`
    /// among the last `m` (otherwise `y`), output `y`.
    DissentUnanimity { m: usize },
    Maltsev,
}

impl AbsorptionPreset {
    /// Parses a scheme name plus the `--arity` style size parameter.
    pub fn parse(name: &str, size: Option<usize>) -> Result<Self> {
        let need = || size.ok_or_else(|| Error::invalid(format!("scheme {name} needs a size parameter")));
        let p = match name {
            "nu" => AbsorptionPreset::Nu { arity: need()? },
            "lone-dissent" => AbsorptionPreset::LoneDissent { arity: need()? },
            "half-nu" => AbsorptionPreset::HalfNu { m: need()? },
            "dissent-unanimity" => AbsorptionPreset::DissentUnanimity { m: need()? },
            "maltsev" => AbsorptionPreset::Maltsev,
            _ => return Err(Error::invalid(format!("unknown absorption scheme {name:?}"))),
        };
        p.scheme()?;
        Ok(p)
    }

    pub fn name(self) -> &'static str {
        match self {
            AbsorptionPreset::Nu { .. } => "nu",
            AbsorptionPreset::LoneDissent { .. } => "lone-dissent",
            AbsorptionPreset::HalfNu { .. } => "half-nu",
            AbsorptionPreset::DissentUnanimity { .. } => "dissent-unanimity",
            AbsorptionPreset::Maltsev => "maltsev",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            AbsorptionPreset::Nu { arity } | AbsorptionPreset::LoneDissent { arity } => arity,
            AbsorptionPreset::HalfNu { m } => m + 2,
            AbsorptionPreset::DissentUnanimity { m } => 2 * m,
            AbsorptionPreset::Maltsev => 3,
        }
    }

    pub fn scheme(self) -> Result<AbsorptionScheme> {
        let row = |pattern: Vec<usize>, output: Option<usize>| Row { pattern, output };
        let one_z = |k: usize, p: usize| (0..k).map(|i| usize::from(i == p)).collect::<Vec<_>>();
        let (rows, links, vars) = match self {
            AbsorptionPreset::Nu { arity } | AbsorptionPreset::LoneDissent { arity } => {
                if arity < 2 {
                    return Err(Error::invalid(format!("arity {arity} < 2")));
                }
                let out = usize::from(matches!(self, AbsorptionPreset::LoneDissent { .. }));
                ((0..arity).map(|p| row(one_z(arity, p), Some(out))).collect(), Vec::new(), 2)
            }
            AbsorptionPreset::HalfNu { m } => {
                if m < 3 {
                    return Err(Error::invalid(format!("m = {m} < 3")));
                }
                let k = m + 2;
                let mut rows = vec![row((0..k).map(|i| usize::from(i < 2)).collect(), Some(0))];
                rows.extend((0..k).map(|p| row(one_z(k, p), Some(0))));
                rows.push(row((0..k).map(|i| usize::from(i >= 3)).collect(), None));
                rows.push(row((0..k).map(|i| usize::from(i >= 1)).collect(), None));
                let n = rows.len();
                (rows, vec![(n - 2, n - 1)], 2)
            }
            AbsorptionPreset::DissentUnanimity { m } => {
                if m < 3 {
                    return Err(Error::invalid(format!("m = {m} < 3")));
                }
                let mut rows = Vec::new();
                for p in 0..m {
                    for i in 0..m {
                        let mut pat = vec![0; 2 * m];
                        pat[p] = 1;
                        for (k, slot) in pat.iter_mut().enumerate().skip(m) {
                            *slot = if k == m + i { 2 } else { 1 };
                        }
                        rows.push(row(pat, Some(1)));
                    }
                }
                (rows, Vec::new(), 3)
            }
            AbsorptionPreset::Maltsev => (vec![row(vec![0, 1, 1], Some(0)), row(vec![0, 0, 1], Some(1))], Vec::new(), 2),
        };
        Ok(AbsorptionScheme {
            preset: self,
            arity: self.arity(),
            vars,
            rows,
            links,
        })
    }
}

impl fmt::Display for AbsorptionPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsorptionPreset::Maltsev => f.write_str("maltsev"),
            AbsorptionPreset::HalfNu { m } => write!(f, "half-nu({m})"),
            AbsorptionPreset::DissentUnanimity { m } => write!(f, "dissent-unanimity({m})"),
            other => write!(f, "{}({})", other.name(), other.arity()),
        }
    }
}

impl FromStr for AbsorptionPreset {
    type Err = Error;
    /// `name` or `name:size`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((n, k)) => AbsorptionPreset::parse(n, Some(k.parse().map_err(|_| Error::invalid(format!("bad size in {s:?}")))?)),
            None => AbsorptionPreset::parse(s, None),
        }
    }
}

/// `u(x_{pattern}) = x_{output}`, or only a participant in a link when
/// `output` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub pattern: Vec<usize>,
    pub output: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionScheme {
    pub preset: AbsorptionPreset,
    pub arity: usize,
    pub vars: usize,
    pub rows: Vec<Row>,
    /// Pairs of rows whose outputs must coincide.
    pub links: Vec<(usize, usize)>,
}

impl AbsorptionScheme {
    pub fn equations(&self, t: &Term) -> Vec<Equation> {
        let mut eqs: Vec<Equation> = self
            .rows
            .iter()
            .filter_map(|r| r.output.map(|o| Equation::new(instantiate(t, &r.pattern), Term::Var(o))))
            .collect();
        for &(a, b) in &self.links {
            eqs.push(Equation::new(instantiate(t, &self.rows[a].pattern), instantiate(t, &self.rows[b].pattern)));
        }
        eqs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum AbsorptionOutcome {
    Found { term: Term, explored: usize, coords: usize },
    /// The generated subalgebra was exhausted without a satisfying vector.
    NotFound { explored: usize, coords: usize },
}

impl AbsorptionOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, AbsorptionOutcome::Found { .. })
    }
}

/// Closes the column vectors of the `arity` variables (evaluated on every
/// row and every assignment) and stops at the first vector meeting all
/// required outputs and links.
pub fn absorption_search(
    gens: &[FiniteAlgebra],
    preset: AbsorptionPreset,
    caps: Caps,
    exec: Exec,
) -> Result<AbsorptionOutcome> {
    let specs = op_specs(gens)?;
    let scheme = preset.scheme()?;
    // coordinate = (row, algebra, assignment of the scheme variables)
    let mut owner = Vec::new();
    let mut coord_row = Vec::new();
    let mut coord_asg: Vec<Vec<usize>> = Vec::new();
    let mut starts = Vec::new();
    for (r, _) in scheme.rows.iter().enumerate() {
        let mut per_alg = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            per_alg.push(owner.len());
            let mut od = Odometer::uniform(scheme.vars, a.size());
            while let Some(b) = od.next_tuple() {
                owner.push(i);
                coord_row.push(r);
                coord_asg.push(b.to_vec());
            }
        }
        starts.push(per_alg);
        if owner.len() > caps.coords {
            return Err(Error::cap("absorption coordinates", caps.coords, owner.len()));
        }
    }
    let columns: Vec<Box<[u8]>> = (0..scheme.arity)
        .map(|p| {
            (0..owner.len())
                .map(|c| coord_asg[c][scheme.rows[coord_row[c]].pattern[p]] as u8)
                .collect()
        })
        .collect();
    let required: Vec<Option<u8>> = (0..owner.len())
        .map(|c| scheme.rows[coord_row[c]].output.map(|o| coord_asg[c][o] as u8))
        .collect();
    let link_pairs: Vec<(usize, usize)> = scheme
        .links
        .iter()
        .flat_map(|&(ra, rb)| {
            let (sa, sb) = (&starts[ra], &starts[rb]);
            gens.iter().enumerate().flat_map(move |(i, a)| {
                let len = a.size().pow(scheme.vars as u32);
                (0..len).map(move |k| (sa[i] + k, sb[i] + k))
            })
        })
        .collect();
    let accept = |v: &Box<[u8]>| {
        required.iter().zip(v.iter()).all(|(r, &x)| r.is_none_or(|r| r == x))
            && link_pairs.iter().all(|&(a, b)| v[a] == v[b])
    };
    let c = close(
        columns,
        &specs,
        |op, args| eval_vectors(gens, &owner, op, args),
        caps.elements,
        exec,
        accept,
    )?;
    let coords = owner.len();
    match c.hit {
        Some(h) => {
            let names: Vec<String> = gens[0].ops().iter().map(|o| o.name.clone()).collect();
            let term = provenance_terms(&c, &names).swap_remove(h);
            Ok(AbsorptionOutcome::Found { term, explored: c.elements.len(), coords })
        }
        None => Ok(AbsorptionOutcome::NotFound { explored: c.elements.len(), coords }),
    }
}

pub fn verify_absorption(gens: &[FiniteAlgebra], preset: AbsorptionPreset, term: &Term) -> Result<Option<(usize, EquationFailure)>> {
    let scheme = preset.scheme()?;
    if term.var_bound() > scheme.arity {
        return Err(Error::invalid(format!("term {term} has more than {} variables", scheme.arity)));
    }
    check_on_all(&scheme.equations(term), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_ujm_reduct;

    fn search(gens: &[FiniteAlgebra], p: AbsorptionPreset) -> AbsorptionOutcome {
        absorption_search(gens, p, Caps::default(), Exec::Parallel).unwrap()
    }

    #[test]
    fn majority_found_for_median() {
        let n23 = [make_ujm_reduct(2, 2, 3).unwrap()];
        let out = search(&n23, AbsorptionPreset::Nu { arity: 3 });
        let AbsorptionOutcome::Found { term, .. } = out else { panic!("expected a term") };
        assert_eq!(verify_absorption(&n23, AbsorptionPreset::Nu { arity: 3 }, &term).unwrap(), None);
        assert!(!search(&n23, AbsorptionPreset::Maltsev).is_found());
    }

    #[test]
    fn no_ternary_nu_for_four_ary_reduct() {
        let n24 = [make_ujm_reduct(2, 2, 4).unwrap()];
        assert!(!search(&n24, AbsorptionPreset::Nu { arity: 3 }).is_found());
        assert!(search(&n24, AbsorptionPreset::Nu { arity: 4 }).is_found());
    }

    #[test]
    fn half_nu_scheme_shape() {
        let s = AbsorptionPreset::HalfNu { m: 3 }.scheme().unwrap();
        assert_eq!(s.arity, 5);
        assert_eq!(s.rows[0].pattern, [1, 1, 0, 0, 0]);
        assert_eq!(s.rows[s.links[0].0].pattern, [0, 0, 0, 1, 1]);
        assert_eq!(s.rows[s.links[0].1].pattern, [0, 1, 1, 1, 1]);
        assert_eq!("nu:4".parse::<AbsorptionPreset>().unwrap(), AbsorptionPreset::Nu { arity: 4 });
        assert!("nu".parse::<AbsorptionPreset>().is_err());
        assert!("half-nu:2".parse::<AbsorptionPreset>().is_err());
    }
}

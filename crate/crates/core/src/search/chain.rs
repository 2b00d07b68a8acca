use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::free::{build_free_algebra, Caps, FreeAlgebra};
use crate::search::{check_on_all, instantiate};
use crate::term::{Equation, EquationFailure, Term};
use crate::tuples::Odometer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainPreset {
    Jonsson,
    Alvin,
    Day,
    #[serde(rename = "hm")]
    HagemannMitschke,
    DirectedJonsson,
    DirectedMinority,
}

impl ChainPreset {
    pub const ALL: [ChainPreset; 6] = [
        ChainPreset::Jonsson,
        ChainPreset::Alvin,
        ChainPreset::Day,
        ChainPreset::HagemannMitschke,
        ChainPreset::DirectedJonsson,
        ChainPreset::DirectedMinority,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChainPreset::Jonsson => "jonsson",
            ChainPreset::Alvin => "alvin",
            ChainPreset::Day => "day",
            ChainPreset::HagemannMitschke => "hm",
            ChainPreset::DirectedJonsson => "directed-jonsson",
            ChainPreset::DirectedMinority => "directed-minority",
        }
    }

    /// Directed chains count their interior terms; the others count steps.
    pub fn is_directed(self) -> bool {
        matches!(self, ChainPreset::DirectedJonsson | ChainPreset::DirectedMinority)
    }
}

impl fmt::Display for ChainPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChainPreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ChainPreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown chain scheme {s:?}")))
    }
}

/// Interior terms satisfy `t(x_{pattern}) = x_{output}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRule {
    pub pattern: Vec<usize>,
    pub output: usize,
}

/// `t_i(x_{left}) = t_{i+1}(x_{right})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl ChainLink {
    fn same(p: &[usize]) -> Self {
        ChainLink { left: p.to_vec(), right: p.to_vec() }
    }

    fn vars(&self) -> usize {
        self.left.iter().chain(&self.right).max().map_or(0, |v| v + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainScheme {
    pub preset: ChainPreset,
    pub vars: usize,
    pub nodes: Vec<NodeRule>,
    /// Link used after a term with even index, then after odd index.
    pub links: [ChainLink; 2],
    pub start: usize,
    pub end: usize,
}

impl ChainScheme {
    pub fn preset(p: ChainPreset) -> Self {
        let node = |pattern: &[usize], output| vec![NodeRule { pattern: pattern.to_vec(), output }];
        let xxz = [0, 0, 1];
        let xzz = [0, 1, 1];
        let directed = ChainLink { left: xzz.to_vec(), right: xxz.to_vec() };
        let (vars, nodes, links, start, end) = match p {
            ChainPreset::Jonsson => (3, node(&[0, 1, 0], 0), [ChainLink::same(&xxz), ChainLink::same(&xzz)], 0, 2),
            ChainPreset::Alvin => (3, node(&[0, 1, 0], 0), [ChainLink::same(&xzz), ChainLink::same(&xxz)], 0, 2),
            ChainPreset::Day => (
                4,
                node(&[0, 1, 1, 0], 0),
                [ChainLink::same(&[0, 0, 1, 1]), ChainLink::same(&[0, 1, 1, 2])],
                0,
                3,
            ),
            ChainPreset::HagemannMitschke => {
                let l = ChainLink { left: xxz.to_vec(), right: xzz.to_vec() };
                (3, Vec::new(), [l.clone(), l], 0, 2)
            }
            ChainPreset::DirectedJonsson => (3, node(&[0, 1, 0], 0), [directed.clone(), directed], 0, 2),
            ChainPreset::DirectedMinority => (3, node(&[0, 1, 0], 1), [directed.clone(), directed], 2, 0),
        };
        ChainScheme { preset: p, vars, nodes, links, start, end }
    }

    /// All equations a chain `t_0, …, t_n` must satisfy.
    pub fn equations(&self, chain: &[Term]) -> Vec<Equation> {
        let n = chain.len() - 1;
        let mut eqs = vec![
            Equation::new(chain[0].clone(), Term::Var(self.start)),
            Equation::new(chain[n].clone(), Term::Var(self.end)),
        ];
        for t in chain.iter().take(n).skip(1) {
            for r in &self.nodes {
                eqs.push(Equation::new(instantiate(t, &r.pattern), Term::Var(r.output)));
            }
        }
        for i in 0..n {
            let l = &self.links[i % 2];
            eqs.push(Equation::new(instantiate(&chain[i], &l.left), instantiate(&chain[i + 1], &l.right)));
        }
        eqs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum ChainOutcome {
    Found {
        /// Number of steps `n` in `t_0, …, t_n`.
        level: usize,
        elements: Vec<usize>,
        terms: Vec<Term>,
        free_size: usize,
        candidates: usize,
    },
    /// No chain of any length exists.
    Impossible { free_size: usize, candidates: usize, explored: usize },
    /// Nothing up to `max_level`; longer chains were not ruled out.
    NotFoundUpTo { max_level: usize, free_size: usize, candidates: usize },
}

impl ChainOutcome {
    pub fn level(&self) -> Option<usize> {
        match self {
            ChainOutcome::Found { level, .. } => Some(*level),
            _ => None,
        }
    }
}

fn eval_pattern(f: &FreeAlgebra, e: usize, pattern: &[usize], vars: usize) -> Vec<u8> {
    let mut out = Vec::new();
    let mut asg = vec![0; pattern.len()];
    for (i, a) in f.gens.iter().enumerate() {
        let mut od = Odometer::uniform(vars, a.size());
        while let Some(b) = od.next_tuple() {
            for (slot, &p) in asg.iter_mut().zip(pattern) {
                *slot = b[p];
            }
            out.push(f.value(e, i, &asg) as u8);
        }
    }
    out
}

fn satisfies_nodes(f: &FreeAlgebra, e: usize, rules: &[NodeRule]) -> bool {
    rules.iter().all(|r| {
        let vars = r.pattern.iter().max().map_or(0, |v| v + 1).max(r.output + 1);
        let mut asg = vec![0; r.pattern.len()];
        f.gens.iter().enumerate().all(|(i, a)| {
            let mut od = Odometer::uniform(vars, a.size());
            while let Some(b) = od.next_tuple() {
                for (slot, &p) in asg.iter_mut().zip(&r.pattern) {
                    *slot = b[p];
                }
                if f.value(e, i, &asg) != b[r.output] {
                    return false;
                }
            }
            true
        })
    })
}

/// Breadth-first search for the shortest chain in the free algebra on
/// `scheme.vars` generators. Ties are broken by the least element sequence.
pub fn chain_level(
    gens: &[FiniteAlgebra],
    preset: ChainPreset,
    max_level: usize,
    caps: Caps,
    exec: Exec,
) -> Result<ChainOutcome> {
    let scheme = ChainScheme::preset(preset);
    let f = build_free_algebra(gens, scheme.vars, caps, exec)?;
    let n = f.size();
    let (start, end) = (f.projections[scheme.start], f.projections[scheme.end]);
    let node_ok: Vec<bool> = exec.map(n, |e| satisfies_nodes(&f, e, &scheme.nodes));
    let candidates = node_ok.iter().filter(|&&b| b).count();
    if start == end {
        return Ok(ChainOutcome::Found {
            level: 0,
            elements: vec![start],
            terms: vec![Term::Var(scheme.start)],
            free_size: n,
            candidates,
        });
    }
    let usable = |e: usize| node_ok[e] || e == end;
    // fingerprints[parity] = (outgoing, incoming) per element
    let fps: Vec<(Vec<Vec<u8>>, Vec<Vec<u8>>)> = scheme
        .links
        .iter()
        .map(|l| {
            let vars = l.vars();
            let out = exec.map(n, |e| eval_pattern(&f, e, &l.left, vars));
            let inc = exec.map(n, |e| eval_pattern(&f, e, &l.right, vars));
            (out, inc)
        })
        .collect();
    let groups: Vec<HashMap<&[u8], Vec<usize>>> = fps
        .iter()
        .map(|(_, inc)| {
            let mut g: HashMap<&[u8], Vec<usize>> = HashMap::new();
            for e in (0..n).filter(|&e| usable(e)) {
                g.entry(inc[e].as_slice()).or_default().push(e);
            }
            g
        })
        .collect();
    let mut visited = [FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(n)];
    visited[0].insert(start);
    let mut layers: Vec<Vec<usize>> = vec![vec![start]];
    let mut explored = 1;
    for step in 1..=max_level {
        let parity = (step - 1) % 2;
        let mut next = FixedBitSet::with_capacity(n);
        for &x in &layers[step - 1] {
            if let Some(succ) = groups[parity].get(fps[parity].0[x].as_slice()) {
                for &y in succ {
                    if !visited[step % 2].contains(y) {
                        next.insert(y);
                    }
                }
            }
        }
        if next.is_clear() {
            return Ok(ChainOutcome::Impossible { free_size: n, candidates, explored });
        }
        visited[step % 2].union_with(&next);
        explored += next.count_ones(..);
        let reached = next.contains(end);
        layers.push(next.ones().collect());
        if reached {
            let elements = least_chain(&layers, &fps, end);
            let terms = elements.iter().map(|&e| f.terms[e].clone()).collect();
            return Ok(ChainOutcome::Found {
                level: step,
                elements,
                terms,
                free_size: n,
                candidates,
            });
        }
    }
    Ok(ChainOutcome::NotFoundUpTo { max_level, free_size: n, candidates })
}

fn least_chain(layers: &[Vec<usize>], fps: &[(Vec<Vec<u8>>, Vec<Vec<u8>>)], end: usize) -> Vec<usize> {
    let k = layers.len() - 1;
    let linked = |i: usize, x: usize, y: usize| {
        let p = i % 2;
        fps[p].0[x] == fps[p].1[y]
    };
    let mut good: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    good[k] = vec![end];
    for i in (0..k).rev() {
        good[i] = layers[i]
            .iter()
            .copied()
            .filter(|&x| good[i + 1].iter().any(|&y| linked(i, x, y)))
            .collect();
    }
    let mut path = vec![layers[0][0]];
    for i in 0..k {
        let cur = *path.last().unwrap();
        let nxt = *good[i + 1]
            .iter()
            .filter(|&&y| linked(i, cur, y))
            .min()
            .expect("backward sets guarantee a successor");
        path.push(nxt);
    }
    path
}

/// Exhaustively checks the scheme's equations for the given chain on every
/// generating algebra.
pub fn verify_chain(gens: &[FiniteAlgebra], preset: ChainPreset, chain: &[Term]) -> Result<Option<(usize, EquationFailure)>> {
    if chain.is_empty() {
        return Err(Error::invalid("empty chain"));
    }
    let scheme = ChainScheme::preset(preset);
    if let Some(t) = chain.iter().find(|t| t.var_bound() > scheme.vars) {
        return Err(Error::invalid(format!("term {t} uses more than {} variables", scheme.vars)));
    }
    check_on_all(&scheme.equations(chain), gens)
}

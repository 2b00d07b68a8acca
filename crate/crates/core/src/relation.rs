//! Binary relations as bit matrices, and expressions over congruences that
//! can be evaluated either as full matrices or one row at a time.

use std::collections::HashSet;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinRelation {
    rows: Vec<FixedBitSet>,
}

impl BinRelation {
    pub fn empty(n: usize) -> Self {
        BinRelation {
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.rows[i].insert(i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut row = FixedBitSet::with_capacity(n);
        row.insert_range(..);
        BinRelation { rows: vec![row; n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Self::empty(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::invalid(format!("pair ({x},{y}) out of range {n}")));
            }
            r.rows[x].insert(y);
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn row(&self, x: usize) -> &FixedBitSet {
        &self.rows[x]
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    fn same_size(&self, other: &BinRelation) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::invalid(format!(
                "relation sizes differ: {} vs {}",
                self.size(),
                other.size()
            )));
        }
        Ok(())
    }

    /// `self ∘ other`: pairs `(x, z)` with `x self y other z` for some `y`.
    pub fn compose(&self, other: &BinRelation, exec: Exec) -> Result<BinRelation> {
        self.same_size(other)?;
        let n = self.size();
        let rows = exec.map(n, |x| {
            let mut out = FixedBitSet::with_capacity(n);
            for y in self.rows[x].ones() {
                out.union_with(&other.rows[y]);
            }
            out
        });
        Ok(BinRelation { rows })
    }

    pub fn intersect(&self, other: &BinRelation) -> Result<BinRelation> {
        self.same_size(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.intersect_with(b);
                r
            })
            .collect();
        Ok(BinRelation { rows })
    }

    /// Image of a set of elements.
    pub fn image(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.size());
        for x in set.ones() {
            out.union_with(&self.rows[x]);
        }
        out
    }

    /// Lexicographically least pair of `self` missing from `other`.
    pub fn first_pair_outside(&self, other: &BinRelation) -> Result<Option<(usize, usize)>> {
        self.same_size(other)?;
        for (x, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            if let Some(y) = a.difference(b).next() {
                return Ok(Some((x, y)));
            }
        }
        Ok(None)
    }
}

pub fn rel_of_partition(p: &Partition) -> BinRelation {
    let n = p.size();
    let blocks = p.blocks();
    let mut sets = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let mut s = FixedBitSet::with_capacity(n);
        for &x in b {
            s.insert(x);
        }
        sets.push(s);
    }
    BinRelation {
        rows: (0..n).map(|x| sets[p.block_of(x)].clone()).collect(),
    }
}

/// Verdict of an inclusion test with the least violating pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Inclusion {
    Holds,
    FailsAt(usize, usize),
}

pub fn check_inclusion(lhs: &BinRelation, rhs: &BinRelation) -> Result<Inclusion> {
    Ok(match lhs.first_pair_outside(rhs)? {
        None => Inclusion::Holds,
        Some((x, y)) => Inclusion::FailsAt(x, y),
    })
}

/// Alternating composition `first ∘ second ∘ first ∘ …` with `factor_count`
/// factors; zero factors give the diagonal.
#[derive(Clone, Debug)]
pub struct ChainPattern {
    pub first: BinRelation,
    pub second: BinRelation,
    pub factor_count: usize,
}

impl ChainPattern {
    pub fn eval(&self, exec: Exec) -> Result<BinRelation> {
        self.first.same_size(&self.second)?;
        let mut acc = BinRelation::diagonal(self.first.size());
        for k in 0..self.factor_count {
            let r = if k % 2 == 0 { &self.first } else { &self.second };
            acc = acc.compose(r, exec)?;
        }
        Ok(acc)
    }
}

pub fn eval_chain(pattern: &ChainPattern, exec: Exec) -> Result<BinRelation> {
    pattern.eval(exec)
}

/// Expression over named congruences (`Cong(i)` refers to the `i`-th entry of
/// the environment).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelExpr {
    Cong(usize),
    Identity,
    Meet(Box<RelExpr>, Box<RelExpr>),
    Compose(Vec<RelExpr>),
    Power(Box<RelExpr>, usize),
}

impl RelExpr {
    pub fn meet(a: RelExpr, b: RelExpr) -> RelExpr {
        RelExpr::Meet(Box::new(a), Box::new(b))
    }

    pub fn power(a: RelExpr, k: usize) -> RelExpr {
        RelExpr::Power(Box::new(a), k)
    }

    /// `a ∘ b ∘ a ∘ …` with `count` factors.
    pub fn alternating(a: RelExpr, b: RelExpr, count: usize) -> RelExpr {
        match count {
            0 => RelExpr::Identity,
            1 => a,
            _ => RelExpr::Compose(
                (0..count)
                    .map(|k| if k % 2 == 0 { a.clone() } else { b.clone() })
                    .collect(),
            ),
        }
    }

    pub fn render(&self, names: &[&str]) -> String {
        match self {
            RelExpr::Cong(i) => names.get(*i).map(|s| s.to_string()).unwrap_or(format!("c{i}")),
            RelExpr::Identity => "0".into(),
            RelExpr::Meet(a, b) => match (a.as_ref(), b.as_ref()) {
                (RelExpr::Cong(_), RelExpr::Cong(_)) => format!("{}{}", a.render(names), b.render(names)),
                _ => format!("{}({})", a.render(names), b.render(names)),
            },
            RelExpr::Compose(items) => items.iter().map(|e| e.render(names)).collect::<Vec<_>>().join("∘"),
            RelExpr::Power(a, k) => format!("({})^{k}", a.render(names)),
        }
    }

    /// Full matrix evaluation by explicit composition.
    pub fn eval_matrix(&self, env: &[Partition], exec: Exec) -> Result<BinRelation> {
        let n = env_size(env)?;
        Ok(match self {
            RelExpr::Cong(i) => rel_of_partition(env_get(env, *i)?),
            RelExpr::Identity => BinRelation::diagonal(n),
            RelExpr::Meet(a, b) => a.eval_matrix(env, exec)?.intersect(&b.eval_matrix(env, exec)?)?,
            RelExpr::Compose(items) => {
                let mut acc = BinRelation::diagonal(n);
                for e in items {
                    acc = acc.compose(&e.eval_matrix(env, exec)?, exec)?;
                }
                acc
            }
            RelExpr::Power(a, k) => {
                let base = a.eval_matrix(env, exec)?;
                let mut acc = BinRelation::diagonal(n);
                for _ in 0..*k {
                    acc = acc.compose(&base, exec)?;
                }
                acc
            }
        })
    }
}

fn env_size(env: &[Partition]) -> Result<usize> {
    let n = env.first().map(Partition::size).ok_or_else(|| Error::invalid("empty environment"))?;
    if env.iter().any(|p| p.size() != n) {
        return Err(Error::invalid("congruences live on different universes"));
    }
    Ok(n)
}

fn env_get(env: &[Partition], i: usize) -> Result<&Partition> {
    env.get(i).ok_or_else(|| Error::invalid(format!("no congruence in slot {i}")))
}

/// Row-at-a-time evaluator. Meets of congruences are flattened to a single
/// partition; other meets memoize their rows.
pub struct RowEvaluator {
    root: Node,
    n: usize,
}

enum Node {
    Part(Partition),
    Identity,
    Meet {
        left: Box<Node>,
        right: Box<Node>,
        rows: Vec<OnceLock<FixedBitSet>>,
    },
    Compose(Vec<Node>),
    Power(Box<Node>, usize),
}

impl RowEvaluator {
    pub fn new(expr: &RelExpr, env: &[Partition]) -> Result<Self> {
        let n = env_size(env)?;
        Ok(RowEvaluator {
            root: build_node(expr, env, n)?,
            n,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn image(&self, set: &FixedBitSet) -> FixedBitSet {
        image_node(&self.root, set, self.n)
    }

    pub fn row(&self, x: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.insert(x);
        self.image(&s)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.row(x).contains(y)
    }
}

fn build_node(expr: &RelExpr, env: &[Partition], n: usize) -> Result<Node> {
    Ok(match expr {
        RelExpr::Cong(i) => Node::Part(env_get(env, *i)?.clone()),
        RelExpr::Identity => Node::Identity,
        RelExpr::Meet(a, b) => {
            let (l, r) = (build_node(a, env, n)?, build_node(b, env, n)?);
            match (l, r) {
                (Node::Part(p), Node::Part(q)) => Node::Part(p.meet(&q)?),
                (l, r) => Node::Meet {
                    left: Box::new(l),
                    right: Box::new(r),
                    rows: (0..n).map(|_| OnceLock::new()).collect(),
                },
            }
        }
        RelExpr::Compose(items) => Node::Compose(items.iter().map(|e| build_node(e, env, n)).collect::<Result<_>>()?),
        RelExpr::Power(a, k) => Node::Power(Box::new(build_node(a, env, n)?), *k),
    })
}

pub fn saturate(p: &Partition, set: &FixedBitSet) -> FixedBitSet {
    let mut marked = FixedBitSet::with_capacity(p.num_blocks());
    for x in set.ones() {
        marked.insert(p.block_of(x));
    }
    let mut out = FixedBitSet::with_capacity(p.size());
    for (y, &b) in p.block_ids().iter().enumerate() {
        if marked.contains(b as usize) {
            out.insert(y);
        }
    }
    out
}

fn image_node(node: &Node, set: &FixedBitSet, n: usize) -> FixedBitSet {
    match node {
        Node::Part(p) => saturate(p, set),
        Node::Identity => set.clone(),
        Node::Meet { left, right, rows } => {
            let mut out = FixedBitSet::with_capacity(n);
            for x in set.ones() {
                let row = rows[x].get_or_init(|| {
                    let mut single = FixedBitSet::with_capacity(n);
                    single.insert(x);
                    let mut r = image_node(left, &single, n);
                    r.intersect_with(&image_node(right, &single, n));
                    r
                });
                out.union_with(row);
            }
            out
        }
        Node::Compose(items) => {
            let mut cur = set.clone();
            for it in items {
                cur = image_node(it, &cur, n);
            }
            cur
        }
        Node::Power(a, k) => {
            let mut cur = set.clone();
            for _ in 0..*k {
                let next = image_node(a, &cur, n);
                if next == cur {
                    break;
                }
                cur = next;
            }
            cur
        }
    }
}

/// Least pair in `lhs` but not in `rhs`, scanning rows in order.
pub fn first_counterexample(lhs: &RowEvaluator, rhs: &RowEvaluator, exec: Exec) -> Option<(usize, usize)> {
    let n = lhs.size();
    const CHUNK: usize = 64;
    let chunks = n.div_ceil(CHUNK);
    for c in 0..chunks {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        let found = exec.map(hi - lo, |k| {
            let x = lo + k;
            let l = lhs.row(x);
            let r = rhs.row(x);
            l.difference(&r).next().map(|y| (x, y))
        });
        if let Some(hit) = found.into_iter().flatten().next() {
            return Some(hit);
        }
    }
    None
}

/// Lexicographically least element path `x = e_0, e_1, …, e_k = y` with
/// `(e_{i−1}, e_i)` in the `i`-th congruence of `steps`.
pub fn witness_path(steps: &[&Partition], x: usize, y: usize) -> Option<Vec<usize>> {
    let n = steps.first().map(|p| p.size())?;
    let k = steps.len();
    let mut back = vec![FixedBitSet::with_capacity(n); k + 1];
    back[k].insert(y);
    for i in (0..k).rev() {
        back[i] = saturate(steps[i], &back[i + 1]);
    }
    if !back[0].contains(x) {
        return None;
    }
    let mut path = vec![x];
    let mut cur = x;
    for (i, p) in steps.iter().enumerate() {
        let b = p.block_of(cur);
        cur = (0..n)
            .find(|&z| p.block_of(z) == b && back[i + 1].contains(z))
            .expect("backward set guarantees a successor");
        path.push(cur);
    }
    Some(path)
}

/// Outcome of an alternating-chain search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingChain {
    /// true if the first step uses `first`.
    pub starts_with_first: bool,
    pub factors: usize,
    pub elements: Vec<usize>,
}

/// Minimum-length alternating path between two elements, trying both
/// starting relations. `Ok(None)` means no path exists at any length.
pub fn shortest_alternating_chain(
    start: usize,
    goal: usize,
    first: &BinRelation,
    second: &BinRelation,
    cap: usize,
) -> Result<Option<AlternatingChain>> {
    first.same_size(second)?;
    let n = first.size();
    if start >= n || goal >= n {
        return Err(Error::invalid("endpoint out of range"));
    }
    if start == goal {
        return Ok(Some(AlternatingChain {
            starts_with_first: true,
            factors: 0,
            elements: vec![start],
        }));
    }
    let rels = [first, second];
    // layers[s][k] = elements reachable from start in k factors starting with rels[s]
    let mut layers: [Vec<FixedBitSet>; 2] = Default::default();
    let mut seen: [HashSet<(Vec<usize>, usize)>; 2] = Default::default();
    let mut alive = [true, true];
    let mut init = FixedBitSet::with_capacity(n);
    init.insert(start);
    for s in 0..2 {
        layers[s].push(init.clone());
    }
    for k in 1..=cap {
        let mut hits = Vec::new();
        for s in 0..2 {
            if !alive[s] {
                continue;
            }
            let rel = rels[(s + k - 1) % 2];
            let next = rel.image(&layers[s][k - 1]);
            let key = (next.ones().collect::<Vec<_>>(), k % 2);
            if !seen[s].insert(key) {
                alive[s] = false;
            }
            if next.contains(goal) {
                hits.push(s);
            }
            layers[s].push(next);
        }
        if !hits.is_empty() {
            let mut best: Option<AlternatingChain> = None;
            for s in hits {
                let path = least_path(&layers[s], &rels, s, goal);
                let cand = AlternatingChain {
                    starts_with_first: s == 0,
                    factors: k,
                    elements: path,
                };
                if best.as_ref().is_none_or(|b| cand.elements < b.elements) {
                    best = Some(cand);
                }
            }
            return Ok(best);
        }
        if !alive[0] && !alive[1] {
            return Ok(None);
        }
    }
    Err(Error::cap("alternating chain length", cap, cap))
}

fn least_path(layers: &[FixedBitSet], rels: &[&BinRelation; 2], s: usize, goal: usize) -> Vec<usize> {
    let k = layers.len() - 1;
    let n = rels[0].size();
    // good[i]: elements of layer i from which goal is reachable in the remaining steps
    let mut good = vec![FixedBitSet::with_capacity(n); k + 1];
    good[k].insert(goal);
    for i in (0..k).rev() {
        let rel = rels[(s + i) % 2];
        for x in layers[i].ones() {
            if rel.row(x).intersection(&good[i + 1]).next().is_some() {
                good[i].insert(x);
            }
        }
    }
    let mut cur = layers[0].ones().next().unwrap();
    let mut path = vec![cur];
    for i in 0..k {
        let rel = rels[(s + i) % 2];
        cur = rel.row(cur).intersection(&good[i + 1]).next().unwrap();
        path.push(cur);
    }
    path
}

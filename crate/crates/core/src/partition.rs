//! Set partitions of `{0, …, size−1}` in canonical form, and the congruence
//! operations built on them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::tuples::{FactorIndexing, Odometer};

/// Blocks are numbered in order of their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_id: Vec<u32>,
    blocks: u32,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson {
            size: self.size(),
            blocks: self.blocks(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PartitionJson::deserialize(d)?;
        Partition::from_blocks(raw.size, &raw.blocks).map_err(serde::de::Error::custom)
    }
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            block_id: (0..n as u32).collect(),
            blocks: n as u32,
        }
    }

    pub fn full(n: usize) -> Self {
        Partition {
            block_id: vec![0; n],
            blocks: (n > 0) as u32,
        }
    }

    /// Any labelling of elements by block; relabelled canonically.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: impl IntoIterator<Item = T>) -> Self {
        let mut seen: HashMap<T, u32> = HashMap::new();
        let mut block_id = Vec::new();
        for l in labels {
            let next = seen.len() as u32;
            block_id.push(*seen.entry(l).or_insert(next));
        }
        Partition {
            blocks: seen.len() as u32,
            block_id,
        }
    }

    pub fn from_blocks(size: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; size];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::invalid(format!("blocks[{b}] is empty")));
            }
            for &x in block {
                if x >= size {
                    return Err(Error::invalid(format!("element {x} out of range {size}")));
                }
                if label[x] != usize::MAX {
                    return Err(Error::invalid(format!("element {x} appears in two blocks")));
                }
                label[x] = b;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::invalid(format!("element {x} is in no block")));
        }
        Ok(Self::from_labels(label))
    }

    pub fn size(&self) -> usize {
        self.block_id.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks as usize
    }

    #[inline]
    pub fn block_of(&self, x: usize) -> usize {
        self.block_id[x] as usize
    }

    pub fn block_ids(&self) -> &[u32] {
        &self.block_id
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_id[x] == self.block_id[y]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_id.iter().enumerate() {
            out[b as usize].push(x);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    fn same_size(&self, other: &Partition) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::invalid(format!(
                "partition sizes differ: {} vs {}",
                self.size(),
                other.size()
            )));
        }
        Ok(())
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        self.same_size(other)?;
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (x, &b) in self.block_id.iter().enumerate() {
            let ob = other.block_id[x];
            if image[b as usize] == u32::MAX {
                image[b as usize] = ob;
            } else if image[b as usize] != ob {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.same_size(other)?;
        Ok(Partition::from_labels(
            self.block_id.iter().zip(&other.block_id).map(|(&a, &b)| (a, b)),
        ))
    }

    /// Transitive closure of the union.
    pub fn equivalence_join(&self, other: &Partition) -> Result<Partition> {
        self.same_size(other)?;
        let mut uf = UnionFind::new(self.size());
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_blocks()];
            for x in 0..p.size() {
                let b = p.block_of(x);
                if first[b] == usize::MAX {
                    first[b] = x;
                } else {
                    uf.union(first[b], x);
                }
            }
        }
        Ok(uf.partition())
    }

    /// Restriction to the listed elements, re-indexed in the given order.
    pub fn restrict(&self, elements: &[usize]) -> Partition {
        Partition::from_labels(elements.iter().map(|&x| self.block_id[x]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns true if two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(roots)
    }
}

/// Calls `f(position, other_args)` for every argument position and every
/// assignment of the remaining arguments, with `args[position]` left free.
fn for_each_translation(arity: usize, n: usize, mut f: impl FnMut(usize, &mut [usize]) -> bool) -> bool {
    let mut args = vec![0; arity];
    for pos in 0..arity {
        let mut od = Odometer::uniform(arity - 1, n);
        while let Some(rest) = od.next_tuple() {
            args[..pos].copy_from_slice(&rest[..pos]);
            args[pos + 1..].copy_from_slice(&rest[pos..]);
            if !f(pos, &mut args) {
                return false;
            }
        }
    }
    true
}

/// Least congruence containing `pairs`.
pub fn congruence_generated<A: Algebra + ?Sized>(alg: &A, pairs: &[(usize, usize)]) -> Result<Partition> {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    let mut queue = Vec::new();
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::invalid(format!("pair ({a},{b}) out of range {n}")));
        }
        if uf.union(a, b) {
            queue.push((a, b));
        }
    }
    let arities = alg.arities();
    while let Some((a, b)) = queue.pop() {
        for (op, &arity) in arities.iter().enumerate() {
            for_each_translation(arity, n, |pos, args| {
                args[pos] = a;
                let x = alg.apply(op, args);
                args[pos] = b;
                let y = alg.apply(op, args);
                if uf.union(x, y) {
                    queue.push((x, y));
                }
                true
            });
        }
    }
    Ok(uf.partition())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceViolation {
    pub op: usize,
    pub position: usize,
    pub pair: (usize, usize),
    pub args: Vec<usize>,
    pub outputs: (usize, usize),
}

/// Compatibility check; related pairs are taken between consecutive members
/// of each block, which generate the block by transitivity.
pub fn is_congruence<A: Algebra + ?Sized>(alg: &A, part: &Partition) -> Result<Option<CongruenceViolation>> {
    let n = alg.size();
    if part.size() != n {
        return Err(Error::invalid(format!(
            "partition on {} elements, algebra has {n}",
            part.size()
        )));
    }
    let pairs: Vec<(usize, usize)> = part
        .blocks()
        .iter()
        .flat_map(|b| b.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>())
        .collect();
    for (op, arity) in alg.arities().into_iter().enumerate() {
        for &(a, b) in &pairs {
            let mut found = None;
            for_each_translation(arity, n, |pos, args| {
                args[pos] = a;
                let x = alg.apply(op, args);
                args[pos] = b;
                let y = alg.apply(op, args);
                if part.related(x, y) {
                    return true;
                }
                args[pos] = a;
                found = Some(CongruenceViolation {
                    op,
                    position: pos,
                    pair: (a, b),
                    args: args.to_vec(),
                    outputs: (x, y),
                });
                false
            });
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

/// Least congruence above both inputs, which must be congruences.
pub fn partition_join<A: Algebra + ?Sized>(alg: &A, p: &Partition, q: &Partition) -> Result<Partition> {
    for (name, part) in [("first", p), ("second", q)] {
        if let Some(v) = is_congruence(alg, part)? {
            return Err(Error::invalid(format!(
                "{name} input is not a congruence: op {} at position {} separates {:?}",
                v.op, v.position, v.pair
            )));
        }
    }
    p.equivalence_join(q)
}

/// Product congruence restricted to `subuniverse` (re-indexed in sorted order).
pub fn induced_product_congruence(
    indexing: &FactorIndexing,
    factor_parts: &[Partition],
    subuniverse: &[usize],
) -> Result<Partition> {
    if factor_parts.len() != indexing.len() {
        return Err(Error::invalid(format!(
            "{} factor partitions for {} factors",
            factor_parts.len(),
            indexing.len()
        )));
    }
    for (c, (p, &s)) in factor_parts.iter().zip(indexing.factor_sizes()).enumerate() {
        if p.size() != s {
            return Err(Error::invalid(format!("factor {c}: partition size {} vs factor size {s}", p.size())));
        }
    }
    if subuniverse.is_empty() {
        return Err(Error::invalid("empty subuniverse"));
    }
    let mut sorted = subuniverse.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&bad) = sorted.last().filter(|&&x| x >= indexing.total()) {
        return Err(Error::invalid(format!("element {bad} out of range")));
    }
    let mut t = vec![0; indexing.len()];
    let labels: Vec<Vec<u32>> = sorted
        .iter()
        .map(|&x| {
            indexing.decode_into(x, &mut t);
            t.iter().zip(factor_parts).map(|(&v, p)| p.block_ids()[v]).collect()
        })
        .collect();
    Ok(Partition::from_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_chain_lattice, make_ujm_reduct};

    #[test]
    fn canonical_form() {
        let p = Partition::from_labels([7, 3, 7, 9]);
        assert_eq!(p.block_ids(), &[0, 1, 0, 2]);
        assert_eq!(p, Partition::from_blocks(4, &[vec![3], vec![1], vec![2, 0]]).unwrap());
        assert_eq!(p.to_json(), r#"{"size":4,"blocks":[[0,2],[1],[3]]}"#);
        let back: Partition = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn generated_on_chain() {
        let c3 = make_chain_lattice(3).unwrap();
        assert_eq!(congruence_generated(&c3, &[]).unwrap(), Partition::identity(3));
        let p = congruence_generated(&c3, &[(0, 1)]).unwrap();
        assert_eq!(p.blocks(), vec![vec![0, 1], vec![2]]);
        let bad = Partition::from_blocks(3, &[vec![0, 2], vec![1]]).unwrap();
        let v = is_congruence(&c3, &bad).unwrap().unwrap();
        assert!(!bad.related(v.outputs.0, v.outputs.1));
    }

    #[test]
    fn meet_and_join_of_stars() {
        let beta = Partition::from_blocks(3, &[vec![2, 1], vec![0]]).unwrap();
        let gamma = Partition::from_blocks(3, &[vec![2], vec![1, 0]]).unwrap();
        assert!(beta.meet(&gamma).unwrap().is_identity());
        let n = make_ujm_reduct(3, 2, 4).unwrap();
        assert!(is_congruence(&n, &beta).unwrap().is_none());
        assert!(partition_join(&n, &beta, &gamma).unwrap().is_full());
        let c3 = make_chain_lattice(3).unwrap();
        let bad = Partition::from_blocks(3, &[vec![0, 2], vec![1]]).unwrap();
        assert!(partition_join(&c3, &bad, &beta).is_err());
    }

    #[test]
    fn induced_product() {
        let ix = FactorIndexing::new(vec![3, 2]).unwrap();
        let all: Vec<usize> = (0..6).collect();
        let p = induced_product_congruence(&ix, &[Partition::full(3), Partition::full(2)], &all).unwrap();
        assert!(p.is_full());
        let p = induced_product_congruence(&ix, &[Partition::full(3), Partition::identity(2)], &all).unwrap();
        assert_eq!(p.num_blocks(), 2);
        assert!(induced_product_congruence(&ix, &[Partition::full(3)], &all).is_err());
        assert!(induced_product_congruence(&ix, &[Partition::full(3), Partition::full(2)], &[]).is_err());
    }
}

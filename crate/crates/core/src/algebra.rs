//! Finite algebras on `{0, …, size−1}` given by operation tables.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::closure::{close, Closure, OpSpec, Origin};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::term::Term;
use crate::tuples::{checked_pow, tuple_index, FactorIndexing, Multisets, Odometer};

pub const DEFAULT_CLOSURE_CAP: usize = 1 << 20;
pub const DEFAULT_TABLE_CAP: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<u32>,
}

impl Operation {
    pub fn from_fn(name: impl Into<String>, size: usize, arity: usize, mut f: impl FnMut(&[usize]) -> usize) -> Self {
        let mut table = Vec::with_capacity(checked_pow(size, arity).unwrap_or(0));
        let mut od = Odometer::uniform(arity, size);
        while let Some(t) = od.next_tuple() {
            table.push(f(t) as u32);
        }
        Operation {
            name: name.into(),
            arity,
            table,
        }
    }
}

#[derive(Deserialize)]
struct RawAlgebra {
    label: String,
    size: usize,
    ops: Vec<Operation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra")]
pub struct FiniteAlgebra {
    label: String,
    size: usize,
    ops: Vec<Operation>,
}

impl TryFrom<RawAlgebra> for FiniteAlgebra {
    type Error = Error;
    fn try_from(raw: RawAlgebra) -> Result<Self> {
        FiniteAlgebra::new(raw.label, raw.size, raw.ops)
    }
}

/// A violation of closure: `op(args) = output` leaves the subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub op: usize,
    pub args: Vec<usize>,
    pub output: usize,
}

/// Read-only view shared by tabled algebras and lazily evaluated products.
pub trait Algebra: Sync {
    fn size(&self) -> usize;
    fn arities(&self) -> Vec<usize>;
    /// Unchecked application; arguments must be in range.
    fn apply(&self, op: usize, args: &[usize]) -> usize;
    fn op_is_symmetric(&self, op: usize) -> bool;
}

impl FiniteAlgebra {
    pub fn new(label: impl Into<String>, size: usize, ops: Vec<Operation>) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("size must be positive"));
        }
        for (k, op) in ops.iter().enumerate() {
            if op.arity == 0 {
                return Err(Error::invalid(format!("ops[{k}].arity: nullary operations are not supported")));
            }
            let expected = checked_pow(size, op.arity)
                .ok_or_else(|| Error::invalid(format!("ops[{k}].table: size^arity overflows")))?;
            if op.table.len() != expected {
                return Err(Error::invalid(format!(
                    "ops[{k}].table: length {} but size^arity = {expected}",
                    op.table.len()
                )));
            }
            if let Some(p) = op.table.iter().position(|&v| v as usize >= size) {
                return Err(Error::invalid(format!(
                    "ops[{k}].table[{p}]: entry {} not below size {size}",
                    op.table[p]
                )));
            }
        }
        Ok(FiniteAlgebra {
            label: label.into(),
            size,
            ops,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn similar(&self, other: &FiniteAlgebra) -> bool {
        self.ops.len() == other.ops.len()
            && self.ops.iter().zip(&other.ops).all(|(a, b)| a.arity == b.arity)
    }

    #[inline]
    pub fn eval(&self, op: usize, args: &[usize]) -> usize {
        self.ops[op].table[tuple_index(self.size, args)] as usize
    }

    pub fn apply_op(&self, op: usize, args: &[usize]) -> Result<usize> {
        let o = self
            .ops
            .get(op)
            .ok_or_else(|| Error::invalid(format!("no operation with index {op}")))?;
        if args.len() != o.arity {
            return Err(Error::invalid(format!(
                "operation {} has arity {}, got {} arguments",
                o.name,
                o.arity,
                args.len()
            )));
        }
        if let Some(&bad) = args.iter().find(|&&a| a >= self.size) {
            return Err(Error::invalid(format!("element {bad} out of range {}", self.size)));
        }
        Ok(self.eval(op, args))
    }

    fn check_op(&self, op: usize) -> Result<&Operation> {
        self.ops
            .get(op)
            .ok_or_else(|| Error::invalid(format!("no operation with index {op}")))
    }

    /// `zero` is returned whenever at least `k` arguments equal `zero`.
    pub fn is_k_absorbing(&self, op: usize, zero: usize, k: usize) -> Result<bool> {
        let o = self.check_op(op)?;
        if k == 0 || k > o.arity {
            return Err(Error::invalid(format!("k = {k} outside 1..={}", o.arity)));
        }
        if zero >= self.size {
            return Err(Error::invalid(format!("element {zero} out of range")));
        }
        let mut od = Odometer::uniform(o.arity, self.size);
        let mut idx = 0;
        while let Some(t) = od.next_tuple() {
            if t.iter().filter(|&&x| x == zero).count() >= k && o.table[idx] as usize != zero {
                return Ok(false);
            }
            idx += 1;
        }
        Ok(true)
    }

    /// Every element is `k`-absorbing for `op`.
    pub fn is_k_majority(&self, op: usize, k: usize) -> Result<bool> {
        let o = self.check_op(op)?;
        if k == 0 || k > o.arity {
            return Err(Error::invalid(format!("k = {k} outside 1..={}", o.arity)));
        }
        let mut counts = vec![0usize; self.size];
        let mut od = Odometer::uniform(o.arity, self.size);
        let mut idx = 0;
        while let Some(t) = od.next_tuple() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &x in t {
                counts[x] += 1;
            }
            let out = o.table[idx] as usize;
            if counts.iter().enumerate().any(|(v, &c)| c >= k && v != out) {
                return Ok(false);
            }
            idx += 1;
        }
        Ok(true)
    }

    pub fn is_near_unanimity(&self, op: usize) -> Result<bool> {
        let arity = self.check_op(op)?.arity;
        if arity < 2 {
            return Ok(false);
        }
        self.is_k_majority(op, arity - 1)
    }

    pub fn is_idempotent(&self, op: usize) -> Result<bool> {
        let arity = self.check_op(op)?.arity;
        Ok((0..self.size).all(|x| self.eval(op, &vec![x; arity]) == x))
    }

    /// Invariance under the transposition of the first two arguments and the
    /// full cycle, which together generate all permutations.
    pub fn is_symmetrical(&self, op: usize) -> Result<bool> {
        let o = self.check_op(op)?;
        if o.arity < 2 {
            return Ok(true);
        }
        let mut od = Odometer::uniform(o.arity, self.size);
        let mut perm = vec![0; o.arity];
        let mut idx = 0;
        while let Some(t) = od.next_tuple() {
            let v = o.table[idx];
            perm.copy_from_slice(t);
            perm.swap(0, 1);
            if o.table[tuple_index(self.size, &perm)] != v {
                return Ok(false);
            }
            perm.copy_from_slice(t);
            perm.rotate_left(1);
            if o.table[tuple_index(self.size, &perm)] != v {
                return Ok(false);
            }
            idx += 1;
        }
        Ok(true)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("algebra serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("algebra JSON: {e}")))
    }
}

impl Algebra for FiniteAlgebra {
    fn size(&self) -> usize {
        self.size
    }

    fn arities(&self) -> Vec<usize> {
        self.ops.iter().map(|o| o.arity).collect()
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.eval(op, args)
    }

    fn op_is_symmetric(&self, op: usize) -> bool {
        self.is_symmetrical(op).unwrap_or(false)
    }
}

/// The chain `0 < 1 < … < size−1` as a lattice with `join` and `meet`.
pub fn make_chain_lattice(size: usize) -> Result<FiniteAlgebra> {
    if size < 2 {
        return Err(Error::invalid("chain lattice needs size at least 2"));
    }
    FiniteAlgebra::new(
        format!("C_{size}"),
        size,
        vec![
            Operation::from_fn("join", size, 2, |t| t[0].max(t[1])),
            Operation::from_fn("meet", size, 2, |t| t[0].min(t[1])),
        ],
    )
}

fn ujm_cache() -> &'static Mutex<HashMap<(usize, usize, usize), FiniteAlgebra>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), FiniteAlgebra>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn ujm_label(chain_size: usize, j: usize, m: usize) -> String {
    if chain_size == 2 {
        format!("N^{{{j},{m}}}")
    } else {
        format!("N^{{{j},{m}}}_{chain_size}")
    }
}

/// The reduct of the chain with `chain_size` elements whose only operation is
/// the `m`-ary `j`-th order statistic `u` (the minimum over `j`-subsets of the
/// maximum of the chosen arguments).
pub fn make_ujm_reduct(chain_size: usize, j: usize, m: usize) -> Result<FiniteAlgebra> {
    if chain_size < 2 {
        return Err(Error::invalid("chain size must be at least 2"));
    }
    if m < 3 {
        return Err(Error::invalid(format!("m = {m} must be at least 3")));
    }
    if j == 0 || j > m {
        return Err(Error::invalid(format!("j = {j} outside 1..={m}")));
    }
    if checked_pow(chain_size, m).is_none_or(|n| n > DEFAULT_TABLE_CAP) {
        return Err(Error::cap("operation table", DEFAULT_TABLE_CAP, 0));
    }
    let key = (chain_size, j, m);
    if let Some(a) = ujm_cache().lock().unwrap().get(&key) {
        return Ok(a.clone());
    }
    let mut sorted = vec![0; m];
    let op = Operation::from_fn("u", chain_size, m, |t| {
        sorted.copy_from_slice(t);
        sorted.sort_unstable();
        sorted[j - 1]
    });
    let alg = FiniteAlgebra::new(ujm_label(chain_size, j, m), chain_size, vec![op])?;
    ujm_cache().lock().unwrap().insert(key, alg.clone());
    Ok(alg)
}

pub fn one_element_like(alg: &FiniteAlgebra) -> FiniteAlgebra {
    let ops = alg
        .ops
        .iter()
        .map(|o| Operation {
            name: o.name.clone(),
            arity: o.arity,
            table: vec![0],
        })
        .collect();
    FiniteAlgebra::new("1", 1, ops).expect("one-element algebra is valid")
}

fn check_similar(factors: &[FiniteAlgebra]) -> Result<()> {
    let first = factors
        .first()
        .ok_or_else(|| Error::invalid("product needs at least one factor"))?;
    for (k, f) in factors.iter().enumerate().skip(1) {
        if !first.similar(f) {
            return Err(Error::Dissimilar(format!(
                "factor {k} ({}) differs from factor 0 ({})",
                f.label, first.label
            )));
        }
    }
    Ok(())
}

/// Materialized direct product with componentwise operations.
pub fn direct_product(factors: &[FiniteAlgebra], table_cap: usize) -> Result<(FiniteAlgebra, FactorIndexing)> {
    check_similar(factors)?;
    let ix = FactorIndexing::new(factors.iter().map(|f| f.size).collect())?;
    let n = ix.total();
    let mut ops = Vec::new();
    for (k, op0) in factors[0].ops.iter().enumerate() {
        let entries = checked_pow(n, op0.arity).filter(|&e| e <= table_cap);
        let Some(entries) = entries else {
            return Err(Error::cap("product operation table", table_cap, 0));
        };
        let mut table = Vec::with_capacity(entries);
        let mut od = Odometer::uniform(op0.arity, n);
        let mut decoded = vec![vec![0; factors.len()]; op0.arity];
        let mut args = vec![0; op0.arity];
        let mut out = vec![0; factors.len()];
        while let Some(t) = od.next_tuple() {
            for (d, &x) in decoded.iter_mut().zip(t) {
                ix.decode_into(x, d);
            }
            for (c, f) in factors.iter().enumerate() {
                for (a, d) in args.iter_mut().zip(&decoded) {
                    *a = d[c];
                }
                out[c] = f.eval(k, &args);
            }
            table.push(ix.encode_unchecked(&out) as u32);
        }
        ops.push(Operation {
            name: op0.name.clone(),
            arity: op0.arity,
            table,
        });
    }
    let label = factors.iter().map(|f| f.label.as_str()).collect::<Vec<_>>().join(" × ");
    Ok((FiniteAlgebra::new(label, n, ops)?, ix))
}

/// Direct product evaluated on demand; nothing is tabled.
#[derive(Clone, Debug)]
pub struct ProductAlgebra {
    factors: Vec<FiniteAlgebra>,
    indexing: FactorIndexing,
    symmetric: Vec<bool>,
}

impl ProductAlgebra {
    pub fn new(factors: Vec<FiniteAlgebra>) -> Result<Self> {
        check_similar(&factors)?;
        let indexing = FactorIndexing::new(factors.iter().map(|f| f.size).collect())?;
        let symmetric = (0..factors[0].ops.len())
            .map(|op| factors.iter().all(|f| f.op_is_symmetric(op)))
            .collect();
        Ok(ProductAlgebra {
            factors,
            indexing,
            symmetric,
        })
    }

    pub fn factors(&self) -> &[FiniteAlgebra] {
        &self.factors
    }

    pub fn indexing(&self) -> &FactorIndexing {
        &self.indexing
    }

    /// Componentwise application on tuples.
    pub fn apply_tuples(&self, op: usize, args: &[Vec<usize>]) -> Vec<usize> {
        let mut col = vec![0; args.len()];
        (0..self.factors.len())
            .map(|c| {
                for (slot, a) in col.iter_mut().zip(args) {
                    *slot = a[c];
                }
                self.factors[c].eval(op, &col)
            })
            .collect()
    }
}

impl Algebra for ProductAlgebra {
    fn size(&self) -> usize {
        self.indexing.total()
    }

    fn arities(&self) -> Vec<usize> {
        self.factors[0].arities()
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        let tuples: Vec<Vec<usize>> = args.iter().map(|&a| self.indexing.decode(a)).collect();
        self.indexing.encode_unchecked(&self.apply_tuples(op, &tuples))
    }

    fn op_is_symmetric(&self, op: usize) -> bool {
        self.symmetric[op]
    }
}

/// Exhaustive closure test; multisets suffice for symmetric operations.
pub fn is_subuniverse<A: Algebra + ?Sized>(alg: &A, subset: &[usize]) -> Result<Option<Violation>> {
    let n = alg.size();
    if let Some(&bad) = subset.iter().find(|&&x| x >= n) {
        return Err(Error::invalid(format!("element {bad} out of range {n}")));
    }
    let mut members = vec![false; n];
    for &x in subset {
        members[x] = true;
    }
    let mut elems: Vec<usize> = subset.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let mut args = Vec::new();
    for (op, arity) in alg.arities().into_iter().enumerate() {
        args.resize(arity, 0);
        let mut check = |t: &[usize]| -> Option<Violation> {
            for (a, &i) in args.iter_mut().zip(t) {
                *a = elems[i];
            }
            let out = alg.apply(op, &args);
            (!members[out]).then(|| Violation {
                op,
                args: args.clone(),
                output: out,
            })
        };
        if alg.op_is_symmetric(op) {
            let mut ms = Multisets::new(arity, elems.len());
            while let Some(t) = ms.next_tuple() {
                if let Some(v) = check(t) {
                    return Ok(Some(v));
                }
            }
        } else {
            let mut od = Odometer::uniform(arity, elems.len());
            while let Some(t) = od.next_tuple() {
                if let Some(v) = check(t) {
                    return Ok(Some(v));
                }
            }
        }
    }
    Ok(None)
}

/// Generated subalgebra: sorted elements and, when requested, one term per
/// element over variables naming the generators in the given order.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub elements: Vec<usize>,
    pub terms: Option<Vec<Term>>,
}

pub fn subalgebra_closure(
    alg: &FiniteAlgebra,
    generators: &[usize],
    track_terms: bool,
    cap: usize,
    exec: Exec,
) -> Result<Subalgebra> {
    if let Some(&bad) = generators.iter().find(|&&g| g >= alg.size) {
        return Err(Error::invalid(format!("generator {bad} out of range")));
    }
    let specs: Vec<OpSpec> = alg
        .ops
        .iter()
        .enumerate()
        .map(|(k, o)| OpSpec {
            arity: o.arity,
            symmetric: alg.op_is_symmetric(k),
        })
        .collect();
    let c = close(
        generators.to_vec(),
        &specs,
        |op, args| {
            let a: Vec<usize> = args.iter().map(|&&x| x).collect();
            alg.eval(op, &a)
        },
        cap,
        exec,
        |_| false,
    )?;
    let names: Vec<String> = alg.ops.iter().map(|o| o.name.clone()).collect();
    let terms = track_terms.then(|| provenance_terms(&c, &names));
    let mut order: Vec<usize> = (0..c.elements.len()).collect();
    order.sort_by_key(|&i| c.elements[i]);
    Ok(Subalgebra {
        elements: order.iter().map(|&i| c.elements[i]).collect(),
        terms: terms.map(|t| order.iter().map(|&i| t[i].clone()).collect()),
    })
}

/// One term per closure element, built from the recorded origins.
pub fn provenance_terms<K>(c: &Closure<K>, op_names: &[String]) -> Vec<Term> {
    let mut terms: Vec<Term> = Vec::with_capacity(c.elements.len());
    for o in &c.origins {
        let t = match o {
            Origin::Generator(g) => Term::Var(*g),
            Origin::Apply { op, args } => Term::App(
                op_names[*op].clone(),
                args.iter().map(|&a| terms[a as usize].clone()).collect(),
            ),
        };
        terms.push(t);
    }
    terms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_lattice_ops() {
        let c3 = make_chain_lattice(3).unwrap();
        assert_eq!(c3.apply_op(0, &[1, 2]).unwrap(), 2);
        assert_eq!(c3.apply_op(1, &[1, 2]).unwrap(), 1);
        assert!(make_chain_lattice(1).is_err());
        assert_eq!(make_chain_lattice(2).unwrap().size(), 2);
    }

    #[test]
    fn ujm_examples() {
        let u23 = make_ujm_reduct(2, 2, 3).unwrap();
        assert_eq!(u23.apply_op(0, &[0, 1, 1]).unwrap(), 1);
        let u24 = make_ujm_reduct(3, 2, 4).unwrap();
        assert_eq!(u24.apply_op(0, &[0, 0, 2, 2]).unwrap(), 0);
        assert!(u24.apply_op(0, &[0, 0, 3, 2]).is_err());
        assert!(u24.apply_op(0, &[0, 0, 2]).is_err());
        assert!(make_ujm_reduct(2, 0, 3).is_err());
        assert!(make_ujm_reduct(2, 4, 3).is_err());
        assert!(make_ujm_reduct(2, 2, 2).is_err());
    }

    #[test]
    fn absorbing_and_majority() {
        let u = make_ujm_reduct(2, 2, 5).unwrap();
        assert!(!u.is_k_absorbing(0, 0, 1).unwrap());
        assert!(u.is_k_absorbing(0, 0, 2).unwrap());
        assert!(u.is_k_majority(0, 4).unwrap());
        assert!(!u.is_k_majority(0, 2).unwrap());
        assert!(u.is_near_unanimity(0).unwrap());
        assert!(u.is_symmetrical(0).unwrap());
        assert!(u.is_idempotent(0).unwrap());
    }

    #[test]
    fn subtraction_is_not_symmetrical() {
        let i = FiniteAlgebra::new("i", 2, vec![Operation::from_fn("i", 2, 2, |t| t[0] & (1 - t[1]))]).unwrap();
        assert_eq!(i.eval(0, &[0, 1]), 0);
        assert_eq!(i.eval(0, &[1, 0]), 1);
        assert!(!i.is_symmetrical(0).unwrap());
        let unary = FiniteAlgebra::new("n", 2, vec![Operation::from_fn("n", 2, 1, |t| 1 - t[0])]).unwrap();
        assert!(unary.is_symmetrical(0).unwrap());
    }

    #[test]
    fn validation_errors() {
        let bad = FiniteAlgebra::new("x", 2, vec![Operation { name: "f".into(), arity: 2, table: vec![0; 3] }]);
        assert!(matches!(bad, Err(Error::Invalid(ref s)) if s.contains("ops[0].table")));
        let bad = FiniteAlgebra::new("x", 2, vec![Operation { name: "f".into(), arity: 1, table: vec![0, 2] }]);
        assert!(bad.is_err());
        let json = r#"{"label":"x","size":2,"ops":[{"name":"f","arity":1,"table":[0]}]}"#;
        assert!(FiniteAlgebra::from_json(json).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = make_ujm_reduct(2, 2, 3).unwrap();
        let s = a.to_json();
        assert!(s.starts_with(r#"{"label":"N^{2,3}","size":2,"ops":[{"name":"u","arity":3,"table":[0,0,0,1,0,1,1,1]}]"#));
        assert_eq!(FiniteAlgebra::from_json(&s).unwrap(), a);
    }

    #[test]
    fn majority_cube_minus_top_not_closed() {
        let u = make_ujm_reduct(2, 2, 3).unwrap();
        let (p, ix) = direct_product(&[u.clone(), u.clone(), u], DEFAULT_TABLE_CAP).unwrap();
        let top = ix.encode(&[1, 1, 1]).unwrap();
        let sub: Vec<usize> = (0..8).filter(|&x| x != top).collect();
        let v = is_subuniverse(&p, &sub).unwrap().unwrap();
        assert_eq!(v.output, top);
        let mut args: Vec<Vec<usize>> = v.args.iter().map(|&a| ix.decode(a)).collect();
        args.sort();
        assert_eq!(args, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(is_subuniverse(&p, &[]).unwrap(), None);
    }

    #[test]
    fn lazy_product_agrees_with_tabled() {
        let a = make_ujm_reduct(3, 2, 3).unwrap();
        let b = make_ujm_reduct(2, 2, 3).unwrap();
        let (tabled, _) = direct_product(&[a.clone(), b.clone()], DEFAULT_TABLE_CAP).unwrap();
        let lazy = ProductAlgebra::new(vec![a, b]).unwrap();
        let mut od = Odometer::uniform(3, 6);
        while let Some(t) = od.next_tuple() {
            assert_eq!(tabled.eval(0, t), lazy.apply(0, t));
        }
        assert!(lazy.op_is_symmetric(0));
    }

    #[test]
    fn dissimilar_product_rejected() {
        let a = make_ujm_reduct(2, 2, 3).unwrap();
        let b = make_chain_lattice(2).unwrap();
        assert!(matches!(direct_product(&[a, b], 1000), Err(Error::Dissimilar(_))));
    }

    #[test]
    fn closure_with_terms() {
        let c = make_chain_lattice(5).unwrap();
        let (p, ix) = direct_product(&[c.clone(), c], DEFAULT_TABLE_CAP).unwrap();
        let g = [ix.encode(&[1, 3]).unwrap(), ix.encode(&[3, 1]).unwrap()];
        let sub = subalgebra_closure(&p, &g, true, 100, Exec::Parallel).unwrap();
        assert_eq!(sub.elements.len(), 4);
        for (e, t) in sub.elements.iter().zip(sub.terms.as_ref().unwrap()) {
            let vars: Vec<usize> = g.to_vec();
            assert_eq!(t.eval(&p, &vars).unwrap(), *e);
        }
        assert!(subalgebra_closure(&p, &[99], false, 10, Exec::Sequential).is_err());
    }
}

//! Semi-naive closure of a generating set under a family of operations.
//!
//! Each round only evaluates tuples containing at least one element found in
//! the previous round. Symmetric operations are evaluated on multisets only.
//! Results are merged in a fixed order so the element numbering does not
//! depend on the execution strategy.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::tuples::{Multisets, Odometer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpSpec {
    pub arity: usize,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Generator(usize),
    Apply { op: usize, args: Vec<u32> },
}

#[derive(Clone, Debug)]
pub struct Closure<K> {
    pub elements: Vec<K>,
    pub origins: Vec<Origin>,
    /// Index of the first element accepted by the stop predicate.
    pub hit: Option<usize>,
}

/// Largest number of operation applications allowed in a single round.
pub const ROUND_WORK_CAP: f64 = 5e10;

fn multisets(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n + i) as f64 / (i + 1) as f64)
}

/// Applications needed for one round over `n` elements of which `old` were
/// already combined.
fn round_work(ops: &[OpSpec], old: usize, n: usize) -> f64 {
    ops.iter()
        .filter(|s| s.arity > 0)
        .map(|s| {
            let k = s.arity as i32;
            if s.symmetric {
                multisets(n, s.arity) - multisets(old, s.arity)
            } else {
                (n as f64).powi(k) - (old as f64).powi(k)
            }
        })
        .sum()
}

#[derive(Clone, Copy, Debug)]
enum Work {
    Sym { op: usize, last: usize },
    Pos { op: usize, pos: usize, value: usize },
}

pub fn close<K, E, S>(
    generators: Vec<K>,
    ops: &[OpSpec],
    eval: E,
    cap: usize,
    exec: Exec,
    mut stop: S,
) -> Result<Closure<K>>
where
    K: Eq + Hash + Clone + Send + Sync,
    E: Fn(usize, &[&K]) -> K + Sync + Send,
    S: FnMut(&K) -> bool,
{
    let mut elements: Vec<K> = Vec::new();
    let mut origins = Vec::new();
    let mut index: HashMap<K, u32> = HashMap::new();
    for (g, k) in generators.into_iter().enumerate() {
        if index.contains_key(&k) {
            continue;
        }
        index.insert(k.clone(), elements.len() as u32);
        elements.push(k);
        origins.push(Origin::Generator(g));
        if elements.len() > cap {
            return Err(Error::cap("closure", cap, elements.len()));
        }
        if stop(elements.last().unwrap()) {
            let hit = Some(elements.len() - 1);
            return Ok(Closure {
                elements,
                origins,
                hit,
            });
        }
    }

    let mut old = 0;
    while old < elements.len() {
        let n = elements.len();
        let cost = round_work(ops, old, n);
        if cost > ROUND_WORK_CAP {
            return Err(Error::cap("closure round work", ROUND_WORK_CAP as usize, n));
        }
        let mut work = Vec::new();
        for (op, spec) in ops.iter().enumerate() {
            if spec.arity == 0 {
                continue;
            }
            if spec.symmetric {
                work.extend((old..n).map(|last| Work::Sym { op, last }));
            } else {
                for pos in 0..spec.arity {
                    if pos > 0 && old == 0 {
                        break;
                    }
                    work.extend((old..n).map(|value| Work::Pos { op, pos, value }));
                }
            }
        }

        let snapshot = &elements;
        let index_ref = &index;
        let eval_ref = &eval;
        let batches: Vec<std::result::Result<Vec<(K, Origin)>, usize>> =
            exec.map(work.len(), |w| {
                let item = work[w];
                let op = match item {
                    Work::Sym { op, .. } | Work::Pos { op, .. } => op,
                };
                let arity = ops[op].arity;
                let mut fresh: Vec<(K, Origin)> = Vec::new();
                let mut seen: HashSet<K> = HashSet::new();
                let mut args: Vec<&K> = Vec::with_capacity(arity);
                let mut handle = |tuple: &[usize]| -> bool {
                    args.clear();
                    args.extend(tuple.iter().map(|&i| &snapshot[i]));
                    let out = eval_ref(op, &args);
                    if !index_ref.contains_key(&out) && seen.insert(out.clone()) {
                        fresh.push((
                            out,
                            Origin::Apply {
                                op,
                                args: tuple.iter().map(|&i| i as u32).collect(),
                            },
                        ));
                        if seen.len() > cap {
                            return false;
                        }
                    }
                    true
                };
                match item {
                    Work::Sym { last, .. } => {
                        let mut ms = Multisets::new(arity - 1, last + 1);
                        let mut tuple = vec![last; arity];
                        while let Some(t) = ms.next_tuple() {
                            tuple[..arity - 1].copy_from_slice(t);
                            if !handle(&tuple) {
                                return Err(seen.len());
                            }
                        }
                    }
                    Work::Pos { pos, value, .. } => {
                        let mut lo = vec![0; arity];
                        let mut hi = vec![n; arity];
                        for h in hi.iter_mut().take(pos) {
                            *h = old;
                        }
                        lo[pos] = value;
                        hi[pos] = value + 1;
                        let mut od = Odometer::ranges(lo, hi);
                        while let Some(t) = od.next_tuple() {
                            if !handle(t) {
                                return Err(seen.len());
                            }
                        }
                    }
                }
                Ok(fresh)
            });

        for batch in batches {
            let batch = batch.map_err(|explored| Error::cap("closure", cap, n + explored))?;
            for (k, origin) in batch {
                if index.contains_key(&k) {
                    continue;
                }
                index.insert(k.clone(), elements.len() as u32);
                elements.push(k);
                origins.push(origin);
                if elements.len() > cap {
                    return Err(Error::cap("closure", cap, elements.len()));
                }
                if stop(elements.last().unwrap()) {
                    let hit = Some(elements.len() - 1);
                    return Ok(Closure {
                        elements,
                        origins,
                        hit,
                    });
                }
            }
        }
        old = n;
    }
    Ok(Closure {
        elements,
        origins,
        hit: None,
    })
}

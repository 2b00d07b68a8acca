//! Free algebras of finitely generated varieties, realized as the
//! subalgebra of `∏ A_i^{A_i^g}` generated by the projections.

use std::collections::HashMap;

use crate::algebra::{Algebra, FiniteAlgebra};
use crate::algebra::provenance_terms;
use crate::closure::{close, OpSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::term::Term;
use crate::tuples::{tuple_index, Odometer};

pub const DEFAULT_COORD_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of coordinates of the ambient product.
    pub coords: usize,
    /// Maximum number of generated elements.
    pub elements: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            coords: DEFAULT_COORD_CAP,
            elements: crate::algebra::DEFAULT_CLOSURE_CAP,
        }
    }
}

/// Checks that the algebras are similar, nonempty and small enough for
/// byte-valued coordinates; returns the operation specs.
pub(crate) fn op_specs(gens: &[FiniteAlgebra]) -> Result<Vec<OpSpec>> {
    let first = gens.first().ok_or_else(|| Error::invalid("no generating algebras"))?;
    for (k, a) in gens.iter().enumerate() {
        if !first.similar(a) {
            return Err(Error::Dissimilar(format!("generator {k} ({}) differs from {}", a.label(), first.label())));
        }
        if a.size() > 256 {
            return Err(Error::invalid(format!("generator {k} has more than 256 elements")));
        }
    }
    Ok((0..first.ops().len())
        .map(|op| OpSpec {
            arity: first.ops()[op].arity,
            symmetric: gens.iter().all(|a| a.op_is_symmetric(op)),
        })
        .collect())
}

/// Componentwise evaluation where coordinate `c` lives in `gens[owner[c]]`.
pub(crate) fn eval_vectors(gens: &[FiniteAlgebra], owner: &[usize], op: usize, args: &[&Box<[u8]>]) -> Box<[u8]> {
    let mut col = vec![0usize; args.len()];
    (0..owner.len())
        .map(|c| {
            for (slot, a) in col.iter_mut().zip(args) {
                *slot = a[c] as usize;
            }
            gens[owner[c]].eval(op, &col) as u8
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub gens: Vec<FiniteAlgebra>,
    pub g: usize,
    /// Coordinate `c` is the assignment `assignments[c]` in `gens[owner[c]]`.
    pub owner: Vec<usize>,
    pub assignments: Vec<Vec<usize>>,
    /// First coordinate of each generating algebra's block.
    offsets: Vec<usize>,
    pub elements: Vec<Box<[u8]>>,
    pub terms: Vec<Term>,
    /// Element index of each projection.
    pub projections: Vec<usize>,
}

impl FreeAlgebra {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn coord_count(&self) -> usize {
        self.owner.len()
    }

    /// Coordinate of assignment `asg` in generating algebra `alg`.
    pub fn coord(&self, alg: usize, asg: &[usize]) -> usize {
        self.offsets[alg] + tuple_index(self.gens[alg].size(), asg)
    }

    pub fn value(&self, elem: usize, alg: usize, asg: &[usize]) -> usize {
        self.elements[elem][self.coord(alg, asg)] as usize
    }

    pub fn op_names(&self) -> Vec<String> {
        self.gens[0].ops().iter().map(|o| o.name.clone()).collect()
    }
}

pub fn build_free_algebra(gens: &[FiniteAlgebra], g: usize, caps: Caps, exec: Exec) -> Result<FreeAlgebra> {
    let specs = op_specs(gens)?;
    if g == 0 {
        return Err(Error::invalid("need at least one free generator"));
    }
    let mut owner = Vec::new();
    let mut assignments = Vec::new();
    let mut offsets = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        offsets.push(owner.len());
        let mut od = Odometer::uniform(g, a.size());
        while let Some(t) = od.next_tuple() {
            owner.push(i);
            assignments.push(t.to_vec());
            if owner.len() > caps.coords {
                return Err(Error::cap("free algebra coordinates", caps.coords, owner.len()));
            }
        }
    }
    let proj: Vec<Box<[u8]>> = (0..g)
        .map(|k| assignments.iter().map(|t| t[k] as u8).collect())
        .collect();
    let c = close(
        proj.clone(),
        &specs,
        |op, args| eval_vectors(gens, &owner, op, args),
        caps.elements,
        exec,
        |_| false,
    )?;
    let names: Vec<String> = gens[0].ops().iter().map(|o| o.name.clone()).collect();
    let terms = provenance_terms(&c, &names);
    let index: HashMap<&Box<[u8]>, usize> = c.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let projections = proj.iter().map(|p| index[p]).collect();
    Ok(FreeAlgebra {
        gens: gens.to_vec(),
        g,
        owner,
        assignments,
        offsets,
        elements: c.elements,
        terms,
        projections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_ujm_reduct, one_element_like};

    #[test]
    fn known_sizes() {
        let n23 = make_ujm_reduct(2, 2, 3).unwrap();
        let n24 = make_ujm_reduct(2, 2, 4).unwrap();
        let size = |gens: &[FiniteAlgebra], g| build_free_algebra(gens, g, Caps::default(), Exec::Parallel).unwrap().size();
        assert_eq!(size(&[n23.clone()], 2), 2);
        assert_eq!(size(&[n23.clone()], 3), 4);
        assert_eq!(size(&[n24.clone()], 3), 10);
        assert_eq!(size(&[n23], 4), 12);
        assert_eq!(size(&[n24.clone()], 4), 54);
        assert_eq!(size(&[one_element_like(&n24)], 3), 1);
    }

    #[test]
    fn provenance_re_evaluates() {
        let gens = vec![make_ujm_reduct(2, 2, 5).unwrap(), make_ujm_reduct(2, 3, 5).unwrap()];
        let f = build_free_algebra(&gens, 3, Caps::default(), Exec::Parallel).unwrap();
        assert_eq!(f.size(), 19);
        for (e, t) in f.elements.iter().zip(&f.terms) {
            for c in 0..f.coord_count() {
                assert_eq!(t.eval(&gens[f.owner[c]], &f.assignments[c]).unwrap(), e[c] as usize);
            }
        }
    }

    #[test]
    fn caps_are_reported() {
        let n24 = make_ujm_reduct(2, 2, 4).unwrap();
        let tight = Caps { coords: 4, elements: 100 };
        assert!(build_free_algebra(&[n24.clone()], 3, tight, Exec::Sequential).unwrap_err().is_cap());
        let few = Caps { coords: 100, elements: 5 };
        assert!(build_free_algebra(&[n24], 3, few, Exec::Sequential).unwrap_err().is_cap());
    }
}

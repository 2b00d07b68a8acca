use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, ProductAlgebra};
use crate::boxes::{full_mask, BoxUnion, Mask};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Membership templates `(−,0,a,−)`, `(0,0,−,−)`, `(0,−,d,−)`, `(−,−,−,0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    I,
    II,
    III,
    IV,
}

/// Inputs of the four-coordinate construction. `A_3` is a product given by
/// its factors, and `F ⊆ A_3 × A_4` a box union over those factors followed
/// by `A_4`.
#[derive(Clone, Debug)]
pub struct Lemma22Input<'a> {
    pub a1: &'a FiniteAlgebra,
    pub a2: &'a FiniteAlgebra,
    pub a3: &'a [FiniteAlgebra],
    pub a4: &'a FiniteAlgebra,
    pub zero1: usize,
    pub zero2: usize,
    pub zero4: usize,
    pub h: usize,
    pub k: usize,
    pub a: &'a [usize],
    pub d: &'a [usize],
    pub f: &'a BoxUnion,
}

#[derive(Clone, Debug)]
pub struct Lemma22Output {
    /// `A_1 × A_2 × A_3 × A_4` with `A_3` flattened into its factors.
    pub product: ProductAlgebra,
    pub boxes: BoxUnion,
    /// `A_3 × A_4` with the same flattening.
    pub f_product: ProductAlgebra,
}

impl Lemma22Output {
    pub fn elements(&self) -> Vec<usize> {
        self.boxes.elements(self.product.indexing())
    }
}

fn point_mask(tuple: &[usize]) -> Vec<Mask> {
    tuple.iter().map(|&v| 1 << v).collect()
}

/// Types whose template the tuple `(x, w, z, y)` matches (membership of
/// `(z, y)` in `F` is not checked here).
pub fn type_tags(input: &Lemma22Input<'_>, tuple: &[usize]) -> Vec<TypeTag> {
    let n3 = input.a3.len();
    let (x1, x2) = (tuple[0], tuple[1]);
    let z = &tuple[2..2 + n3];
    let y = tuple[2 + n3];
    let mut tags = Vec::new();
    if x2 == input.zero2 && z == input.a {
        tags.push(TypeTag::I);
    }
    if x1 == input.zero1 && x2 == input.zero2 {
        tags.push(TypeTag::II);
    }
    if x1 == input.zero1 && z == input.d {
        tags.push(TypeTag::III);
    }
    if y == input.zero4 {
        tags.push(TypeTag::IV);
    }
    tags
}

fn check_hypotheses(inp: &Lemma22Input<'_>, exec: Exec) -> Result<ProductAlgebra> {
    let mut all: Vec<&FiniteAlgebra> = vec![inp.a1, inp.a2];
    all.extend(inp.a3.iter());
    all.push(inp.a4);
    for (k, alg) in all.iter().enumerate() {
        if alg.ops().len() != 1 {
            return Err(Error::hypothesis("single operation", format!("algebra {k} has {} operations", alg.ops().len())));
        }
    }
    let m = inp.a1.ops()[0].arity;
    if all.iter().any(|a| a.ops()[0].arity != m) {
        return Err(Error::hypothesis("similarity", "operations differ in arity"));
    }
    if m < 3 {
        return Err(Error::hypothesis("arity", format!("m = {m} < 3")));
    }
    if !(1 <= inp.h && inp.h <= inp.k && inp.h + inp.k <= m) {
        return Err(Error::hypothesis(
            "parameters",
            format!("need 1 ≤ h ≤ k and h + k ≤ m, got h = {}, k = {}, m = {m}", inp.h, inp.k),
        ));
    }
    if inp.a.len() != inp.a3.len() || inp.d.len() != inp.a3.len() {
        return Err(Error::invalid("a and d must be tuples over the factors of A_3"));
    }
    for (name, alg, zero) in [("zero1 h-absorbing", inp.a1, inp.zero1), ("zero2 h-absorbing", inp.a2, inp.zero2)] {
        if zero >= alg.size() || !alg.is_k_absorbing(0, zero, inp.h)? {
            return Err(Error::hypothesis(name, format!("{zero} is not {}-absorbing in {}", inp.h, alg.label())));
        }
    }
    for f in inp.a3 {
        if !f.is_k_majority(0, inp.k)? {
            return Err(Error::hypothesis(
                "A_3 k-majority",
                format!("operation of {} is not {}-majority", f.label(), inp.k),
            ));
        }
    }
    if inp.zero4 >= inp.a4.size() || !inp.a4.is_k_absorbing(0, inp.zero4, 2)? {
        return Err(Error::hypothesis("zero4 2-absorbing", format!("{} is not 2-absorbing in {}", inp.zero4, inp.a4.label())));
    }
    for (c, f) in inp.a3.iter().enumerate() {
        if inp.a[c] >= f.size() || inp.d[c] >= f.size() {
            return Err(Error::invalid("a or d out of range"));
        }
    }
    let mut f_factors: Vec<FiniteAlgebra> = inp.a3.to_vec();
    f_factors.push(inp.a4.clone());
    let f_product = ProductAlgebra::new(f_factors)?;
    if inp.f.sizes() != f_product.indexing().factor_sizes() {
        return Err(Error::invalid("F does not live on A_3 × A_4"));
    }
    if inp.f.boxes().is_empty() {
        return Err(Error::hypothesis("F subuniverse", "F is empty"));
    }
    if let Some(v) = inp.f.closure_violation(&f_product, exec)? {
        return Err(Error::hypothesis("F subuniverse", format!("{v:?}")));
    }
    Ok(f_product)
}

/// Builds `B(a, d)` after verifying every hypothesis, then re-verifies
/// closure of the result.
pub fn lemma22_build(inp: &Lemma22Input<'_>, exec: Exec) -> Result<Lemma22Output> {
    let f_product = check_hypotheses(inp, exec)?;
    let n3 = inp.a3.len();
    let mut sizes = vec![inp.a1.size(), inp.a2.size()];
    sizes.extend(inp.a3.iter().map(|f| f.size()));
    sizes.push(inp.a4.size());
    let mut boxes = BoxUnion::new(sizes)?;
    let all1 = full_mask(inp.a1.size());
    let all2 = full_mask(inp.a2.size());
    let a_pt = point_mask(inp.a);
    let d_pt = point_mask(inp.d);
    for fb in inp.f.boxes() {
        let (m3, m4) = (&fb[..n3], fb[n3]);
        let meet = |pt: &[Mask]| -> Option<Vec<Mask>> {
            let v: Vec<Mask> = pt.iter().zip(m3).map(|(&p, &m)| p & m).collect();
            v.iter().all(|&x| x != 0).then_some(v)
        };
        let mk = |x1: Mask, x2: Mask, z: &[Mask], y: Mask| {
            let mut b = vec![x1, x2];
            b.extend_from_slice(z);
            b.push(y);
            b
        };
        if let Some(z) = meet(&a_pt) {
            boxes.push(mk(all1, 1 << inp.zero2, &z, m4));
        }
        boxes.push(mk(1 << inp.zero1, 1 << inp.zero2, m3, m4));
        if let Some(z) = meet(&d_pt) {
            boxes.push(mk(1 << inp.zero1, all2, &z, m4));
        }
        if m4 >> inp.zero4 & 1 == 1 {
            boxes.push(mk(all1, all2, m3, 1 << inp.zero4));
        }
    }
    boxes.prune();
    let mut factors = vec![inp.a1.clone(), inp.a2.clone()];
    factors.extend(inp.a3.iter().cloned());
    factors.push(inp.a4.clone());
    let product = ProductAlgebra::new(factors)?;
    if let Some(v) = boxes.closure_violation(&product, exec)? {
        return Err(Error::verification("lemma22 closure", format!("{v:?}")));
    }
    Ok(Lemma22Output {
        product,
        boxes,
        f_product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_subuniverse, make_ujm_reduct, one_element_like};

    fn second_step(m: usize, q: usize) -> (FiniteAlgebra, FiniteAlgebra, FiniteAlgebra, BoxUnion) {
        let ell = m / 2;
        let a1 = make_ujm_reduct(q + 1, ell, m).unwrap();
        let a4 = make_ujm_reduct(2, 2, m).unwrap();
        let a3 = one_element_like(&a4);
        let mut f = BoxUnion::new(vec![1, 2]).unwrap();
        f.push(vec![1, 3]);
        (a1, a3, a4, f)
    }

    #[test]
    fn second_step_contains_displayed_elements() {
        let (m, q) = (4, 2);
        let (a1, a3, a4, f) = second_step(m, q);
        let a3s = [a3];
        let inp = Lemma22Input {
            a1: &a1, a2: &a1, a3: &a3s, a4: &a4,
            zero1: 0, zero2: 0, zero4: 0, h: 2, k: 2, a: &[0], d: &[0], f: &f,
        };
        let out = lemma22_build(&inp, Exec::Parallel).unwrap();
        assert!(out.boxes.contains(&[q, 0, 0, 1]));
        assert!(out.boxes.contains(&[0, q, 0, 1]));
        assert!(out.boxes.contains(&[1, 1, 0, 0]));
        assert!(!out.boxes.contains(&[1, 1, 0, 1]));
        assert!(out.boxes.contains(&[0, 0, 0, 1]));
        assert_eq!(type_tags(&inp, &[2, 0, 0, 1]), vec![TypeTag::I]);
        let elems = out.elements();
        assert_eq!(is_subuniverse(&out.product, &elems).unwrap(), None);
    }

    #[test]
    fn hypotheses_are_named() {
        let (a1, a3, a4, f) = second_step(4, 2);
        let a3s = [a3];
        let base = Lemma22Input {
            a1: &a1, a2: &a1, a3: &a3s, a4: &a4,
            zero1: 0, zero2: 0, zero4: 0, h: 2, k: 2, a: &[0], d: &[0], f: &f,
        };
        let name = |inp: &Lemma22Input<'_>| match lemma22_build(inp, Exec::Sequential) {
            Err(Error::Hypothesis { name, .. }) => name,
            other => panic!("expected hypothesis error, got {other:?}"),
        };
        assert_eq!(name(&Lemma22Input { zero1: 2, ..base.clone() }), "zero1 h-absorbing");
        assert_eq!(name(&Lemma22Input { zero2: 1, ..base.clone() }), "zero2 h-absorbing");
        assert_eq!(name(&Lemma22Input { h: 1, ..base.clone() }), "zero1 h-absorbing");
        assert_eq!(name(&Lemma22Input { zero4: 1, ..base.clone() }), "zero4 2-absorbing");
        assert_eq!(name(&Lemma22Input { h: 3, k: 3, ..base.clone() }), "parameters");
        let nontrivial = [make_ujm_reduct(2, 2, 4).unwrap()];
        let mut f2 = BoxUnion::new(vec![2, 2]).unwrap();
        f2.push(vec![3, 3]);
        assert_eq!(name(&Lemma22Input { a3: &nontrivial, f: &f2, ..base.clone() }), "A_3 k-majority");
        let mut empty = BoxUnion::new(vec![1, 2]).unwrap();
        empty.push(vec![0, 0]);
        assert_eq!(name(&Lemma22Input { f: &empty, ..base.clone() }), "F subuniverse");
    }
}

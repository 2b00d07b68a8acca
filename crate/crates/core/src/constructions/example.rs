use crate::algebra::{make_ujm_reduct, ProductAlgebra};
use crate::boxes::BoxUnion;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// `A = (N^{2,m})^{m−1}` with the subuniverse `B = A ∖ {(1, …, 1)}`.
#[derive(Clone, Debug)]
pub struct Example31 {
    pub algebra: ProductAlgebra,
    pub subset: Vec<usize>,
    pub top: usize,
}

pub fn example31_build(m: usize, exec: Exec) -> Result<Example31> {
    if m < 4 {
        return Err(Error::invalid(format!("m = {m}: the top-removed cube is closed only for m ≥ 4")));
    }
    let u = make_ujm_reduct(2, 2, m)?;
    let algebra = ProductAlgebra::new(vec![u; m - 1])?;
    let mut boxes = BoxUnion::new(vec![2; m - 1])?;
    for c in 0..m - 1 {
        let mut b = vec![3; m - 1];
        b[c] = 1;
        boxes.push(b);
    }
    if let Some(v) = boxes.closure_violation(&algebra, exec)? {
        return Err(Error::verification("example31", format!("not closed: {v:?}")));
    }
    let subset = boxes.elements(algebra.indexing());
    let top = algebra.indexing().total() - 1;
    Ok(Example31 { algebra, subset, top })
}

/// The `n` tuples of length `n` with a single 0.
pub fn one_zero_tuples(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| (0..n).map(|c| usize::from(c != i)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_subuniverse, Algebra};

    #[test]
    fn four_ary_case() {
        let ex = example31_build(4, Exec::Sequential).unwrap();
        assert_eq!(ex.algebra.size(), 8);
        assert_eq!(ex.subset.len(), 7);
        assert_eq!(is_subuniverse(&ex.algebra, &ex.subset).unwrap(), None);
        assert!(example31_build(3, Exec::Sequential).is_err());
    }

    #[test]
    fn one_zero_tuples_go_to_top() {
        for m in 4..=6 {
            let nu = make_ujm_reduct(2, 2, m - 1).unwrap();
            let rows = one_zero_tuples(m - 1);
            let out: Vec<usize> = (0..m - 1)
                .map(|c| nu.eval(0, &rows.iter().map(|r| r[c]).collect::<Vec<_>>()))
                .collect();
            assert_eq!(out, vec![1; m - 1]);
        }
    }
}

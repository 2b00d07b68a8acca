//! Subsets of a product given as finite unions of boxes (products of
//! per-coordinate subsets). Closure under a componentwise operation is
//! decided on boxes: the image of a tuple of boxes is again a box.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, ProductAlgebra, Violation};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::tuples::{FactorIndexing, Multisets, Odometer};

pub type Mask = u64;

pub fn mask_of(values: &[usize]) -> Mask {
    values.iter().fold(0, |m, &v| m | (1 << v))
}

pub fn full_mask(size: usize) -> Mask {
    if size == 64 {
        !0
    } else {
        (1 << size) - 1
    }
}

fn mask_values(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&v| m >> v & 1 == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxUnion {
    sizes: Vec<usize>,
    boxes: Vec<Vec<Mask>>,
}

impl BoxUnion {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.iter().any(|&s| s == 0 || s > 64) {
            return Err(Error::invalid("box coordinates need sizes in 1..=64"));
        }
        Ok(BoxUnion {
            sizes,
            boxes: Vec::new(),
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn boxes(&self) -> &[Vec<Mask>] {
        &self.boxes
    }

    pub fn full_box(&self) -> Vec<Mask> {
        self.sizes.iter().map(|&s| full_mask(s)).collect()
    }

    /// Adds a box; empty boxes are dropped.
    pub fn push(&mut self, b: Vec<Mask>) {
        assert_eq!(b.len(), self.sizes.len(), "box arity");
        if b.iter().zip(&self.sizes).any(|(&m, &s)| m & full_mask(s) == 0) {
            return;
        }
        let b = b.iter().zip(&self.sizes).map(|(&m, &s)| m & full_mask(s)).collect();
        self.boxes.push(b);
    }

    pub fn push_point(&mut self, tuple: &[usize]) {
        self.push(tuple.iter().map(|&v| 1 << v).collect());
    }

    /// Drops boxes contained in another box.
    pub fn prune(&mut self) {
        let boxes = std::mem::take(&mut self.boxes);
        let mut keep: Vec<Vec<Mask>> = Vec::new();
        for (i, b) in boxes.iter().enumerate() {
            let covered = boxes.iter().enumerate().any(|(k, o)| {
                k != i && box_le(b, o) && (!box_le(o, b) || k < i)
            });
            if !covered {
                keep.push(b.clone());
            }
        }
        self.boxes = keep;
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.boxes
            .iter()
            .any(|b| b.iter().zip(tuple).all(|(&m, &v)| m >> v & 1 == 1))
    }

    /// Sorted flat indices of all members.
    pub fn elements(&self, ix: &FactorIndexing) -> Vec<usize> {
        let mut out = Vec::new();
        for b in &self.boxes {
            let lists: Vec<Vec<usize>> = b.iter().map(|&m| mask_values(m).collect()).collect();
            let mut od = Odometer::ranges(vec![0; lists.len()], lists.iter().map(Vec::len).collect());
            let mut t = vec![0; lists.len()];
            while let Some(pos) = od.next_tuple() {
                for (slot, (l, &p)) in t.iter_mut().zip(lists.iter().zip(pos)) {
                    *slot = l[p];
                }
                out.push(ix.encode_unchecked(&t));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Some point of `b` outside the union, if any.
    pub fn uncovered_point(&self, b: &[Mask]) -> Option<Vec<usize>> {
        let candidates: Vec<&Vec<Mask>> = self.boxes.iter().filter(|o| intersects(b, o)).collect();
        uncovered(b, &candidates)
    }

    /// Concatenation of coordinates: every box of `self` times every box of `other`.
    pub fn product(&self, other: &BoxUnion) -> BoxUnion {
        let mut sizes = self.sizes.clone();
        sizes.extend(&other.sizes);
        let mut out = BoxUnion {
            sizes,
            boxes: Vec::new(),
        };
        for a in &self.boxes {
            for b in &other.boxes {
                let mut c = a.clone();
                c.extend(b);
                out.boxes.push(c);
            }
        }
        out
    }

    /// Violation of closure under the operations of `alg`, whose factors must
    /// match the box coordinates.
    pub fn closure_violation(&self, alg: &ProductAlgebra, exec: Exec) -> Result<Option<Violation>> {
        if alg.indexing().factor_sizes() != self.sizes.as_slice() {
            return Err(Error::invalid("box coordinates do not match the product factors"));
        }
        let nb = self.boxes.len();
        let images = ImageCache::default();
        for (op, arity) in alg.arities().into_iter().enumerate() {
            let symmetric = alg.op_is_symmetric(op);
            let mut combos: Vec<Vec<usize>> = Vec::new();
            if symmetric {
                let mut ms = Multisets::new(arity, nb);
                while let Some(t) = ms.next_tuple() {
                    combos.push(t.to_vec());
                }
            } else {
                let mut od = Odometer::uniform(arity, nb);
                while let Some(t) = od.next_tuple() {
                    combos.push(t.to_vec());
                }
            }
            let found = exec.map(combos.len(), |i| {
                let combo = &combos[i];
                let mut image_box = Vec::with_capacity(self.sizes.len());
                let mut witnesses = Vec::with_capacity(self.sizes.len());
                for c in 0..self.sizes.len() {
                    let masks: Vec<Mask> = combo.iter().map(|&b| self.boxes[b][c]).collect();
                    // symmetric ops share cache entries across argument orders
                    let mut order: Vec<usize> = (0..arity).collect();
                    if symmetric {
                        order.sort_by_key(|&i| masks[i]);
                    }
                    let keyed: Vec<Mask> = order.iter().map(|&i| masks[i]).collect();
                    let img = images.get(alg, op, c, &keyed);
                    image_box.push(img.mask);
                    witnesses.push((img, order));
                }
                self.uncovered_point(&image_box).map(|p| (p, witnesses))
            });
            if let Some((point, witnesses)) = found.into_iter().flatten().next() {
                let mut args = vec![vec![0; self.sizes.len()]; arity];
                for (c, (img, order)) in witnesses.iter().enumerate() {
                    let w = &img.witness[&point[c]];
                    for (&i, &v) in order.iter().zip(w) {
                        args[i][c] = v;
                    }
                }
                let ix = alg.indexing();
                return Ok(Some(Violation {
                    op,
                    args: args.iter().map(|a| ix.encode_unchecked(a)).collect(),
                    output: ix.encode_unchecked(&point),
                }));
            }
        }
        Ok(None)
    }
}

fn box_le(a: &[Mask], b: &[Mask]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x & !y == 0)
}

fn intersects(a: &[Mask], b: &[Mask]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x & y != 0)
}

fn uncovered(b: &[Mask], candidates: &[&Vec<Mask>]) -> Option<Vec<usize>> {
    let relevant: Vec<&Vec<Mask>> = candidates.iter().copied().filter(|o| intersects(b, o)).collect();
    if relevant.is_empty() {
        return Some(b.iter().map(|&m| m.trailing_zeros() as usize).collect());
    }
    if relevant.iter().any(|o| box_le(b, o)) {
        return None;
    }
    // split along a coordinate where the first relevant box is partial
    let o = relevant[0];
    let c = (0..b.len()).find(|&c| b[c] & !o[c] != 0).expect("some coordinate is partial");
    let mut inside = b.to_vec();
    inside[c] = b[c] & o[c];
    let mut outside = b.to_vec();
    outside[c] = b[c] & !o[c];
    uncovered(&outside, &relevant).or_else(|| uncovered(&inside, &relevant))
}

/// Image of a tuple of masks under one coordinate's operation, with one
/// argument tuple per output value.
#[derive(Debug)]
struct Image {
    mask: Mask,
    witness: HashMap<usize, Vec<usize>>,
}

#[derive(Default)]
struct ImageCache {
    map: Mutex<HashMap<(usize, usize, Vec<Mask>), Arc<Image>>>,
}

impl ImageCache {
    fn get(&self, alg: &ProductAlgebra, op: usize, coord: usize, masks: &[Mask]) -> Arc<Image> {
        let key = (op, coord, masks.to_vec());
        if let Some(img) = self.map.lock().unwrap().get(&key) {
            return img.clone();
        }
        let f = &alg.factors()[coord];
        let lists: Vec<Vec<usize>> = masks.iter().map(|&m| mask_values(m).collect()).collect();
        let mut od = Odometer::ranges(vec![0; lists.len()], lists.iter().map(Vec::len).collect());
        let mut args = vec![0; lists.len()];
        let mut mask = 0;
        let mut witness = HashMap::new();
        let full = full_mask(f.size());
        while let Some(pos) = od.next_tuple() {
            for (a, (l, &p)) in args.iter_mut().zip(lists.iter().zip(pos)) {
                *a = l[p];
            }
            let v = f.eval(op, &args);
            if mask >> v & 1 == 0 {
                mask |= 1 << v;
                witness.insert(v, args.clone());
                if mask == full {
                    break;
                }
            }
        }
        let img = Arc::new(Image { mask, witness });
        self.map.lock().unwrap().insert(key, img.clone());
        img
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_subuniverse, make_ujm_reduct};

    #[test]
    fn elements_and_contains() {
        let mut u = BoxUnion::new(vec![3, 2]).unwrap();
        u.push(vec![mask_of(&[0, 2]), mask_of(&[1])]);
        u.push(vec![mask_of(&[2]), mask_of(&[0, 1])]);
        let ix = FactorIndexing::new(vec![3, 2]).unwrap();
        assert_eq!(u.elements(&ix), vec![1, 4, 5]);
        assert!(u.contains(&[2, 0]) && !u.contains(&[1, 1]));
        assert_eq!(u.uncovered_point(&[mask_of(&[0, 2]), full_mask(2)]), Some(vec![0, 0]));
        assert_eq!(u.uncovered_point(&[mask_of(&[2]), full_mask(2)]), None);
    }

    #[test]
    fn prune_keeps_one_of_equal_boxes() {
        let mut u = BoxUnion::new(vec![2, 2]).unwrap();
        u.push(vec![1, 3]);
        u.push(vec![3, 3]);
        u.push(vec![3, 3]);
        u.prune();
        assert_eq!(u.boxes().len(), 1);
    }

    #[test]
    fn closure_agrees_with_exhaustive_check() {
        let u = make_ujm_reduct(2, 2, 4).unwrap();
        let p = ProductAlgebra::new(vec![u.clone(), u.clone(), u]).unwrap();
        let mut minus_top = BoxUnion::new(vec![2, 2, 2]).unwrap();
        for c in 0..3 {
            let mut b = vec![3; 3];
            b[c] = 1;
            minus_top.push(b);
        }
        assert_eq!(minus_top.closure_violation(&p, Exec::Parallel).unwrap(), None);
        let elems = minus_top.elements(p.indexing());
        assert_eq!(is_subuniverse(&p, &elems).unwrap(), None);

        let m3 = make_ujm_reduct(2, 2, 3).unwrap();
        let p3 = ProductAlgebra::new(vec![m3.clone(), m3.clone(), m3]).unwrap();
        let v = minus_top.closure_violation(&p3, Exec::Sequential).unwrap().unwrap();
        assert_eq!(v.output, 7);
        assert_eq!(p3.apply(v.op, &v.args), 7);
        assert!(v.args.iter().all(|&a| elems.contains(&a)));
    }
}

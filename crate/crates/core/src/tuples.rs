//! Mixed-radix tuple indexing and enumeration helpers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major index of `args` over a universe of `size` elements, first
/// argument most significant.
#[inline]
pub fn tuple_index(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

pub fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Odometer over all tuples of a fixed length, last position fastest. Ranges
/// may differ per position.
#[derive(Clone, Debug)]
pub struct Odometer {
    lo: Vec<usize>,
    hi: Vec<usize>,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn uniform(len: usize, n: usize) -> Self {
        Self::ranges(vec![0; len], vec![n; len])
    }

    pub fn ranges(lo: Vec<usize>, hi: Vec<usize>) -> Self {
        let done = lo.iter().zip(&hi).any(|(l, h)| l >= h);
        Odometer {
            cur: lo.clone(),
            lo,
            hi,
            started: false,
            done,
        }
    }

    /// Advances to the next tuple; `None` when exhausted.
    pub fn next_tuple(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.cur);
        }
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            self.cur[i] += 1;
            if self.cur[i] < self.hi[i] {
                return Some(&self.cur);
            }
            self.cur[i] = self.lo[i];
        }
    }
}

/// Nondecreasing tuples of length `len` with entries in `0..n`.
#[derive(Clone, Debug)]
pub struct Multisets {
    n: usize,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl Multisets {
    pub fn new(len: usize, n: usize) -> Self {
        Multisets {
            n,
            cur: vec![0; len],
            started: false,
            done: n == 0 && len > 0,
        }
    }

    pub fn next_tuple(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.cur);
        }
        let len = self.cur.len();
        let mut i = len;
        while i > 0 {
            i -= 1;
            if self.cur[i] + 1 < self.n {
                let v = self.cur[i] + 1;
                for slot in &mut self.cur[i..] {
                    *slot = v;
                }
                return Some(&self.cur);
            }
        }
        self.done = true;
        None
    }
}

/// Bijection between tuples of a product universe and flat indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorIndexing {
    factor_sizes: Vec<usize>,
    total: usize,
}

impl FactorIndexing {
    pub fn new(factor_sizes: Vec<usize>) -> Result<Self> {
        if factor_sizes.is_empty() {
            return Err(Error::invalid("product needs at least one factor"));
        }
        if factor_sizes.contains(&0) {
            return Err(Error::invalid("factor sizes must be positive"));
        }
        let total = factor_sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or_else(|| Error::invalid("product size overflows"))?;
        Ok(FactorIndexing {
            factor_sizes,
            total,
        })
    }

    pub fn factor_sizes(&self) -> &[usize] {
        &self.factor_sizes
    }

    pub fn len(&self) -> usize {
        self.factor_sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factor_sizes.is_empty()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.factor_sizes.len() {
            return Err(Error::invalid(format!(
                "tuple has {} coordinates, product has {}",
                tuple.len(),
                self.factor_sizes.len()
            )));
        }
        for (c, (&x, &s)) in tuple.iter().zip(&self.factor_sizes).enumerate() {
            if x >= s {
                return Err(Error::invalid(format!(
                    "coordinate {c} value {x} out of range {s}"
                )));
            }
        }
        Ok(self.encode_unchecked(tuple))
    }

    #[inline]
    pub fn encode_unchecked(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.factor_sizes)
            .fold(0, |acc, (&x, &s)| acc * s + x)
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factor_sizes.len()];
        self.decode_into(index, &mut out);
        out
    }

    #[inline]
    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &s) in out.iter_mut().zip(&self.factor_sizes).rev() {
            *slot = index % s;
            index /= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_matches_row_major_order() {
        let mut od = Odometer::uniform(3, 3);
        let mut idx = 0;
        while let Some(t) = od.next_tuple() {
            assert_eq!(tuple_index(3, t), idx);
            idx += 1;
        }
        assert_eq!(idx, 27);
    }

    #[test]
    fn multisets_count() {
        let mut ms = Multisets::new(3, 4);
        let mut count = 0;
        while let Some(t) = ms.next_tuple() {
            assert!(t.windows(2).all(|w| w[0] <= w[1]));
            count += 1;
        }
        assert_eq!(count, 20);
        assert!(Multisets::new(2, 0).next_tuple().is_none());
        let mut empty = Multisets::new(0, 3);
        assert_eq!(empty.next_tuple(), Some(&[][..]));
        assert!(empty.next_tuple().is_none());
    }

    #[test]
    fn indexing_round_trip() {
        let ix = FactorIndexing::new(vec![3, 2, 4]).unwrap();
        assert_eq!(ix.total(), 24);
        for i in 0..24 {
            assert_eq!(ix.encode(&ix.decode(i)).unwrap(), i);
        }
        assert_eq!(ix.encode(&[2, 1, 3]).unwrap(), 23);
        assert!(ix.encode(&[3, 0, 0]).is_err());
        assert!(FactorIndexing::new(vec![]).is_err());
    }
}

use crate::algebra::{make_ujm_reduct, FiniteAlgebra, Operation};
use crate::error::{Error, Result};

/// `ℓ = (m+1)/2` for odd `m`, `m/2` for even `m`.
pub fn ell(m: usize) -> usize {
    if m % 2 == 1 {
        m.div_ceil(2)
    } else {
        m / 2
    }
}

/// The two-element reducts `N^{2,m}, …, N^{ℓ,m}`.
pub fn nm_generators(m: usize) -> Result<Vec<FiniteAlgebra>> {
    if m < 3 {
        return Err(Error::invalid(format!("m = {m} must be at least 3")));
    }
    (2..=ell(m)).map(|j| make_ujm_reduct(2, j, m)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImVariant {
    /// `i(x, y) = x·y′`
    I,
    /// `f(x, y, z) = x·(y′ + z)`
    F,
}

/// Two-element algebra with a Boolean operation and `u_{2,m}`.
pub fn im_generators(m: usize, variant: ImVariant) -> Result<FiniteAlgebra> {
    if m < 4 {
        return Err(Error::invalid(format!("m = {m} must be at least 4")));
    }
    let u = make_ujm_reduct(2, 2, m)?.ops()[0].clone();
    let (boolean, label) = match variant {
        ImVariant::I => (Operation::from_fn("i", 2, 2, |t| t[0] & (1 - t[1])), format!("I_{m}")),
        ImVariant::F => (
            Operation::from_fn("f", 2, 3, |t| t[0] & ((1 - t[1]) | t[2])),
            format!("I^-_{m}"),
        ),
    };
    FiniteAlgebra::new(label, 2, vec![boolean, u])
}

use crate::error::{Error, Result};
use crate::partition::Partition;

/// β*: blocks `{q, q−1}, {q−2, q−3}, …` (with `{0}` alone for even `q`);
/// γ*: blocks `{q}, {q−1, q−2}, …`.
pub fn beta_gamma_star(q: usize) -> Result<(Partition, Partition)> {
    if q < 1 {
        return Err(Error::invalid("q must be at least 1"));
    }
    let beta = Partition::from_labels((0..=q).map(|x| (q - x) / 2));
    let gamma = Partition::from_labels((0..=q).map(|x| (q - x).div_ceil(2)));
    Ok((beta, gamma))
}

//! Named generating sets, addressed by colon-delimited keys such as
//! `N:2:4`, `Nq:2:5:3`, `Nm:5`, `I:4`, `If:4`, `sum:3:4`, `C:3`, `ld2`.

use crate::algebra::{make_chain_lattice, make_ujm_reduct, FiniteAlgebra, Operation};
use crate::constructions::{im_generators, nm_generators, ImVariant};
use crate::error::{Error, Result};

/// One line per fixture family: key pattern and description.
pub const FIXTURE_FAMILIES: &[(&str, &str)] = &[
    ("N:j:m", "two-element reduct with the m-ary j-th order statistic"),
    ("Nq:j:m:s", "the same on the s-element chain"),
    ("Nm:m", "the generators N^{2,m}, …, N^{ℓ,m} of N_m"),
    ("I:m", "I_m: x·y′ together with u_{2,m}"),
    ("If:m", "I_m^-: x·(y′ + z) together with u_{2,m}"),
    ("sum:n:k", "k-ary sum modulo n as operation s"),
    ("C:s", "s-element chain lattice"),
    ("ld2", "two-element algebra with minority d and a 4-ary lone-dissent e"),
];

fn nums(key: &str, parts: &[&str], want: usize) -> Result<Vec<usize>> {
    if parts.len() != want {
        return Err(Error::invalid(format!("fixture {key:?} expects {want} numeric fields")));
    }
    parts
        .iter()
        .map(|p| p.parse().map_err(|_| Error::invalid(format!("fixture {key:?}: {p:?} is not a number"))))
        .collect()
}

pub fn load_fixture(key: &str) -> Result<Vec<FiniteAlgebra>> {
    let parts: Vec<&str> = key.split(':').collect();
    let (head, rest) = (parts[0], &parts[1..]);
    match head {
        "N" => {
            let v = nums(key, rest, 2)?;
            Ok(vec![make_ujm_reduct(2, v[0], v[1])?])
        }
        "Nq" => {
            let v = nums(key, rest, 3)?;
            Ok(vec![make_ujm_reduct(v[2], v[0], v[1])?])
        }
        "Nm" => nm_generators(nums(key, rest, 1)?[0]),
        "I" => Ok(vec![im_generators(nums(key, rest, 1)?[0], ImVariant::I)?]),
        "If" => Ok(vec![im_generators(nums(key, rest, 1)?[0], ImVariant::F)?]),
        "sum" => {
            let v = nums(key, rest, 2)?;
            Ok(vec![sum_mod(v[0], v[1])?])
        }
        "C" => Ok(vec![make_chain_lattice(nums(key, rest, 1)?[0])?]),
        "ld2" if rest.is_empty() => Ok(vec![lone_dissent_pair()?]),
        _ => Err(Error::invalid(format!("unknown fixture {key:?}"))),
    }
}

/// Loads several `+`-joined fixtures as one generating set.
pub fn load_fixtures(spec: &str) -> Result<Vec<FiniteAlgebra>> {
    let mut out = Vec::new();
    for key in spec.split('+') {
        out.extend(load_fixture(key.trim())?);
    }
    if let Some(b) = out.iter().skip(1).find(|b| !out[0].similar(b)) {
        return Err(Error::Dissimilar(format!("{} and {}", out[0].label(), b.label())));
    }
    Ok(out)
}

pub fn sum_mod(n: usize, arity: usize) -> Result<FiniteAlgebra> {
    if n < 1 || arity < 1 {
        return Err(Error::invalid("sum fixture needs n, arity ≥ 1"));
    }
    FiniteAlgebra::new(
        format!("Z_{n}(sum{arity})"),
        n,
        vec![Operation::from_fn("s", n, arity, |t| t.iter().sum::<usize>() % n)],
    )
}

/// `({0,1}, d, e)` with `d` the minority operation and `e` returning the
/// dissenting value when three arguments agree, `0` on two–two splits.
pub fn lone_dissent_pair() -> Result<FiniteAlgebra> {
    let d = Operation::from_fn("d", 2, 3, |t| t[0] ^ t[1] ^ t[2]);
    let e = Operation::from_fn("e", 2, 4, |t| match t.iter().sum::<usize>() {
        0 => 0,
        1 => 1,
        2 => 0,
        3 => 0,
        _ => 1,
    });
    FiniteAlgebra::new("LD_2", 2, vec![d, e])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_matches_constructors() {
        assert_eq!(load_fixture("N:2:4").unwrap(), vec![make_ujm_reduct(2, 2, 4).unwrap()]);
        assert_eq!(load_fixture("Nq:2:5:3").unwrap()[0].size(), 3);
        assert_eq!(load_fixture("Nm:5").unwrap().len(), 2);
        assert_eq!(load_fixtures("N:2:5+N:3:5").unwrap(), load_fixture("Nm:5").unwrap());
        for bad in ["N:2", "X:1", "sum:a:3", "ld2:1", "N:5:4"] {
            assert!(load_fixture(bad).is_err(), "{bad}");
        }
        assert!(load_fixtures("N:2:4+C:2").is_err());
    }

    #[test]
    fn lone_dissent_table() {
        let a = lone_dissent_pair().unwrap();
        assert_eq!(a.eval(1, &[0, 1, 0, 0]), 1);
        assert_eq!(a.eval(1, &[1, 1, 0, 1]), 0);
        assert_eq!(a.eval(1, &[1, 0, 0, 1]), 0);
        assert_eq!(a.eval(1, &[1, 1, 1, 1]), 1);
    }
}

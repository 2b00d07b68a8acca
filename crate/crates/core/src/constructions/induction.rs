use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{make_ujm_reduct, one_element_like, FiniteAlgebra, ProductAlgebra};
use crate::boxes::BoxUnion;
use crate::certificate::{Certificate, Verdict};
use crate::constructions::generators::ell;
use crate::constructions::lemma22::{lemma22_build, Lemma22Input};
use crate::constructions::sharpness::lhs_chain_steps;
use crate::constructions::stars::beta_gamma_star;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::identity::{check_identity, CheckMode, Family, IdentityInstance, IdentityParams, IdentityVerdict};
use crate::partition::{induced_product_congruence, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InductionStep {
    /// `m` odd, `j = ℓ`: `F = N^{ℓ,m}_{q+1} × N^{2,m}`.
    ChainBase,
    /// `m` even, `j = ℓ`: four-coordinate construction over a one-element third factor.
    PairBase,
    /// `j → j−1` over the previous state.
    Descent,
}

/// One level of the induction: `F^j ⊆ A_3^j × N^{2,m}` with its witness data.
#[derive(Clone, Debug)]
pub struct InductionState {
    pub j: usize,
    pub step: InductionStep,
    /// Factors of `A_3^j`; the last factor of `F^j` is `N^{2,m}`.
    pub a3_factors: Vec<FiniteAlgebra>,
    pub f: BoxUnion,
    pub f_product: ProductAlgebra,
    /// Sorted flat indices of `F^j` in `f_product`.
    pub elements: Vec<usize>,
    pub a: Vec<usize>,
    pub d: Vec<usize>,
    /// `c_1, …, c_{q−1}` in `A_3^j`.
    pub chain: Vec<Vec<usize>>,
    pub coord_alpha: Vec<Partition>,
    pub coord_beta: Vec<Partition>,
    pub coord_gamma: Vec<Partition>,
    pub alpha: Partition,
    pub beta: Partition,
    pub gamma: Partition,
    pub failure: IdentityInstance,
}

impl InductionState {
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        let flat = self.f_product.indexing().encode(tuple).ok()?;
        self.elements.binary_search(&flat).ok()
    }

    pub fn tuple(&self, idx: usize) -> Vec<usize> {
        self.f_product.indexing().decode(self.elements[idx])
    }

    fn with_last(t: &[usize], last: usize) -> Vec<usize> {
        let mut v = t.to_vec();
        v.push(last);
        v
    }

    /// `(a, 1), (c_1, 0), …, (c_{q−1}, 0), (d, 1)`.
    pub fn witness_tuples(&self) -> Vec<Vec<usize>> {
        let mut v = vec![Self::with_last(&self.a, 1)];
        v.extend(self.chain.iter().map(|c| Self::with_last(c, 0)));
        v.push(Self::with_last(&self.d, 1));
        v
    }
}

struct Parts {
    alpha: Vec<Partition>,
    beta: Vec<Partition>,
    gamma: Vec<Partition>,
}

fn star_pair(q: usize) -> Result<[Partition; 4]> {
    let (b, g) = beta_gamma_star(q)?;
    Ok(if q % 2 == 0 {
        [b.clone(), g.clone(), g, b]
    } else {
        [b.clone(), b, g.clone(), g]
    })
}

fn finish(
    m: usize,
    q: usize,
    j: usize,
    step: InductionStep,
    a3_factors: Vec<FiniteAlgebra>,
    f: BoxUnion,
    f_product: ProductAlgebra,
    parts: Parts,
    (a, d, chain): (Vec<usize>, Vec<usize>, Vec<Vec<usize>>),
    exec: Exec,
) -> Result<InductionState> {
    let elements = f.elements(f_product.indexing());
    let ix = f_product.indexing();
    let alpha = induced_product_congruence(ix, &parts.alpha, &elements)?;
    let beta = induced_product_congruence(ix, &parts.beta, &elements)?;
    let gamma = induced_product_congruence(ix, &parts.gamma, &elements)?;
    let mut state = InductionState {
        j,
        step,
        a3_factors,
        f,
        f_product,
        elements,
        a,
        d,
        chain,
        coord_alpha: parts.alpha,
        coord_beta: parts.beta,
        coord_gamma: parts.gamma,
        alpha,
        beta,
        gamma,
        failure: placeholder_instance(m, q, j),
    };
    verify_state(&mut state, m, q, exec)?;
    Ok(state)
}

fn placeholder_instance(m: usize, q: usize, j: usize) -> IdentityInstance {
    IdentityInstance {
        family: Family::Eq35,
        params: eq35_params(m, q, j),
        lhs: String::new(),
        rhs: String::new(),
        mode: CheckMode::Full,
        verdict: IdentityVerdict::Holds,
        counterexample: None,
        lhs_witness: None,
    }
}

fn eq35_params(m: usize, q: usize, j: usize) -> IdentityParams {
    let mut p = IdentityParams::mq(m, q);
    p.j = Some(j);
    p
}

fn fail(j: usize, condition: &str, detail: impl Into<String>) -> Error {
    Error::verification(format!("level {j}: {condition}"), detail)
}

/// Checks the witness pair, the chain through `F^j`, and the shape of `α̃`.
fn verify_state(s: &mut InductionState, m: usize, q: usize, exec: Exec) -> Result<()> {
    let j = s.j;
    let tuples = s.witness_tuples();
    let mut idx = Vec::new();
    for t in &tuples {
        idx.push(s.index_of(t).ok_or_else(|| fail(j, "chain in F", format!("{t:?} is not in F")))?);
    }
    for (k, t) in tuples[1..tuples.len() - 1].iter().enumerate() {
        if *t.last().unwrap() != 0 {
            return Err(fail(j, "chain in F", format!("chain element {k} has last coordinate {}", t.last().unwrap())));
        }
    }
    let ab = s.alpha.meet(&s.beta)?;
    let ag = s.alpha.meet(&s.gamma)?;
    for (k, name) in lhs_chain_steps(q).iter().enumerate() {
        let p = match *name {
            "β" => &s.beta,
            "γ" => &s.gamma,
            "αβ" => &ab,
            _ => &ag,
        };
        if !p.related(idx[k], idx[k + 1]) {
            return Err(fail(j, "chain in F", format!("step {k} ({name}) does not hold")));
        }
    }
    let last = s.coord_alpha.len() - 1;
    let shaped = s
        .coord_alpha
        .iter()
        .enumerate()
        .all(|(c, p)| if c == last { p.is_identity() } else { p.is_full() });
    if !shaped {
        return Err(fail(j, "alpha kernel", "α is not induced by 1 × 0"));
    }
    let (x, y) = (idx[0], *idx.last().unwrap());
    let inst = check_identity::<FiniteAlgebra>(
        Family::Eq35,
        eq35_params(m, q, j),
        [&s.alpha, &s.beta, &s.gamma],
        None,
        CheckMode::Pair(x, y),
        exec,
    )?;
    if inst.verdict != IdentityVerdict::Fails {
        return Err(fail(j, "witness pair", "((a,1),(d,1)) is not a counterexample to eq3.5"));
    }
    s.failure = inst;
    Ok(())
}

fn chain_base(m: usize, q: usize, exec: Exec) -> Result<InductionState> {
    let l = ell(m);
    let a3 = make_ujm_reduct(q + 1, l, m)?;
    let two = make_ujm_reduct(2, 2, m)?;
    let f_product = ProductAlgebra::new(vec![a3.clone(), two.clone()])?;
    let mut f = BoxUnion::new(vec![q + 1, 2])?;
    f.push(f.full_box());
    let (b, g) = beta_gamma_star(q)?;
    let parts = Parts {
        alpha: vec![Partition::full(q + 1), Partition::identity(2)],
        beta: vec![b, Partition::full(2)],
        gamma: vec![g, Partition::full(2)],
    };
    let chain = (1..q).map(|i| vec![q - i]).collect();
    finish(m, q, l, InductionStep::ChainBase, vec![a3], f, f_product, parts, (vec![q], vec![0], chain), exec)
}

fn pair_base(m: usize, q: usize, exec: Exec) -> Result<InductionState> {
    let l = ell(m);
    let a1 = make_ujm_reduct(q + 1, l, m)?;
    let a4 = make_ujm_reduct(2, 2, m)?;
    let one = [one_element_like(&a4)];
    let mut f = BoxUnion::new(vec![1, 2])?;
    f.push(f.full_box());
    let out = lemma22_build(
        &Lemma22Input {
            a1: &a1,
            a2: &a1,
            a3: &one,
            a4: &a4,
            zero1: 0,
            zero2: 0,
            zero4: 0,
            h: l,
            k: l,
            a: &[0],
            d: &[0],
            f: &f,
        },
        exec,
    )?;
    let [b1, b2, g1, g2] = star_pair(q)?;
    let parts = Parts {
        alpha: vec![Partition::full(q + 1), Partition::full(q + 1), Partition::full(1), Partition::identity(2)],
        beta: vec![b1, b2, Partition::full(1), Partition::full(2)],
        gamma: vec![g1, g2, Partition::full(1), Partition::full(2)],
    };
    let chain = (1..q).map(|i| vec![q - i, i, 0]).collect();
    let a3_factors = vec![a1.clone(), a1, one[0].clone()];
    finish(
        m,
        q,
        l,
        InductionStep::PairBase,
        a3_factors,
        out.boxes,
        out.product,
        parts,
        (vec![q, 0, 0], vec![0, q, 0], chain),
        exec,
    )
}

fn descend(prev: &InductionState, m: usize, q: usize, exec: Exec) -> Result<InductionState> {
    let j = prev.j - 1;
    let a1 = make_ujm_reduct(q + 1, j, m)?;
    let a4 = make_ujm_reduct(2, 2, m)?;
    let out = lemma22_build(
        &Lemma22Input {
            a1: &a1,
            a2: &a1,
            a3: &prev.a3_factors,
            a4: &a4,
            zero1: 0,
            zero2: 0,
            zero4: 0,
            h: j,
            k: m - j,
            a: &prev.a,
            d: &prev.d,
            f: &prev.f,
        },
        exec,
    )?;
    let [b1, b2, g1, g2] = star_pair(q)?;
    let full = || Partition::full(q + 1);
    let prefix = |x: Partition, y: Partition, rest: &[Partition]| {
        let mut v = vec![x, y];
        v.extend(rest.iter().cloned());
        v
    };
    let parts = Parts {
        alpha: prefix(full(), full(), &prev.coord_alpha),
        beta: prefix(b1, b2, &prev.coord_beta),
        gamma: prefix(g1, g2, &prev.coord_gamma),
    };
    let extend = |x: usize, y: usize, rest: &[usize]| {
        let mut v = vec![x, y];
        v.extend_from_slice(rest);
        v
    };
    let chain = (1..q).map(|i| extend(q - i, i, &prev.chain[i - 1])).collect();
    let mut a3_factors = vec![a1.clone(), a1];
    a3_factors.extend(prev.a3_factors.iter().cloned());
    finish(
        m,
        q,
        j,
        InductionStep::Descent,
        a3_factors,
        out.boxes,
        out.product,
        parts,
        (extend(q, 0, &prev.a), extend(0, q, &prev.d), chain),
        exec,
    )
}

/// States for `j = ℓ, ℓ−1, …, 2`, each verified before the next is built.
pub fn run_section3_induction(m: usize, q: usize, exec: Exec) -> Result<Vec<InductionState>> {
    if m < 3 {
        return Err(Error::invalid(format!("m = {m} < 3")));
    }
    if !(2..=63).contains(&q) {
        return Err(Error::invalid(format!("q = {q} outside 2..=63")));
    }
    let first = if m % 2 == 1 { chain_base(m, q, exec)? } else { pair_base(m, q, exec)? };
    let mut states = vec![first];
    while states.last().unwrap().j > 2 {
        let next = descend(states.last().unwrap(), m, q, exec)?;
        states.push(next);
    }
    Ok(states)
}

pub fn verify_induction(m: usize, q: usize, exec: Exec) -> Result<Certificate> {
    let states = run_section3_induction(m, q, exec)?;
    let levels: Vec<_> = states
        .iter()
        .map(|s| {
            json!({
                "j": s.j,
                "step": s.step,
                "f_size": s.elements.len(),
                "factors": s.a3_factors.iter().map(|f| f.label()).collect::<Vec<_>>(),
                "witness_tuples": s.witness_tuples(),
                "failure": s.failure,
            })
        })
        .collect();
    let sizes: Vec<usize> = states.iter().map(|s| s.elements.len()).collect();
    Ok(Certificate::new(
        "induction: eq3.5 fails at every level j = ℓ..2",
        json!({"m": m, "q": q}),
        Verdict::Verified,
        json!({"levels": levels}),
        json!({"f_sizes": sizes}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sharpness::{build_b, SharpnessParams};

    #[test]
    fn odd_m_has_two_levels() {
        let states = run_section3_induction(5, 2, Exec::Parallel).unwrap();
        assert_eq!(states.iter().map(|s| s.j).collect::<Vec<_>>(), [3, 2]);
        assert_eq!(states[0].step, InductionStep::ChainBase);
        let last = &states[1];
        let inst = check_identity::<FiniteAlgebra>(
            Family::Eq32,
            IdentityParams::mq(5, 2),
            [&last.alpha, &last.beta, &last.gamma],
            None,
            CheckMode::Pair(last.failure.counterexample.unwrap().0, last.failure.counterexample.unwrap().1),
            Exec::Parallel,
        )
        .unwrap();
        assert_eq!(inst.verdict, IdentityVerdict::Fails);
    }

    #[test]
    fn even_m_starts_with_pair_base() {
        let states = run_section3_induction(6, 3, Exec::Parallel).unwrap();
        assert_eq!(states.iter().map(|s| s.step).collect::<Vec<_>>(), [InductionStep::PairBase, InductionStep::Descent]);
    }

    #[test]
    fn final_level_matches_good_elements() {
        for m in 3..=7 {
            for q in 2..=3 {
                let states = run_section3_induction(m, q, Exec::Parallel).unwrap();
                let last = states.last().unwrap();
                let keep: Vec<usize> = last
                    .f_product
                    .indexing()
                    .factor_sizes()
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s > 1)
                    .map(|(c, _)| c)
                    .collect();
                let mut from_induction: Vec<Vec<usize>> = (0..last.elements.len())
                    .map(|i| {
                        let t = last.tuple(i);
                        keep.iter().map(|&c| t[c]).collect()
                    })
                    .collect();
                from_induction.sort();
                let w = build_b(SharpnessParams::new(m, q).unwrap(), Exec::Parallel).unwrap();
                let mut direct: Vec<Vec<usize>> = (0..w.size()).map(|b| w.tuple(b)).collect();
                direct.sort();
                assert_eq!(from_induction, direct, "m={m} q={q}");
            }
        }
    }
}

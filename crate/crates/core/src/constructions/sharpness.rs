use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{make_ujm_reduct, FiniteAlgebra, ProductAlgebra};
use crate::boxes::{full_mask, BoxUnion, Mask};
use crate::certificate::{Certificate, Verdict};
use crate::constructions::generators::ell;
use crate::constructions::stars::beta_gamma_star;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::identity::{check_identity, CheckMode, Family, IdentityInstance, IdentityParams, IdentityVerdict};
use crate::partition::{induced_product_congruence, is_congruence, Partition};
use crate::relation::{rel_of_partition, shortest_alternating_chain, AlternatingChain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessParams {
    pub m: usize,
    pub q: usize,
}

impl SharpnessParams {
    pub fn new(m: usize, q: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::invalid(format!("m = {m} < 3")));
        }
        if !(2..=63).contains(&q) {
            return Err(Error::invalid(format!("q = {q} outside 2..=63")));
        }
        Ok(SharpnessParams { m, q })
    }

    pub fn ell(&self) -> usize {
        ell(self.m)
    }

    /// Levels `j` carrying a full pair of coordinates.
    pub fn pair_levels(&self) -> Vec<usize> {
        if self.m % 2 == 0 {
            (2..=self.ell()).collect()
        } else {
            (2..self.ell()).collect()
        }
    }

    pub fn has_half(&self) -> bool {
        self.m % 2 == 1
    }

    pub fn num_coords(&self) -> usize {
        2 * self.pair_levels().len() + usize::from(self.has_half()) + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum CoordRole {
    PairFirst { level: usize },
    PairSecond { level: usize },
    Half { level: usize },
    Last,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordInfo {
    pub role: CoordRole,
    pub factor: String,
    pub size: usize,
}

pub fn coordinates(p: &SharpnessParams) -> Vec<CoordInfo> {
    let chain = |j| make_ujm_reduct(p.q + 1, j, p.m).expect("valid reduct").label().to_string();
    let mut out = Vec::new();
    for j in p.pair_levels() {
        for role in [CoordRole::PairFirst { level: j }, CoordRole::PairSecond { level: j }] {
            out.push(CoordInfo { role, factor: chain(j), size: p.q + 1 });
        }
    }
    if p.has_half() {
        out.push(CoordInfo {
            role: CoordRole::Half { level: p.ell() },
            factor: chain(p.ell()),
            size: p.q + 1,
        });
    }
    out.push(CoordInfo {
        role: CoordRole::Last,
        factor: make_ujm_reduct(2, 2, p.m).expect("valid reduct").label().to_string(),
        size: 2,
    });
    out
}

fn factor_algebras(p: &SharpnessParams) -> Result<Vec<FiniteAlgebra>> {
    coordinates(p)
        .iter()
        .map(|c| match c.role {
            CoordRole::PairFirst { level } | CoordRole::PairSecond { level } | CoordRole::Half { level } => {
                make_ujm_reduct(p.q + 1, level, p.m)
            }
            CoordRole::Last => make_ujm_reduct(2, 2, p.m),
        })
        .collect()
}

/// Good elements as a union of boxes: everything with last coordinate 0,
/// plus the two branches `(−,0),(q,0),…` and `(0,−),(0,q),…` entered after
/// any run of null pairs, plus the all-null tail with free half coordinate.
pub fn good_boxes(p: &SharpnessParams) -> Result<BoxUnion> {
    let q = p.q;
    let pairs = p.pair_levels().len();
    let all = full_mask(q + 1);
    let (zero, top): (Mask, Mask) = (1, 1 << q);
    let sizes: Vec<usize> = coordinates(p).iter().map(|c| c.size).collect();
    let mut bu = BoxUnion::new(sizes)?;
    let mut free = bu.full_box();
    *free.last_mut().unwrap() = 1;
    bu.push(free);
    let assemble = |pair_masks: Vec<(Mask, Mask)>, half: Mask| {
        let mut b: Vec<Mask> = pair_masks.into_iter().flat_map(|(x, y)| [x, y]).collect();
        if p.has_half() {
            b.push(half);
        }
        b.push(2);
        b
    };
    for k in 0..pairs {
        let branch = |lead: (Mask, Mask), tail: (Mask, Mask)| {
            (0..pairs)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => (zero, zero),
                    std::cmp::Ordering::Equal => lead,
                    std::cmp::Ordering::Greater => tail,
                })
                .collect::<Vec<_>>()
        };
        bu.push(assemble(branch((all, zero), (top, zero)), top));
        bu.push(assemble(branch((zero, all), (zero, top)), zero));
    }
    bu.push(assemble(vec![(zero, zero); pairs], all));
    bu.prune();
    Ok(bu)
}

/// Rule-by-rule membership test, written independently of [`good_boxes`].
pub fn is_good_tuple(p: &SharpnessParams, t: &[usize]) -> bool {
    if t.len() != p.num_coords() {
        return false;
    }
    let last = t[t.len() - 1];
    if last == 0 {
        return true;
    }
    if last != 1 {
        return false;
    }
    #[derive(PartialEq)]
    enum Phase {
        Null,
        Left,
        Right,
    }
    let mut phase = Phase::Null;
    let pairs = p.pair_levels().len();
    for i in 0..pairs {
        let (x, y) = (t[2 * i], t[2 * i + 1]);
        phase = match phase {
            Phase::Null if x == 0 && y == 0 => Phase::Null,
            Phase::Null if y == 0 => Phase::Left,
            Phase::Null if x == 0 => Phase::Right,
            Phase::Null => return false,
            Phase::Left if (x, y) == (p.q, 0) => Phase::Left,
            Phase::Right if (x, y) == (0, p.q) => Phase::Right,
            _ => return false,
        };
    }
    if p.has_half() {
        let h = t[2 * pairs];
        match phase {
            Phase::Left => return h == p.q,
            Phase::Right => return h == 0,
            Phase::Null => {}
        }
    }
    true
}

fn tuple_with(p: &SharpnessParams, pair: (usize, usize), half: usize, last: usize) -> Vec<usize> {
    let mut t: Vec<usize> = p.pair_levels().iter().flat_map(|_| [pair.0, pair.1]).collect();
    if p.has_half() {
        t.push(half);
    }
    t.push(last);
    t
}

pub fn a_tuple(p: &SharpnessParams) -> Vec<usize> {
    tuple_with(p, (p.q, 0), p.q, 1)
}

pub fn d_tuple(p: &SharpnessParams) -> Vec<usize> {
    tuple_with(p, (0, p.q), 0, 1)
}

/// `c_i` for `1 ≤ i ≤ q−1`; for `q = 2` this is the element `c`.
pub fn c_tuple(p: &SharpnessParams, i: usize) -> Vec<usize> {
    tuple_with(p, (p.q - i, i), p.q - i, 0)
}

/// Names of the relations linking `a, c_1, …, c_{q−1}, d` in the left side
/// of the `eq3.3` family.
pub fn lhs_chain_steps(q: usize) -> Vec<&'static str> {
    let mut steps = vec!["β"];
    for i in 2..q {
        steps.push(if i % 2 == 0 { "αγ" } else { "αβ" });
    }
    steps.push(if q % 2 == 0 { "γ" } else { "β" });
    steps
}

#[derive(Clone, Debug)]
pub struct SharpnessWitness {
    pub params: SharpnessParams,
    pub product: ProductAlgebra,
    pub coords: Vec<CoordInfo>,
    pub boxes: BoxUnion,
    /// Sorted flat indices (in the product) of the good elements.
    pub elements: Vec<usize>,
    pub factor_alpha: Vec<Partition>,
    pub factor_beta: Vec<Partition>,
    pub factor_gamma: Vec<Partition>,
    pub alpha: Partition,
    pub beta: Partition,
    pub gamma: Partition,
    pub a: usize,
    pub d: usize,
    /// `c_1, …, c_{q−1}`.
    pub mid: Vec<usize>,
}

impl SharpnessWitness {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn b_index_of(&self, tuple: &[usize]) -> Option<usize> {
        let flat = self.product.indexing().encode(tuple).ok()?;
        self.elements.binary_search(&flat).ok()
    }

    pub fn tuple(&self, b: usize) -> Vec<usize> {
        self.product.indexing().decode(self.elements[b])
    }

    pub fn triple(&self) -> [&Partition; 3] {
        [&self.alpha, &self.beta, &self.gamma]
    }

    pub fn env(&self) -> Vec<Partition> {
        vec![self.alpha.clone(), self.beta.clone(), self.gamma.clone()]
    }

    /// `a, c_1, …, c_{q−1}, d` as indices into the subalgebra.
    pub fn lhs_chain(&self) -> Vec<usize> {
        let mut v = vec![self.a];
        v.extend(&self.mid);
        v.push(self.d);
        v
    }
}

/// Per-coordinate partitions for `(α, β, γ)`.
pub fn factor_congruences(p: &SharpnessParams) -> Result<[Vec<Partition>; 3]> {
    let (bs, gs) = beta_gamma_star(p.q)?;
    let even = p.q % 2 == 0;
    let (mut al, mut be, mut ga) = (Vec::new(), Vec::new(), Vec::new());
    for c in coordinates(p) {
        let n = c.size;
        match c.role {
            CoordRole::PairFirst { .. } | CoordRole::Half { .. } => {
                al.push(Partition::full(n));
                be.push(bs.clone());
                ga.push(gs.clone());
            }
            CoordRole::PairSecond { .. } => {
                al.push(Partition::full(n));
                be.push(if even { gs.clone() } else { bs.clone() });
                ga.push(if even { bs.clone() } else { gs.clone() });
            }
            CoordRole::Last => {
                al.push(Partition::identity(n));
                be.push(Partition::full(n));
                ga.push(Partition::full(n));
            }
        }
    }
    Ok([al, be, ga])
}

/// `B(m, q)` with its congruences and designated elements; closure of the
/// good elements is verified before returning.
pub fn build_b(p: SharpnessParams, exec: Exec) -> Result<SharpnessWitness> {
    let product = ProductAlgebra::new(factor_algebras(&p)?)?;
    let boxes = good_boxes(&p)?;
    if let Some(v) = boxes.closure_violation(&product, exec)? {
        return Err(Error::verification("good elements closed", format!("{v:?}")));
    }
    let elements = boxes.elements(product.indexing());
    let [fa, fb, fg] = factor_congruences(&p)?;
    let ix = product.indexing();
    let alpha = induced_product_congruence(ix, &fa, &elements)?;
    let beta = induced_product_congruence(ix, &fb, &elements)?;
    let gamma = induced_product_congruence(ix, &fg, &elements)?;
    let locate = |t: Vec<usize>| -> Result<usize> {
        let flat = ix.encode(&t)?;
        elements
            .binary_search(&flat)
            .map_err(|_| Error::verification("designated elements", format!("{t:?} is not good")))
    };
    let a = locate(a_tuple(&p))?;
    let d = locate(d_tuple(&p))?;
    let mid = (1..p.q).map(|i| locate(c_tuple(&p, i))).collect::<Result<Vec<_>>>()?;
    Ok(SharpnessWitness {
        params: p,
        coords: coordinates(&p),
        product,
        boxes,
        elements,
        factor_alpha: fa,
        factor_beta: fb,
        factor_gamma: fg,
        alpha,
        beta,
        gamma,
        a,
        d,
        mid,
    })
}

/// The `q = 2` chain `a, f_1, …, f_{2m−5}, d`: first components of the
/// pairs descend 2→1→0 left to right, then the half coordinate, then second
/// components ascend 0→1→2 right to left.
pub fn canonical_witness_chain(p: &SharpnessParams) -> Result<Vec<Vec<usize>>> {
    if p.q != 2 {
        return Err(Error::invalid("the canonical chain is defined for q = 2 only"));
    }
    let pairs = p.pair_levels().len();
    let mut cur = a_tuple(p);
    let mut chain = vec![cur.clone()];
    let mut step = |pos: usize, vals: [usize; 2], chain: &mut Vec<Vec<usize>>| {
        for v in vals {
            cur[pos] = v;
            chain.push(cur.clone());
        }
    };
    for i in 0..pairs {
        step(2 * i, [1, 0], &mut chain);
    }
    if p.has_half() {
        step(2 * pairs, [1, 0], &mut chain);
    }
    for i in (0..pairs).rev() {
        step(2 * i + 1, [1, 2], &mut chain);
    }
    debug_assert_eq!(chain.last(), Some(&d_tuple(p)));
    Ok(chain)
}

/// Checks that consecutive chain members are related alternately by the
/// two partitions, starting with the first.
pub fn alternates(chain: &[usize], first: &Partition, second: &Partition) -> bool {
    chain
        .windows(2)
        .enumerate()
        .all(|(k, w)| [first, second][k % 2].related(w[0], w[1]))
}

/// Shortest `αβ`/`αγ` chain from `a` to `d` in the subalgebra.
pub fn shortest_ad_chain(w: &SharpnessWitness, cap: usize) -> Result<Option<AlternatingChain>> {
    let ab = rel_of_partition(&w.alpha.meet(&w.beta)?);
    let ag = rel_of_partition(&w.alpha.meet(&w.gamma)?);
    shortest_alternating_chain(w.a, w.d, &ab, &ag, cap)
}

fn partition_for(w: &SharpnessWitness, name: &str) -> Result<Partition> {
    Ok(match name {
        "α" => w.alpha.clone(),
        "β" => w.beta.clone(),
        "γ" => w.gamma.clone(),
        "αβ" => w.alpha.meet(&w.beta)?,
        "αγ" => w.alpha.meet(&w.gamma)?,
        _ => return Err(Error::invalid(format!("unknown relation {name}"))),
    })
}

/// The failure families checked at `(a, d)` for this `q`.
pub fn prop41_families(q: usize) -> Vec<Family> {
    let mut f = vec![Family::Eq33];
    if q == 2 {
        f.push(Family::Eq32);
    }
    if q % 2 == 1 {
        f.push(Family::Eq34);
    }
    f
}

/// Builds `B(m, q)` and certifies that `(a, d)` lies in the left side of
/// the `eq3.3` family and outside its right side.
pub fn verify_prop41(p: SharpnessParams, exec: Exec) -> Result<Certificate> {
    let w = build_b(p, exec)?;
    let mut problems = Vec::new();
    for (name, parts) in [("α", &w.factor_alpha), ("β", &w.factor_beta), ("γ", &w.factor_gamma)] {
        for (c, (part, alg)) in parts.iter().zip(w.product.factors()).enumerate() {
            if let Some(v) = is_congruence(alg, part)? {
                problems.push(format!("{name} factor {c} not a congruence: {v:?}"));
            }
        }
    }
    let chain = w.lhs_chain();
    let steps = lhs_chain_steps(p.q);
    for (k, name) in steps.iter().enumerate() {
        if !partition_for(&w, name)?.related(chain[k], chain[k + 1]) {
            problems.push(format!("chain step {k} ({name}) does not hold"));
        }
    }
    if !w.alpha.related(w.a, w.d) {
        problems.push("a and d are not α-related".into());
    }
    let mut instances: Vec<IdentityInstance> = Vec::new();
    for fam in prop41_families(p.q) {
        let inst = check_identity::<FiniteAlgebra>(
            fam,
            IdentityParams::mq(p.m, p.q),
            w.triple(),
            None,
            CheckMode::Pair(w.a, w.d),
            exec,
        )?;
        if inst.verdict != IdentityVerdict::Fails {
            problems.push(format!("{} does not fail at (a, d)", fam.name()));
        }
        instances.push(inst);
    }
    let mut evidence = json!({
        "b_size": w.size(),
        "coordinates": w.coords,
        "a": {"index": w.a, "tuple": w.tuple(w.a)},
        "d": {"index": w.d, "tuple": w.tuple(w.d)},
        "lhs_chain": chain.iter().map(|&b| json!({"index": b, "tuple": w.tuple(b)})).collect::<Vec<_>>(),
        "lhs_chain_steps": steps,
        "identities": instances,
    });
    if p.q == 2 {
        let canon = canonical_witness_chain(&p)?;
        let idx: Vec<usize> = canon
            .iter()
            .map(|t| w.b_index_of(t).ok_or_else(|| Error::verification("canonical chain", format!("{t:?} not good"))))
            .collect::<Result<_>>()?;
        if !alternates(&idx, &partition_for(&w, "αβ")?, &partition_for(&w, "αγ")?) {
            problems.push("canonical chain does not alternate αβ, αγ".into());
        }
        evidence["canonical_chain"] = json!(idx.iter().map(|&b| json!({"index": b, "tuple": w.tuple(b)})).collect::<Vec<_>>());
    }
    evidence["problems"] = json!(problems);
    let verdict = if problems.is_empty() { Verdict::Verified } else { Verdict::Refuted };
    Ok(Certificate::new(
        "sharpness: eq3.3 fails in B(m,q) at (a,d)",
        json!({"m": p.m, "q": p.q}),
        verdict,
        evidence,
        json!({"boxes": w.boxes.boxes().len(), "product_size": w.product.indexing().total()}),
    ))
}

//! Certificates for the claims the command line can state: chain levels,
//! term existence, and congruence identities on named triples.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::FiniteAlgebra;
use crate::certificate::{Certificate, Verdict};
use crate::constructions::{build_b, run_section3_induction, SharpnessParams};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::free::Caps;
use crate::identity::{check_identity, CheckMode, Family, IdentityParams, IdentityVerdict};
use crate::partition::Partition;
use crate::search::{absorption_search, chain_level, AbsorptionOutcome, AbsorptionPreset, ChainOutcome, ChainPreset};

pub const LEVEL_CLAIM: &str = "level";
pub const SEARCH_CLAIM: &str = "search";
pub const IDENTITY_CLAIM: &str = "identity";

fn labels(gens: &[FiniteAlgebra]) -> String {
    let l: Vec<&str> = gens.iter().map(|a| a.label()).collect();
    format!("V({})", l.join(", "))
}

/// The level reported for a chain: steps `n` for `t_0, …, t_n`, and the
/// number of interior terms for directed chains.
pub fn reported_level(preset: ChainPreset, steps: usize) -> usize {
    if preset.is_directed() { steps.saturating_sub(1) } else { steps }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelExpectation {
    Exactly(usize),
    /// No chain of any length exists.
    Absent,
}

/// Computes the chain level and states it as a claim. Searches that stop at
/// `max_level` without an answer are reported as a cap error.
pub fn certify_level(
    gens: &[FiniteAlgebra],
    preset: ChainPreset,
    max_level: usize,
    expect: Option<LevelExpectation>,
    caps: Caps,
    exec: Exec,
) -> Result<Certificate> {
    let out = chain_level(gens, preset, max_level, caps, exec)?;
    let level = out.level().map(|s| reported_level(preset, s));
    let verdict = match (&out, expect) {
        (ChainOutcome::NotFoundUpTo { max_level, candidates, .. }, _) => {
            return Err(Error::cap(format!("{preset} chain length"), *max_level, *candidates));
        }
        (ChainOutcome::Found { .. }, None) => Verdict::Verified,
        (ChainOutcome::Found { .. }, Some(LevelExpectation::Exactly(n))) => verdict_of(level == Some(n)),
        (ChainOutcome::Found { .. }, Some(LevelExpectation::Absent)) => Verdict::Refuted,
        (ChainOutcome::Impossible { .. }, Some(LevelExpectation::Absent)) => Verdict::Verified,
        (ChainOutcome::Impossible { .. }, _) => Verdict::Refuted,
    };
    let claim = match expect {
        Some(LevelExpectation::Exactly(n)) => format!("{LEVEL_CLAIM}: {preset} level of {} is {n}", labels(gens)),
        Some(LevelExpectation::Absent) => format!("{LEVEL_CLAIM}: {} has no {preset} chain", labels(gens)),
        None => format!("{LEVEL_CLAIM}: {} has a {preset} chain", labels(gens)),
    };
    let stats = match &out {
        ChainOutcome::Found { free_size, candidates, .. } => json!({"free_size": free_size, "candidates": candidates}),
        ChainOutcome::Impossible { free_size, candidates, explored } => {
            json!({"free_size": free_size, "candidates": candidates, "explored": explored})
        }
        ChainOutcome::NotFoundUpTo { .. } => unreachable!(),
    };
    Ok(Certificate::new(
        claim,
        json!({"scheme": preset, "max_level": max_level, "expect": expect, "algebras": gens}),
        verdict,
        json!({"level": level, "outcome": out}),
        stats,
    ))
}

fn verdict_of(ok: bool) -> Verdict {
    if ok { Verdict::Verified } else { Verdict::Refuted }
}

/// Searches for a term of the scheme; the claim is that one exists
/// (`expect_found`) or that none does.
pub fn certify_search(
    gens: &[FiniteAlgebra],
    preset: AbsorptionPreset,
    expect_found: bool,
    caps: Caps,
    exec: Exec,
) -> Result<Certificate> {
    let out = absorption_search(gens, preset, caps, exec)?;
    let claim = format!(
        "{SEARCH_CLAIM}: {} {} a {preset} term",
        labels(gens),
        if expect_found { "has" } else { "has no" }
    );
    let stats = match &out {
        AbsorptionOutcome::Found { explored, coords, .. } | AbsorptionOutcome::NotFound { explored, coords } => {
            json!({"explored": explored, "coords": coords})
        }
    };
    Ok(Certificate::new(
        claim,
        json!({"scheme": preset, "expect_found": expect_found, "algebras": gens}),
        verdict_of(out.is_found() == expect_found),
        json!({"outcome": out}),
        stats,
    ))
}

/// Where the triple `(α, β, γ)` comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum TripleSource {
    /// The good-element algebra `B(m,q)` with its constructed congruences.
    Sharpness { m: usize, q: usize },
    /// The level-`j` algebra of the descending construction.
    Induction { m: usize, q: usize, j: usize },
    /// Explicit partitions given by block labels, optionally checked to be
    /// congruences of `algebra`.
    Partitions {
        alpha: Vec<usize>,
        beta: Vec<usize>,
        gamma: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        algebra: Option<FiniteAlgebra>,
    },
}

/// The triple plus a tuple view of every element, when elements are tuples.
pub struct Triple {
    pub env: [Partition; 3],
    pub tuples: Option<Vec<Vec<usize>>>,
    /// The distinguished pair `(a, d)` of the construction, if any.
    pub pair: Option<(usize, usize)>,
}

pub fn realize_triple(src: &TripleSource, exec: Exec) -> Result<Triple> {
    match src {
        TripleSource::Sharpness { m, q } => {
            let w = build_b(SharpnessParams::new(*m, *q)?, exec)?;
            let tuples = (0..w.size()).map(|b| w.tuple(b)).collect();
            Ok(Triple {
                env: [w.alpha.clone(), w.beta.clone(), w.gamma.clone()],
                tuples: Some(tuples),
                pair: Some((w.a, w.d)),
            })
        }
        TripleSource::Induction { m, q, j } => {
            let states = run_section3_induction(*m, *q, exec)?;
            let s = states
                .into_iter()
                .find(|s| s.j == *j)
                .ok_or_else(|| Error::invalid(format!("no induction level j = {j} for m = {m}")))?;
            let tuples = (0..s.elements.len()).map(|i| s.tuple(i)).collect();
            let w = s.witness_tuples();
            let pair = (
                s.index_of(&w[0]).ok_or_else(|| Error::verification("induction", "(a, 1) missing"))?,
                s.index_of(&w[w.len() - 1]).ok_or_else(|| Error::verification("induction", "(d, 1) missing"))?,
            );
            Ok(Triple {
                env: [s.alpha, s.beta, s.gamma],
                tuples: Some(tuples),
                pair: Some(pair),
            })
        }
        TripleSource::Partitions { alpha, beta, gamma, algebra } => {
            let env = [alpha, beta, gamma].map(|l| Partition::from_labels(l.iter().copied()));
            if env.iter().any(|p| p.size() != env[0].size()) {
                return Err(Error::invalid("α, β, γ have different sizes"));
            }
            if let Some(a) = algebra {
                if a.size() != env[0].size() {
                    return Err(Error::invalid("partitions do not match the algebra size"));
                }
            }
            Ok(Triple { env, tuples: None, pair: None })
        }
    }
}

/// Evaluates an identity on a triple. `pair_mode` restricts attention to the
/// construction's distinguished pair. The default claim is that the
/// identity fails at that pair, or holds everywhere in full mode.
pub fn certify_identity(
    src: &TripleSource,
    family: Family,
    params: IdentityParams,
    pair_mode: bool,
    expect_holds: Option<bool>,
    exec: Exec,
) -> Result<Certificate> {
    let t = realize_triple(src, exec)?;
    let mode = if pair_mode {
        let (a, d) = t.pair.ok_or_else(|| Error::invalid("this source has no distinguished pair"))?;
        CheckMode::Pair(a, d)
    } else {
        CheckMode::Full
    };
    let alg = match src {
        TripleSource::Partitions { algebra, .. } => algebra.as_ref(),
        _ => None,
    };
    let inst = check_identity(family, params, [&t.env[0], &t.env[1], &t.env[2]], alg, mode, exec)?;
    let expect_holds = expect_holds.unwrap_or(!pair_mode);
    let holds = inst.verdict != IdentityVerdict::Fails;
    let claim = format!(
        "{IDENTITY_CLAIM}: {family} {} on the given triple",
        if expect_holds { "holds" } else { "fails" }
    );
    let tuple_of = |x: usize| t.tuples.as_ref().map(|ts| ts[x].clone());
    let counter_tuples = inst.counterexample.map(|(x, y)| (tuple_of(x), tuple_of(y)));
    let witness_tuples: Option<Vec<_>> = inst.lhs_witness.as_ref().map(|p| p.iter().map(|&x| tuple_of(x)).collect());
    Ok(Certificate::new(
        claim,
        json!({"family": family, "params": params, "triple": src, "pair_mode": pair_mode, "expect_holds": expect_holds}),
        verdict_of(holds == expect_holds),
        json!({"instance": inst, "universe": t.env[0].size(), "counterexample_tuples": counter_tuples, "witness_tuples": witness_tuples}),
        json!({"blocks": t.env.iter().map(Partition::num_blocks).collect::<Vec<_>>()}),
    ))
}

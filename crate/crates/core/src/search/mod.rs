//! Maltsev-condition searches in free algebras: chains of terms linked by
//! identifications (Jónsson, Day, …) and single terms absorbing dissent
//! (near-unanimity, lone-dissent, …).

mod absorption;
mod chain;

pub use absorption::{absorption_search, verify_absorption, AbsorptionOutcome, AbsorptionPreset, AbsorptionScheme, Row};
pub use chain::{chain_level, verify_chain, ChainLink, ChainOutcome, ChainPreset, ChainScheme, NodeRule};

use crate::algebra::FiniteAlgebra;
use crate::error::Result;
use crate::term::{check_equations, Equation, EquationFailure, Term};

/// `t(x_{p_0}, x_{p_1}, …)` for a pattern `p`.
pub fn instantiate(t: &Term, pattern: &[usize]) -> Term {
    let subs: Vec<Term> = pattern.iter().map(|&v| Term::Var(v)).collect();
    t.substitute(&subs)
}

/// Checks the equations on every algebra; reports the algebra index with
/// the first failure.
pub fn check_on_all(eqs: &[Equation], gens: &[FiniteAlgebra]) -> Result<Option<(usize, EquationFailure)>> {
    for (i, a) in gens.iter().enumerate() {
        if let Some(f) = check_equations(eqs, a)? {
            return Ok(Some((i, f)));
        }
    }
    Ok(None)
}

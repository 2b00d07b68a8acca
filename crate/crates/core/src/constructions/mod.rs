//! Witness algebras for the sharpness of the near-unanimity bounds.

mod example;
mod generators;
mod induction;
mod lemma22;
mod sharpness;
mod stars;

pub use example::{example31_build, one_zero_tuples, Example31};
pub use generators::{ell, im_generators, nm_generators, ImVariant};
pub use induction::{run_section3_induction, verify_induction, InductionState, InductionStep};
pub use lemma22::{lemma22_build, type_tags, Lemma22Input, Lemma22Output, TypeTag};
pub use sharpness::{
    a_tuple, alternates, build_b, c_tuple, canonical_witness_chain, coordinates, d_tuple, factor_congruences,
    good_boxes, is_good_tuple, lhs_chain_steps, prop41_families, shortest_ad_chain, verify_prop41, CoordInfo,
    CoordRole, SharpnessParams, SharpnessWitness,
};
pub use stars::beta_gamma_star;

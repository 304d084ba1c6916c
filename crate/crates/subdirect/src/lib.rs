//! Finite-group computations around subdirect subgroups of direct powers:
//! uniform automorphisms, strip factorisations, abstract cartesian
//! factorisations, and diagonal-type coset actions versus wreath products in
//! product action.
//!
//! The central objects are a base group T, the power M = T^k, and subgroups
//! of M described intensionally as products of pairwise disjoint full strips
//! (diagonal subgroups with twist automorphisms). The library decides,
//! exactly and at desk scale:
//!
//! * whether an automorphism is *uniform* (`g -> g^-1·a(g)` surjective,
//!   equivalently fixed-point-free for finite groups): [`morphism`];
//! * whether two strip products cover M, via the subgroup order formula with
//!   symbolic intersections: [`factorisation`];
//! * constructive covering solutions when the interleaved composite twist is
//!   uniform, and structural diagnoses (isolated strip, fat edge, cycle,
//!   path) when covering is impossible: [`factorisation`];
//! * decomposition of subdirect subgroups over a non-abelian simple base
//!   into disjoint full strips: [`strips::scott_decompose`];
//! * abstract cartesian factorisations, their invariance under
//!   factor-transitive automorphism groups, and the enumeration of all
//!   invariant families above a given intersection: [`cartesian`];
//! * diagonal-type coset actions, their product-action embeddings in the
//!   compound case, and the empty search certifying non-embeddability in the
//!   simple case: [`action`].
//!
//! Everything is deterministic: searches either enumerate in a canonical
//! order or draw from a seeded xoshiro256++ stream, and the CLI (`subdirect`)
//! emits byte-stable JSON reports. Runnable walkthroughs live in
//! `examples/`.
//!
//! Whether some (necessarily infinite) group admits a pair of automorphisms
//! with jointly surjective difference maps is, to our knowledge, open; the
//! `g6` analysis only certifies the finite nonexistence via |G×G| > |G|.

pub mod action;
pub mod cartesian;
pub mod error;
pub mod factorisation;
pub mod group;
pub mod morphism;
pub mod power;
pub mod report;
pub mod rng;
pub mod strips;

pub use action::{
    build_standard_action, check_base_group_containment, check_structural_quasiprimitivity,
    embed_compound, search_invariant_cartesian_decompositions, DiagonalAction, DiagonalType,
    EmbeddingWitness, ProductActionWreath, WitnessFile, WreathElement,
};
pub use cartesian::{
    enumerate_cartesian_over, involved_strips, involved_strips_handle, is_invariant, mainstripfact_verify,
    verify_cartesian, CartesianFactorisation, FactorTransitiveAutGroup, PowerAutomorphism,
};
pub use error::{Error, Result};
pub use factorisation::{
    build_strip_graph, diagnose_nonfactorisation, doublestrips_solve, g6_joint_uniform_search,
    nostripfact_search, orthstrip_check, product_covers, uniform_preimage, Diagnosis,
    DoublestripsOutcome, FactorisationVerdict, SearchMode,
};
pub use group::{ElementId, FiniteGroup, GroupSpec};
pub use morphism::{
    enumerate_automorphisms, fixed_points, has_uniform_automorphism, uniformity, Automorphism,
    Morphism, UniformityReport,
};
pub use power::{DirectPower, SubgroupHandle};
pub use strips::{scott_decompose, DiagonalForm, FullStrip, StripProduct};

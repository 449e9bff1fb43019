//! Exact wall-crossing algebra.
//!
//! Kontsevich–Soibelman transformations and their ordered factorizations,
//! rank-2 scattering diagrams and their completion, cluster mutations, and
//! slab gluing for toric degenerations. All arithmetic is over exact
//! rationals; central charges are the only floating-point inputs.

pub mod autom;
pub mod cluster;
pub mod degeneration;
pub mod error;
pub mod lattice;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod scattering;
pub mod series;

pub use autom::{
    compose, compose_word, factorize_ordered, hamiltonian_derivation, ks_generator, poisson_bracket,
    x_gamma, FormalAutomorphism, HamiltonianDerivation, KSFactor, KSWord,
};
pub use error::{Error, Result};
pub use lattice::{
    monodromy_transform, semiflat_coordinate, validate_refinement, CentralChargeModel, Charge, LatticeContext,
    QuadraticRefinement, SemiflatContext, WallTest,
};
pub use poly::Poly;
pub use rat::Q;
pub use series::{Grading, Monomial, Series, TruncationContext};
pub use cluster::{
    fg_relations, flip, juggle, mutate, pop_transform, y_system_run, FGNode, FGRelation, FGSlab, FGSymbol,
    FGVariableSystem, Seed, YRule, YStart, YSystemRun,
};
pub use degeneration::{
    assemble_ideal, glue_slab, specialize_and_compare, Comparison, DegenerationIdeal, DegenerationStructure,
    GluingRelation, LocalSymbol, SlabGluingSpec, SlabInput,
};
pub use ratfunc::RatFunc;

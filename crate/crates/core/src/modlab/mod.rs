//! Exact polynomial arithmetic, Gröbner bases of submodules, the free
//! presheaves `P_n` over the five categories, and chain experiments.
//!
//! At width `s` the presheaf `P_n` is the free `k[x1, ..., xs]`-module on
//! the morphisms `[n] -> [s]`. A morphism `π: [s] -> [r]` acts by
//! `a ε ↦ π*(a) (π ∘ ε)`, with `π*` renaming `x_i` to `x_{π(i)}`.

mod chain;
mod field;
mod groebner;
mod poly;
mod presheaf;
mod text;

pub use chain::{
    chain_experiment, cumulative, fi_power_sum_chain, oi_example_chain, ChainConfig, ChainReport,
    ChainRow, WidthSummary,
};
pub use field::{Field, Scalar, MAX_PRIME};
pub use groebner::{
    groebner_basis, groebner_basis_capped, GroebnerBasis, ModuleElement, DEFAULT_PAIR_CAP,
};
pub use poly::{Monomial, MonomialOrder, Polynomial};
pub use presheaf::{
    apply_morphism, membership, restriction_decomposition_check, width_component, PresheafElement,
    RestrictionClass, RestrictionReport, TruncatedSubmodule,
};
pub use text::{parse_element_file, write_element_file};

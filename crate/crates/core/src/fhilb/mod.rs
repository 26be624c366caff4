//! Finite-dimensional complex linear algebra: subspace propositions with
//! annihilators and daggers, ray dictionaries with colinearity and
//! c-complements, Hilbert testables, and their autonomous structure.

pub mod dictionaries;
mod matrix;
mod ray;
mod structure;
mod subspace;

pub use matrix::{
    hermitian_eigenvalues, inner, norm, orthonormalize, rank, singular_values, vec_from_json,
    vec_to_json, LinearMap, C64,
};
pub use ray::{
    c_complement, colinearity, hilb_morphism_check, is_hilb_testable, rays_equal, HilbCertificate,
    HilbMorphismCheck, HilbTestable, Ray, RayDict,
};
pub use structure::{
    hilb_dagger, hilb_lower_star, hilb_star, hilb_structure, hilb_unit, product_dictionary,
    prop_bottom, prop_dagger, prop_lower_star, prop_par, prop_star, prop_structure, prop_tensor,
    prop_top, riesz, schmidt_rank, HilbStructureReport, ParMember, PropObject,
    PropStructureReport, RieszMap, SpaceVariant,
};
pub use subspace::{image_subspace, prop_morphism_check, Subspace};

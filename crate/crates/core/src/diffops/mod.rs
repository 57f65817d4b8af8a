//! Holomorphic realization of the Jacobi algebra by first-order differential
//! operators with polynomial coefficients.

mod basis;
mod ops;
mod poly;

pub use basis::{
    adjoint_kernel_check, apply_to_basis, basis_poly, expand_in_basis, monic_basis_poly,
    AdjointCheck,
};
pub use ops::{
    commutation_table, commutator_relations, exact_commutation_table, jacobi_identity_failures,
    make_generators, symbolic_generators, CommutatorRecord, DiffOp, Generators,
};
pub use poly::{BivariatePoly, Coefficient, GaussianRational, WeightPoly};

pub use crate::fock::Generator;

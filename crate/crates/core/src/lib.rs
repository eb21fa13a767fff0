//! Permutation-equivariant linear layers `(Rⁿ)^{⊗m} → (Rⁿ)^{⊗m'}`.
//!
//! The space of such layers is spanned by tensors indexed by set partitions
//! of the `m + m'` legs. This crate builds two bases for it: the orbit basis
//! `e_P` and the diagram basis `d_P`, whose elements are leg-permuted
//! Kronecker products of diagonal tensors. The factored form lets a layer be
//! applied with sums, index transfers, and broadcasts instead of a dense
//! contraction against an `n^{m+m'}`-entry tensor.
//!
//! All correctness checks run over exact scalars (checked `i64`, big
//! rationals, `GF(2)`); `f64` is supported for benchmarking.

pub mod basis;
pub mod error;
pub mod fastapply;
pub mod io;
pub mod layer;
pub mod linalg;
pub mod par;
pub mod partition;
pub mod perm;
pub mod scalar;
pub mod tensor;

pub use basis::{
    diagram_basis_dense, diagram_basis_factored, diagram_in_orbit, dual_functional, orbit_basis,
    orbit_in_diagram, verify_basis, BasisReport, ChangeOfBasis, FactoredTensor, FieldKind,
};
pub use error::{Error, Result};
pub use fastapply::{apply_dense_oracle, apply_fast, op_count, plan, BlockPlan, OpCounts};
pub use layer::EquivariantLayer;
pub use par::ExecPolicy;
pub use partition::{
    count_partitions, enumerate_partitions, partition_of_tuple, zeta_and_moebius, SetPartition,
};
pub use perm::Permutation;
pub use scalar::{Field, Gf2, Scalar, ScalarKind};
pub use tensor::{diagonal_tensor, Capacity, DenseTensor};

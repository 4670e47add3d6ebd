//! Płonka sums of direct systems, partition functions and decomposition.

mod chain;
mod decompose;
mod identity;
mod partition;
mod semilattice;
mod system;
pub mod system_file;

pub use chain::canonical_chain_matrix;
pub use decompose::{decompose, decompose_matrix, Decomposition};
pub use identity::{check_regular_identity, regular_identity_candidates, IdentityReport};
pub use partition::{
    check_partition_function, AxiomCheck, OracleCheck, PartitionMode, PartitionReport,
    PartitionTerm,
};
pub use semilattice::FiniteSemilattice;
pub use system::{sum_index, DirectSystem, Rule, SystemKind, Violation};

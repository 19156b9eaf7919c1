//! Finite fragments of descriptions, their universe partitions and the
//! permutation groups that preserve them.
//!
//! A partition `P` of a fragment corresponds to its full stabilizer, the
//! group of permutations fixing every block; a group corresponds to its
//! orbit partition. Coarser partitions give larger groups.

mod fragment;
mod ops;
mod partition;
mod perm;
mod report;

pub use fragment::{
    enumerate_fragment, semantic_partition, universe_partition, Fragment, FragmentParams,
    PartitionBuilder, PartitionConfig, SemanticPartition, UniversePartition,
};
pub use ops::{op_preserving_subgroup, OpSubgroup};
pub use partition::{Partition, UnionFind};
pub use perm::{Perm, PermGroup, StabChain};
pub use report::{
    full_stabilizer, galois_check, induced_covers, lattice_report, orbit_partition,
    stabilizer_order, Check, EdgeReport, GaloisConfig, GaloisReport, Incomparable,
    LatticeReport, PartitionSummary, SubgroupSample,
};

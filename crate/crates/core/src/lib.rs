//! Equivariant generating functions for Hilbert schemes of points, symmetric
//! powers and compactified Jacobians, in exact arithmetic.

pub mod algebra;
pub mod error;
pub mod goettsche;
pub mod jacobian;
pub mod qseries;
pub mod repseries;
pub mod rhsolver;
pub mod schema;

pub use algebra::{
    builtin, verify_table, CharacterTable, ClassFunction, ConjClass, Cyclotomic, VirtualRep,
};
pub use error::{Error, Result};
pub use goettsche::{Cohomology, K3Action};
pub use jacobian::{NodalCurve, StratumSpec};
pub use qseries::{EtaQuotient, QSeries};
pub use repseries::{GradedRep, RepSeries};
pub use rhsolver::BranchData;

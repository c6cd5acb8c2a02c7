//! Cyclotomic numbers, character tables and class functions.

mod builtin;
mod class_function;
mod cyclotomic;
pub mod linalg;
mod table;

pub use builtin::{builtin, cyclic, BUILTIN_NAMES};
pub use class_function::{format_decomposition, ClassFunction, VirtualRep};
pub use cyclotomic::{euler_phi, Cyclotomic};
pub use table::{verify_table, CharacterTable, Check, ConjClass, Diagnostic};

pub(crate) use class_function::same_table;
pub(crate) use cyclotomic::parse_rational;

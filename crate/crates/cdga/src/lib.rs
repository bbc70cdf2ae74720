//! Exact-arithmetic toolkit for curved differential graded algebras, their
//! modules, comodules and contramodules, truncated bar constructions, twisted
//! functors and weak-equivalence oracles.

pub mod algebra;
pub mod bar;
pub mod coalgebra;
pub mod cocontra;
pub mod contramodule;
pub mod corpus;
pub mod graded;
pub mod hom;
pub mod report;
pub mod matrix;
pub mod module;
pub mod oracle;
pub mod scalar;
pub mod twist;

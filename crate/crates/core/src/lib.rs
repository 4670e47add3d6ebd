//! Finite-matrix consequence relations and their variable-inclusion companions.
//!
//! Logics are given by finite matrices ([`MatrixClass`]) and combined into
//! towers with [`Logic::left`], [`Logic::right`] and [`Logic::meet`]. The
//! [`plonka`] module builds and splits Płonka sums, and [`lattice`] compares
//! logics exhaustively on bounded fragments.

pub mod algebra;
pub mod bundled;
pub mod checks;
pub mod compiled;
mod error;
pub mod figures;
pub mod formula;
pub mod fragment;
pub mod lattice;
pub mod logic;
pub mod matrix_file;
pub mod parse;
pub mod plonka;
pub mod transforms;
pub mod witness;

pub use algebra::{FiniteAlgebra, FiniteMatrix, MatrixClass, Valuation};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use formula::{Formula, Name, Signature, Substitution};
pub use fragment::{enumerate_fragment, FragmentSpec};
pub use lattice::{compare, ComparisonVerdict, Inference, LatticeReport, Relation};
pub use logic::{AntitheoremStatus, Logic};
pub use parse::{parse_formula, parse_formula_list};
pub use transforms::{canonicalize, derive, BaseProfile, DerivedLogicSpec, VISequence};

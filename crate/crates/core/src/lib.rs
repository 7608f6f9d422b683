//! Pure, copure, mixing and discarding processes in four finite process
//! theories (stochastic matrices, relations, functions and completely
//! positive maps), with (co)purification, fill-ins of lifting squares and a
//! brute-force lifting oracle for the enumerable theories.

pub mod error;
pub mod frel;
pub mod fset;
pub mod fstoch;
pub mod morphism;
pub mod object;
pub mod oracle;
pub mod quant;
pub mod theory;

pub use error::{Error, Result};
pub use frel::Relation;
pub use fset::FinFunction;
pub use fstoch::StochMatrix;
pub use morphism::{Morphism, MorphismDoc, SquareDoc};
pub use object::ObjectDim;
pub use quant::{CMatrix, CpMap, KrausSet, PureMap};
pub use theory::{ClassFlags, FactorPair, LiftingSquare, Process, Theory};

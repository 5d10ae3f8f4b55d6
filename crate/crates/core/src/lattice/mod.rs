//! Even unimodular lattices and representation numbers of binary forms.

pub mod binqf;
pub mod enumerate;
pub mod gram;
pub mod report;
pub mod rep;
pub mod siegel;

pub use binqf::{reduced_forms, BinQF, Mat2};
pub use enumerate::{short_vectors, Enumerator, Shells};
pub use gram::LatticeGram;
pub use rep::{rep_number, rep_primitive, rep_primitive_vector, rep_sharp, RepCounter};

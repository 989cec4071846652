//! Exact arithmetic: fields, binary forms, dense matrices.

pub mod field;
pub mod form;
pub mod formmat;
pub mod matrix;
pub(crate) mod upoly;

pub use field::{Field, FieldKind, PrimeField, Rationals, DEFAULT_CHARACTERISTIC};
pub use form::{describe_zero, BinForm, CommonZero};
pub use formmat::{combinations, det, minors_gcd};
pub use matrix::{EchelonBasis, Mat};

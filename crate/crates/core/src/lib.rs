//! Spectral triples on limit fractals of the line: eigenvalue spectra,
//! zeta functions and dimensions, singular traces, homogeneous measures
//! and Connes distances.

// negated float comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dirac;
pub mod error;
pub mod ext;
pub mod fractal;
pub mod functions;
pub mod io;
pub mod measures;
pub mod metric;
pub mod multiset;
pub mod oporacle;
pub mod seqcore;
pub mod traces;
pub mod zeta;

pub use error::{Error, Result};
pub use ext::ExtReal;

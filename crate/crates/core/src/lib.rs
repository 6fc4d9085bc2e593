//! Exact Casimir functions and coadjoint orbits of free nilpotent Lie
//! algebras of step 3 and 4.

pub mod casimir;
pub mod cli;
pub mod error;
pub mod flow;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod num;
pub mod orbit;
pub mod parse;
pub mod poisson;
pub mod poly;

pub use error::{Error, Result};
pub use lie::{graded_dimension, GradedAlgebra, HallWord, LieElement, RingId};
pub use num::Rational;

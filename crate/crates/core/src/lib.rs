//! Robust strictly-positive-real synthesis for polynomial segments.
//!
//! Given two monic Hurwitz polynomials `a` and `b` of the same degree, the
//! library decides whether every member of the segment `λb + (1-λ)a` is
//! Hurwitz and, when it is, constructs a polynomial `c` such that both
//! `c/a` and `c/b` are strictly positive real. Every verdict carries a
//! certificate (Routh tables, Sturm chains) that can be re-checked.

pub mod cli;
pub mod config;
pub mod discrete;
pub mod error;
pub mod oracles;
pub mod polycore;
pub mod segstab;
pub mod sprcheck;
pub mod synthesis;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use polycore::Poly;

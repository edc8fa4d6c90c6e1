//! Dense polynomial arithmetic, Hurwitz testing and certified positivity.

mod poly;
mod roots;
mod routh;
mod sturm;

pub use poly::{poly_arith, ArithOp, Poly};
pub use roots::{
    cauchy_lower_bound, cauchy_root_bound, complex_roots, max_abs_on_interval, min_on_interval,
    rational_extremum, real_roots_in,
};
pub use routh::{is_hurwitz, routh_hurwitz, RouthTable};
pub(crate) use sturm::exact_sign_at;
pub use sturm::{positive_on_halfline, positive_on_interval, sturm_chain, Domain, PositivityProof};

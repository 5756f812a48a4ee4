//! Graded-lexicographic reduction on weighted Tate algebras over a normed
//! coefficient field: leading data, the Munshi-style descent, norm-bounded
//! division and almost-finite-generation witnesses.

mod afg;
mod descent;
mod divide;
mod domain;
mod monomial;
mod poly;

pub use afg::{afg_candidate, afg_witness, probe_afg, sample_uh, AfgWitness};
pub use descent::{
    munshi_descent, prepare_generators, reduction_step, Certificate, DescentOutcome, DescentState, PreparedGenerator,
    RoundReport,
};
pub use divide::{is_reducible, norm_bounded_divide, DivideOptions, Division};
pub use domain::{CoeffDomain, LaurentDomain, PadicRationals};
pub use monomial::{grlex_compare, MonomialIndex};
pub use poly::{TateAlgebra, TatePoly, Weight};

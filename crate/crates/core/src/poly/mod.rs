//! Polynomials over `A_n`: complex-slice polynomials with all their roots,
//! generalized polynomials `x^k (e0 + g(x))` with a numerical root search, and
//! winding numbers of the power maps on complex slices.

pub mod complex;
pub mod generalized;
pub mod search;
pub mod slice;
pub mod winding;

pub use complex::{eval_complex_poly, roots_complex_poly, ComplexPolynomial, PolynomialFixture};
pub use generalized::{
    check_decay, eval_generalized, to_generalized, CommutatorProbe, DecayReport,
    GeneralizedFixture, GeneralizedPolynomial, ResidualMap, Term,
};
pub use search::{root_search, root_search_generalized, SearchOptions, SearchOutcome};
pub use slice::ComplexSlice;
pub use winding::{power_map_winding, winding_number, winding_value};

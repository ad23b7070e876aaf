//! Exact arithmetic over a symbol basis and the lattice toolkit built on it.

pub mod intmat;
mod symreal;
mod unimodular;
mod zmodule;

pub type Rat = num_rational::BigRational;

pub use symreal::{argmin, reduce_quotient, sort_reals, sum_reals, SymBasis, SymReal, Symbol, CONSTANT_SYMBOL};
pub(crate) use symreal::same_basis;
pub use unimodular::{
    elementary_word_product, gl2_word_product, gl2z_word, glz_elementary_word, glz_solve, int_content, ElemLetter,
    Gl2Letter, UnimodularMatrix,
};
pub use zmodule::ZModule;

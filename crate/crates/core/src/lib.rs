//! Exact and numeric tooling for Lagrangian product tori: invariants, admissible move paths,
//! isotopy certificates, ambient reductions and the numeric constructions behind them.

pub mod ambient;
pub mod error;
pub mod exactnum;
pub mod invariants;
pub mod numlab;
pub mod oracle;
pub mod pathengine;

pub use error::{Error, Result};
pub use exactnum::{Rat, SymBasis, SymReal, Symbol, UnimodularMatrix, ZModule};

pub type Point64 = numlab::SymplecticPoint<f64>;
pub type Point32 = numlab::SymplecticPoint<f32>;
pub type Loop64 = numlab::LoopSample<f64>;
pub type Loop32 = numlab::LoopSample<f32>;

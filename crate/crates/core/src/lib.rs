//! Exact-arithmetic toolkit for parameterized hardness reductions between
//! coding and lattice problems.
//!
//! The crate builds the gadgets the reductions consume (q-ary BCH codes,
//! locally dense codes, Reed-Solomon and BCH Construction-A lattices), runs the
//! reductions NCP -> MDP, CVP -> SVP and the tensorable NCP_2 -> SVP_p, and
//! ships brute-force oracles that check every structural claim at small scale.

pub mod ball;
pub mod budget;
pub mod cli_io;
pub mod code;
pub mod distance;
pub mod error;
pub mod field;
pub mod gadgets;
pub mod lattice;
pub mod linalg;
pub mod packed;
pub mod primes;
pub mod reductions;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use budget::Budget;
pub use code::LinearCode;
pub use field::{Elem, FieldElement, FiniteField};
pub use lattice::{IntegerLattice, NormSpec};

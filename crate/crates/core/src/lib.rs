//! Point counting on the non-normal cubic surface `t0^2 t2 = t1^2 t3`.
//!
//! The crate is layered bottom-up: [`arith`] and [`qfield`] supply exact
//! arithmetic in Q and quadratic fields, [`zeta`] the special values feeding
//! every predicted constant, [`heights`] and [`geometry`] the objects being
//! counted, [`counting`] and [`sym2`] the engines, and [`tamagawa`] the local
//! densities whose scaling laws explain the constants.

pub mod arith;
pub mod counting;
mod error;
pub mod geometry;
pub mod heights;
pub mod qfield;
pub mod sym2;
pub mod tamagawa;
pub mod zeta;

pub use error::{Error, Result};

//! Regular Swiss cheese sets on the square `Q = [-1, 1]²`.
//!
//! `geometry` has the plane primitives and the enumeration of rational
//! discs, `ratfunc` the functions `h_N`, `g_n` and their products,
//! `construction` builds the deleted-disc configurations with their budget
//! ledgers, `verify` certifies the estimates numerically, and `files`
//! reads and writes configurations, reports and pictures.

pub mod construction;
pub mod error;
pub mod files;
pub mod geometry;
pub mod ratfunc;
pub mod verify;

pub use error::{CheeseError, Result};

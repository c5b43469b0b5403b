//! Exact computation of upper ramification jumps for degree `p^(n+1)` extensions
//! of `F_q((t))` whose Galois group is the unipotent group `G(F_p)` of maximal
//! nilpotency class.
//!
//! The crate has two independent routes to the top jumps `r_2 < ... < r_n`:
//!
//! * [`jumps`] evaluates the closed-form max formula built from the valuations of
//!   the differentials `omega = A(-a) db`;
//! * [`tower`] builds the Artin-Schreier extension `L = K(alpha)` explicitly in the
//!   basis `1, gamma, ..., gamma^(p-1)`, reduces each `c_j` over `L` to read off its
//!   conductor `m'_j`, and pulls it back through the Herbrand function.
//!
//! Vectors over the group (`b`, `y`, `omega`, `c`) are stored bottom-up: index 0
//! holds the first component `b_1`.

pub mod artin_schreier;
pub mod cli;
pub mod error;
pub mod extint;
pub mod family;
pub mod gfq;
pub mod herbrand;
pub mod jumps;
pub mod laurent;
pub mod normalize;
pub mod ring;
pub mod tower;
pub mod unipotent;

pub use error::{Error, Result};
pub use extint::ExtInt;
pub use gfq::{FqElem, FqField};
pub use laurent::{LaurentField, LaurentSeries};

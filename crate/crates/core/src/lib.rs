//! Exact and p-adic machinery for L-invariants of Tate periods, cyclotomic
//! p-adic L-functions built from modular symbols, and the exceptional-zero
//! identities relating them.
//!
//! The crate is organised bottom-up:
//!
//! - [`padic`]: fixed-precision `Q_p` and unramified `Q_{p^f}` arithmetic,
//!   Teichmüller lifts, logarithms and their branches.
//! - [`periods`]: formal products of field elements and their L-invariants.
//! - [`curves`]: Weierstrass models, reduction types, Tate periods.
//! - [`modsym`]: weight-2 modular symbols for `Γ0(N)` and eigen-symbols.
//! - [`measures`]: Mazur-Tate measures, Stickelberger elements and the
//!   verification reports built on them.

pub mod arith;
pub mod curves;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod modsym;
pub mod padic;
pub mod parallel;
pub mod periods;

pub use error::{Error, Result};

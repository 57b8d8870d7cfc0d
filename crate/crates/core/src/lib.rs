//! Exact arithmetic and numerical checks for Selberg-type trace identities on
//! `PSL(2, Z)` and `PSL(2, Z[i])` with induced representations.
//!
//! The crate is `no_std` (with `alloc`). Parallelism is injected through the
//! [`exec::Executor`] trait.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod character;
pub mod classes;
pub mod cosets;
pub mod eisenstein;
pub mod element;
pub mod error;
pub mod exec;
pub mod gauss;
pub mod geometry;
pub mod group;
pub mod induced;
pub mod int;
pub mod omega;
pub mod orbital;
pub mod policy;
pub mod quadrature;
pub mod scattering;
pub mod turn;
pub mod zeta;

pub use element::{Classification, GroupElement};
pub use error::Error;
pub use character::Character;
pub use cosets::{CuspData, SubgroupPair};
pub use exec::{Executor, Sequential};
pub use geometry::PointH3;
pub use gauss::GaussInt;
pub use group::{Ambient, GroupDescriptor};
pub use induced::{InducedRep, MonomialMatrix, SingularityTest};
pub use int::Int;
pub use turn::Turn;

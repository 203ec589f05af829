//! Exact-arithmetic toolkit for the circuits of a general polyhedron
//! `P = {x : Ax = b, Bx <= d}`.
//!
//! Everything here works over arbitrary-precision rationals; there is no
//! floating point and no tolerance anywhere. The crate provides
//!
//! - dense rational linear algebra ([`exactnum`]),
//! - polyhedra, circuits and circuit sets ([`polyhedron`]),
//! - three independent circuit enumeration algorithms and closed-form
//!   circuit counts for standard-form conversions ([`circuit_enum`],
//!   [`vertex_enum`]),
//! - a polyhedral model whose vertices encode circuits, with faces for
//!   strictly feasible and sign-compatible subsets ([`polymodel`]),
//! - an exact two-phase simplex returning vertex solutions ([`lpsolve`]),
//! - steepest-descent circuit augmentation for linear programs ([`augment`]),
//! - sign-compatible sums and circuit walks between feasible points
//!   ([`walks`]).
//!
//! The crate is `no_std` (alloc required); IO and file formats live in the
//! companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod augment;
pub mod circuit_enum;
pub mod comb;
mod error;
pub mod exactnum;
pub mod lpsolve;
pub mod polyhedron;
pub mod polymodel;
pub mod rng;
pub mod vertex_enum;
pub mod walks;

pub use error::Error;
pub use exactnum::{Int, RatMatrix, RatVector, Rational};
pub use polyhedron::{Circuit, CircuitSet, Polyhedron};
pub use polymodel::{ModelPoint, PolyModel};

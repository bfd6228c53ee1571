//! Exact decision procedures for the dynamics of integer-matrix models:
//! endomorphisms of products of elliptic curves, isometries of hyperbolic
//! lattices and linear maps preserving polyhedral cones.

#![allow(clippy::needless_range_loop)]

pub mod abelian;
pub mod approx;
pub mod conedyn;
pub mod corpus;
pub mod exactpoly;
pub mod hyperlattice;
pub mod linalg;
pub mod lp;
pub mod numfield;

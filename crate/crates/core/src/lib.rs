//! Integral points on complements of anticanonical divisors in blow-ups of
//! the projective plane.
//!
//! The crate is organised bottom-up: [`arith`] supplies exact numbers,
//! [`projgeo`] forms and incidence, [`cubic`] plane cubics and their flexes,
//! [`surface`] the cubic surface w³ = F with its conic fibrations,
//! [`points`] integrality, Pell orbits and point generation, and
//! [`lattice`] the Picard lattice and the simply-connectedness test.

pub mod arith;
pub mod cubic;
pub mod error;
pub mod lattice;
pub mod points;
pub mod projgeo;
pub mod surface;

pub use error::{Error, Result};

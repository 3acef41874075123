//! Exact commutative algebra for syzygies: Gröbner bases, graded minimal free
//! resolutions, Koszul cohomology, symmetric-group isotypic components, the
//! polygraph rings `R(n,k)`, and evaluation-map tests of higher-order
//! ampleness on explicit linear systems.

pub mod error;
pub mod geometry;
pub mod gradedmod;
pub mod groebner;
pub mod koszul;
pub mod polygraph;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod symgrp;

pub use error::{AlgebraError, Error, Result};
pub use poly::{GradedDegree, Monomial, MonomialOrder, MultiPoly, Ring, RingRef};
pub use scalar::{Field, Scalar};

//! Exact computations in derived Hecke algebras with torsion coefficients:
//! graded cohomology of finite abelian l-groups, spherical and Iwahori models
//! with their Satake and crossed-product structure, Koszul Ext algebras, a
//! rank-1 building with its torus action, and exterior-algebra actions on
//! torus manifold cohomology.

pub mod coeff;
pub mod cohomology;
pub mod error;
pub mod iwahori;
pub mod koszul;
pub mod laurent;
pub mod linalg;
pub mod manifold;
pub mod root_datum;
pub mod satake;
pub mod suites;
pub mod tree;

pub use coeff::{AbelianLGroup, CoeffRing, GroupHom};
pub use error::{Error, Result};

//! Generators of complete ideals on a smooth surface germ, expressed as
//! monomials in maximal contact elements of a proper birational morphism.

#![allow(clippy::needless_range_loop)]

pub mod applications;
pub mod cluster;
pub mod divisor;
pub mod error;
pub mod generators;
pub mod io;
pub mod maximal_contact;
pub mod monomial;
pub mod oracle;

pub use cluster::{Cluster, Coordinate, PointId, PointKind, ORIGIN};
pub use divisor::{branch_divisor, Basis, Divisor};
pub use error::{Error, Result};
pub use generators::{compute_generators, GeneratorEngine, GeneratorTree, Selection};
pub use maximal_contact::{MaximalContactSet, PuiseuxData, SemigroupData, Var};
pub use monomial::{Monomial, MonomialIdeal};
pub use oracle::poly::BivariatePoly;

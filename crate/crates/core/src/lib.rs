//! Linear stability of Hamiltonian systems `ΩB` from the inertia of `B`,
//! spectral flow along self-adjoint paths, and relative equilibria of planar
//! n-body-type problems.

pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod nbody;
pub mod poly;
pub mod spectral_flow;
pub mod stability;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{Field, FieldKind, Rational};
pub use linalg::{Backend, IndexReport, Tolerance};
pub use matrix::Matrix;
pub use subspace::Subspace;

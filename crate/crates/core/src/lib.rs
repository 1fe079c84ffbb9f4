//! Tau discretizations of `D²u = λu` on `[-1, 1]` with Dirichlet boundary
//! conditions in Gegenbauer and Jacobi bases, their characteristic
//! polynomials in `μ = 1/λ`, and checks on the resulting spectra.

pub mod charpoly;
pub mod error;
mod exact;
pub mod field;
pub mod io;
pub mod linalg;
pub mod orthopoly;
pub mod poly;
pub mod spectra;
pub mod sweep;
pub mod tau_operator;
pub mod verify;

pub use error::{Error, Result};
pub use orthopoly::{GegenbauerIndex, JacobiIndex, Parity};
pub use poly::{poly_roots, MuPolynomial, RealPolynomial};

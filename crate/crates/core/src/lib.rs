//! Numerical operator algebra for the q-deformed Weyl–Heisenberg algebra.
//!
//! * [`bargmann`]: exact action on truncated polynomials (Fock–Bargmann space).
//! * [`fock`]: dense matrices on a truncated Fock basis, squeeze operator and
//!   Bogoliubov transformations.
//! * [`weyl`]: Weyl systems `U(α)`, `V(β)`, `W(z)` and their `ρ`-labelled family.
//! * [`foliation`]: test-function scalar products and the vacuum-overlap probe
//!   of how deformation labels separate as the number of modes grows.
//! * [`cli`]: configuration, runners and reports behind the `qweyl` binary.

pub mod bargmann;
pub mod cli;
pub mod deformation;
pub mod error;
pub mod expm;
pub mod fock;
pub mod foliation;
pub mod weyl;

pub use deformation::Deformation;
pub use error::{Error, Result};

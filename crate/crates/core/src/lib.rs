//! Exact algebra of generalized algebraic curvature operators and their
//! realization as curvatures of torsion-free polynomial connections.
//!
//! * [`algebra`]: curvature operators, Ricci trace, the `H` map, Weyl
//!   projection, irreducible decomposition and dimension counts.
//! * [`jet`]: truncated multivariate polynomials over the rationals.
//! * [`connection`]: jet connections, their curvature and derived fields.
//! * [`realization`]: connections realizing prescribed curvature data, and
//!   the projectively-flat Ricci-antisymmetric obstruction audit.
//! * [`cli`]: JSON interchange and the command-line driver.

pub mod algebra;
pub mod cli;
pub mod connection;
pub mod io;
pub mod jet;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod realization;
pub mod tensor;
pub mod witness;

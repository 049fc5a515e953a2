//! Discrete probes of first L^p-cohomology on finitely generated groups.
//!
//! The crate works on finite balls of Cayley graphs:
//!
//! * [`groups`]: exact normal forms for free, abelian, cyclic, free-product
//!   and direct-product providers;
//! * [`cayley`]: ball enumeration, word lengths and distances, growth;
//! * [`gromov`]: Gromov products, four-point hyperbolicity estimates and the
//!   Floyd scale parameter;
//! * [`floyd`]: Floyd admissible functions, the rescaled path metric, the
//!   Gromov-product chain metric, boundary probes, witness fields and the
//!   summability test;
//! * [`dirichlet`]: p-Dirichlet energies, the p-Laplacian, the p-harmonic
//!   Dirichlet solver and the harmonic decomposition of a field.

pub mod cayley;
pub mod dirichlet;
pub mod error;
pub mod floyd;
pub mod gromov;
pub mod groups;

pub use cayley::{build_ball, Ball, GrowthHistogram};
pub use dirichlet::{ScalarField, SolverConfig, SolverReport};
pub use error::{Error, Result};
pub use floyd::AdmissibleFunction;
pub use groups::{Group, GroupElement, GroupSpec};

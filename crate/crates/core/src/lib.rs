//! Numerical analysis of circle-invariant tight contact forms on circle
//! bundles over the 2-sphere, through the potential function of their moment
//! map.
//!
//! The crate is organised around [`Profile`]: the potential `J` on the single
//! invariant cylinder, together with the Euler number of the bundle.
//! Everything dynamical is read off from it:
//!
//! * [`orbits`] enumerates closed Reeb orbits from rational values of the
//!   rotation `−J′` and computes certified systoles;
//! * [`measures`] computes the contact volume `2∫J dk`, systolic ratios and
//!   checks the sharp systolic inequality with its proof certificate;
//! * [`chart`] rebuilds an explicit contact form on two glued solid tori and
//!   integrates its Reeb flow, cross-checking the potential calculus;
//! * [`revolution`] is an independent oracle for Euler number two through
//!   Riemannian metrics of revolution on the sphere.

pub mod branch;
pub mod chart;
pub mod constructors;
pub mod error;
pub mod measures;
pub mod ode;
pub mod orbits;
pub mod profile;
pub mod quad;
pub mod revolution;
pub mod roots;

pub use branch::{BranchFunction, BranchKind, Side};
pub use error::{Error, Result};
pub use profile::{EulerNumber, Profile, ValidationReport};

/// Grid density used when a caller does not specify one.
pub const DEFAULT_GRID: usize = 4096;

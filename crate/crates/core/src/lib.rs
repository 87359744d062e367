//! Translation-invariant hypersurfaces with vanishing higher-order mean
//! curvature in ℍⁿ×ℝ.
//!
//! The crate is organised bottom-up:
//!
//! * [`ambient`]: Poincaré-ball geometry of ℍⁿ×ℝ (metric, Christoffel
//!   symbols, hyperplanes, translations, halfspace predicates).
//! * [`quadrature`]: adaptive Gauss–Kronrod integration with exact
//!   inverse-square-root desingularisation and power-law tails.
//! * [`profile`]: generating curves λ(ρ) of the invariant family in every
//!   regime, with first-integral diagnostics.
//! * [`curvature`]: principal curvatures, every H_j, |A| and N_{n+1}.
//! * [`height`]: the half-height h_r of the two-sheet hypersurfaces and the
//!   slab predicate.
//! * [`stc`]: discretised hypersurfaces and the weighted Sobolev norm of |A|.
//! * [`barrier`]: sweeps of barrier copies toward finite point sets.

pub mod ambient;
pub mod barrier;
pub mod curvature;
mod error;
pub mod height;
pub mod profile;
pub mod quadrature;
pub mod stc;

pub use error::{Error, Result};

//! Linear stability and first dynamic transition of double-diffusive
//! (thermohaline) convection in a spherical shell `S²_r × (0, 1)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`params`]: nondimensional parameters, critical degree and the regime discriminant `K`.
//! - [`cubic`]: closed-form real cubic solver with Newton polish.
//! - [`spectrum`]: eigenvalues and eigenvectors of the linearised operator.
//! - [`harmonics`]: spherical harmonics, Gaunt coefficients and quadrature.
//! - [`transition`]: transition numbers `q₁`, `q₂`, center-manifold coefficients, `R*` search.
//! - [`dynamics`]: reduced amplitude equations on the center manifold and field reconstruction.
//! - [`reference`]: tabulated reference values used by the reproduction checks.
//!
//! ```
//! use thermohaline::params::Params;
//! use thermohaline::transition::{transition_number, Classification};
//!
//! let params = Params::at_criticality(7.5, 0.01, 2.0 / std::f64::consts::PI, 620.0).unwrap();
//! let report = transition_number(&params).unwrap();
//! assert_eq!(report.classification, Classification::TypeI);
//! assert!((report.q - 42.3186).abs() < 1e-3 * 42.3186);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cubic;
pub mod dynamics;
mod error;
pub mod harmonics;
pub mod params;
pub mod reference;
pub mod roots;
pub mod spectrum;
pub mod transition;

pub use error::{Error, Result};

//! Theta-deformed tori with arbitrary spin structure.
//!
//! The crate is organised bottom-up:
//!
//! - [`nc_torus`]: finitely supported elements of the noncommutative torus
//!   `C^∞(T^N_θ)` with the normal-ordered star product.
//! - [`rational_oracle`]: clock-and-shift matrices for rational `θ = p/q`,
//!   an independent finite-dimensional check of the star product.
//! - [`spin_cover`]: spin structures on `T^N`, the double coverings of the
//!   acting torus and their θ-deformed covering algebras.
//! - [`spectral`]: the flat Dirac spectral triple on `T²` for each spin
//!   structure and its isospectral deformation.
//! - [`splitting`]: the gluing isomorphism `κ` and the spinor bimodule.
//! - [`cli`]: the `nctspin` command line front end.

pub mod cli;
pub mod error;
pub mod nc_torus;
pub mod rational_oracle;
pub mod sample;
pub mod spectral;
pub mod spin_cover;
pub mod splitting;

pub use error::{Error, Result};
pub use nc_torus::{Monomial, ThetaMatrix, TorusElement};

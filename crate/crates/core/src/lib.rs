//! Neumann-series solution of the isothermal slip (Kramers) problem for a
//! moderately dense gas with mirror–diffusion walls.
//!
//! The layers, bottom up:
//! - [`quadrature`]: adaptive Gauss–Kronrod for velocity and wavenumber integrals;
//! - [`special`]: `T_n`, `J_n`, `J^(m)`, the dispersion function and `φ₀`;
//! - [`kernels`]: the iteration kernel `S(k, k₁)` and sampled spectral functions;
//! - [`neumann`]: the coefficients `U_n` and densities `E_n` of the series in `q`;
//! - [`transport`]: slip velocity, slip coefficient, profiles, distribution function;
//! - [`oracle`]: independent nested-quadrature values of `U₁`, `U₂` and `J₀…J₂`.

pub mod error;
pub mod kernels;
pub mod neumann;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod transport;

pub use error::{Error, QuadratureError, Result};
pub use quadrature::QuadratureSpec;
pub use special::GasParameters;

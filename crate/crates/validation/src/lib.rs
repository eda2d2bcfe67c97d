//! Reference values shared by the acceptance criteria in `tests/acceptance.rs`.

/// Published series coefficients at `γ = 0`.
pub const U0: f64 = 0.886_227;
pub const U1: f64 = 0.1405;
/// Slope of `(1 − γ)U₁(γ)`.
pub const U1_SLOPE: f64 = 0.2009;
/// Published double-integral constants.
pub const J: [f64; 3] = [0.0116, 0.0125, -0.0306];
/// Slip at full accommodation, rarefied gas, second order.
pub const SLIP: f64 = 1.0151;
/// Density slope of the slip velocity at full accommodation.
pub const SLIP_GAMMA_SLOPE: f64 = -0.6862;
/// Exact-solution references.
pub const SLIP_EXACT: f64 = 1.0162;
// a four-digit reference value, not 1/√2
#[allow(clippy::approx_constant)]
pub const SLIP_GAMMA_SLOPE_EXACT: f64 = -0.7071;

//! The Neumann series in the diffusion coefficient `q`.
//!
//! ```text
//! φ_n(k) = (1/π) ∫ S(k, k₁) φ_{n−1}(k₁)/T₂(k₁) dk₁
//! E_n(k) = φ_n(k) / ((1 − γ)^(n+1) T₂(k))
//! U_n    = −(1 − γ)^(−n) (1/√π) ∫ J^(1)(0, k₁) φ_{n−1}(k₁)/T₂(k₁) dk₁,   U₀ = √π/2
//! ```
//!
//! `U_n` is the value that removes the double pole of `E_n = −B_n/L` at
//! `k = 0`, with `B_n(k) = U_n T₁(k) + (1/π) ∫ J^(1)(k, k₁) E_{n−1}(k₁) dk₁`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernels::{KernelOperator, PHI_TAIL};
use crate::quadrature::QuadratureSpec;
use crate::special::{check_gamma, moment, Moments, INV_PI, SQRT_PI};
use crate::spectral::SpectralFunction;

/// Decay exponent of `E_n(k)` and of `φ_n/T₂` (up to logarithms).
pub const E_TAIL: u32 = 2;
/// Highest order accepted by [`build_series`].
pub const MAX_ORDER: usize = 4;
/// Largest accepted density parameter.
pub const GAMMA_LIMIT: f64 = 0.95;
const GAMMA_WARN: f64 = 0.5;

/// `U₀ = T₂(0)/T₁(0) = √π/2`.
pub fn u0() -> f64 {
    moment(2) / moment(1)
}

fn check_series_gamma(gamma: f64) -> Result<()> {
    check_gamma(gamma)?;
    if gamma > GAMMA_LIMIT {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            reason: "the series is only supported for gamma <= 0.95",
        });
    }
    if gamma > GAMMA_WARN {
        log::warn!("gamma = {gamma} > {GAMMA_WARN}: convergence of the series in q is not established here");
    }
    Ok(())
}

/// `U_n` from `φ_{n−1}`.
pub fn u_coefficient(n: usize, gamma: f64, phi_prev: &SpectralFunction, spec: &QuadratureSpec) -> Result<f64> {
    check_order(n)?;
    let op = KernelOperator::new(gamma, spec)?;
    let e_prev = e_from(n - 1, gamma, phi_prev, |k| op.moments(k))?;
    Ok(u_integral(&op, n, &e_prev)?.0)
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            reason: "U_0 is the closed form u0(); integral coefficients start at n = 1",
        });
    }
    Ok(())
}

/// `U_n = −(1/√π) ∫ J^(1)(0, k₁) E_{n−1}(k₁) dk₁` and its error estimate.
///
/// This is the same integral as in `B_n(0)`, so the computed `U_n` cancels
/// the computed pole numerator at the origin to quadrature accuracy.
fn u_integral(op: &KernelOperator, n: usize, e_prev: &SpectralFunction) -> Result<(f64, f64)> {
    check_order(n)?;
    let g = op.gamma();
    let est = op.integrate_k1(
        e_prev,
        None,
        1.0,
        E_TAIL,
        || format!("U_{n} from {}", e_prev.label()),
        |m| Ok(m.j1_at_origin(g) * e_prev.eval(m.k)),
    )?;
    let c = -1.0 / SQRT_PI;
    Ok((c * est.value, c.abs() * est.error))
}

/// `E_n = φ_n / ((1 − γ)^(n+1) T₂)` on the nodes of `φ_n`.
pub fn e_n(n: usize, gamma: f64, phi_n: &SpectralFunction, spec: &QuadratureSpec) -> Result<SpectralFunction> {
    check_gamma(gamma)?;
    e_from(n, gamma, phi_n, |k| Moments::compute(k, spec))
}

fn e_from<M>(n: usize, gamma: f64, phi_n: &SpectralFunction, moments: M) -> Result<SpectralFunction>
where
    M: Fn(f64) -> Result<Moments>,
{
    let c = (1.0 - gamma).powi(-(n as i32 + 1));
    phi_n.map_nodes(E_TAIL, format!("E_{n}"), |k, v| Ok(c * v / moments(k)?.t(2)))
}

/// Per-order record of the numerics behind a [`SeriesExpansion`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderDiagnostics {
    pub order: usize,
    /// Quadrature error estimate of `U_n`.
    pub u_error: f64,
    /// Sum of the `U` error estimates up to this order.
    pub accumulated_error: f64,
    /// `max |φ_n|` over the grid.
    pub phi_sup: f64,
}

/// The coefficients `U₀…U_N` with the spectral functions `φ₀…φ_N`, `E₀…E_N`.
#[derive(Debug, Clone)]
pub struct SeriesExpansion {
    gamma: f64,
    u_coeffs: Vec<f64>,
    phi_funcs: Vec<SpectralFunction>,
    e_funcs: Vec<SpectralFunction>,
    diagnostics: Vec<OrderDiagnostics>,
    operator: Arc<KernelOperator>,
}

impl SeriesExpansion {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn order(&self) -> usize {
        self.u_coeffs.len() - 1
    }

    pub fn u_coeffs(&self) -> &[f64] {
        &self.u_coeffs
    }

    pub fn phi_funcs(&self) -> &[SpectralFunction] {
        &self.phi_funcs
    }

    pub fn e_funcs(&self) -> &[SpectralFunction] {
        &self.e_funcs
    }

    pub fn diagnostics(&self) -> &[OrderDiagnostics] {
        &self.diagnostics
    }

    pub fn spec(&self) -> &QuadratureSpec {
        self.operator.spec()
    }

    pub fn operator(&self) -> &KernelOperator {
        &self.operator
    }

    /// `Σ U_n qⁿ`.
    pub fn u_sum(&self, q: f64) -> f64 {
        self.u_coeffs.iter().rev().fold(0.0, |acc, u| acc * q + u)
    }

    /// `Σ E_n(k) qⁿ`.
    pub fn e_sum(&self, q: f64, k: f64) -> f64 {
        self.e_funcs.iter().rev().fold(0.0, |acc, e| acc * q + e.eval(k))
    }

    /// The same series cut at `order`.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Domain {
                name: "order",
                value: order as f64,
                reason: "cannot truncate a series above its own order",
            });
        }
        Ok(Self {
            gamma: self.gamma,
            u_coeffs: self.u_coeffs[..=order].to_vec(),
            phi_funcs: self.phi_funcs[..=order].to_vec(),
            e_funcs: self.e_funcs[..=order].to_vec(),
            diagnostics: self.diagnostics[..=order].to_vec(),
            operator: Arc::clone(&self.operator),
        })
    }

    /// The pole numerator `B_n(k)`; `E_n = −B_n/L` away from `k = 0`.
    pub fn pole_numerator(&self, n: usize, k: f64) -> Result<f64> {
        let op = &self.operator;
        let a = op.moments(k)?;
        if n == 0 {
            return Ok(self.u_coeffs[0] * a.t(1) - a.t(2));
        }
        if n > self.order() {
            return Err(Error::Domain {
                name: "n",
                value: n as f64,
                reason: "order not computed in this series",
            });
        }
        let e_prev = &self.e_funcs[n - 1];
        let g = self.gamma;
        let est = op.integrate_k1(
            e_prev,
            Some(k),
            1.0,
            E_TAIL,
            || format!("B_{n}(k={k})"),
            |b| {
                let [j1, j3, _] = crate::special::j_odd_triple(&a, b, op.spec())?;
                Ok((j1 + g * b.k * b.k * j3) * e_prev.eval(b.k))
            },
        )?;
        Ok(self.u_coeffs[n] * a.t(1) + INV_PI * est.value)
    }
}

/// `φ₀`, `U₀`, `E₀` and `order` Neumann iterations beyond them.
pub fn build_series(gamma: f64, order: usize, spec: &QuadratureSpec) -> Result<SeriesExpansion> {
    check_series_gamma(gamma)?;
    if order > MAX_ORDER {
        return Err(Error::Domain {
            name: "order",
            value: order as f64,
            reason: "orders above 4 are not supported",
        });
    }
    let op = Arc::new(KernelOperator::new(gamma, spec)?);
    let phi0 = SpectralFunction::from_fn(op.grid(), PHI_TAIL, "phi_0", |k| Ok(op.moments(k)?.phi0()))?;

    let sup = |f: &SpectralFunction| f.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut u_coeffs = vec![u0()];
    let mut diagnostics = vec![OrderDiagnostics {
        order: 0,
        u_error: 0.0,
        accumulated_error: 0.0,
        phi_sup: sup(&phi0),
    }];
    let mut e_funcs = vec![e_from(0, gamma, &phi0, |k| op.moments(k))?];
    let mut phi_funcs = vec![phi0];
    for n in 1..=order {
        let prev = &phi_funcs[n - 1];
        let (u, u_error) = u_integral(&op, n, &e_funcs[n - 1])?;
        let phi = op.apply(prev, format!("phi_{n}"))?;
        e_funcs.push(e_from(n, gamma, &phi, |k| op.moments(k))?);
        let accumulated_error = diagnostics[n - 1].accumulated_error + u_error;
        diagnostics.push(OrderDiagnostics {
            order: n,
            u_error,
            accumulated_error,
            phi_sup: sup(&phi),
        });
        log::debug!("order {n}: U = {u:.10} (error {u_error:.2e})");
        u_coeffs.push(u);
        phi_funcs.push(phi);
    }
    Ok(SeriesExpansion {
        gamma,
        u_coeffs,
        phi_funcs,
        e_funcs,
        diagnostics,
        operator: op,
    })
}

//! The velocity integrals of the problem: `T_n(k)`, `J_n(k, k₁)`,
//! `J^(m)(k, k₁)`, the dispersion function `L(k)` and the seed `φ₀(k)`.
//!
//! ```text
//! T_n(k)        = (2/√π) ∫₀^∞ e^(−t²) tⁿ / (1 + k²t²) dt
//! J_n(k, k₁)    = (2/√π) ∫₀^∞ e^(−t²) tⁿ / ((1 + k²t²)(1 + k₁²t²)) dt
//! J^(m)(k, k₁)  = J_m(k, k₁) + γ k₁² J_{m+2}(k, k₁)
//! L(k)          = 1 − T₀(k) − γk²T₂(k) = (1 − γ) k² T₂(k)
//! φ₀(k)         = (√π/2) T₃(k) − T₄(k)
//! ```

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use crate::error::{Error, Labelled, Result};
use crate::quadrature::{integrate_breaks, integrate_vec, velocity_breaks, QuadratureSpec, Tolerance};

pub const SQRT_PI: f64 = 1.772_453_850_905_516;
const TWO_OVER_SQRT_PI: f64 = 2.0 / SQRT_PI;

/// Exact `T_n(0) = Γ((n+1)/2)/√π` for `n ≤ 10`.
const MOMENTS_AT_ZERO: [f64; 11] = [
    1.0,
    1.0 / SQRT_PI,
    0.5,
    1.0 / SQRT_PI,
    0.75,
    2.0 / SQRT_PI,
    15.0 / 8.0,
    6.0 / SQRT_PI,
    105.0 / 16.0,
    24.0 / SQRT_PI,
    945.0 / 32.0,
];

/// Highest order accepted by [`t_n`].
pub const MAX_T_ORDER: usize = 8;

/// `T_n(0)`.
pub fn moment(n: usize) -> f64 {
    MOMENTS_AT_ZERO[n]
}

/// Physical inputs of one slip problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParameters {
    /// Density parameter `γ = (4/15)π n σ³`.
    pub gamma: f64,
    /// Diffusion (accommodation) coefficient.
    pub q: f64,
    /// Dimensionless far-field velocity gradient `G_v`.
    pub g_v: f64,
}

impl GasParameters {
    pub fn new(gamma: f64, q: f64, g_v: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain {
                name: "q",
                value: q,
                reason: "the diffusion coefficient must lie in (0, 1]; q = 0 makes (2 - q)/q diverge",
            });
        }
        if !g_v.is_finite() {
            return Err(Error::Domain {
                name: "g_v",
                value: g_v,
                reason: "the velocity gradient must be finite",
            });
        }
        Ok(Self { gamma, q, g_v })
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            reason: "the density parameter must satisfy 0 <= gamma < 1",
        });
    }
    Ok(())
}

fn check_k(name: &'static str, k: f64) -> Result<()> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::Domain {
            name,
            value: k,
            reason: "wavenumbers must be finite and non-negative",
        });
    }
    Ok(())
}

/// Direct quadrature of the `T_n` integrand.
pub fn t_n(n: usize, k: f64, spec: &QuadratureSpec) -> Result<f64> {
    if n > MAX_T_ORDER {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            reason: "T_n is provided for n <= 8",
        });
    }
    check_k("k", k)?;
    if k == 0.0 {
        return Ok(moment(n));
    }
    let s = k * k;
    let breaks = velocity_breaks(spec.t_max, k);
    integrate_breaks(
        |t| TWO_OVER_SQRT_PI * (-t * t).exp() * t.powi(n as i32) / (1.0 + s * t * t),
        &breaks,
        spec.tolerance(),
    )
    .map(|e| e.value)
    .label(|| format!("T_{n}(k={k})"))
}

/// Direct quadrature of the `J_n` integrand, `n ∈ {1, 3, 5}`.
pub fn j_n(n: usize, k: f64, k1: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !matches!(n, 1 | 3 | 5) {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            reason: "J_n is used for n in {1, 3, 5}",
        });
    }
    check_k("k", k)?;
    check_k("k1", k1)?;
    let (s, s1) = (k * k, k1 * k1);
    let breaks = velocity_breaks(spec.t_max, k.max(k1));
    integrate_breaks(
        |t| {
            let t2 = t * t;
            TWO_OVER_SQRT_PI * (-t2).exp() * t.powi(n as i32) / ((1.0 + s * t2) * (1.0 + s1 * t2))
        },
        &breaks,
        spec.tolerance(),
    )
    .map(|e| e.value)
    .label(|| format!("J_{n}(k={k}, k1={k1})"))
}

/// Direct quadrature of the `J^(m)` integrand, `m ∈ {1, 3}`.
pub fn j_m(m: usize, k: f64, k1: f64, gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !matches!(m, 1 | 3) {
        return Err(Error::Domain {
            name: "m",
            value: m as f64,
            reason: "J^(m) is used for m in {1, 3}",
        });
    }
    check_gamma(gamma)?;
    check_k("k", k)?;
    check_k("k1", k1)?;
    let (s, s1) = (k * k, k1 * k1);
    let breaks = velocity_breaks(spec.t_max, k.max(k1));
    integrate_breaks(
        |t| {
            let t2 = t * t;
            TWO_OVER_SQRT_PI * (-t2).exp() * t.powi(m as i32) * (1.0 + gamma * s1 * t2)
                / ((1.0 + s * t2) * (1.0 + s1 * t2))
        },
        &breaks,
        spec.tolerance(),
    )
    .map(|e| e.value)
    .label(|| format!("J^({m})(k={k}, k1={k1})"))
}

/// `L(k) = (1 − γ) k² T₂(k)`.
pub fn dispersion_l(k: f64, gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_gamma(gamma)?;
    Ok((1.0 - gamma) * k * k * t_n(2, k, spec)?)
}

/// `φ₀(k) = (√π/2)T₃(k) − T₄(k)`.
pub fn phi0(k: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_k("k", k)?;
    Ok(Moments::compute(k, spec)?.phi0())
}

/// `T₀(k) … T₅(k)` at one wavenumber, from a single vector quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub k: f64,
    t: [f64; 6],
}

impl Moments {
    pub fn compute(k: f64, spec: &QuadratureSpec) -> Result<Self> {
        if k == 0.0 {
            let mut t = [0.0; 6];
            t.copy_from_slice(&MOMENTS_AT_ZERO[..6]);
            return Ok(Self { k, t });
        }
        let s = k * k;
        let breaks = velocity_breaks(spec.t_max, k);
        let est = integrate_vec(
            |t| {
                let w = TWO_OVER_SQRT_PI * (-t * t).exp() / (1.0 + s * t * t);
                let t2 = t * t;
                [w, w * t, w * t2, w * t2 * t, w * t2 * t2, w * t2 * t2 * t]
            },
            &breaks,
            moment_tolerance(spec),
        )
        .label(|| format!("T_0..T_5(k={k})"))?;
        Ok(Self { k, t: est.value })
    }

    /// `T_n(k)` for `n ≤ 5`.
    pub fn t(&self, n: usize) -> f64 {
        self.t[n]
    }

    /// `J^(1)(0, k) = T₁(k) + γk²T₃(k)`.
    pub fn j1_at_origin(&self, gamma: f64) -> f64 {
        self.t[1] + gamma * self.k * self.k * self.t[3]
    }

    /// `φ₀(k)`, switching to `(T₂ − (√π/2)T₁)/k²` for `k > 1` where the
    /// defining difference loses digits.
    pub fn phi0(&self) -> f64 {
        let k = self.k;
        if k <= 1.0 {
            0.5 * SQRT_PI * self.t[3] - self.t[4]
        } else {
            (self.t[2] - 0.5 * SQRT_PI * self.t[1]) / (k * k)
        }
    }
}

fn moment_tolerance(spec: &QuadratureSpec) -> Tolerance {
    Tolerance::new(spec.rel_tol.min(1e-12), 1e-300, spec.max_subdivisions.max(200))
}

/// Relative gap `|k² − k₁²|` below which the partial-fraction forms of `J_n`
/// are replaced by direct quadrature.
const NEAR_DIAGONAL: f64 = 0.05;

/// `J₁`, `J₃`, `J₅` at one `(k, k₁)` pair.
///
/// Away from the diagonal the partial fractions
/// `J_n = (T_{n−2}(k₁) − T_{n−2}(k))/(k² − k₁²)` (and the `sT_n` form for
/// `n = 1`) reduce the pair integral to single-argument moments.
pub fn j_odd_triple(a: &Moments, b: &Moments, spec: &QuadratureSpec) -> Result<[f64; 3]> {
    let (s, s1) = (a.k * a.k, b.k * b.k);
    let d = s - s1;
    if d.abs() < NEAR_DIAGONAL * s.max(s1).max(1.0) {
        let breaks = velocity_breaks(spec.t_max, a.k.max(b.k));
        let est = integrate_vec(
            |t| {
                let t2 = t * t;
                let w = TWO_OVER_SQRT_PI * (-t2).exp() * t / ((1.0 + s * t2) * (1.0 + s1 * t2));
                [w, w * t2, w * t2 * t2]
            },
            &breaks,
            moment_tolerance(spec),
        )
        .label(|| format!("J_1,3,5(k={}, k1={})", a.k, b.k))?;
        return Ok(est.value);
    }
    Ok([
        (s * a.t[1] - s1 * b.t[1]) / d,
        (b.t[1] - a.t[1]) / d,
        (b.t[3] - a.t[3]) / d,
    ])
}

/// Thread-safe memo of [`Moments`] keyed by the exact wavenumber.
#[derive(Debug)]
pub struct MomentCache {
    spec: QuadratureSpec,
    table: Mutex<HashMap<u64, Moments>>,
}

impl MomentCache {
    pub fn new(spec: &QuadratureSpec) -> Self {
        Self {
            spec: *spec,
            table: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn get(&self, k: f64) -> Result<Moments> {
        let key = k.to_bits();
        if let Some(m) = self.table.lock().expect("moment cache poisoned").get(&key) {
            return Ok(*m);
        }
        let m = Moments::compute(k, &self.spec)?;
        self.table.lock().expect("moment cache poisoned").insert(key, m);
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.table.lock().expect("moment cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `1/π`, used by every spectral operator.
pub(crate) const INV_PI: f64 = 1.0 / PI;

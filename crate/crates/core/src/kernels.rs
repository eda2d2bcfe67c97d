//! The iteration kernel
//!
//! ```text
//! S(k, k₁) = J^(3)(k, k₁) − √π T₃(k) J^(1)(0, k₁)
//!          = S₁(k, k₁) + γ k₁² S₂(k, k₁)
//! S₁ = J₃(k, k₁) − √π T₃(k) T₁(k₁),   S₂ = J₅(k, k₁) − √π T₃(k) T₃(k₁)
//! ```
//!
//! and the operator `φ ↦ (1/π) ∫₀^∞ S(k, k₁) φ(k₁)/T₂(k₁) dk₁` that advances
//! the Neumann iteration by one order.

use std::cell::RefCell;

use crate::error::{Error, Labelled, Result};
use crate::quadrature::{integrate_spectral_breaks, Estimate, QuadratureSpec};
use crate::special::{check_gamma, j_m, j_n, j_odd_triple, t_n, MomentCache, Moments, INV_PI, SQRT_PI};
use crate::spectral::{SpectralFunction, SpectralGrid};

/// Decay exponent of `φ_n(k)` (up to logarithms).
pub const PHI_TAIL: u32 = 4;
/// Decay exponent of the `k₁`-integrand of the kernel operator.
const INTEGRAND_TAIL: u32 = 4;

/// `S(k, k₁)` through the split `S₁ + γk₁²S₂`, each piece by direct quadrature.
pub fn s_kernel(k: f64, k1: f64, gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_gamma(gamma)?;
    let t3k = t_n(3, k, spec)?;
    let s1 = j_n(3, k, k1, spec)? - SQRT_PI * t3k * t_n(1, k1, spec)?;
    if gamma == 0.0 {
        return Ok(s1);
    }
    let s2 = j_n(5, k, k1, spec)? - SQRT_PI * t3k * t_n(3, k1, spec)?;
    Ok(s1 + gamma * k1 * k1 * s2)
}

/// `S(k, k₁)` through `J^(3)(k, k₁) − √π T₃(k) J^(1)(0, k₁)`, by direct quadrature.
pub fn s_kernel_jm(k: f64, k1: f64, gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(j_m(3, k, k1, gamma, spec)? - SQRT_PI * t_n(3, k, spec)? * j_m(1, 0.0, k1, gamma, spec)?)
}

/// The kernel operator at fixed `γ`, with its grid and a memo of the
/// velocity moments at every wavenumber it has touched.
#[derive(Debug)]
pub struct KernelOperator {
    gamma: f64,
    grid: SpectralGrid,
    cache: MomentCache,
}

impl KernelOperator {
    pub fn new(gamma: f64, spec: &QuadratureSpec) -> Result<Self> {
        Self::with_grid(gamma, spec, SpectralGrid::standard(spec.k_max)?)
    }

    pub fn with_grid(gamma: f64, spec: &QuadratureSpec, grid: SpectralGrid) -> Result<Self> {
        check_gamma(gamma)?;
        spec.validate()?;
        Ok(Self {
            gamma,
            grid,
            cache: MomentCache::new(spec),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn spec(&self) -> &QuadratureSpec {
        self.cache.spec()
    }

    pub fn moments(&self, k: f64) -> Result<Moments> {
        self.cache.get(k.abs())
    }

    /// `S(k, k₁)` from cached moments.
    pub fn kernel(&self, k: f64, k1: f64) -> Result<f64> {
        let a = self.moments(k)?;
        let b = self.moments(k1)?;
        self.kernel_from(&a, &b)
    }

    fn kernel_from(&self, a: &Moments, b: &Moments) -> Result<f64> {
        let [j1, j3, j5] = j_odd_triple(a, b, self.spec())?;
        let (s, s1) = (a.k * a.k, b.k * b.k);
        let g = self.gamma;
        let j1_origin = b.j1_at_origin(g);
        if s <= 1.0 {
            Ok(j3 + g * s1 * j5 - SQRT_PI * a.t(3) * j1_origin)
        } else {
            // same quantity after J_{n+2}(k,k₁) = (T_n(k₁) − J_n(k,k₁))/k²,
            // free of the O(1/k²) cancellation between the two terms
            Ok((SQRT_PI * a.t(1) * j1_origin - (j1 + g * s1 * j3)) / s)
        }
    }

    /// `J^(1)(k, k₁) = J₁ + γk₁²J₃` from cached moments.
    pub fn j1(&self, k: f64, k1: f64) -> Result<f64> {
        let a = self.moments(k)?;
        let b = self.moments(k1)?;
        let [j1, j3, _] = j_odd_triple(&a, &b, self.spec())?;
        Ok(j1 + self.gamma * b.k * b.k * j3)
    }

    /// `∫₀^∞ f(k₁) dk₁` for an integrand built from cached moments, split at
    /// the nodes of `on` (and at `extra`), with the algebraic tail beyond.
    /// The absolute error floor is `abs_scale · abs_tol`.
    pub(crate) fn integrate_k1<F>(
        &self,
        on: &SpectralFunction,
        extra: Option<f64>,
        abs_scale: f64,
        tail_exponent: u32,
        label: impl Fn() -> String,
        f: F,
    ) -> Result<Estimate>
    where
        F: Fn(&Moments) -> Result<f64>,
    {
        let mut breaks = on.nodes().to_vec();
        if let Some(k) = extra.filter(|&k| k > 0.0 && k < on.k_max()) {
            let i = breaks.partition_point(|&b| b < k);
            if breaks[i] != k {
                breaks.insert(i, k);
            }
        }
        let spec = QuadratureSpec {
            abs_tol: self.spec().abs_tol * abs_scale,
            ..*self.spec()
        };
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let est = integrate_spectral_breaks(
            |k1| {
                if failure.borrow().is_some() {
                    return 0.0;
                }
                match self.moments(k1).and_then(|m| f(&m)) {
                    Ok(v) => v,
                    Err(e) => {
                        *failure.borrow_mut() = Some(e);
                        0.0
                    }
                }
            },
            &breaks,
            &spec,
            tail_exponent,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        est.label(label)
    }

    /// `(1/π) ∫₀^∞ S(k, k₁) φ(k₁)/T₂(k₁) dk₁` at one wavenumber.
    pub fn apply_at(&self, phi: &SpectralFunction, k: f64) -> Result<f64> {
        let a = self.moments(k)?;
        // φ_n decays like k⁻⁴: keep the error floor proportional to that
        let floor = (1.0 + k * k).powi(-(PHI_TAIL as i32) / 2);
        let est = self.integrate_k1(
            phi,
            Some(k),
            floor,
            INTEGRAND_TAIL,
            || format!("{} node k={k}", phi.label()),
            |b| Ok(self.kernel_from(&a, b)? * phi.eval(b.k) / b.t(2)),
        )?;
        Ok(INV_PI * est.value)
    }

    /// The kernel operator applied to `φ`, sampled on this operator's grid.
    pub fn apply(&self, phi: &SpectralFunction, label: impl Into<String>) -> Result<SpectralFunction> {
        let label = label.into();
        let values = self
            .grid
            .nodes()
            .iter()
            .map(|&k| {
                self.apply_at(phi, k).map_err(|e| match e {
                    Error::Integral { source, .. } => Error::Integral {
                        label: format!("{label} grid node k={k}"),
                        source,
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SpectralFunction::new(self.grid.nodes().to_vec(), values, PHI_TAIL, label)
    }
}

/// One step of the Neumann iteration on the standard grid.
pub fn apply_kernel(phi: &SpectralFunction, gamma: f64, spec: &QuadratureSpec) -> Result<SpectralFunction> {
    let op = KernelOperator::new(gamma, spec)?;
    op.apply(phi, format!("K[{}]", phi.label()))
}

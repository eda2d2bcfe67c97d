//! Brute-force reference values by direct nested quadrature.
//!
//! Nothing here touches the spectral grid, interpolation or moment cache of
//! the series path: velocity integrals use a fixed composite Gauss–Legendre
//! rule, and wavenumber integrals run adaptively over
//! `s ∈ [0, 1)` after the map `k = s/(1 − s)²`.
//!
//! ```text
//! U₁ = −(1 − γ)⁻¹ π^(−1/2) ∫ [T₁(k₁) + γk₁²T₃(k₁)] φ₀(k₁)/T₂(k₁) dk₁
//! J₀ = π^(−3/2) ∫∫ T₁(k₁) S₁(k₁,k₂) g(k₂)/T₂(k₁)
//! J₁ = π^(−3/2) ∫∫ [k₁²T₃(k₁) S₁(k₁,k₂) + k₂²T₁(k₁) S₂(k₁,k₂)] g(k₂)/T₂(k₁)
//! J₂ = π^(−3/2) ∫∫ k₁²k₂² T₃(k₁) S₂(k₁,k₂) g(k₂)/T₂(k₁)
//! U₂ = −(J₀ + γJ₁ + γ²J₂)/(1 − γ)²,     g = φ₀/T₂
//! ```

use std::f64::consts::PI;

use crate::error::{Labelled, Result};
use crate::quadrature::{gauss_legendre, integrate_vec, QuadratureSpec, Tolerance};
use crate::special::check_gamma;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const GL_POINTS: usize = 16;

/// Composite rule for `(2/√π) ∫₀^t_max e^(−t²) (…) dt`: geometric panels
/// `[2^(−j−1), 2^(−j)]` down to `2^(−48)` resolve the scale `t ≈ 1/k` of
/// every rational factor, then uniform panels on `[1, t_max]`.
struct VelocityRule {
    t: Vec<f64>,
    w: Vec<f64>,
}

impl VelocityRule {
    fn new(t_max: f64) -> Self {
        let (gx, gw) = gauss_legendre(GL_POINTS);
        let mut edges = vec![0.0];
        edges.extend((0..=48).rev().map(|j| 0.5f64.powi(j)));
        let tail_panels = (2.0 * (t_max - 1.0)).ceil().max(1.0) as usize;
        edges.extend((1..=tail_panels).map(|i| 1.0 + (t_max - 1.0) * i as f64 / tail_panels as f64));
        let (mut t, mut w) = (Vec::new(), Vec::new());
        for e in edges.windows(2) {
            let (c, h) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
            for (x, wx) in gx.iter().zip(&gw) {
                let ti = c + h * x;
                t.push(ti);
                w.push(h * wx * 2.0 / SQRT_PI * (-ti * ti).exp());
            }
        }
        Self { t, w }
    }

    /// `T₀(k) … T₅(k)`.
    fn t(&self, k: f64) -> [f64; 6] {
        let s = k * k;
        let mut out = [0.0; 6];
        for (&t, &w) in self.t.iter().zip(&self.w) {
            let mut v = w / (1.0 + s * t * t);
            for o in out.iter_mut() {
                *o += v;
                v *= t;
            }
        }
        out
    }

    /// `J₁, J₃, J₅` at `(k, k₁)`.
    fn j(&self, k: f64, k1: f64) -> [f64; 3] {
        let (s, s1) = (k * k, k1 * k1);
        let mut out = [0.0; 3];
        for (&t, &w) in self.t.iter().zip(&self.w) {
            let t2 = t * t;
            let v = w * t / ((1.0 + s * t2) * (1.0 + s1 * t2));
            out[0] += v;
            out[1] += v * t2;
            out[2] += v * t2 * t2;
        }
        out
    }
}

fn phi0(k: f64, t: &[f64; 6]) -> f64 {
    if k <= 1.0 {
        0.5 * SQRT_PI * t[3] - t[4]
    } else {
        (t[2] - 0.5 * SQRT_PI * t[1]) / (k * k)
    }
}

/// `S₁(k, k₁)` and `S₂(k, k₁)`; for `k > 1` in the form obtained by
/// eliminating `J_{n+2}` and `T₃(k)` with the `k²` recurrences.
fn s_pair(rule: &VelocityRule, k: f64, tk: &[f64; 6], tk1: &[f64; 6], k1: f64) -> [f64; 2] {
    let [j1, j3, j5] = rule.j(k, k1);
    if k <= 1.0 {
        [j3 - SQRT_PI * tk[3] * tk1[1], j5 - SQRT_PI * tk[3] * tk1[3]]
    } else {
        let s = k * k;
        [(SQRT_PI * tk[1] * tk1[1] - j1) / s, (SQRT_PI * tk[1] * tk1[3] - j3) / s]
    }
}

/// `∫₀^∞ f(k) dk` through `k = s/(1 − s)²`.
fn integrate_k<const N: usize, F>(f: F, tol: Tolerance) -> std::result::Result<[f64; N], crate::QuadratureError>
where
    F: Fn(f64) -> [f64; N],
{
    let breaks = [0.0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.8, 0.9, 0.95, 0.98, 1.0];
    integrate_vec(
        |s| {
            if s >= 1.0 {
                return [0.0; N];
            }
            let r = 1.0 - s;
            let k = s / (r * r);
            let jac = (1.0 + s) / (r * r * r);
            let mut v = f(k);
            for c in v.iter_mut() {
                *c *= jac;
            }
            v
        },
        &breaks,
        tol,
    )
    .map(|e| e.value)
}

fn outer_tolerance(spec: &QuadratureSpec) -> Tolerance {
    Tolerance::new(spec.rel_tol, spec.abs_tol, spec.max_subdivisions.max(400))
}

/// `U₁(γ)` by a single direct integral.
pub fn u1_direct(gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_gamma(gamma)?;
    spec.validate()?;
    let rule = &VelocityRule::new(spec.t_max);
    let [v] = integrate_k(
        |k| {
            let t = rule.t(k);
            [(t[1] + gamma * k * k * t[3]) * phi0(k, &t) / t[2]]
        },
        outer_tolerance(spec),
    )
    .label(|| format!("oracle U_1(gamma={gamma})"))?;
    Ok(-v / ((1.0 - gamma) * SQRT_PI))
}

/// `(J₀, J₁, J₂)` by direct double integrals.
pub fn j_constants(spec: &QuadratureSpec) -> Result<(f64, f64, f64)> {
    spec.validate()?;
    let rule = &VelocityRule::new(spec.t_max);
    let outer = outer_tolerance(spec);
    let inner = Tolerance::new(0.1 * spec.rel_tol, 0.1 * spec.abs_tol, outer.max_subdivisions);
    let failure = std::cell::RefCell::new(None);
    let result = integrate_k(
        |k1| {
            let t1 = rule.t(k1);
            let inner_pair = integrate_k(
                |k2| {
                    let t2 = rule.t(k2);
                    let g = phi0(k2, &t2) / t2[2];
                    let [s1, s2] = s_pair(rule, k1, &t1, &t2, k2);
                    [s1 * g, k2 * k2 * s2 * g]
                },
                inner,
            );
            let [i1, i2] = match inner_pair {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert((k1, e));
                    return [0.0; 3];
                }
            };
            let a = t1[1] / t1[2];
            let b = k1 * k1 * t1[3] / t1[2];
            [a * i1, a * i2 + b * i1, b * i2]
        },
        outer,
    );
    if let Some((k1, e)) = failure.into_inner() {
        return Err(e).label(|| format!("oracle inner J integral at k1={k1}"));
    }
    let [j0, j1, j2] = result.label(|| "oracle outer J integral".to_string())?;
    let c = PI.powf(-1.5);
    Ok((c * j0, c * j1, c * j2))
}

/// `U₂(γ) = −(J₀ + γJ₁ + γ²J₂)/(1 − γ)²`.
pub fn u2_direct(gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_gamma(gamma)?;
    let (j0, j1, j2) = j_constants(spec)?;
    Ok(u2_from(gamma, (j0, j1, j2)))
}

/// `U₂` from given `J` constants.
pub fn u2_from(gamma: f64, (j0, j1, j2): (f64, f64, f64)) -> f64 {
    -(j0 + gamma * j1 + gamma * gamma * j2) / ((1.0 - gamma) * (1.0 - gamma))
}

/// `(1/π) ∫ φ₀(k)/T₂(k) dk`: the zero-order continuum velocity at the wall
/// for `q = 1`, per unit `G_v`, independent of `γ`.
pub fn wall_continuum_order0(spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let rule = &VelocityRule::new(spec.t_max);
    let [v] = integrate_k(
        |k| {
            let t = rule.t(k);
            [phi0(k, &t) / t[2]]
        },
        outer_tolerance(spec),
    )
    .label(|| "oracle wall continuum velocity".to_string())?;
    Ok(v / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn velocity_rule_moments() {
        let rule = VelocityRule::new(8.0);
        let t = rule.t(0.0);
        let exact = [1.0, 1.0 / SQRT_PI, 0.5, 1.0 / SQRT_PI, 0.75, 2.0 / SQRT_PI];
        for n in 0..6 {
            assert_abs_diff_eq!(t[n], exact[n], epsilon = 1e-14);
        }
        // recurrence at a large wavenumber
        let k = 300.0;
        let t = rule.t(k);
        assert_abs_diff_eq!(t[1] + k * k * t[3], 1.0 / SQRT_PI, epsilon = 1e-13);
    }

    #[test]
    fn u1_values() {
        let s = spec();
        let u = u1_direct(0.0, &s).unwrap();
        assert_abs_diff_eq!(u, 0.1405, epsilon = 5e-4);
        assert_abs_diff_eq!(
            u1_direct(0.5, &s).unwrap(),
            (0.1405 + 0.2009 * 0.5) / 0.5,
            epsilon = 2e-3
        );
        for i in 0..=9 {
            assert!(u1_direct(0.1 * i as f64, &s).unwrap() > 0.0);
        }
    }

    #[test]
    fn j_constants_frozen() {
        let (j0, j1, j2) = j_constants(&spec()).unwrap();
        assert_abs_diff_eq!(j0, 0.011_555_40, epsilon = 1e-7);
        assert_abs_diff_eq!(j1, 0.012_474_34, epsilon = 2e-7);
        assert_abs_diff_eq!(j2, -0.024_029_74, epsilon = 2e-7);
        // the kernel identity S₁ + k₂²S₂ = 0 forces J₂ = −(J₀ + J₁)
        assert_abs_diff_eq!(j2, -(j0 + j1), epsilon = 1e-9);
        // the two leading constants as tabulated to four digits
        assert_abs_diff_eq!(j0, 0.0116, epsilon = 5e-5);
        assert_abs_diff_eq!(j1, 0.0125, epsilon = 5e-5);
    }

    #[test]
    fn wall_value_is_negative_and_finite() {
        let v = wall_continuum_order0(&spec()).unwrap();
        assert!(v < 0.0 && v > -1.0, "{v}");
    }
}

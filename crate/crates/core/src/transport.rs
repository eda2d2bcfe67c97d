//! Physical outputs assembled from a [`SeriesExpansion`]: slip velocity,
//! slip coefficient, the Knudsen-layer velocity profile and the
//! distribution function, plus the one conversion to dimensional units.
//!
//! Fourier inversions run over `[0, k_max]` split at the grid nodes and the
//! zeros of the oscillating factor; the remainder beyond `k_max` (where the
//! spectral functions follow their tail model) is summed zero-to-zero and
//! accelerated with Wynn's ε-algorithm.

use std::f64::consts::PI;

use crate::error::{Error, Labelled, Result};
use crate::neumann::{SeriesExpansion, E_TAIL};
use crate::quadrature::{
    gauss_legendre, integrate, integrate_breaks, integrate_spectral_breaks, QuadratureSpec, Tolerance,
};
use crate::special::{GasParameters, SQRT_PI};

/// Number of direction cosines in the standard `μ` grid.
pub const MU_NODES: usize = 33;
/// Half-width of the standard `μ` grid.
pub const MU_RANGE: f64 = 4.0;
/// Cap on the number of zero-to-zero panels summed beyond `k_max`.
const MAX_TAIL_PANELS: usize = 120;

/// `U(x₁)` sampled on a set of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityProfile {
    pub x_nodes: Vec<f64>,
    pub u_total: Vec<f64>,
    pub u_continuum: Vec<f64>,
    pub u_sl: f64,
    pub g_v: f64,
}

/// Gauss–Legendre nodes on `[−4, 4]` used for tabulating `h(x₁, μ)`.
pub fn mu_grid() -> Vec<f64> {
    gauss_legendre(MU_NODES).0.into_iter().map(|x| MU_RANGE * x).collect()
}

fn check_inputs(params: &GasParameters, series: &SeriesExpansion) -> Result<GasParameters> {
    let p = GasParameters::new(params.gamma, params.q, params.g_v)?;
    if p.gamma != series.gamma() {
        return Err(Error::Mismatch(format!(
            "series was built for gamma = {} but the gas has gamma = {}",
            series.gamma(),
            p.gamma
        )));
    }
    Ok(p)
}

fn check_x(x1: f64) -> Result<()> {
    if !(x1.is_finite() && x1 >= 0.0) {
        return Err(Error::Domain {
            name: "x1",
            value: x1,
            reason: "the gas occupies the half-space x1 >= 0",
        });
    }
    Ok(())
}

/// `G_v(1 − γ)(2 − q)`: the common factor of `U_c` and `h_c`.
fn continuum_prefactor(p: &GasParameters) -> f64 {
    p.g_v * (1.0 - p.gamma) * (2.0 - p.q)
}

/// `U_sl = G_v(1 − γ)((2 − q)/q) Σ U_n qⁿ`.
pub fn slip_velocity(params: &GasParameters, series: &SeriesExpansion) -> Result<f64> {
    let p = check_inputs(params, series)?;
    Ok(continuum_prefactor(&p) / p.q * series.u_sum(p.q))
}

/// `K_v = (2/√π) U_sl/G_v`, the coefficient of `l·du/dx` in the dimensional
/// slip law. Carries the factor `1 − γ` of `U_sl`, which vanishes from the
/// familiar rarefied-gas form only because `γ = 0` there.
pub fn slip_coefficient_kv(params: &GasParameters, series: &SeriesExpansion) -> Result<f64> {
    let p = check_inputs(params, series)?;
    Ok(2.0 / SQRT_PI * (1.0 - p.gamma) * (2.0 - p.q) / p.q * series.u_sum(p.q))
}

/// `h_as = U_sl + G_v[x₁ − (1 − γ)μ]`, the Chapman–Enskog part for `x₁ ≥ 0`.
pub fn chapman_enskog(params: &GasParameters, u_sl: f64, x1: f64, mu: f64) -> f64 {
    u_sl + params.g_v * (x1 - (1.0 - params.gamma) * mu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Wave {
    Cos,
    Sin,
}

impl Wave {
    fn eval(self, z: f64) -> f64 {
        match self {
            Wave::Cos => z.cos(),
            Wave::Sin => z.sin(),
        }
    }

    /// First zero of the wave in units of the half period.
    fn phase(self) -> f64 {
        match self {
            Wave::Cos => 0.5,
            Wave::Sin => 0.0,
        }
    }
}

/// `∫₀^∞ f(k) wave(k x) dk` for `f` known on `nodes` and extrapolated
/// beyond them.
fn fourier<F>(
    f: F,
    x: f64,
    wave: Wave,
    nodes: &[f64],
    spec: &QuadratureSpec,
    tail_exponent: u32,
    label: &dyn Fn() -> String,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if x == 0.0 {
        return match wave {
            Wave::Cos => integrate_spectral_breaks(&f, nodes, spec, tail_exponent)
                .map(|e| e.value)
                .label(label),
            Wave::Sin => Ok(0.0),
        };
    }
    let k_end = *nodes.last().expect("spectral grids are non-empty");
    let half = PI / x;
    let zero = |j: usize| (j as f64 + wave.phase()) * half;

    let mut breaks: Vec<f64> = nodes.to_vec();
    let mut j = 0;
    while zero(j) < k_end {
        if zero(j) > 0.0 {
            breaks.push(zero(j));
        }
        j += 1;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * k_end);

    let g = |k: f64| f(k) * wave.eval(k * x);
    let tol = spec.tolerance();
    let body = integrate_breaks(g, &breaks, tol).label(label)?;

    // Zero-to-zero panels beyond k_end alternate in sign with slowly varying
    // magnitude; accelerate their partial sums.
    let target = |v: f64| {
        spec.abs_tol
            .max(spec.rel_tol * v.abs())
            .max(1e-3 * spec.rel_tol * body.l1)
    };
    let panel_tol = Tolerance::new(spec.rel_tol, 1e-2 * target(body.value), spec.max_subdivisions);
    let mut sums = vec![body.value];
    let mut estimates: Vec<f64> = Vec::new();
    let mut a = k_end;
    for _ in 0..MAX_TAIL_PANELS {
        let b = zero(j);
        j += 1;
        let p = integrate(g, a, b, panel_tol).label(label)?;
        sums.push(sums.last().copied().unwrap_or(0.0) + p.value);
        a = b;
        let est = wynn(&sums);
        estimates.push(est);
        if let [.., e2, e1, e0] = estimates[..] {
            let t = target(e0);
            if (e0 - e1).abs() <= t && (e1 - e2).abs() <= t {
                return Ok(e0);
            }
        }
    }
    let delta = match estimates[..] {
        [.., e1, e0] => (e0 - e1).abs(),
        _ => f64::INFINITY,
    };
    Err(Error::OscillatoryConvergence { x1: x, delta })
}

/// Wynn's ε-algorithm: the deepest even-column entry built from `s`.
fn wynn(s: &[f64]) -> f64 {
    let mut prev = vec![0.0; s.len() + 1];
    let mut cur = s.to_vec();
    let mut best = *s.last().expect("non-empty sequence");
    for col in 1..s.len() {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 || !d.is_finite() {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        if col % 2 == 0 {
            match next.last() {
                Some(v) if v.is_finite() => best = *v,
                _ => return best,
            }
        }
        prev = cur;
        cur = next;
    }
    best
}

fn e_sum_upto(series: &SeriesExpansion, q: f64, count: usize, k: f64) -> f64 {
    series.e_funcs()[..count]
        .iter()
        .rev()
        .fold(0.0, |acc, e| acc * q + e.eval(k))
}

fn nodes(series: &SeriesExpansion) -> &[f64] {
    series.e_funcs()[0].nodes()
}

/// `U_c(x₁) = G_v(1 − γ)(2 − q)(1/π) ∫₀^∞ cos(k x₁) Σ E_n(k) qⁿ dk`.
pub fn continuum_velocity(
    params: &GasParameters,
    series: &SeriesExpansion,
    x1: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let p = check_inputs(params, series)?;
    check_x(x1)?;
    let label = || format!("U_c(x1={x1})");
    let i = fourier(
        |k| series.e_sum(p.q, k),
        x1,
        Wave::Cos,
        nodes(series),
        spec,
        E_TAIL,
        &label,
    )?;
    Ok(continuum_prefactor(&p) * i / PI)
}

/// `U(x₁) = U_sl + G_v x₁ + U_c(x₁)` on the given nodes.
pub fn velocity_profile(
    params: &GasParameters,
    series: &SeriesExpansion,
    x_nodes: &[f64],
    spec: &QuadratureSpec,
) -> Result<VelocityProfile> {
    let u_sl = slip_velocity(params, series)?;
    let u_continuum = x_nodes
        .iter()
        .map(|&x| continuum_velocity(params, series, x, spec))
        .collect::<Result<Vec<_>>>()?;
    let u_total = x_nodes
        .iter()
        .zip(&u_continuum)
        .map(|(&x, uc)| u_sl + params.g_v * x + uc)
        .collect();
    Ok(VelocityProfile {
        x_nodes: x_nodes.to_vec(),
        u_total,
        u_continuum,
        u_sl,
        g_v: params.g_v,
    })
}

/// The continuum part `h_c(x₁, μ)` for `x₁ ≥ 0`.
///
/// ```text
/// h_c/[G_v(1−γ)(2−q)] = (1/π)∫ [cos(kx₁)(1 + γk²μ²) + sin(kx₁)(1−γ)kμ]/(1 + k²μ²) ΣE_n qⁿ dk
///                     + θ(μ) e^(−x₁/μ) Σ c_n(μ) qⁿ
/// c₀ = μ − U₀,   c_n = −U_n − (1/π)∫ (1 + γk²μ²)/(1 + k²μ²) E_{n−1} dk
/// ```
///
/// The exponential term carries the particles leaving the wall; at `x₁ = 0`
/// it is taken as the limit from the gas side.
pub fn distribution_continuum(
    params: &GasParameters,
    series: &SeriesExpansion,
    x1: f64,
    mu: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let p = check_inputs(params, series)?;
    check_x(x1)?;
    if !mu.is_finite() {
        return Err(Error::Domain {
            name: "mu",
            value: mu,
            reason: "the direction cosine must be finite",
        });
    }
    let (g, q, m2) = (p.gamma, p.q, mu * mu);
    let ratio = |k: f64| (1.0 + g * k * k * m2) / (1.0 + k * k * m2);
    let grid = nodes(series);
    let label = || format!("h_c(x1={x1}, mu={mu})");

    let mut total = fourier(
        |k| ratio(k) * series.e_sum(q, k),
        x1,
        Wave::Cos,
        grid,
        spec,
        E_TAIL,
        &label,
    )?;
    if mu != 0.0 {
        total += fourier(
            |k| (1.0 - g) * k * mu / (1.0 + k * k * m2) * series.e_sum(q, k),
            x1,
            Wave::Sin,
            grid,
            spec,
            E_TAIL + 1,
            &label,
        )?;
    }
    total /= PI;

    if mu > 0.0 {
        let u = series.u_coeffs();
        let mut c = mu - series.u_sum(q);
        let order = series.order();
        if order > 0 {
            let i = integrate_spectral_breaks(|k| ratio(k) * e_sum_upto(series, q, order, k), grid, spec, E_TAIL)
                .label(|| format!("h_c source amplitude (mu={mu})"))?;
            c -= q * i.value / PI;
        }
        debug_assert!(u.len() == order + 1);
        total += c * (-x1 / mu).exp();
    }
    Ok(continuum_prefactor(&p) * total)
}

/// `h(x₁, μ) = h_as + h_c`.
pub fn distribution_function(
    params: &GasParameters,
    series: &SeriesExpansion,
    x1: f64,
    mu: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let u_sl = slip_velocity(params, series)?;
    Ok(chapman_enskog(params, u_sl, x1, mu) + distribution_continuum(params, series, x1, mu, spec)?)
}

/// `γ = (4/15)π n σ³`.
pub fn gamma_from_physical(number_density: f64, diameter: f64) -> Result<f64> {
    if !(number_density.is_finite() && number_density >= 0.0) {
        return Err(Error::Domain {
            name: "number_density",
            value: number_density,
            reason: "must be a finite non-negative density",
        });
    }
    if !(diameter.is_finite() && diameter > 0.0) {
        return Err(Error::Domain {
            name: "diameter",
            value: diameter,
            reason: "must be a finite positive length",
        });
    }
    let gamma = 4.0 / 15.0 * PI * number_density * diameter.powi(3);
    if gamma >= 1.0 {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            reason: "the density parameter must stay below 1",
        });
    }
    Ok(gamma)
}

/// Scales linking the dimensionless problem to SI units: lengths in units
/// of `1/(ν√β)`, velocities in units of `1/√β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalContext {
    /// Collision frequency, 1/s.
    pub nu: f64,
    /// `m/(2kT)`, s²/m².
    pub beta: f64,
    /// Mean free path `l = η√(πβ)/ρ` with `η = ρ/(2νβ)`, m.
    pub mean_free_path: f64,
}

impl DimensionalContext {
    pub fn new(nu: f64, beta: f64) -> Result<Self> {
        let ctx = Self {
            nu,
            beta,
            mean_free_path: SQRT_PI / (2.0 * nu * beta.sqrt()),
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Positivity and `l√β ν = √π/2`.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("nu", self.nu),
            ("beta", self.beta),
            ("mean_free_path", self.mean_free_path),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Domain {
                    name,
                    value,
                    reason: "must be finite and positive",
                });
            }
        }
        let c = self.mean_free_path * self.beta.sqrt() * self.nu / (0.5 * SQRT_PI);
        if (c - 1.0).abs() > 1e-9 {
            return Err(Error::Domain {
                name: "mean_free_path",
                value: self.mean_free_path,
                reason: "inconsistent with nu and beta (expected sqrt(pi)/(2 nu sqrt(beta)))",
            });
        }
        Ok(())
    }

    /// Far-field velocity gradient in 1/s for a dimensionless `G_v`.
    pub fn gradient(&self, g_v: f64) -> f64 {
        g_v * self.nu
    }
}

/// Slip velocity in m/s: `u_sl = U_sl/√β`.
pub fn dimensional_slip(u_sl_dimensionless: f64, ctx: &DimensionalContext) -> Result<f64> {
    ctx.validate()?;
    Ok(u_sl_dimensionless / ctx.beta.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neumann::build_series;
    use crate::oracle;
    use approx::assert_abs_diff_eq;
    use std::sync::OnceLock;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn series(gamma: f64) -> &'static SeriesExpansion {
        static S0: OnceLock<SeriesExpansion> = OnceLock::new();
        static S25: OnceLock<SeriesExpansion> = OnceLock::new();
        let cell = if gamma == 0.0 { &S0 } else { &S25 };
        cell.get_or_init(|| build_series(gamma, 2, &spec()).unwrap())
    }

    fn gas(gamma: f64, q: f64, g_v: f64) -> GasParameters {
        GasParameters::new(gamma, q, g_v).unwrap()
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 − 1/2 + 1/3 − …
        let mut s = Vec::new();
        let mut acc = 0.0;
        for n in 1..=16 {
            acc += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
            s.push(acc);
        }
        assert_abs_diff_eq!(wynn(&s), 2f64.ln(), epsilon = 1e-9);
    }

    #[test]
    fn fourier_matches_closed_form() {
        // ∫ cos(kx)/(1+k²) dk = (π/2)e^(−x), ∫ k sin(kx)/(1+k²)² dk = (π/4) x e^(−x)
        let nodes: Vec<f64> = (0..=100).map(|i| 2.0 * i as f64).collect();
        let label = || "test".to_string();
        for x in [0.0, 0.3, 1.0, 4.0] {
            let c = fourier(|k| 1.0 / (1.0 + k * k), x, Wave::Cos, &nodes, &spec(), 2, &label).unwrap();
            assert_abs_diff_eq!(c, 0.5 * PI * (-x).exp(), epsilon = 1e-8);
            let s = fourier(|k| k / (1.0 + k * k).powi(2), x, Wave::Sin, &nodes, &spec(), 3, &label).unwrap();
            assert_abs_diff_eq!(s, 0.25 * PI * x * (-x).exp(), epsilon = 1e-8);
        }
    }

    #[test]
    fn slip_values() {
        let s = series(0.0);
        let u = slip_velocity(&gas(0.0, 1.0, 1.0), s).unwrap();
        assert_abs_diff_eq!(u, 1.0151, epsilon = 5e-4);
        let kv = slip_coefficient_kv(&gas(0.0, 1.0, 1.0), s).unwrap();
        assert_abs_diff_eq!(kv, 1.1454, epsilon = 5e-4);
        let s0 = s.truncated(0).unwrap();
        assert_abs_diff_eq!(
            slip_coefficient_kv(&gas(0.0, 1.0, 1.0), &s0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        // within 0.15% of the exact-solution coefficient
        let exact = 1.0162 * 2.0 / SQRT_PI;
        assert!((kv - exact).abs() / exact < 1.5e-3);
    }

    #[test]
    fn accommodation_limit_at_order_zero() {
        let s = series(0.25).truncated(0).unwrap();
        for q in [0.1, 0.5, 0.9, 1.0] {
            let u = slip_velocity(&gas(0.25, q, 2.0), &s).unwrap();
            let expected = 2.0 * 0.75 * (2.0 - q) / q * 0.5 * SQRT_PI;
            assert_abs_diff_eq!(u, expected, epsilon = 1e-14 * expected);
        }
    }

    #[test]
    fn input_checks() {
        let s = series(0.0);
        let bad_q = GasParameters {
            gamma: 0.0,
            q: 0.0,
            g_v: 1.0,
        };
        assert!(matches!(slip_velocity(&bad_q, s), Err(Error::Domain { name: "q", .. })));
        assert!(matches!(
            slip_velocity(&gas(0.25, 1.0, 1.0), s),
            Err(Error::Mismatch(_))
        ));
        assert!(matches!(
            continuum_velocity(&gas(0.0, 1.0, 1.0), s, -1.0, &spec()),
            Err(Error::Domain { name: "x1", .. })
        ));
    }

    #[test]
    fn profile_decays_to_asymptote() {
        let s = series(0.0);
        let p = gas(0.0, 1.0, 1.0);
        let prof = velocity_profile(&p, s, &[0.0, 20.0], &spec()).unwrap();
        let (u0, u20) = (prof.u_continuum[0], prof.u_continuum[1]);
        assert!(u20.abs() < 1e-3 * u0.abs(), "{u0} {u20}");
        assert_abs_diff_eq!(prof.u_total[1] - 20.0, prof.u_sl, epsilon = 1e-3);
        for i in 0..2 {
            let x = prof.x_nodes[i];
            assert_abs_diff_eq!(prof.u_total[i] - (prof.u_sl + x), prof.u_continuum[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn wall_velocity_matches_oracle() {
        let s = series(0.0).truncated(0).unwrap();
        let uc = continuum_velocity(&gas(0.0, 1.0, 1.0), &s, 0.0, &spec()).unwrap();
        let reference = oracle::wall_continuum_order0(&spec()).unwrap();
        assert_abs_diff_eq!(uc, reference, epsilon = 1e-7);
    }

    #[test]
    fn gradient_linearity() {
        let s = series(0.25);
        let a = gas(0.25, 0.7, 1.0);
        let b = gas(0.25, 0.7, 2.5);
        let ra = slip_velocity(&b, s).unwrap() / slip_velocity(&a, s).unwrap();
        assert_abs_diff_eq!(ra, 2.5, epsilon = 1e-14);
        let uc = |p| continuum_velocity(p, s, 1.0, &spec()).unwrap();
        assert_abs_diff_eq!(uc(&b) / uc(&a), 2.5, epsilon = 1e-12);
        let hc = |p| distribution_continuum(p, s, 1.0, 0.7, &spec()).unwrap();
        assert_abs_diff_eq!(hc(&b) / hc(&a), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn orders_differ_by_single_term() {
        let s2 = series(0.25);
        let s1 = s2.truncated(1).unwrap();
        let p = gas(0.25, 0.6, 1.0);
        let x = 0.8;
        let d = continuum_velocity(&p, s2, x, &spec()).unwrap() - continuum_velocity(&p, &s1, x, &spec()).unwrap();
        let label = || "E_2 term".to_string();
        let e2 = &s2.e_funcs()[2];
        let term = fourier(|k| e2.eval(k), x, Wave::Cos, e2.nodes(), &spec(), E_TAIL, &label).unwrap();
        let expected = continuum_prefactor(&p) * p.q * p.q * term / PI;
        assert_abs_diff_eq!(
            d,
            expected,
            epsilon = 1e-9 * continuum_velocity(&p, s2, x, &spec()).unwrap().abs()
        );
    }

    #[test]
    fn chapman_enskog_antisymmetry() {
        let p = gas(0.3, 0.8, 1.7);
        for (x, mu) in [(0.0, 0.4), (2.0, 1.3)] {
            let d = chapman_enskog(&p, 0.9, x, mu) - chapman_enskog(&p, 0.9, x, -mu);
            assert_abs_diff_eq!(d, -2.0 * p.g_v * 0.7 * mu, epsilon = 1e-14);
        }
    }

    #[test]
    fn distribution_decays() {
        let s = series(0.0);
        let p = gas(0.0, 1.0, 1.0);
        for mu in [-1.0, 0.5, 2.0] {
            let near = distribution_continuum(&p, s, 0.5, mu, &spec()).unwrap();
            let far = distribution_continuum(&p, s, 30.0, mu, &spec()).unwrap();
            assert!(far.abs() < 1e-2 * near.abs().max(1e-3), "mu={mu}: {near} {far}");
        }
    }

    #[test]
    fn mu_grid_shape() {
        let m = mu_grid();
        assert_eq!(m.len(), MU_NODES);
        assert_abs_diff_eq!(m[16], 0.0, epsilon = 1e-15);
        assert!(m.windows(2).all(|w| w[0] < w[1]) && m[0] > -MU_RANGE && m[32] < MU_RANGE);
    }

    #[test]
    fn physical_gamma() {
        assert_eq!(gamma_from_physical(0.0, 3.7e-10).unwrap(), 0.0);
        assert_abs_diff_eq!(gamma_from_physical(2.5e25, 3.7e-10).unwrap(), 1.06e-3, epsilon = 5e-6);
        assert!(gamma_from_physical(15.0 / (4.0 * PI), 1.0).is_err());
        assert!(gamma_from_physical(1e25, -1.0).is_err());
    }

    #[test]
    fn dimensional_round_trip() {
        let ctx = DimensionalContext::new(1e9, 2e-6).unwrap();
        assert_abs_diff_eq!(ctx.mean_free_path, 6.27e-7, epsilon = 5e-10);
        for (gamma, q, g_v) in [(0.0, 1.0, 1.0), (0.25, 0.6, 2.5)] {
            let p = gas(gamma, q, g_v);
            let s = series(gamma);
            let u = dimensional_slip(slip_velocity(&p, s).unwrap(), &ctx).unwrap();
            let kv = slip_coefficient_kv(&p, s).unwrap();
            let back = u / (ctx.mean_free_path * ctx.gradient(g_v));
            assert!((back - kv).abs() <= 1e-12 * kv, "{back} {kv}");
        }
        let cold = DimensionalContext::new(1e9, 8e-6).unwrap();
        assert_abs_diff_eq!(
            dimensional_slip(1.0, &cold).unwrap(),
            0.5 * dimensional_slip(1.0, &ctx).unwrap(),
            epsilon = 1e-12
        );
        let bad = DimensionalContext {
            mean_free_path: 1.0,
            ..ctx
        };
        assert!(dimensional_slip(1.0, &bad).is_err());
    }
}

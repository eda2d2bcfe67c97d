//! Adaptive Gauss–Kronrod quadrature for the two integral shapes used by the
//! solver: Gaussian-weighted velocity integrals over `t ∈ [0, ∞)` and
//! algebraically decaying spectral integrals over `k ∈ [0, ∞)`.
//!
//! Every routine here is a pure function of its arguments. The adaptive core
//! works on vector-valued integrands so that families of related integrals
//! (for example all `T_n(k)` at one `k`) share function evaluations.

use std::f64::consts::PI;

use crate::error::{Error, QuadratureError};

/// Tolerances, truncation points and node budgets for every integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance of each integral.
    pub rel_tol: f64,
    /// Absolute floor of the error target.
    pub abs_tol: f64,
    /// Truncation point of Gaussian-weighted velocity integrals.
    pub t_max: f64,
    /// End of the sampled wavenumber range; beyond it integrands follow their tail law.
    pub k_max: f64,
    /// Bisections allowed on top of the initial panels of one integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            t_max: 8.0,
            k_max: 200.0,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), Error> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.rel_tol) {
            return Err(Error::InvalidSpec(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !positive(self.abs_tol) {
            return Err(Error::InvalidSpec(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if !positive(self.t_max) {
            return Err(Error::InvalidSpec(format!("t_max must be > 0, got {}", self.t_max)));
        }
        if !positive(self.k_max) {
            return Err(Error::InvalidSpec(format!("k_max must be > 0, got {}", self.k_max)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidSpec("max_subdivisions must be >= 1".into()));
        }
        if (-self.t_max * self.t_max).exp() >= self.abs_tol {
            return Err(Error::InvalidSpec(format!(
                "exp(-t_max^2) = {:.3e} is not below abs_tol = {:.3e}",
                (-self.t_max * self.t_max).exp(),
                self.abs_tol
            )));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_k_max(mut self, k_max: f64) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// Error target and budget of one adaptive run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_subdivisions: usize) -> Self {
        Self {
            rel,
            abs,
            max_subdivisions,
        }
    }
}

/// Result of a vector-valued adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecEstimate<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    /// Integral of `|f|`, used to judge cancellation and tail weight.
    pub l1: [f64; N],
    pub evaluations: usize,
}

/// Result of a scalar adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub l1: f64,
    pub evaluations: usize,
}

impl From<VecEstimate<1>> for Estimate {
    fn from(e: VecEstimate<1>) -> Self {
        Self {
            value: e.value[0],
            error: e.error[0],
            l1: e.l1[0],
            evaluations: e.evaluations,
        }
    }
}

// 21-point Kronrod extension of the 10-point Gauss–Legendre rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_977_211,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    l1: [f64; N],
}

fn eval_checked<const N: usize, F>(f: &F, x: f64) -> Result<[f64; N], QuadratureError>
where
    F: Fn(f64) -> [f64; N],
{
    let v = f(x);
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(QuadratureError::NonFinite { at: x })
    }
}

fn gk21<const N: usize, F>(f: &F, a: f64, b: f64) -> Result<Panel<N>, QuadratureError>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_checked(f, center)?;

    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let mut abs = [0.0; N];
    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];
    for c in 0..N {
        kronrod[c] = WGK[10] * fc[c];
        abs[c] = WGK[10] * fc[c].abs();
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval_checked(f, center - dx)?;
        let f2 = eval_checked(f, center + dx)?;
        for c in 0..N {
            let sum = f1[c] + f2[c];
            kronrod[c] += WGK[j] * sum;
            abs[c] += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * sum;
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut l1 = [0.0; N];
    for c in 0..N {
        let mean = 0.5 * kronrod[c];
        let mut asc = WGK[10] * (fc[c] - mean).abs();
        for j in 0..10 {
            asc += WGK[j] * ((fv1[j][c] - mean).abs() + (fv2[j][c] - mean).abs());
        }
        let resabs = abs[c] * half.abs();
        let resasc = asc * half.abs();
        let mut err = ((kronrod[c] - gauss[c]) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        value[c] = kronrod[c] * half;
        error[c] = err;
        l1[c] = resabs;
    }
    Ok(Panel { a, b, value, error, l1 })
}

/// Adaptive Gauss–Kronrod integration of a vector-valued integrand over the
/// interval spanned by `breaks`, starting from one panel per break interval.
///
/// Each component converges against its own target `max(abs, rel·|I_c|)`.
pub fn integrate_vec<const N: usize, F>(f: F, breaks: &[f64], tol: Tolerance) -> Result<VecEstimate<N>, QuadratureError>
where
    F: Fn(f64) -> [f64; N],
{
    if breaks.len() < 2 {
        return Err(QuadratureError::Invalid("need at least two break points".into()));
    }
    if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(QuadratureError::Invalid(
            "break points must be finite and non-decreasing".into(),
        ));
    }
    let mut panels = Vec::with_capacity(breaks.len() + tol.max_subdivisions);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(gk21(&f, w[0], w[1])?);
        }
    }
    let mut evaluations = 21 * panels.len();
    let mut bisections = 0;

    loop {
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        let mut l1 = [0.0; N];
        for p in &panels {
            for c in 0..N {
                value[c] += p.value[c];
                error[c] += p.error[c];
                l1[c] += p.l1[c];
            }
        }
        let mut target = [0.0; N];
        let mut converged = true;
        for c in 0..N {
            target[c] = tol.abs.max(tol.rel * value[c].abs());
            converged &= error[c] <= target[c];
        }
        if converged {
            return Ok(VecEstimate {
                value,
                error,
                l1,
                evaluations,
            });
        }

        let worst_component = (0..N)
            .max_by(|&i, &j| (error[i] / target[i]).total_cmp(&(error[j] / target[j])))
            .unwrap_or(0);
        if bisections >= tol.max_subdivisions {
            return Err(QuadratureError::BudgetExhausted {
                budget: tol.max_subdivisions,
                error: error[worst_component],
                tolerance: target[worst_component],
            });
        }

        let score = |p: &Panel<N>| (0..N).map(|c| p.error[c] / target[c]).fold(0.0_f64, f64::max);
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| score(p).total_cmp(&score(q)))
            .expect("at least one panel");
        let worst = panels[idx];
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(QuadratureError::BudgetExhausted {
                budget: tol.max_subdivisions,
                error: error[worst_component],
                tolerance: target[worst_component],
            });
        }
        panels[idx] = gk21(&f, worst.a, mid)?;
        panels.push(gk21(&f, mid, worst.b)?);
        evaluations += 42;
        bisections += 1;
    }
}

/// Scalar adaptive integration over the interval spanned by `breaks`.
pub fn integrate_breaks<F>(f: F, breaks: &[f64], tol: Tolerance) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    integrate_vec(|x| [f(x)], breaks, tol).map(Estimate::from)
}

/// Scalar adaptive integration over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    integrate_breaks(f, &[a, b], tol)
}

/// Break points for a Gaussian-weighted integrand that also carries a
/// rational factor with features at `t ≈ 1/scale`: geometric panels resolve
/// that scale without spending bisections on it.
pub fn velocity_breaks(t_max: f64, scale: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    if scale > 1.0 {
        let mut t = 0.25 / scale;
        while t < 0.5 {
            breaks.push(t);
            t *= 4.0;
        }
    }
    if t_max > 1.0 {
        breaks.push(1.0);
    }
    breaks.push(t_max);
    breaks
}

/// `∫₀^∞ e^(−t²) f(t) dt`, truncated at `spec.t_max`.
pub fn integrate_gaussian_weighted<F>(f: F, spec: &QuadratureSpec) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let breaks = velocity_breaks(spec.t_max, 1.0);
    integrate_breaks(|t| (-t * t).exp() * f(t), &breaks, spec.tolerance()).map(|e| e.value)
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Tail beyond this fraction of the integral's L1 mass means `k_max` is too small.
pub const TAIL_DOMINANCE: f64 = 0.1;

/// `∫₀^∞ f(k) dk` for an integrand decaying like `k^(−tail_exponent)`.
pub fn integrate_spectral<F>(f: F, spec: &QuadratureSpec, tail_exponent: u32) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    integrate_spectral_breaks(f, &[0.0, spec.k_max], spec, tail_exponent).map(|e| e.value)
}

/// Like [`integrate_spectral`], with the body `[0, last break]` split at the
/// given break points (grid nodes, oscillation zeros) and the tail starting
/// at the last break.
///
/// The tail `∫_K^∞ f dk` is evaluated after the substitution
/// `k = K·u^(−1/(p−1))`, under which a pure power law `C·k^(−p)` becomes the
/// constant `C·K^(1−p)/(p−1)` on `u ∈ (0, 1]`; deviations from the power law
/// (logarithmic factors, subleading terms) are picked up adaptively.
pub fn integrate_spectral_breaks<F>(
    f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
    tail_exponent: u32,
) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if tail_exponent < 2 {
        return Err(QuadratureError::Invalid(format!(
            "tail exponent must be >= 2, got {tail_exponent}"
        )));
    }
    let body = integrate_breaks(&f, breaks, spec.tolerance())?;
    let k0 = *breaks.last().expect("validated by integrate_breaks");
    let tail = algebraic_tail(&f, k0, tail_exponent, spec, body.value.abs())?;
    if tail.value.abs() > TAIL_DOMINANCE * body.l1 {
        return Err(QuadratureError::TailDominates {
            tail: tail.value,
            body: body.l1,
        });
    }
    Ok(Estimate {
        value: body.value + tail.value,
        error: body.error + tail.error,
        l1: body.l1 + tail.l1,
        evaluations: body.evaluations + tail.evaluations,
    })
}

fn algebraic_tail<F>(
    f: &F,
    k0: f64,
    tail_exponent: u32,
    spec: &QuadratureSpec,
    scale: f64,
) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if k0 <= 0.0 {
        return Err(QuadratureError::Invalid("tail must start at k > 0".into()));
    }
    let a = 1.0 / (f64::from(tail_exponent) - 1.0);
    let p = f64::from(tail_exponent);
    let tol = Tolerance::new(
        spec.rel_tol,
        spec.abs_tol.max(spec.rel_tol * scale),
        spec.max_subdivisions,
    );
    integrate(
        |u| {
            let k = k0 * u.powf(-a);
            if !k.is_finite() {
                return 0.0;
            }
            f(k) * k0 * a * u.powf(-p * a)
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gaussian_moments() {
        let s = spec();
        let sqrt_pi = PI.sqrt();
        assert_abs_diff_eq!(
            integrate_gaussian_weighted(|_| 1.0, &s).unwrap(),
            sqrt_pi / 2.0,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(integrate_gaussian_weighted(|t| t, &s).unwrap(), 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(
            integrate_gaussian_weighted(|t| t * t, &s).unwrap(),
            sqrt_pi / 4.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn spectral_closed_forms() {
        let s = spec();
        let v = integrate_spectral(|k| 1.0 / (1.0 + k * k), &s, 2).unwrap();
        assert_abs_diff_eq!(v, PI / 2.0, epsilon = 1e-10);
        let v = integrate_spectral(|k| (-k).exp(), &s, 2).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tail_with_logarithm_is_captured() {
        // ∫₀^∞ ln(1+k)/(1+k)² dk = 1
        let s = spec();
        let v = integrate_spectral(|k| (1.0 + k).ln() / ((1.0 + k) * (1.0 + k)), &s, 2).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn tail_dominating_is_reported() {
        let s = spec().with_k_max(0.5);
        let err = integrate_spectral(|k| 1.0 / (1.0 + k * k), &s, 2).unwrap_err();
        assert!(matches!(err, QuadratureError::TailDominates { .. }), "{err:?}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tol = Tolerance::new(1e-12, 1e-300, 3);
        let err = integrate(|x| x.sqrt().recip(), 0.0, 1.0, tol).unwrap_err();
        assert!(matches!(err, QuadratureError::BudgetExhausted { budget: 3, .. }));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate_gaussian_weighted(|t| if t > 2.0 { f64::NAN } else { 1.0 }, &spec()).unwrap_err();
        assert!(matches!(err, QuadratureError::NonFinite { .. }));
    }

    #[test]
    fn spec_validation() {
        assert!(spec().validate().is_ok());
        assert!(QuadratureSpec { t_max: 3.0, ..spec() }.validate().is_err());
        assert!(QuadratureSpec { rel_tol: 0.0, ..spec() }.validate().is_err());
        assert!(QuadratureSpec {
            max_subdivisions: 0,
            ..spec()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn vector_components_converge_independently() {
        // one large and one tiny component
        let est = integrate_vec(
            |x| [x.exp(), 1e-9 * x.sin()],
            &[0.0, 1.0],
            Tolerance::new(1e-12, 1e-300, 50),
        )
        .unwrap();
        assert_abs_diff_eq!(est.value[0], 1f64.exp() - 1.0, epsilon = 1e-12);
        assert!((est.value[1] / (1e-9 * (1.0 - 1f64.cos())) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn halving_tolerance_is_stable() {
        let f = |t: f64| 1.0 / (1.0 + 25.0 * t * t);
        let mut s = spec().with_rel_tol(1e-6);
        let mut prev = integrate_gaussian_weighted(f, &s).unwrap();
        for _ in 0..6 {
            let tol = s.rel_tol;
            s.rel_tol *= 0.5;
            let next = integrate_gaussian_weighted(f, &s).unwrap();
            assert!((next - prev).abs() <= tol * prev.abs() + s.abs_tol);
            prev = next;
        }
    }

    #[test]
    fn truncation_points_can_be_doubled() {
        let s = spec();
        let g = |t: f64| t.powi(3) / (1.0 + 4.0 * t * t);
        let a = integrate_gaussian_weighted(g, &s).unwrap();
        let b = integrate_gaussian_weighted(g, &QuadratureSpec { t_max: 16.0, ..s }).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        let h = |k: f64| 1.0 / (1.0 + k * k).powf(1.5);
        let a = integrate_spectral(h, &s, 3).unwrap();
        let b = integrate_spectral(h, &s.with_k_max(2.0 * s.k_max), 3).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert_abs_diff_eq!(m, 2.0 / 31.0, epsilon = 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn gaussian_weighted_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64,
                                           c1 in 0.1..4.0f64, c2 in 0.0..3.0f64) {
                let s = QuadratureSpec::default();
                let f = |t: f64| (c1 * t).cos();
                let g = |t: f64| t * t / (1.0 + c2 * t * t);
                let lhs = integrate_gaussian_weighted(|t| a * f(t) + b * g(t), &s).unwrap();
                let rhs = a * integrate_gaussian_weighted(f, &s).unwrap()
                    + b * integrate_gaussian_weighted(g, &s).unwrap();
                let tol = 2.0 * (s.rel_tol * (a.abs() + b.abs()) + s.abs_tol);
                prop_assert!((lhs - rhs).abs() <= tol, "{} vs {}", lhs, rhs);
            }
        }
    }
}

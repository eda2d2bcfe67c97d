//! Sampled even functions of the wavenumber with an algebraic tail.
//!
//! Samples are stored on a grid starting at `k = 0`. Between nodes the
//! function is interpolated by local degree-7 polynomials in the coordinate
//! `x = asinh(k/2)` applied to the tail-scaled values
//! `w = f·(1 + k²)^(p/2)`; both choices make `w(x)` slowly varying over
//! the whole range (`x ≈ k/2` near the origin, `x ≈ ln k` in the tail,
//! where `w ≈ A ln k + B + (C ln k + D)/k` for the functions of this
//! problem). Beyond the last node `w` is continued as
//! `A + Bx + (C + Dx)e^(−x)`, matched to the value and first three
//! derivatives of the interpolant there.

use crate::error::{Error, Result};

/// Uniform nodes on `[0, 2]` followed by logarithmic nodes on `(2, k_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    nodes: Vec<f64>,
}

/// Intervals of the uniform and of the logarithmic part at density 1.
pub const BASE_INTERVALS: usize = 64;
const SPLIT: f64 = 2.0;

impl SpectralGrid {
    /// The standard grid: 64 uniform intervals on `[0, 2]`, 64 logarithmic
    /// ones on `[2, k_max]`.
    pub fn standard(k_max: f64) -> Result<Self> {
        Self::with_density(k_max, 1)
    }

    /// The standard grid with every interval split into `density` pieces;
    /// it contains all nodes of the coarser grids.
    pub fn with_density(k_max: f64, density: usize) -> Result<Self> {
        if !k_max.is_finite() || k_max <= SPLIT {
            return Err(Error::Domain {
                name: "k_max",
                value: k_max,
                reason: "the spectral grid needs k_max > 2",
            });
        }
        if density == 0 {
            return Err(Error::InvalidSpec("grid density must be >= 1".into()));
        }
        let n = BASE_INTERVALS * density;
        let mut nodes = Vec::with_capacity(2 * n + 1);
        nodes.extend((0..=n).map(|i| SPLIT * i as f64 / n as f64));
        let ratio = (k_max / SPLIT).ln();
        nodes.extend((1..=n).map(|i| SPLIT * (ratio * i as f64 / n as f64).exp()));
        *nodes.last_mut().expect("non-empty") = k_max;
        Ok(Self { nodes })
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn k_max(&self) -> f64 {
        *self.nodes.last().expect("validated grid")
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < STENCIL {
        return Err(Error::InvalidSpec(format!(
            "a spectral function needs at least {STENCIL} nodes"
        )));
    }
    if nodes[0] != 0.0 {
        return Err(Error::InvalidSpec("spectral nodes must start at k = 0".into()));
    }
    if !nodes.iter().all(|k| k.is_finite()) || nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec(
            "spectral nodes must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn coordinate(k: f64) -> f64 {
    (0.5 * k).asinh()
}

fn tail_weight(k: f64, tail_exponent: u32) -> f64 {
    (1.0 + k * k).powf(0.5 * f64::from(tail_exponent))
}

/// An even function of `k ≥ 0`, sampled on a grid and interpolated between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    tail_exponent: u32,
    label: String,
    x: Vec<f64>,
    w: Vec<f64>,
    // beyond the last node x_m, with u = x − x_m:
    // w = w_m + b·u + (c + d·u)·e^(−u) − c, where [b, c, d] match the first
    // three derivatives of the interpolant at x_m
    tail_model: [f64; 3],
}

impl SpectralFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, tail_exponent: u32, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        check_nodes(&nodes)?;
        if nodes.len() != values.len() {
            return Err(Error::InvalidSpec(format!(
                "{label}: {} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Mismatch(format!(
                "{label}: non-finite value at k = {}",
                nodes[i]
            )));
        }
        if tail_exponent < 2 {
            return Err(Error::InvalidSpec(format!("{label}: tail exponent must be >= 2")));
        }
        let x = nodes.iter().map(|&k| coordinate(k)).collect::<Vec<_>>();
        let w = nodes
            .iter()
            .zip(&values)
            .map(|(&k, &v)| v * tail_weight(k, tail_exponent))
            .collect::<Vec<_>>();
        let n = x.len();
        let [_, d1, d2, d3] = newton_derivatives(&x[n - STENCIL..], &w[n - STENCIL..], x[n - 1]);
        Ok(Self {
            nodes,
            values,
            tail_exponent,
            label,
            x,
            w,
            tail_model: [d1 + 2.0 * d2 + d3, 3.0 * d2 + 2.0 * d3, d2 + d3],
        })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn<F>(grid: &SpectralGrid, tail_exponent: u32, label: impl Into<String>, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let values = grid.nodes().iter().map(|&k| f(k)).collect::<Result<Vec<_>>>()?;
        Self::new(grid.nodes().to_vec(), values, tail_exponent, label)
    }

    pub fn zero(grid: &SpectralGrid, tail_exponent: u32, label: impl Into<String>) -> Result<Self> {
        Self::new(grid.nodes().to_vec(), vec![0.0; grid.len()], tail_exponent, label)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_exponent(&self) -> u32 {
        self.tail_exponent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn k_max(&self) -> f64 {
        *self.nodes.last().expect("validated nodes")
    }

    /// `c·f` under a new label.
    pub fn scaled(&self, c: f64, label: impl Into<String>) -> Result<Self> {
        Self::new(
            self.nodes.clone(),
            self.values.iter().map(|v| c * v).collect(),
            self.tail_exponent,
            label,
        )
    }

    /// Pointwise transform of the samples, `g(k, f(k))`, with a new tail law.
    pub fn map_nodes<F>(&self, tail_exponent: u32, label: impl Into<String>, mut g: F) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Result<f64>,
    {
        let values = self
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(&k, &v)| g(k, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.nodes.clone(), values, tail_exponent, label)
    }

    /// Value at any real `k` (the function is even).
    pub fn eval(&self, k: f64) -> f64 {
        let k = k.abs();
        let x = coordinate(k);
        let n = self.nodes.len();
        let w = if k >= self.k_max() {
            let u = x - self.x[n - 1];
            let [b, c, d] = self.tail_model;
            self.w[n - 1] + b * u + (c + d * u) * (-u).exp() - c
        } else {
            // interval [i, i+1] containing k; the stencil is centred on it,
            // shifted inward at the far end and mirrored through k = 0 at
            // the near end (the function is even)
            let i = self
                .nodes
                .partition_point(|&node| node <= k)
                .saturating_sub(1)
                .min(n - 2);
            let start = (i as isize + 1 - STENCIL as isize / 2).min((n - STENCIL) as isize);
            let mut xs = [0.0; STENCIL];
            let mut ws = [0.0; STENCIL];
            for (j, (xj, wj)) in xs.iter_mut().zip(ws.iter_mut()).enumerate() {
                let idx = start + j as isize;
                let m = idx.unsigned_abs();
                *xj = if idx < 0 { -self.x[m] } else { self.x[m] };
                *wj = self.w[m];
            }
            lagrange(&xs, &ws, x)
        };
        w / tail_weight(k, self.tail_exponent)
    }
}

/// Points of the local interpolating polynomial.
const STENCIL: usize = 8;

/// Value and first three derivatives at `x` of the polynomial through
/// `(xs, ws)`, from its Newton form.
fn newton_derivatives(xs: &[f64], ws: &[f64], x: f64) -> [f64; 4] {
    let n = xs.len();
    let mut c = ws.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let (mut p, mut p1, mut p2, mut p3) = (c[n - 1], 0.0, 0.0, 0.0);
    for i in (0..n - 1).rev() {
        let d = x - xs[i];
        p3 = p3 * d + 3.0 * p2;
        p2 = p2 * d + 2.0 * p1;
        p1 = p1 * d + p;
        p = p * d + c[i];
    }
    [p, p1, p2, p3]
}

fn lagrange(xs: &[f64; STENCIL], ys: &[f64; STENCIL], x: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..STENCIL {
        let mut basis = 1.0;
        for j in 0..STENCIL {
            if i != j {
                basis *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        sum += basis * ys[i];
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = SpectralGrid::standard(200.0).unwrap();
        assert_eq!(g.len(), 2 * BASE_INTERVALS + 1);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.nodes()[BASE_INTERVALS], 2.0);
        assert_eq!(g.k_max(), 200.0);
        let fine = SpectralGrid::with_density(200.0, 2).unwrap();
        for (i, &k) in g.nodes().iter().enumerate() {
            assert!((fine.nodes()[2 * i] - k).abs() <= 1e-12 * k.max(1.0));
        }
        assert!(SpectralGrid::standard(1.0).is_err());
    }

    #[test]
    fn nodes_are_reproduced() {
        let g = SpectralGrid::standard(50.0).unwrap();
        let f = SpectralFunction::from_fn(&g, 2, "f", |k| Ok((1.0 + k).ln() / (1.0 + k * k))).unwrap();
        for (&k, &v) in f.nodes().iter().zip(f.values()) {
            assert!((f.eval(k) - v).abs() <= 1e-15 * v.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn interpolation_accuracy() {
        let g = SpectralGrid::standard(200.0).unwrap();
        let h = |k: f64| (1.0 + 0.3 * (1.0 + k * k).ln()) / (1.0 + k * k) - 0.2 / (1.0 + k * k).powi(2);
        let f = SpectralFunction::from_fn(&g, 2, "h", |k| Ok(h(k))).unwrap();
        for i in 0..2000 {
            let k = 0.0005 * (i * i) as f64 / 10.0;
            let err = (f.eval(k) - h(k)).abs() / h(k).abs();
            assert!(err < 1e-7, "k={k} err={err}");
        }
        // even continuation and tail extrapolation
        assert_eq!(f.eval(-0.37), f.eval(0.37));
        let err = (f.eval(400.0) - h(400.0)).abs() / h(400.0);
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn invalid_inputs() {
        let nodes = || (0..8).map(f64::from).collect::<Vec<_>>();
        let mut shifted = nodes();
        shifted[0] = 0.1;
        let mut repeated = nodes();
        repeated[2] = 1.0;
        let mut bad = vec![1.0; 8];
        bad[3] = f64::NAN;
        assert!(SpectralFunction::new(nodes(), vec![1.0; 8], 2, "f").is_ok());
        assert!(SpectralFunction::new(nodes(), vec![1.0; 7], 2, "f").is_err());
        assert!(SpectralFunction::new(shifted, vec![1.0; 8], 2, "f").is_err());
        assert!(SpectralFunction::new(repeated, vec![1.0; 8], 2, "f").is_err());
        assert!(SpectralFunction::new(nodes(), bad, 2, "f").is_err());
        assert!(SpectralFunction::new(nodes(), vec![1.0; 8], 1, "f").is_err());
        assert!(SpectralFunction::new(vec![0.0, 1.0, 2.0], vec![1.0; 3], 2, "f").is_err());
    }
}

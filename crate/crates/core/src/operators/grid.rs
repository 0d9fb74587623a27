//! Sampling grids on the momentum-space charts.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Coordinate chart a grid lives on. Native coordinates per node:
///
/// - `Radial`: s = ln(r/m)
/// - `Nu`: ν
/// - `NuOmega`: (ν, ω)
/// - `OmegaPhi`: (ω, φ) at fixed ν
/// - `Cartesian`: (π¹, π², π³)
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Chart {
    Radial,
    Nu,
    NuOmega,
    OmegaPhi { nu: f64 },
    Cartesian,
}

impl Chart {
    pub fn dim(&self) -> usize {
        match self {
            Chart::Radial | Chart::Nu => 1,
            Chart::NuOmega | Chart::OmegaPhi { .. } => 2,
            Chart::Cartesian => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Chart::Radial => "radial",
            Chart::Nu => "nu",
            Chart::NuOmega => "nu-omega",
            Chart::OmegaPhi { .. } => "omega-phi",
            Chart::Cartesian => "cartesian",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    /// Chebyshev–Lobatto nodes on [lo, hi] with a dense differentiation matrix.
    Chebyshev { lo: f64, hi: f64, nodes: Vec<f64>, weights: Vec<f64>, dmat: Vec<f64> },
    /// Uniform nodes; 8th-order central differences with zero ghosts or periodic wrap.
    Uniform { lo: f64, h: f64, n: usize, periodic: bool },
    /// Arbitrary sample points without differentiation.
    Samples { nodes: Vec<f64> },
}

impl Axis {
    pub fn chebyshev(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(lo < hi) {
            return Err(Error::Domain(format!("Chebyshev axis needs n ≥ 2 and lo < hi, got n={n}, [{lo}, {hi}]")));
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let xi: Vec<f64> = (0..=n).map(|j| -(PI * j as f64 / n as f64).cos()).collect();
        let nodes = xi.iter().map(|x| mid + half * x).collect();
        let weights = clenshaw_curtis(n).into_iter().map(|w| w * half).collect();
        let dmat = cheb_dmat(&xi).into_iter().map(|d| d / half).collect();
        Ok(Axis::Chebyshev { lo, hi, nodes, weights, dmat })
    }

    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 9 || !(lo < hi) {
            return Err(Error::Domain(format!("uniform axis needs n ≥ 9 and lo < hi, got n={n}")));
        }
        Ok(Axis::Uniform { lo, h: (hi - lo) / (n - 1) as f64, n, periodic: false })
    }

    /// n nodes on [0, 2π) with periodic differencing.
    pub fn periodic(n: usize) -> Result<Self> {
        if n < 9 {
            return Err(Error::Domain(format!("periodic axis needs n ≥ 9, got {n}")));
        }
        Ok(Axis::Uniform { lo: 0.0, h: 2.0 * PI / n as f64, n, periodic: true })
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Chebyshev { nodes, .. } => nodes.len(),
            Axis::Uniform { n, .. } => *n,
            Axis::Samples { nodes } => nodes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, i: usize) -> f64 {
        match self {
            Axis::Chebyshev { nodes, .. } => nodes[i],
            Axis::Uniform { lo, h, .. } => lo + h * i as f64,
            Axis::Samples { nodes } => nodes[i],
        }
    }

    /// Quadrature weight of node `i` for ∫ dx.
    pub fn weight(&self, i: usize) -> f64 {
        match self {
            Axis::Chebyshev { weights, .. } => weights[i],
            Axis::Uniform { h, n, periodic, .. } => {
                if !periodic && (i == 0 || i + 1 == *n) {
                    0.5 * h
                } else {
                    *h
                }
            }
            Axis::Samples { .. } => 0.0,
        }
    }

    pub fn differentiable(&self) -> bool {
        !matches!(self, Axis::Samples { .. })
    }

    /// Every other node of this axis, if that is again a valid axis.
    pub fn coarsened(&self) -> Option<Axis> {
        match self {
            Axis::Chebyshev { lo, hi, nodes, .. } => {
                let n = nodes.len() - 1;
                if n % 2 == 0 && n >= 4 {
                    Axis::chebyshev(*lo, *hi, n / 2).ok()
                } else {
                    None
                }
            }
            Axis::Uniform { lo, h, n, periodic } => {
                if *periodic {
                    (n % 2 == 0 && n / 2 >= 9).then(|| Axis::Uniform { lo: *lo, h: 2.0 * h, n: n / 2, periodic: true })
                } else {
                    (n % 2 == 1 && n / 2 + 1 >= 9).then(|| Axis::Uniform { lo: *lo, h: 2.0 * h, n: n / 2 + 1, periodic: false })
                }
            }
            Axis::Samples { .. } => None,
        }
    }

    /// Derivative of strided data `f[offset + k·stride]`, k = 0..len.
    pub(crate) fn differentiate(&self, f: &[Complex64], offset: usize, stride: usize, out: &mut [Complex64]) {
        let n = self.len();
        let at = |k: usize| f[offset + k * stride];
        match self {
            Axis::Chebyshev { dmat, .. } => {
                for i in 0..n {
                    let row = &dmat[i * n..(i + 1) * n];
                    let mut s = Complex64::new(0.0, 0.0);
                    for (k, d) in row.iter().enumerate() {
                        s += at(k) * d;
                    }
                    out[offset + i * stride] = s;
                }
            }
            Axis::Uniform { h, periodic, .. } => {
                const A: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
                let ni = n as isize;
                let get = |k: isize| -> Complex64 {
                    if *periodic {
                        at(k.rem_euclid(ni) as usize)
                    } else if k < 0 || k >= ni {
                        Complex64::new(0.0, 0.0)
                    } else {
                        at(k as usize)
                    }
                };
                for i in 0..ni {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (j, a) in A.iter().enumerate() {
                        let d = j as isize + 1;
                        s += (get(i + d) - get(i - d)) * *a;
                    }
                    out[offset + i as usize * stride] = s / *h;
                }
            }
            Axis::Samples { .. } => unreachable!("sample axes are rejected before differentiation"),
        }
    }
}

fn cheb_dmat(x: &[f64]) -> Vec<f64> {
    let n1 = x.len();
    let n = n1 - 1;
    let c = |j: usize| -> f64 {
        let base = if j == 0 || j == n { 2.0 } else { 1.0 };
        if j % 2 == 0 { base } else { -base }
    };
    let mut d = vec![0.0; n1 * n1];
    for i in 0..n1 {
        let mut diag = 0.0;
        for j in 0..n1 {
            if i != j {
                let v = c(i) / c(j) / (x[i] - x[j]);
                d[i * n1 + j] = v;
                diag -= v;
            }
        }
        d[i * n1 + i] = diag;
    }
    d
}

/// Clenshaw–Curtis weights on [−1, 1] for the n+1 Lobatto nodes.
fn clenshaw_curtis(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut w = vec![0.0; n + 1];
    let mut v = vec![1.0; n.saturating_sub(1)];
    if n % 2 == 0 {
        w[0] = 1.0 / (nf * nf - 1.0);
        w[n] = w[0];
        for (idx, vi) in v.iter_mut().enumerate() {
            let th = PI * (idx + 1) as f64 / nf;
            for k in 1..n / 2 {
                let kf = k as f64;
                *vi -= 2.0 * (2.0 * kf * th).cos() / (4.0 * kf * kf - 1.0);
            }
            *vi -= (nf * th).cos() / (nf * nf - 1.0);
        }
    } else {
        w[0] = 1.0 / (nf * nf);
        w[n] = w[0];
        for (idx, vi) in v.iter_mut().enumerate() {
            let th = PI * (idx + 1) as f64 / nf;
            for k in 1..=(n - 1) / 2 {
                let kf = k as f64;
                *vi -= 2.0 * (2.0 * kf * th).cos() / (4.0 * kf * kf - 1.0);
            }
        }
    }
    for (i, vi) in v.iter().enumerate() {
        w[i + 1] = 2.0 * vi / nf;
    }
    w
}

/// A tensor-product grid with measure weights on one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub chart: Chart,
    pub axes: Vec<Axis>,
    pub params: ModelParams,
    weights: Vec<f64>,
}

impl Grid {
    pub fn new(chart: Chart, axes: Vec<Axis>, params: ModelParams) -> Result<Self> {
        if axes.len() != chart.dim() {
            return Err(Error::GridMismatch(format!(
                "{} chart needs {} axes, got {}",
                chart.name(),
                chart.dim(),
                axes.len()
            )));
        }
        let mut g = Grid { chart, axes, params, weights: Vec::new() };
        g.validate()?;
        let n = g.len();
        let mut w = Vec::with_capacity(n);
        for idx in 0..n {
            let c = g.coords(idx);
            let mut q = 1.0;
            for (a, i) in g.axes.iter().zip(g.multi_index(idx)) {
                q *= a.weight(i);
            }
            w.push(q * g.density(&c));
        }
        g.weights = w;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Domain(format!("{} grid: {msg}", self.chart.name())));
        match self.chart {
            Chart::Nu => {
                let (a, b) = lo_hi(&self.axes[0]);
                if a <= -FRAC_PI_2 || b >= FRAC_PI_2 {
                    return bad("ν nodes must lie inside (−π/2, π/2)");
                }
            }
            Chart::NuOmega => {
                let (a, b) = lo_hi(&self.axes[0]);
                let (c, _) = lo_hi(&self.axes[1]);
                if a <= -FRAC_PI_2 || b >= FRAC_PI_2 || c < 0.0 {
                    return bad("need |ν| < π/2 and ω ≥ 0");
                }
            }
            Chart::OmegaPhi { nu } => {
                let (c, _) = lo_hi(&self.axes[0]);
                if c < 0.0 || nu.abs() >= FRAC_PI_2 {
                    return bad("need ω ≥ 0 and |ν| < π/2");
                }
            }
            Chart::Radial | Chart::Cartesian => {}
        }
        Ok(())
    }

    /// One-dimensional Chebyshev grid in ν on [lo, hi] with n+1 nodes.
    pub fn nu_chebyshev(lo: f64, hi: f64, n: usize, params: ModelParams) -> Result<Self> {
        Grid::new(Chart::Nu, vec![Axis::chebyshev(lo, hi, n)?], params)
    }

    /// One-dimensional Chebyshev grid in r on [r_lo, r_hi], uniform in ln r.
    pub fn radial_chebyshev(r_lo: f64, r_hi: f64, n: usize, params: ModelParams) -> Result<Self> {
        if !(r_lo > 0.0) {
            return Err(Error::Domain("radial grid needs r_lo > 0".into()));
        }
        let m = params.mass();
        Grid::new(Chart::Radial, vec![Axis::chebyshev((r_lo / m).ln(), (r_hi / m).ln(), n)?], params)
    }

    pub fn nu_omega_uniform(nu: (f64, f64), omega: (f64, f64), n: usize, params: ModelParams) -> Result<Self> {
        Grid::new(Chart::NuOmega, vec![Axis::uniform(nu.0, nu.1, n)?, Axis::uniform(omega.0, omega.1, n)?], params)
    }

    pub fn omega_phi_uniform(nu: f64, omega: (f64, f64), n_omega: usize, n_phi: usize, params: ModelParams) -> Result<Self> {
        Grid::new(Chart::OmegaPhi { nu }, vec![Axis::uniform(omega.0, omega.1, n_omega)?, Axis::periodic(n_phi)?], params)
    }

    pub fn cartesian_uniform(half_width: f64, n: usize, params: ModelParams) -> Result<Self> {
        let a = Axis::uniform(-half_width, half_width, n)?;
        Grid::new(Chart::Cartesian, vec![a.clone(), a.clone(), a], params)
    }

    /// ν sample points clustered log-uniformly toward both endpoints:
    /// π/2 − |ν| = 10^{−k/per_decade}, k up to `decades`·per_decade.
    pub fn nu_endpoint_samples(decades: usize, per_decade: usize, params: ModelParams) -> Result<Self> {
        if decades == 0 || per_decade < 2 {
            return Err(Error::Domain("need ≥ 1 decade and ≥ 2 nodes per decade".into()));
        }
        let total = decades * per_decade;
        let mut right: Vec<f64> = (0..=total)
            .map(|k| FRAC_PI_2 - 10f64.powf(-(k as f64) / per_decade as f64))
            .collect();
        right.retain(|&x| x > 0.0);
        let mut nodes: Vec<f64> = right.iter().rev().map(|x| -x).collect();
        nodes.push(0.0);
        nodes.extend(right);
        Grid::new(Chart::Nu, vec![Axis::Samples { nodes }], params)
    }

    /// Radial sample points r = m·10^{k/per_decade}, k = 0..decades·per_decade.
    pub fn radial_endpoint_samples(decades: usize, per_decade: usize, params: ModelParams) -> Result<Self> {
        if decades == 0 || per_decade < 2 {
            return Err(Error::Domain("need ≥ 1 decade and ≥ 2 nodes per decade".into()));
        }
        let nodes = (0..=decades * per_decade)
            .map(|k| (k as f64 / per_decade as f64) * std::f64::consts::LN_10)
            .collect();
        Grid::new(Chart::Radial, vec![Axis::Samples { nodes }], params)
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (d, a) in self.axes.iter().enumerate().rev() {
            out[d] = idx % a.len();
            idx /= a.len();
        }
        out
    }

    /// Native coordinates of node `idx`.
    pub fn coords(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx).iter().zip(&self.axes).map(|(&i, a)| a.node(i)).collect()
    }

    /// Quadrature weight times measure density at node `idx`.
    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    pub fn differentiable(&self) -> bool {
        self.axes.iter().all(Axis::differentiable)
    }

    /// Measure density with respect to the native coordinates.
    pub fn density(&self, c: &[f64]) -> f64 {
        let m = self.params.mass();
        match self.chart {
            // dμ = m r²/E dr with dr = r ds
            Chart::Radial => {
                let r = m * c[0].exp();
                m * r.powi(3) / r.hypot(m)
            }
            Chart::Nu => c[0].cos().powi(-3),
            Chart::NuOmega => c[0].cos().powi(-3) * m.powi(3) * c[1].sinh(),
            Chart::OmegaPhi { nu } => m * m / nu.cos() * c[0].sinh(),
            Chart::Cartesian => m / (c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + m * m).sqrt(),
        }
    }

    /// Momentum magnitude r at a node (radial chart) or energy-defining
    /// Cartesian momentum at a node (other charts).
    pub fn momentum(&self, c: &[f64]) -> [f64; 3] {
        let m = self.params.mass();
        match self.chart {
            Chart::Radial => [0.0, 0.0, m * c[0].exp()],
            Chart::Nu => [0.0, 0.0, m * c[0].tan()],
            Chart::NuOmega => {
                let rho = m * c[1].sinh() / c[0].cos();
                [rho, 0.0, m * c[0].tan()]
            }
            Chart::OmegaPhi { nu } => {
                let rho = m * c[0].sinh() / nu.cos();
                [rho * c[1].cos(), rho * c[1].sin(), m * nu.tan()]
            }
            Chart::Cartesian => [c[0], c[1], c[2]],
        }
    }

    pub fn energy(&self, c: &[f64]) -> f64 {
        let p = self.momentum(c);
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + self.params.mass().powi(2)).sqrt()
    }

    /// Grid built from every other node along each axis.
    pub fn coarsened(&self) -> Option<Grid> {
        let axes: Option<Vec<Axis>> = self.axes.iter().map(Axis::coarsened).collect();
        Grid::new(self.chart, axes?, self.params).ok()
    }

    /// ∂/∂(native coordinate `axis`) of nodal data.
    pub fn differentiate(&self, f: &[Complex64], axis: usize) -> Result<Vec<Complex64>> {
        if !self.differentiable() {
            return Err(Error::GridMismatch(format!("{} sample grid has no differentiation", self.chart.name())));
        }
        if f.len() != self.len() {
            return Err(Error::GridMismatch(format!("data length {} vs grid size {}", f.len(), self.len())));
        }
        let shape = self.shape();
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for o in 0..outer {
            for inner in 0..stride {
                let offset = o * shape[axis] * stride + inner;
                self.axes[axis].differentiate(f, offset, stride, &mut out);
            }
        }
        Ok(out)
    }
}

fn lo_hi(a: &Axis) -> (f64, f64) {
    (a.node(0), a.node(a.len() - 1))
}

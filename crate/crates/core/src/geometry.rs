//! Hyperbolic space `H^d(kappa)` in geodesic polar coordinates, the
//! `r = sinh(kappa rho)/kappa` chart, and the radial residual oracle.

use crate::error::{Error, Result};
use crate::specfun::sphere_area;
use serde::{Deserialize, Serialize};

/// Dimension and curvature parameter. Sectional curvature is `-kappa^2`;
/// `kappa = 0` is Euclidean space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Space {
    pub d: usize,
    pub kappa: f64,
}

const SERIES_CUTOFF: f64 = 1e-6;

impl Space {
    pub fn new(d: usize, kappa: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::param("d", format!("dimension must be >= 2, got {d}")));
        }
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::param("kappa", format!("must be finite and >= 0, got {kappa}")));
        }
        Ok(Space { d, kappa })
    }

    pub fn euclidean(d: usize) -> Result<Self> {
        Space::new(d, 0.0)
    }

    pub fn is_euclidean(&self) -> bool {
        self.kappa == 0.0
    }

    /// `r = sinh(kappa rho) / kappa`
    pub fn rho_to_r(&self, rho: f64) -> f64 {
        let x = self.kappa * rho;
        if x.abs() < SERIES_CUTOFF {
            rho * (1.0 + x * x / 6.0)
        } else {
            x.sinh() / self.kappa
        }
    }

    /// `rho = asinh(kappa r) / kappa`
    pub fn r_to_rho(&self, r: f64) -> f64 {
        let x = self.kappa * r;
        if x.abs() < SERIES_CUTOFF {
            r * (1.0 - x * x / 6.0)
        } else {
            x.asinh() / self.kappa
        }
    }

    /// `dr/drho = cosh(kappa rho) = sqrt(1 + kappa^2 r^2)`
    pub fn dr_drho(&self, rho: f64) -> f64 {
        (self.kappa * rho).cosh()
    }

    /// Radial volume density: `dVol = weight(rho) drho dsigma(omega)`.
    pub fn volume_weight(&self, rho: f64) -> f64 {
        self.rho_to_r(rho).powi(self.d as i32 - 1)
    }

    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.d)
    }

    /// Geodesic distance between points at radii `rho1`, `rho2` separated
    /// by angle `gamma` at the origin (hyperbolic law of cosines, written
    /// in a cancellation-free form).
    pub fn distance(&self, rho1: f64, rho2: f64, gamma: f64) -> f64 {
        let s = (0.5 * gamma).sin();
        if self.is_euclidean() {
            let dr = rho1 - rho2;
            return (dr * dr + 4.0 * rho1 * rho2 * s * s).sqrt();
        }
        let k = self.kappa;
        let a = (0.5 * k * (rho1 - rho2)).sinh();
        let e = 2.0 * a * a + 2.0 * (k * rho1).sinh() * (k * rho2).sinh() * s * s;
        2.0 * (0.5 * e).sqrt().asinh() / k
    }
}

/// Which radial coordinate a grid or radial function uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialCoord {
    /// geodesic distance `rho`
    Geodesic,
    /// `r = sinh(kappa rho)/kappa`
    Areal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub coord: RadialCoord,
    pub nodes: Vec<f64>,
    /// Set when the nodes are equally spaced.
    pub step: Option<f64>,
}

impl RadialGrid {
    pub fn from_nodes(coord: RadialCoord, nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::param("nodes", "empty grid"));
        }
        if !(nodes[0] > 0.0) {
            return Err(Error::param("nodes", "first node must be > 0"));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("nodes", "nodes must be strictly increasing"));
        }
        Ok(RadialGrid {
            coord,
            nodes,
            step: None,
        })
    }

    /// `n` equally spaced nodes on `[a, b]`, endpoints included.
    pub fn uniform(coord: RadialCoord, a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::param("grid", format!("need n >= 2 and b > a (got n={n}, [{a}, {b}])")));
        }
        let h = (b - a) / (n - 1) as f64;
        let nodes = (0..n).map(|i| a + h * i as f64).collect();
        let mut g = RadialGrid::from_nodes(coord, nodes)?;
        g.step = Some(h);
        Ok(g)
    }

    /// `n` Chebyshev points of the first kind mapped into `(a, b)`.
    pub fn chebyshev(coord: RadialCoord, a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 1 || !(b > a) {
            return Err(Error::param("grid", "need n >= 1 and b > a"));
        }
        let nodes = (0..n)
            .rev()
            .map(|i| {
                let t = (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * t
            })
            .collect();
        RadialGrid::from_nodes(coord, nodes)
    }
}

/// Sample points filling a ball of radius `radius` in a Cartesian chart:
/// Chebyshev radii in `(0, radius)` plus the rim, times the nodes of a
/// sphere quadrature, plus the origin. For `d >= 4` the quadrature nodes lie
/// in one plane, so the coordinate directions `+-e_i` are added.
///
/// With `inner > 0` the grid covers the closed annulus `inner <= |x| <= radius`
/// and the origin is left out.
#[derive(Debug, Clone, PartialEq)]
pub struct BallGrid {
    pub d: usize,
    pub inner: f64,
    pub radius: f64,
    pub radii: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
}

impl BallGrid {
    pub fn new(d: usize, radius: f64, n_radial: usize, sphere_degree: usize) -> Result<Self> {
        Self::annulus(d, 0.0, radius, n_radial, sphere_degree)
    }

    pub fn annulus(d: usize, inner: f64, radius: f64, n_radial: usize, sphere_degree: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::param("radius", format!("must be finite and > 0, got {radius}")));
        }
        if !(inner >= 0.0 && inner < radius) {
            return Err(Error::param("inner", format!("need 0 <= inner < radius, got {inner}")));
        }
        if n_radial == 0 {
            return Err(Error::param("n_radial", "need at least one radial node"));
        }
        let mut radii = RadialGrid::chebyshev(RadialCoord::Areal, inner, radius, n_radial)?.nodes;
        if inner > 0.0 {
            radii.insert(0, inner);
        }
        radii.push(radius);
        let q = crate::specfun::SphereQuadrature::new(d, sphere_degree)?;
        let mut directions = q.nodes;
        if d >= 4 {
            for i in 0..d {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; d];
                    e[i] = s;
                    directions.push(e);
                }
            }
        }
        Ok(BallGrid {
            d,
            inner,
            radius,
            radii,
            directions,
        })
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.directions.len() + usize::from(self.inner == 0.0)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All points, origin first when it belongs to the grid.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.len());
        if self.inner == 0.0 {
            out.push(vec![0.0; self.d]);
        }
        for &r in &self.radii {
            for w in &self.directions {
                out.push(w.iter().map(|c| r * c).collect());
            }
        }
        out
    }
}

/// Value and two derivatives of a radial function.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn scale(self, c: f64) -> Jet {
        Jet {
            v: c * self.v,
            d1: c * self.d1,
            d2: c * self.d2,
        }
    }
}

/// A radial function with analytic first and second derivatives.
pub trait RadialFunction: Send + Sync {
    fn jet(&self, x: f64) -> Result<Jet>;

    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.v)
    }
}

impl<F> RadialFunction for F
where
    F: Fn(f64) -> Result<Jet> + Send + Sync,
{
    fn jet(&self, x: f64) -> Result<Jet> {
        self(x)
    }
}

/// Input to the residual oracle.
pub enum RadialInput<'a> {
    Analytic(&'a dyn RadialFunction),
    /// Samples on the grid nodes; derivatives by fourth-order differences.
    Sampled(&'a [f64]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualProfile {
    pub nodes: Vec<f64>,
    pub residual: Vec<f64>,
    /// `max(|f|, |f'|, |f''|)` at each node
    pub scale: Vec<f64>,
    /// `max_i |residual_i| / scale_i`
    pub relative_sup: f64,
}

fn fd_jets(values: &[f64], h: f64) -> Vec<Jet> {
    let n = values.len();
    let f = values;
    let mut out = Vec::with_capacity(n);
    let c1 = 1.0 / (12.0 * h);
    let c2 = 1.0 / (12.0 * h * h);
    for i in 0..n {
        let (d1, d2) = if i >= 2 && i + 2 < n {
            (
                (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) * c1,
                (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) * c2,
            )
        } else if i == 0 {
            (
                (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c1,
                (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) * c2,
            )
        } else if i == 1 {
            (
                (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c1,
                (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) * c2,
            )
        } else if i == n - 2 {
            (
                (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * c1,
                (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] - 6.0 * f[n - 5] + f[n - 6]) * c2,
            )
        } else {
            (
                (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * c1,
                (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] + 61.0 * f[n - 5]
                    - 10.0 * f[n - 6])
                    * c2,
            )
        };
        out.push(Jet { v: f[i], d1, d2 });
    }
    out
}

/// Radial Schrodinger residual of `f` on a single harmonic sector `l`.
///
/// In the `r` chart:
/// `(1+k^2 r^2) f'' + ((d-1+d k^2 r^2)/r) f' - l(l+d-2)/r^2 f + (lambda - V) f`.
/// In the geodesic chart:
/// `f'' + (d-1) k coth(k rho) f' - k^2 l(l+d-2)/sinh^2(k rho) f + (lambda - V) f`.
/// `potential` is evaluated in the grid's coordinate.
pub fn radial_schrodinger_residual(
    space: &Space,
    l: usize,
    potential: &dyn Fn(f64) -> f64,
    lambda: f64,
    f: RadialInput<'_>,
    grid: &RadialGrid,
) -> Result<ResidualProfile> {
    let jets: Vec<Jet> = match f {
        RadialInput::Analytic(func) => grid.nodes.iter().map(|&x| func.jet(x)).collect::<Result<_>>()?,
        RadialInput::Sampled(vals) => {
            if vals.len() != grid.nodes.len() {
                return Err(Error::param("samples", "sample count differs from grid size"));
            }
            let h = grid.step.ok_or_else(|| {
                Error::GridTooCoarse("finite differences need an equally spaced grid".into())
            })?;
            if vals.len() < 6 {
                return Err(Error::GridTooCoarse(format!(
                    "fourth-order stencils need at least 6 nodes, got {}",
                    vals.len()
                )));
            }
            fd_jets(vals, h)
        }
    };
    let d = space.d as f64;
    let k = space.kappa;
    let mu = (l * (l + space.d - 2)) as f64;
    let mut residual = Vec::with_capacity(jets.len());
    let mut scale = Vec::with_capacity(jets.len());
    let mut sup = 0.0f64;
    for (&x, j) in grid.nodes.iter().zip(&jets) {
        let res = match grid.coord {
            RadialCoord::Areal => {
                let k2r2 = k * k * x * x;
                (1.0 + k2r2) * j.d2 + (d - 1.0 + d * k2r2) / x * j.d1 - mu / (x * x) * j.v
                    + (lambda - potential(x)) * j.v
            }
            RadialCoord::Geodesic => {
                let (coth, csc2) = if k == 0.0 || k * x < 1e-8 {
                    (1.0 / x, 1.0 / (x * x))
                } else {
                    let s = (k * x).sinh();
                    (k * (k * x).cosh() / s, k * k / (s * s))
                };
                j.d2 + (d - 1.0) * coth * j.d1 - mu * csc2 * j.v + (lambda - potential(x)) * j.v
            }
        };
        let sc = j.v.abs().max(j.d1.abs()).max(j.d2.abs());
        if sc > 0.0 {
            sup = sup.max(res.abs() / sc);
        } else if res != 0.0 {
            sup = f64::INFINITY;
        }
        residual.push(res);
        scale.push(sc);
    }
    Ok(ResidualProfile {
        nodes: grid.nodes.clone(),
        residual,
        scale,
        relative_sup: sup,
    })
}

/// Observed convergence order of the finite-difference residual: the
/// residual sup is computed on `n` and `2n-1` equally spaced nodes over
/// `[a, b]` and `log2` of the ratio returned. Expect about 4.
#[allow(clippy::too_many_arguments)]
pub fn fd_refinement_order(
    space: &Space,
    l: usize,
    potential: &dyn Fn(f64) -> f64,
    lambda: f64,
    f: &dyn Fn(f64) -> f64,
    coord: RadialCoord,
    a: f64,
    b: f64,
    n: usize,
) -> Result<f64> {
    let sup_abs = |m: usize| -> Result<f64> {
        let g = RadialGrid::uniform(coord, a, b, m)?;
        let vals: Vec<f64> = g.nodes.iter().map(|&x| f(x)).collect();
        let p = radial_schrodinger_residual(space, l, potential, lambda, RadialInput::Sampled(&vals), &g)?;
        Ok(p.residual.iter().fold(0.0f64, |m, r| m.max(r.abs())))
    };
    let coarse = sup_abs(n)?;
    let fine = sup_abs(2 * n - 1)?;
    Ok((coarse / fine).log2())
}

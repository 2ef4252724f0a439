//! Heat kernel `H(t, rho)` of `H^d(kappa)` for `d = 2..=5`, its Gaussian
//! type bound, the dimension-shifting identities, and a radial heat
//! propagator.
//!
//! Odd dimensions use hand-expanded closed forms of
//! `(kappa / sinh(kappa rho) d/drho)^m exp(-kappa^2 m^2 t - rho^2/4t)`.
//! Even dimensions integrate
//! `int_rho^inf s exp(-s^2/4t) / sqrt(cosh(kappa s) - cosh(kappa rho)) ds`
//! after `s = rho + u^2`, with the difference of cosines written as
//! `2 sinh(kappa (rho + u^2/2)) sinh(kappa u^2 / 2)`.

use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::specfun::{integrate, sphere_area, QuadOpts};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::{PI, SQRT_2};

const QUAD: QuadOpts = QuadOpts {
    abs_tol: 0.0,
    rel_tol: 1e-12,
    max_intervals: 4000,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatKernel {
    pub d: usize,
    pub kappa: f64,
}

impl HeatKernel {
    pub fn new(d: usize, kappa: f64) -> Result<Self> {
        if !(2..=5).contains(&d) {
            return Err(Error::Unsupported(format!("heat kernel in dimension {d} (supported: 2..=5)")));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::param("kappa", format!("must be finite and > 0, got {kappa}")));
        }
        Ok(HeatKernel { d, kappa })
    }

    pub fn space(&self) -> Space {
        Space { d: self.d, kappa: self.kappa }
    }

    /// `H(t, rho)`; zero for `t < 0`.
    pub fn value(&self, t: f64, rho: f64) -> Result<f64> {
        if t < 0.0 {
            return Ok(0.0);
        }
        Ok(self.gauss_scaled(t, rho)? * (-rho * rho / (4.0 * t)).exp())
    }

    /// `H(t, rho) exp(rho^2 / 4t)`, free of the Gaussian underflow.
    pub fn gauss_scaled(&self, t: f64, rho: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::param("t", format!("must be finite and > 0, got {t}")));
        }
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::param("rho", format!("must be finite and >= 0, got {rho}")));
        }
        match self.d {
            3 => Ok(self.h3(t, rho)),
            5 => Ok(self.h5(t, rho)),
            2 => self.h2(t, rho),
            _ => self.h4(t, rho),
        }
    }

    fn h3(&self, t: f64, rho: f64) -> f64 {
        let k = self.kappa;
        (4.0 * PI * t).powf(-1.5) * x_over_sinh(k * rho) * (-k * k * t).exp()
    }

    fn h5(&self, t: f64, rho: f64) -> f64 {
        let k = self.kappa;
        let x = k * rho;
        // (kappa/S d/drho)^2 E = [kappa^2 q(x)/(2t) + (x/S)^2/(4t^2)] E
        let q = if x < 0.02 {
            let x2 = x * x;
            1.0 / 3.0 - 2.0 * x2 / 15.0 + 2.0 * x2 * x2 / 63.0
        } else {
            (x * x.cosh() - x.sinh()) / x.sinh().powi(3)
        };
        let xs = x_over_sinh(x);
        let bracket = k * k * q / (2.0 * t) + xs * xs / (4.0 * t * t);
        bracket * (-4.0 * k * k * t).exp() / (4.0 * PI * PI * (4.0 * PI * t).sqrt())
    }

    fn h2(&self, t: f64, rho: f64) -> Result<f64> {
        let k = self.kappa;
        let pref = k * (-k * k * t / 4.0).exp() / (t.powf(1.5) * 2f64.powf(2.5) * PI.powf(1.5));
        Ok(pref * self.even_integral(t, rho, false)?)
    }

    fn h4(&self, t: f64, rho: f64) -> Result<f64> {
        let k = self.kappa;
        let pref = -k * (-9.0 * k * k * t / 4.0).exp() / (t.powf(1.5) * 2f64.powf(3.5) * PI.powf(2.5));
        let at = |r: f64| -> Result<f64> { Ok(pref * k / (k * r).sinh() * self.even_integral(t, r, true)?) };
        // even in rho: below delta, interpolate in rho^2 from two nearby values
        let delta = 0.02 * (1.0 / k).min(t.sqrt());
        if rho >= delta {
            return at(rho);
        }
        let g = |r: f64| (-r * r / (4.0 * t)).exp();
        let (a, b) = (at(delta)? * g(delta), at(2.0 * delta)? * g(2.0 * delta));
        Ok((a + (b - a) * (rho * rho - delta * delta) / (3.0 * delta * delta)) / g(rho))
    }

    /// The even-dimension integral, or its `rho` derivative, times `exp(rho^2/4t)`.
    fn even_integral(&self, t: f64, rho: f64, derivative: bool) -> Result<f64> {
        let k = self.kappa;
        let u_max = (tail_end(k, t, rho) - rho).max(0.0).sqrt();
        let f = |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let s = rho + u * u;
            let den = (2.0 * (k * (rho + 0.5 * u * u)).sinh() * (0.5 * k * u * u).sinh()).sqrt();
            let base = 2.0 * u * s * (-u * u * (2.0 * rho + u * u) / (4.0 * t)).exp() / den;
            if derivative {
                base * (1.0 / s - s / (2.0 * t) - 0.5 * k / (k * (rho + 0.5 * u * u)).tanh())
            } else {
                base
            }
        };
        let brk = [u_max * 0.05, u_max * 0.2];
        integrate(f, 0.0, u_max, &brk, QUAD).map(|(v, _)| v)
    }

    /// `B(t, rho)` with `c = 1`.
    pub fn bound_shape(&self, t: f64, rho: f64) -> f64 {
        self.bound_shape_scaled(t, rho) * (-rho * rho / (4.0 * t)).exp()
    }

    /// `B(t, rho) exp(rho^2 / 4t)` with `c = 1`.
    pub fn bound_shape_scaled(&self, t: f64, rho: f64) -> f64 {
        let (k, d) = (self.kappa, self.d as f64);
        (-k * k * (d - 1.0).powi(2) * t / 4.0 - (d - 1.0) * k * rho / 2.0).exp()
            * (1.0 + k * rho + k * k * t).powf((d - 3.0) / 2.0)
            * (1.0 + k * rho)
            / (4.0 * PI * t).powf(d / 2.0)
    }

    /// `(4 pi t)^{-d/2} exp(-rho^2/4t)`
    pub fn euclidean(&self, t: f64, rho: f64) -> f64 {
        (4.0 * PI * t).powf(-(self.d as f64) / 2.0) * (-rho * rho / (4.0 * t)).exp()
    }
}

fn x_over_sinh(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x / x.sinh()
    }
}

/// Past this radius `exp(-s^2/4t + kappa s)` is below `e^-60` of its peak.
fn tail_end(kappa: f64, t: f64, rho: f64) -> f64 {
    rho.max(2.0 * kappa * t) + (240.0 * t).sqrt()
}

/// A tensor grid of `(t, rho)` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeRadiusGrid {
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
}

impl TimeRadiusGrid {
    /// `nt` log-spaced times in `[t0, t1]` and `nr` radii in `[0, r1]`; with
    /// `offset = true` every sample moves to the midpoint of its cell, which
    /// gives a grid disjoint from the unshifted one.
    pub fn sweep(t0: f64, t1: f64, nt: usize, r1: f64, nr: usize, offset: bool) -> Result<Self> {
        if !(t0 > 0.0 && t1 > t0 && r1 > 0.0) || nt < 2 || nr < 2 {
            return Err(Error::param("grid", "need 0 < t0 < t1, r1 > 0 and at least 2 samples per axis"));
        }
        let sh = if offset { 0.5 } else { 0.0 };
        let (nt_eff, nr_eff) = if offset { (nt - 1, nr - 1) } else { (nt, nr) };
        let times = (0..nt_eff)
            .map(|i| (t0.ln() + (t1 / t0).ln() * (i as f64 + sh) / (nt - 1) as f64).exp())
            .collect();
        let radii = (0..nr_eff).map(|i| r1 * (i as f64 + sh) / (nr - 1) as f64).collect();
        Ok(TimeRadiusGrid { times, radii })
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.times
            .iter()
            .flat_map(|&t| self.radii.iter().map(move |&r| (t, r)))
            .collect()
    }
}

/// `c B(t, rho)` with `c` fixed on a calibration grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelBound {
    pub kernel: HeatKernel,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// smallest `H exp(rho^2/4t)`; the sign of `H`
    pub min_value: f64,
    /// `max H / (c B)`
    pub max_ratio: f64,
    pub holds: bool,
}

impl KernelBound {
    /// `c = max H / B` over the calibration grid.
    pub fn calibrate(kernel: HeatKernel, grid: &TimeRadiusGrid) -> Result<Self> {
        let ratios: Vec<f64> = grid
            .points()
            .par_iter()
            .map(|&(t, r)| Ok(kernel.gauss_scaled(t, r)? / kernel.bound_shape_scaled(t, r)))
            .collect::<Result<_>>()?;
        let c = ratios.into_iter().fold(0.0, f64::max);
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Numerical(format!("bound calibration gave c = {c}")));
        }
        Ok(KernelBound { kernel, c })
    }

    pub fn value(&self, t: f64, rho: f64) -> f64 {
        self.c * self.kernel.bound_shape(t, rho)
    }

    /// `0 <= H <= c B` on `grid`.
    pub fn check(&self, grid: &TimeRadiusGrid) -> Result<BoundCheck> {
        let rows: Vec<(f64, f64)> = grid
            .points()
            .par_iter()
            .map(|&(t, r)| {
                let h = self.kernel.gauss_scaled(t, r)?;
                Ok((h, h / (self.c * self.kernel.bound_shape_scaled(t, r))))
            })
            .collect::<Result<_>>()?;
        let min_value = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let max_ratio = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        Ok(BoundCheck {
            min_value,
            max_ratio,
            holds: min_value >= 0.0 && max_ratio <= 1.0,
        })
    }
}

fn relative_defect(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Fourth-order central difference of `rho -> H(t, rho)`.
pub fn d_rho(kernel: &HeatKernel, t: f64, rho: f64) -> Result<f64> {
    let k = kernel.kappa;
    // the Gaussian factor varies on the scale 2t / rho
    let scale = 1.0 / (k + rho / (2.0 * t) + 1.0 / t.sqrt());
    let h = (1e-3 * scale).min(0.25 * rho);
    if !(h > 0.0) {
        return Err(Error::param("rho", "the difference stencil needs rho > 0"));
    }
    let f = |r: f64| kernel.value(t, r);
    Ok((-f(rho + 2.0 * h)? + 8.0 * f(rho + h)? - 8.0 * f(rho - h)? + f(rho - 2.0 * h)?) / (12.0 * h))
}

/// Largest relative gap between `H_{d+2}` and
/// `-exp(-d kappa^2 t) kappa / (2 pi sinh(kappa rho)) dH_d/drho`.
pub fn recurrence_up_check(d: usize, kappa: f64, grid: &TimeRadiusGrid) -> Result<f64> {
    let lo = HeatKernel::new(d, kappa)?;
    let hi = HeatKernel::new(d + 2, kappa)?;
    let defects: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|&(t, r)| {
            let lhs = hi.value(t, r)?;
            let rhs = -(-(d as f64) * kappa * kappa * t).exp() * kappa / (2.0 * PI * (kappa * r).sinh())
                * d_rho(&lo, t, r)?;
            Ok(relative_defect(lhs, rhs))
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// `int_rho^inf exp((2d-1) t kappa^2/4) H_{d+1}(t, mu) sinh(kappa mu) sqrt(2) dmu / sqrt(cosh(kappa mu) - cosh(kappa rho))`
pub fn descent(d: usize, kappa: f64, t: f64, rho: f64) -> Result<f64> {
    let up = HeatKernel::new(d + 1, kappa)?;
    let k = kappa;
    let u_max = (tail_end(k, t, rho) - rho).max(0.0).sqrt();
    let err = RefCell::new(None);
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let mu = rho + u * u;
        let den = (2.0 * (k * (rho + 0.5 * u * u)).sinh() * (0.5 * k * u * u).sinh()).sqrt();
        match up.value(t, mu) {
            Ok(h) => h * (k * mu).sinh() * SQRT_2 * 2.0 * u / den,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let (v, _) = integrate(f, 0.0, u_max, &[u_max * 0.05, u_max * 0.2], QUAD)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(((2.0 * d as f64 - 1.0) * t * k * k / 4.0).exp() * v)
}

/// Largest relative gap between `H_d` and [`descent`] over the grid.
pub fn descent_check(d: usize, kappa: f64, grid: &TimeRadiusGrid) -> Result<f64> {
    let kern = HeatKernel::new(d, kappa)?;
    let defects: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|&(t, r)| Ok(relative_defect(kern.value(t, r)?, descent(d, kappa, t, r)?)))
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// `int_0^inf H(t, rho) |S^{d-1}| (sinh(kappa rho)/kappa)^{d-1} drho`
pub fn total_mass(kernel: &HeatKernel, t: f64) -> Result<f64> {
    let space = kernel.space();
    let end = tail_end(kernel.kappa * (kernel.d as f64 - 1.0), t, 0.0);
    let err = RefCell::new(None);
    let f = |r: f64| match kernel.value(t, r) {
        Ok(h) => h * space.volume_weight(r),
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let peak = 2.0 * t.sqrt() + (kernel.d as f64 - 1.0) * kernel.kappa * t;
    let (v, _) = integrate(f, 0.0, end, &[0.5 * peak, peak, 2.0 * peak], QUAD)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(v * sphere_area(kernel.d))
}

/// `C_d` making the propagator mass-preserving: `1 / total_mass(t = 1)`.
pub fn normalization(kernel: &HeatKernel) -> Result<f64> {
    Ok(1.0 / total_mass(kernel, 1.0)?)
}

/// Least-squares slope of `ln(t^{3/2} H(t, rho))` against `t`.
pub fn large_time_rate(kernel: &HeatKernel, rho: f64, times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::param("times", "need at least two times"));
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .map(|&t| Ok((t, (t.powf(1.5) * kernel.value(t, rho)?).ln())))
        .collect::<Result<_>>()?;
    Ok(crate::localization::fit_line(&pts).0)
}

/// A radial initial datum `v0(rho)` vanishing for `rho >= support()`.
pub trait RadialProfile: Sync {
    fn value(&self, rho: f64) -> f64;
    fn support(&self) -> f64;
}

/// `amplitude exp(1 - 1/(1 - (rho/radius)^2))` inside `radius`, else 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub radius: f64,
}

impl Bump {
    pub fn new(amplitude: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !amplitude.is_finite() {
            return Err(Error::param("bump", "radius must be finite and > 0, amplitude finite"));
        }
        Ok(Bump { amplitude, radius })
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        let q = rho / self.radius;
        if q >= 1.0 {
            return 0.0;
        }
        let den = 1.0 - q * q;
        -self.value(rho) * 2.0 * q / (self.radius * den * den)
    }
}

impl RadialProfile for Bump {
    fn value(&self, rho: f64) -> f64 {
        let q = rho / self.radius;
        if q >= 1.0 {
            0.0
        } else {
            self.amplitude * (1.0 - 1.0 / (1.0 - q * q)).exp()
        }
    }

    fn support(&self) -> f64 {
        self.radius
    }
}

/// Samples on `rho_i = i h`, cubic Lagrange interpolation, zero past the last node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    pub step: f64,
    pub values: Vec<f64>,
}

impl RadialProfile for Tabulated {
    fn value(&self, rho: f64) -> f64 {
        let n = self.values.len();
        let x = rho / self.step;
        if x >= (n - 1) as f64 {
            return if x == (n - 1) as f64 { self.values[n - 1] } else { 0.0 };
        }
        let i = (x.floor() as usize).clamp(1, n.saturating_sub(3).max(1));
        let i0 = i - 1;
        let xs = [i0 as f64, i0 as f64 + 1.0, i0 as f64 + 2.0, i0 as f64 + 3.0];
        let mut v = 0.0;
        for j in 0..4 {
            let mut w = 1.0;
            for m in 0..4 {
                if m != j {
                    w *= (x - xs[m]) / (xs[j] - xs[m]);
                }
            }
            v += w * self.values[(i0 + j).min(n - 1)];
        }
        v
    }

    fn support(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }
}

/// `e^{t Delta} v0` for radial `v0`, by quadrature over the source radius
/// and the geodesic distance to the source point.
pub struct Propagator {
    pub kernel: HeatKernel,
    pub c_d: f64,
    pub opts: QuadOpts,
}

impl Propagator {
    pub fn new(kernel: HeatKernel) -> Result<Self> {
        if kernel.d < 3 {
            return Err(Error::Unsupported("the radial propagator needs d >= 3".into()));
        }
        let c_d = normalization(&kernel)?;
        Ok(Propagator {
            kernel,
            c_d,
            opts: QuadOpts {
                abs_tol: 0.0,
                rel_tol: 1e-10,
                max_intervals: 4000,
            },
        })
    }

    /// Spherical mean of `H(t, dist(x, y))` over `|y| = rho2`, times the
    /// sphere area, for `|x| = rho`.
    fn shell(&self, t: f64, rho: f64, rho2: f64) -> Result<f64> {
        let (k, d) = (self.kernel.kappa, self.kernel.d);
        let area = sphere_area(d);
        let (a, b) = (k * rho, k * rho2);
        if a < 1e-8 || b < 1e-8 {
            return Ok(area * self.kernel.value(t, if a < 1e-8 { rho2 } else { rho })?);
        }
        // cosh(kD) = cosh a cosh b - sinh a sinh b cos g  =>  sinh(kD) k dD = sinh a sinh b sin g dg
        let lo = (rho - rho2).abs();
        let hi = rho + rho2;
        let (sa, sb) = (a.sinh(), b.sinh());
        let sub = sphere_area(d - 1);
        let err = RefCell::new(None);
        let f = |dist: f64| {
            let kd = k * dist;
            let cosg = ((a.cosh() * b.cosh() - kd.cosh()) / (sa * sb)).clamp(-1.0, 1.0);
            let sin_pow = if d == 3 { 1.0 } else { (1.0 - cosg * cosg).max(0.0).sqrt().powi(d as i32 - 3) };
            match self.kernel.value(t, dist) {
                Ok(h) => h * sin_pow * k * kd.sinh() / (sa * sb),
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let w = t.sqrt();
        let brk = [lo + w, lo + 4.0 * w, lo + 12.0 * w];
        let (v, _) = integrate(f, lo, hi, &brk, self.opts)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(sub * v)
    }

    /// `w(rho, t) = C_d int H(t, dist) v0 dVol`.
    pub fn apply(&self, v0: &dyn RadialProfile, t: f64, rho: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::param("t", format!("must be finite and > 0, got {t}")));
        }
        let space = self.kernel.space();
        let end = v0.support();
        let err = RefCell::new(None);
        let f = |r2: f64| {
            let v = v0.value(r2);
            if v == 0.0 {
                return 0.0;
            }
            match self.shell(t, rho, r2) {
                Ok(s) => s * v * space.volume_weight(r2),
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let w = t.sqrt();
        let brk = [rho - 8.0 * w, rho - 2.0 * w, rho, rho + 2.0 * w, rho + 8.0 * w];
        let (v, _) = integrate(f, 0.0, end, &brk, self.opts)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(self.c_d * v)
    }

    /// [`Propagator::apply`] on a list of radii, in parallel.
    pub fn apply_many(&self, v0: &dyn RadialProfile, t: f64, radii: &[f64]) -> Result<Vec<f64>> {
        radii.par_iter().map(|&r| self.apply(v0, t, r)).collect()
    }

    /// Tabulate `w(., t)` on `[0, extent]` with step `h`.
    pub fn tabulate(&self, v0: &dyn RadialProfile, t: f64, extent: f64, h: f64) -> Result<Tabulated> {
        let n = (extent / h).ceil() as usize + 1;
        let radii: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        Ok(Tabulated {
            step: h,
            values: self.apply_many(v0, t, &radii)?,
        })
    }

    /// `dw/dt - Delta w` at `(rho, t)` by centred differences, relative to
    /// `max(|dw/dt|, |Delta w|)`.
    pub fn heat_residual(&self, v0: &dyn RadialProfile, t: f64, rho: f64) -> Result<f64> {
        let (k, d) = (self.kernel.kappa, self.kernel.d as f64);
        let dt = 1e-3 * t;
        let h = 0.02;
        if rho < 2.0 * h {
            return Err(Error::param("rho", "residual stencil needs rho >= 0.04"));
        }
        let w = |tt: f64, r: f64| self.apply(v0, tt, r);
        let wt = (-w(t + 2.0 * dt, rho)? + 8.0 * w(t + dt, rho)? - 8.0 * w(t - dt, rho)? + w(t - 2.0 * dt, rho)?)
            / (12.0 * dt);
        let s: Vec<f64> = [-2.0, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .map(|&j| w(t, rho + j * h))
            .collect::<Result<_>>()?;
        let w1 = (-s[4] + 8.0 * s[3] - 8.0 * s[1] + s[0]) / (12.0 * h);
        let w2 = (-s[4] + 16.0 * s[3] - 30.0 * s[2] + 16.0 * s[1] - s[0]) / (12.0 * h * h);
        let lap = w2 + (d - 1.0) * k / (k * rho).tanh() * w1;
        Ok(relative_defect(wt, lap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_time_is_zero() {
        let k = HeatKernel::new(3, 1.0).unwrap();
        assert_eq!(k.value(-1.0, 0.5).unwrap(), 0.0);
        assert!(k.value(0.0, 0.5).is_err());
        assert!(HeatKernel::new(6, 1.0).is_err());
    }

    #[test]
    fn h5_small_rho_branch_is_continuous() {
        let k = HeatKernel::new(5, 0.7).unwrap();
        let a = k.value(0.8, 0.019999999 / 0.7).unwrap();
        let b = k.value(0.8, 0.020000001 / 0.7).unwrap();
        assert!((a / b - 1.0).abs() < 1e-10, "{}", a / b - 1.0);
    }

    #[test]
    fn h4_small_rho_is_smooth() {
        let k = HeatKernel::new(4, 1.0).unwrap();
        let t = 0.5f64;
        let delta = 0.02 * t.sqrt();
        let a = k.value(t, 0.999 * delta).unwrap();
        let b = k.value(t, 1.001 * delta).unwrap();
        assert!((a / b - 1.0).abs() < 1e-6, "{a} {b}");
        assert!(k.value(t, 0.0).unwrap() > 0.0);
    }

    #[test]
    fn tabulated_interpolates_cubics_exactly() {
        let t = Tabulated {
            step: 0.1,
            values: (0..20).map(|i| (0.1 * i as f64).powi(3) - 0.1 * i as f64).collect(),
        };
        for x in [0.03, 0.55, 1.234, 1.85] {
            assert!((t.value(x) - (x * x * x - x)).abs() < 1e-13);
        }
        assert_eq!(t.value(5.0), 0.0);
    }
}

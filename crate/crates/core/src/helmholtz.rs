//! Bessel times spherical-harmonic expansions of solutions of
//! `Delta v + v = 0` and `Delta v + (alpha/|x|) v = 0` on `R^d`, and regular
//! radial solutions of the Helmholtz equation on `H^d(kappa)`.

use crate::error::{Error, Result};
use crate::geometry::{BallGrid, Jet, RadialFunction, Space};
use crate::ode::{Dopri5, OdeOpts};
use crate::specfun::{
    available_harmonics, bessel_j, bessel_j_reduced, compensated_sum, harmonic_dimension, real_harmonic,
    SphereQuadrature,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Which equation the expansion solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeFamily {
    /// `Delta v + v = 0`
    Helmholtz,
    /// `Delta v + (alpha/|x|) v = 0`
    CoulombZeroEnergy { alpha: f64 },
}

impl ModeFamily {
    fn validate(self) -> Result<Self> {
        if let ModeFamily::CoulombZeroEnergy { alpha } = self {
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(Error::param("alpha", format!("must be finite and > 0, got {alpha}")));
            }
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    /// Parity of a set of degrees; an empty set counts as even.
    pub fn of_degrees<I: IntoIterator<Item = usize>>(ls: I) -> Parity {
        let (mut even, mut odd) = (false, false);
        for l in ls {
            if l % 2 == 0 {
                even = true
            } else {
                odd = true
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    pub fn admits(self, l: usize) -> bool {
        match self {
            Parity::Even => l % 2 == 0,
            Parity::Odd => l % 2 == 1,
            Parity::Mixed => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub l: usize,
    pub m: usize,
    pub c: f64,
}

/// Radial profile of a mode of degree `l`:
/// `J_{l+d/2-1}(r) r^{1-d/2}` or `J_{2l+d-2}(sqrt(4 alpha r)) r^{1-d/2}`.
///
/// Both are written as `C r^l R_nu(x(r))` with `R_nu(x) = x^{-nu} J_nu(x)`,
/// which is regular at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile {
    pub d: usize,
    pub family: ModeFamily,
    pub l: usize,
    /// Bessel order
    pub order: f64,
    scale: f64,
}

impl ModeProfile {
    pub fn new(d: usize, family: ModeFamily, l: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::param("d", format!("dimension must be >= 2, got {d}")));
        }
        let family = family.validate()?;
        let (order, scale) = match family {
            ModeFamily::Helmholtz => (l as f64 + d as f64 / 2.0 - 1.0, 1.0),
            ModeFamily::CoulombZeroEnergy { alpha } => {
                let theta = (2 * l + d - 2) as f64;
                (theta, (4.0 * alpha).powf(theta / 2.0))
            }
        };
        Ok(ModeProfile {
            d,
            family,
            l,
            order,
            scale,
        })
    }

    /// Bessel argument at radius `r`.
    pub fn argument(&self, r: f64) -> f64 {
        match self.family {
            ModeFamily::Helmholtz => r,
            ModeFamily::CoulombZeroEnergy { alpha } => 2.0 * (alpha * r).sqrt(),
        }
    }

    /// False when `r` sits so close to a Bessel zero that the profile value
    /// is dominated by rounding: `|J_nu| <= 1e-6 sqrt(J_nu^2 + J_{nu+1}^2)`.
    pub fn usable_at(&self, r: f64) -> Result<bool> {
        let x = self.argument(r);
        if x == 0.0 {
            return Ok(self.l == 0);
        }
        let a = bessel_j(self.order, x)?;
        let b = bessel_j(self.order + 1.0, x)?;
        Ok(a.abs() > 1e-6 * a.hypot(b))
    }

    pub fn value_at(&self, r: f64) -> Result<f64> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::param("r", format!("must be finite and >= 0, got {r}")));
        }
        let x = self.argument(r);
        Ok(self.scale * r.powi(self.l as i32) * bessel_j_reduced(self.order, x)?)
    }
}

impl RadialFunction for ModeProfile {
    fn jet(&self, r: f64) -> Result<Jet> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::param("r", format!("derivatives need finite r > 0, got {r}")));
        }
        let x = self.argument(r);
        let nu = self.order;
        let r0 = bessel_j_reduced(nu, x)?;
        let r1 = bessel_j_reduced(nu + 1.0, x)?;
        let r2 = bessel_j_reduced(nu + 2.0, x)?;
        // h(r) = R_nu(x(r)) and its r-derivatives; R_nu'(x) = -x R_{nu+1}(x)
        let (h, h1, h2) = match self.family {
            ModeFamily::Helmholtz => (r0, -r * r1, -r1 + r * r * r2),
            ModeFamily::CoulombZeroEnergy { alpha } => (r0, -2.0 * alpha * r1, 4.0 * alpha * alpha * r2),
        };
        let l = self.l as i32;
        let lf = self.l as f64;
        let p0 = r.powi(l);
        let p1 = if l >= 1 { lf * r.powi(l - 1) } else { 0.0 };
        let p2 = if l >= 2 { lf * (lf - 1.0) * r.powi(l - 2) } else { 0.0 };
        Ok(Jet {
            v: p0 * h,
            d1: p1 * h + p0 * h1,
            d2: p2 * h + 2.0 * p1 * h1 + p0 * h2,
        }
        .scale(self.scale))
    }

    fn value(&self, r: f64) -> Result<f64> {
        self.value_at(r)
    }
}

/// `profile(|x|) Y_{l,m}(x/|x|)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselMode {
    pub profile: ModeProfile,
    pub m: usize,
}

impl BesselMode {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let (r, omega) = split_point(self.profile.d, x)?;
        Ok(self.profile.value_at(r)? * real_harmonic(self.profile.d, self.profile.l, self.m, &omega)?)
    }
}

pub fn bessel_mode(d: usize, family: ModeFamily, l: usize, m: usize) -> Result<BesselMode> {
    let profile = ModeProfile::new(d, family, l)?;
    check_mode_index(d, l, m)?;
    Ok(BesselMode { profile, m })
}

fn check_mode_index(d: usize, l: usize, m: usize) -> Result<()> {
    if m == 0 || m > harmonic_dimension(d, l) {
        return Err(Error::param(
            "m",
            format!("m={m} out of range 1..={} for l={l}, d={d}", harmonic_dimension(d, l)),
        ));
    }
    if m > available_harmonics(d, l) {
        return Err(Error::Unsupported(format!("non-zonal mode (l={l}, m={m}) in dimension {d}")));
    }
    Ok(())
}

/// Polar decomposition; the origin gets the last coordinate axis.
pub(crate) fn split_point(d: usize, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    if x.len() != d {
        return Err(Error::param("x", format!("expected {d} coordinates, got {}", x.len())));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !r.is_finite() {
        return Err(Error::param("x", "point has non-finite coordinates"));
    }
    if r == 0.0 {
        let mut e = vec![0.0; d];
        e[d - 1] = 1.0;
        return Ok((0.0, e));
    }
    Ok((r, x.iter().map(|v| v / r).collect()))
}

/// A finite sum `sum c_lm profile_l(r) Y_lm(omega)`, modes sorted by `(l, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpansionRecord", into = "ExpansionRecord")]
pub struct HelmholtzExpansion {
    d: usize,
    family: ModeFamily,
    modes: Vec<Mode>,
    parity: Parity,
}

impl HelmholtzExpansion {
    pub fn new(d: usize, family: ModeFamily, mut modes: Vec<Mode>) -> Result<Self> {
        if d < 2 {
            return Err(Error::param("d", format!("dimension must be >= 2, got {d}")));
        }
        let family = family.validate()?;
        for md in &modes {
            check_mode_index(d, md.l, md.m)?;
            if !md.c.is_finite() {
                return Err(Error::param("modes", format!("coefficient of ({}, {}) is not finite", md.l, md.m)));
            }
        }
        modes.sort_by_key(|md| (md.l, md.m));
        if let Some(w) = modes.windows(2).find(|w| (w[0].l, w[0].m) == (w[1].l, w[1].m)) {
            return Err(Error::param("modes", format!("duplicate mode ({}, {})", w[0].l, w[0].m)));
        }
        let parity = Parity::of_degrees(modes.iter().filter(|md| md.c != 0.0).map(|md| md.l));
        Ok(HelmholtzExpansion {
            d,
            family,
            modes,
            parity,
        })
    }

    pub fn empty(d: usize, family: ModeFamily) -> Result<Self> {
        Self::new(d, family, vec![])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn family(&self) -> ModeFamily {
        self.family
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.modes.iter().map(|m| m.l).max()
    }

    pub fn coefficient(&self, l: usize, m: usize) -> f64 {
        self.modes
            .binary_search_by_key(&(l, m), |md| (md.l, md.m))
            .map(|i| self.modes[i].c)
            .unwrap_or(0.0)
    }

    /// Value at a Cartesian point.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let (r, omega) = split_point(self.d, x)?;
        let mut profile: BTreeMap<usize, f64> = BTreeMap::new();
        let mut terms = Vec::with_capacity(self.modes.len());
        for md in &self.modes {
            let g = match profile.get(&md.l) {
                Some(&g) => g,
                None => {
                    let g = ModeProfile::new(self.d, self.family, md.l)?.value_at(r)?;
                    profile.insert(md.l, g);
                    g
                }
            };
            if g != 0.0 {
                terms.push(md.c * g * real_harmonic(self.d, md.l, md.m, &omega)?);
            }
        }
        Ok(compensated_sum(terms))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::param("expansion", e.to_string()))
    }
}

/// `x -> expansion(x)`
pub fn evaluate_expansion(expansion: &HelmholtzExpansion) -> impl Fn(&[f64]) -> Result<f64> + Sync + '_ {
    move |x| expansion.eval(x)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum FamilyTag {
    Helmholtz,
    CoulombZeroEnergy,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpansionRecord {
    d: usize,
    family: FamilyTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    parity: Parity,
    modes: Vec<Mode>,
}

impl From<HelmholtzExpansion> for ExpansionRecord {
    fn from(e: HelmholtzExpansion) -> Self {
        let (family, alpha) = match e.family {
            ModeFamily::Helmholtz => (FamilyTag::Helmholtz, None),
            ModeFamily::CoulombZeroEnergy { alpha } => (FamilyTag::CoulombZeroEnergy, Some(alpha)),
        };
        ExpansionRecord {
            d: e.d,
            family,
            alpha,
            parity: e.parity,
            modes: e.modes,
        }
    }
}

impl TryFrom<ExpansionRecord> for HelmholtzExpansion {
    type Error = Error;

    fn try_from(r: ExpansionRecord) -> Result<Self> {
        let family = match (r.family, r.alpha) {
            (FamilyTag::Helmholtz, None) => ModeFamily::Helmholtz,
            (FamilyTag::Helmholtz, Some(_)) => {
                return Err(Error::param("alpha", "only meaningful for coulomb_zero_energy"))
            }
            (FamilyTag::CoulombZeroEnergy, Some(alpha)) => ModeFamily::CoulombZeroEnergy { alpha },
            (FamilyTag::CoulombZeroEnergy, None) => {
                return Err(Error::param("alpha", "required for coulomb_zero_energy"))
            }
        };
        let e = HelmholtzExpansion::new(r.d, family, r.modes)?;
        if e.parity != r.parity {
            return Err(Error::param(
                "parity",
                format!("declared {:?} but the modes give {:?}", r.parity, e.parity),
            ));
        }
        Ok(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpandOptions {
    /// highest degree fitted
    pub l0: usize,
    /// probe radii, all `> 0`
    pub radii: Vec<f64>,
    /// modes with `|c| < floor` are dropped from the expansion
    pub floor: f64,
}

impl ExpandOptions {
    pub fn new(l0: usize, radii: Vec<f64>) -> Self {
        ExpandOptions {
            l0,
            radii,
            floor: 1e-12,
        }
    }
}

/// Per-mode outcome of [`expand`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeFit {
    pub l: usize,
    pub m: usize,
    pub c: f64,
    /// rounding-level size of `c`; modes at or below it are dropped
    pub noise: f64,
    /// rms of `v_lm(r_i) - c profile(r_i)` over the usable radii
    pub residual_rms: f64,
    pub usable_radii: usize,
    pub kept: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionFit {
    pub expansion: HelmholtzExpansion,
    pub fits: Vec<ModeFit>,
}

/// Fit `c_lm` for every `l <= l0`: project the target on `Y_lm` with the
/// sphere quadrature at each probe radius, then least-squares match the
/// projections against the mode profile.
pub fn expand(
    target: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
    family: ModeFamily,
    quad: &SphereQuadrature,
    opts: &ExpandOptions,
) -> Result<ExpansionFit> {
    let d = quad.d;
    if opts.l0 > quad.l_max {
        return Err(Error::param(
            "l0",
            format!("degree {} exceeds the quadrature exactness degree {}", opts.l0, quad.l_max),
        ));
    }
    if opts.radii.is_empty() {
        return Err(Error::param("radii", "need at least one probe radius"));
    }
    if let Some(r) = opts.radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        return Err(Error::param("radii", format!("probe radii must be finite and > 0, got {r}")));
    }
    if !(opts.floor >= 0.0) {
        return Err(Error::param("floor", "must be >= 0"));
    }
    let samples: Vec<Vec<f64>> = opts
        .radii
        .par_iter()
        .map(|&r| {
            quad.nodes
                .iter()
                .map(|w| {
                    let x: Vec<f64> = w.iter().map(|c| r * c).collect();
                    target(&x)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let vmax = samples.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let area: f64 = quad.weights.iter().sum();
    let mut fits = Vec::new();
    let mut modes = Vec::new();
    for l in 0..=opts.l0 {
        let profile = ModeProfile::new(d, family, l)?;
        let g: Vec<f64> = opts.radii.iter().map(|&r| profile.value_at(r)).collect::<Result<_>>()?;
        let usable: Vec<bool> = opts.radii.iter().map(|&r| profile.usable_at(r)).collect::<Result<_>>()?;
        for m in 1..=available_harmonics(d, l) {
            let y: Vec<f64> = quad
                .nodes
                .iter()
                .map(|w| real_harmonic(d, l, m, w))
                .collect::<Result<_>>()?;
            let proj: Vec<f64> = samples
                .iter()
                .map(|vals| compensated_sum(vals.iter().zip(&y).zip(&quad.weights).map(|((v, y), w)| v * y * w)))
                .collect();
            let idx: Vec<usize> = (0..g.len()).filter(|&i| usable[i]).collect();
            if idx.is_empty() {
                return Err(Error::IllConditionedFit { l, m });
            }
            let num = compensated_sum(idx.iter().map(|&i| proj[i] * g[i]));
            let den = compensated_sum(idx.iter().map(|&i| g[i] * g[i]));
            if !(den > 0.0) {
                return Err(Error::IllConditionedFit { l, m });
            }
            let c = num / den;
            let rms = (idx.iter().map(|&i| (proj[i] - c * g[i]).powi(2)).sum::<f64>() / idx.len() as f64).sqrt();
            // coefficient size produced by rounding in the projections alone
            let g_rms = (den / idx.len() as f64).sqrt();
            let noise = 32.0 * f64::EPSILON * vmax * area.sqrt() / g_rms;
            let kept = c.abs() >= opts.floor && c.abs() > noise;
            if kept {
                modes.push(Mode { l, m, c });
            }
            fits.push(ModeFit {
                l,
                m,
                c,
                noise,
                residual_rms: rms,
                usable_radii: idx.len(),
                kept,
            });
        }
    }
    Ok(ExpansionFit {
        expansion: HelmholtzExpansion::new(d, family, modes)?,
        fits,
    })
}

/// `max |target - expansion|` over the grid points.
pub fn truncation_error(
    target: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
    expansion: &HelmholtzExpansion,
    grid: &BallGrid,
) -> Result<f64> {
    if grid.d != expansion.d() {
        return Err(Error::param("grid", "grid dimension differs from the expansion's"));
    }
    let errs: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|x| Ok((target(x)? - expansion.eval(x)?).abs()))
        .collect::<Result<_>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// `(1/R) int_{B_R} |v|^2 dVol` for each `R`, plus the boundedness verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientReport {
    pub radii: Vec<f64>,
    pub quotients: Vec<f64>,
    /// max over the upper half of the `R` range within twice its median
    pub bounded: bool,
}

/// Agmon-Hormander quotients from spherical means `v2[i]` of `|v|^2` at
/// geodesic radii `rho[i]`. The samples must start at `0` and reach
/// `max R`; the radial integral is a trapezoid rule with linear
/// interpolation at each `R`.
pub fn agmon_hormander_quotient(space: &Space, rho: &[f64], v2: &[f64], radii: &[f64]) -> Result<QuotientReport> {
    if rho.len() != v2.len() || rho.len() < 2 {
        return Err(Error::param("samples", "need matching rho and |v|^2 arrays with >= 2 entries"));
    }
    if rho[0] != 0.0 {
        return Err(Error::param("rho", "samples must start at rho = 0"));
    }
    if rho.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("rho", "radii must be strictly increasing"));
    }
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0) || r > *rho.last().unwrap()) {
        return Err(Error::param("radii", "each R must lie in (0, max sampled rho]"));
    }
    let f: Vec<f64> = rho.iter().zip(v2).map(|(&p, &v)| v * space.volume_weight(p)).collect();
    let mut cum = vec![0.0; rho.len()];
    for i in 1..rho.len() {
        cum[i] = cum[i - 1] + 0.5 * (rho[i] - rho[i - 1]) * (f[i] + f[i - 1]);
    }
    let area = space.sphere_area();
    let quotients: Vec<f64> = radii
        .iter()
        .map(|&big_r| {
            let i = rho.partition_point(|&p| p < big_r).max(1);
            let t = (big_r - rho[i - 1]) / (rho[i] - rho[i - 1]);
            let fr = f[i - 1] + t * (f[i] - f[i - 1]);
            let part = 0.5 * (big_r - rho[i - 1]) * (f[i - 1] + fr);
            area * (cum[i - 1] + part) / big_r
        })
        .collect();
    let (lo, hi) = radii
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    let mid = 0.5 * (lo + hi);
    let mut upper: Vec<f64> = radii
        .iter()
        .zip(&quotients)
        .filter(|(r, _)| **r >= mid)
        .map(|(_, q)| *q)
        .collect();
    upper.sort_by(f64::total_cmp);
    let median = if upper.len() % 2 == 1 {
        upper[upper.len() / 2]
    } else {
        0.5 * (upper[upper.len() / 2 - 1] + upper[upper.len() / 2])
    };
    let max = upper.last().copied().unwrap_or(0.0);
    Ok(QuotientReport {
        radii: radii.to_vec(),
        quotients,
        bounded: max.is_finite() && max <= 2.0 * median,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialHelmholtzOptions {
    /// output sample spacing upper bound
    pub step: f64,
    pub rtol: f64,
    /// envelope fit window; defaults to `[rho_max/5, rho_max]`
    pub window: Option<(f64, f64)>,
    /// quotient radii; defaults to `1, 2, ..., floor(rho_max)`
    pub quotient_radii: Option<Vec<f64>>,
}

impl Default for RadialHelmholtzOptions {
    fn default() -> Self {
        RadialHelmholtzOptions {
            step: 0.0025,
            rtol: 1e-12,
            window: None,
            quotient_radii: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub window: (f64, f64),
    /// slope of `ln |w|` through the envelope peaks
    pub fitted_rate: f64,
    /// `-(d-1) kappa / 2`
    pub target_rate: f64,
    pub peaks: usize,
    /// max/min of `peak * exp(-target_rate * rho)` over the window
    pub compensated_spread: f64,
    pub envelope_bounded: bool,
    pub quotient: QuotientReport,
}

/// Samples of the regular radial solution, normalized so `w ~ rho^l` at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub space: Space,
    pub lambda: f64,
    pub l: usize,
    /// equally spaced, starting at 0
    pub rho: Vec<f64>,
    pub w: Vec<f64>,
    pub dw: Vec<f64>,
    pub report: DecayReport,
}

impl RadialSolution {
    /// Relative sup over `rho > 0` of the ODE residual, with `w''` from
    /// fourth-order differences of the returned `w'` samples.
    pub fn ode_residual(&self) -> f64 {
        let n = self.rho.len();
        let h = self.rho[1] - self.rho[0];
        let d = self.space.d as f64;
        let mu = (self.l * (self.l + self.space.d - 2)) as f64;
        let f = &self.dw;
        let mut sup = 0.0f64;
        for i in 1..n {
            let d2 = if i >= 2 && i + 2 < n {
                (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h)
            } else if i == 1 {
                (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
            } else if i == n - 2 {
                (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h)
            } else {
                (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5])
                    / (12.0 * h)
            };
            let (c1, c2) = radial_coefficients(self.space.kappa, self.rho[i]);
            let w = self.w[i];
            let res = d2 + (d - 1.0) * c1 * f[i] - mu * c2 * w + self.lambda * w;
            let sc = w.abs().max(f[i].abs()).max(d2.abs());
            if sc > 0.0 {
                sup = sup.max(res.abs() / sc);
            }
        }
        sup
    }

    /// Interpolated sign changes of `w` for `rho > 0`.
    pub fn zero_crossings(&self) -> Vec<f64> {
        let mut out = vec![];
        for i in 1..self.w.len() - 1 {
            let (a, b) = (self.w[i], self.w[i + 1]);
            if a == 0.0 {
                out.push(self.rho[i]);
            } else if a * b < 0.0 {
                out.push(self.rho[i] + (self.rho[i + 1] - self.rho[i]) * a / (a - b));
            }
        }
        out
    }
}

/// `(coth-term, csch^2-term)` of the radial operator:
/// `kappa coth(kappa rho)` and `kappa^2 / sinh^2(kappa rho)`.
fn radial_coefficients(kappa: f64, rho: f64) -> (f64, f64) {
    let x = kappa * rho;
    if x < 1e-4 {
        let x2 = x * x;
        (
            (1.0 + x2 / 3.0 - x2 * x2 / 45.0) / rho,
            (1.0 - x2 / 3.0 + x2 * x2 / 15.0) / (rho * rho),
        )
    } else {
        let s = x.sinh();
        (kappa * x.cosh() / s, kappa * kappa / (s * s))
    }
}

/// Regular solution of
/// `w'' + (d-1) kappa coth(kappa rho) w' - kappa^2 l(l+d-2)/sinh^2(kappa rho) w + lambda w = 0`
/// on `[0, rho_max]`, from a two-term Frobenius seed near the origin.
pub fn hyperbolic_radial_helmholtz(
    space: &Space,
    lambda: f64,
    l: usize,
    rho_max: f64,
    opts: &RadialHelmholtzOptions,
) -> Result<RadialSolution> {
    let d = space.d as f64;
    let k = space.kappa;
    let threshold = ((d - 1.0) * k / 2.0).powi(2);
    if !(lambda > threshold) || !lambda.is_finite() {
        return Err(Error::param(
            "lambda",
            format!(
                "must exceed the bottom of the continuous spectrum ((d-1) kappa/2)^2 = {threshold}, got {lambda}"
            ),
        ));
    }
    if !(rho_max > 0.0) || k * rho_max > 50.0 || !rho_max.is_finite() {
        return Err(Error::param("rho_max", format!("need 0 < rho_max and kappa rho_max <= 50, got {rho_max}")));
    }
    if !(opts.step > 0.0) || !(opts.rtol > 0.0) {
        return Err(Error::param("options", "step and rtol must be > 0"));
    }
    let mu = (l * (l + space.d - 2)) as f64;
    let lf = l as f64;
    let len = if k > 0.0 { (1.0 / k).min(1.0 / lambda.sqrt()) } else { 1.0 / lambda.sqrt() };
    let rho0 = 1e-4 * len;
    let a = -(lambda + k * k * ((d - 1.0) * lf + mu) / 3.0) / (4.0 * lf + 2.0 * d);
    let p = rho0.powi(l as i32);
    if !(p > 1e-250) {
        return Err(Error::Unsupported(format!("degree l={l} too large for the Frobenius seed")));
    }
    let w0 = p * (1.0 + a * rho0 * rho0);
    let dw0 = if l == 0 { 0.0 } else { lf * p / rho0 } + a * (lf + 2.0) * p * rho0;

    let n = (rho_max / opts.step).ceil() as usize;
    let n = n.max(6);
    let h = rho_max / n as f64;
    let mut rho = Vec::with_capacity(n + 1);
    let mut w = Vec::with_capacity(n + 1);
    let mut dw = Vec::with_capacity(n + 1);
    rho.push(0.0);
    w.push(if l == 0 { 1.0 } else { 0.0 });
    dw.push(if l == 1 { 1.0 } else { 0.0 });

    let mut rhs = |t: f64, y: &[f64; 2]| {
        let (c1, c2) = radial_coefficients(k, t);
        [y[1], -(d - 1.0) * c1 * y[1] + mu * c2 * y[0] - lambda * y[0]]
    };
    let ode = OdeOpts {
        rtol: opts.rtol,
        ..OdeOpts::default()
    };
    let mut solver = Dopri5::new(rho0, [w0, dw0], rho0, ode);
    for i in 1..=n {
        let t = if i == n { rho_max } else { h * i as f64 };
        solver.advance(&mut rhs, t)?;
        rho.push(t);
        w.push(solver.y[0]);
        dw.push(solver.y[1]);
    }

    let window = opts.window.unwrap_or((rho_max / 5.0, rho_max));
    let target_rate = -(d - 1.0) * k / 2.0;
    let peaks = envelope_peaks(&rho, &w, window);
    if peaks.len() < 2 {
        return Err(Error::Numerical(format!(
            "fewer than two envelope peaks in window [{}, {}]",
            window.0, window.1
        )));
    }
    let fitted_rate = slope(&peaks.iter().map(|p| (p.0, p.1.ln())).collect::<Vec<_>>());
    let comp: Vec<f64> = peaks.iter().map(|p| p.1 * (-target_rate * p.0).exp()).collect();
    let (cmin, cmax) = comp
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    let spread = cmax / cmin;
    let qradii = opts
        .quotient_radii
        .clone()
        .unwrap_or_else(|| (1..=rho_max.floor() as usize).map(|i| i as f64).collect());
    let v2: Vec<f64> = w.iter().map(|v| v * v).collect();
    let quotient = agmon_hormander_quotient(space, &rho, &v2, &qradii)?;
    Ok(RadialSolution {
        space: *space,
        lambda,
        l,
        rho,
        w,
        dw,
        report: DecayReport {
            window,
            fitted_rate,
            target_rate,
            peaks: peaks.len(),
            compensated_spread: spread,
            envelope_bounded: spread.is_finite() && spread <= 10.0,
            quotient,
        },
    })
}

/// Local maxima of `|w|` inside the window, refined by a parabola through
/// the neighbouring samples.
fn envelope_peaks(rho: &[f64], w: &[f64], window: (f64, f64)) -> Vec<(f64, f64)> {
    let mut out = vec![];
    for i in 1..w.len() - 1 {
        if rho[i] < window.0 || rho[i] > window.1 {
            continue;
        }
        let (a, b, c) = (w[i - 1].abs(), w[i].abs(), w[i + 1].abs());
        if b > a && b >= c {
            let den = a - 2.0 * b + c;
            let t = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            let h = rho[i + 1] - rho[i];
            out.push((rho[i] + t * h, b - 0.25 * (a - c) * t));
        }
    }
    out
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

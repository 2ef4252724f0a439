//! Exact eigenfunctions of the hyperbolic harmonic oscillator and Coulomb
//! operators that reproduce a given Helmholtz expansion near a point.
//!
//! A plan picks one energy level and, for every mode `(l, m)` of the
//! expansion, the radial quantum number `n_l` that puts `(n_l, l)` on that
//! level. The synthesized field `sum c_lm A_{n_l l}^{-1} psi_{n_l l m}` is
//! then an eigenfunction, and after the harmonic rescaling
//! `x -> x / sqrt(lambda)` (identity for Coulomb) it is close to the
//! expansion on a fixed ball.

use crate::error::{Error, Result};
use crate::geometry::{BallGrid, RadialFunction, RadialGrid, RadialInput, Space};
use crate::helmholtz::{bessel_mode, split_point, BesselMode, HelmholtzExpansion, ModeFamily, Parity};
use crate::spectra::{Eigenstate, Family, Operator};
use crate::specfun::{compensated_sum, real_harmonic};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalizationKind {
    HarmonicHyper,
    CoulombHyper,
}

impl LocalizationKind {
    pub fn family(self) -> Family {
        match self {
            LocalizationKind::HarmonicHyper => Family::Harmonic,
            LocalizationKind::CoulombHyper => Family::Coulomb,
        }
    }
}

impl std::fmt::Display for LocalizationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LocalizationKind::HarmonicHyper => "harmonic_hyper",
            LocalizationKind::CoulombHyper => "coulomb_hyper",
        })
    }
}

/// Curvature request: a fixed value, or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KappaRepr", into = "KappaRepr")]
pub enum KappaChoice {
    Auto,
    Fixed(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum KappaRepr {
    Value(f64),
    Word(String),
}

impl TryFrom<KappaRepr> for KappaChoice {
    type Error = String;
    fn try_from(r: KappaRepr) -> std::result::Result<Self, String> {
        match r {
            KappaRepr::Value(v) => Ok(KappaChoice::Fixed(v)),
            KappaRepr::Word(w) if w == "auto" => Ok(KappaChoice::Auto),
            KappaRepr::Word(w) => Err(format!("kappa must be a number or \"auto\", got \"{w}\"")),
        }
    }
}

impl From<KappaChoice> for KappaRepr {
    fn from(k: KappaChoice) -> Self {
        match k {
            KappaChoice::Auto => KappaRepr::Word("auto".into()),
            KappaChoice::Fixed(v) => KappaRepr::Value(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannedMode {
    pub l: usize,
    pub m: usize,
    pub c: f64,
    /// radial quantum number `n_l`
    pub n: usize,
    /// `ln A_{n_l l}`
    pub log_amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationPlan {
    pub kind: LocalizationKind,
    pub d: usize,
    pub alpha: f64,
    pub parity: Parity,
    pub l0: usize,
    pub nhat: usize,
    pub kappa: f64,
    pub kappa_auto: bool,
    /// Strict upper bound for `kappa` (harmonic: on `kappa^2`).
    pub kappa_bound: f64,
    /// Energy level `2n + l` (harmonic) or `n + l` (Coulomb) shared by all modes.
    pub level: usize,
    pub lambda: f64,
    pub modes: Vec<PlannedMode>,
    pub warnings: Vec<String>,
}

/// Radial quantum number of degree `l` for the plan's level.
pub fn radial_index(kind: LocalizationKind, parity: Parity, nhat: usize, l: usize) -> Option<usize> {
    match kind {
        LocalizationKind::HarmonicHyper => match parity {
            Parity::Odd => nhat.checked_sub((l + 1) / 2),
            _ => nhat.checked_sub(l / 2),
        },
        LocalizationKind::CoulombHyper => nhat.checked_sub(l),
    }
}

/// Bound on `kappa^2` (harmonic) or `kappa` (Coulomb) for a plan.
///
/// The harmonic condition `kappa^2 Q < beta(kappa)` with
/// `Q = 2 nhat + l0 + (d-1)/2` is solved exactly using
/// `beta^2 + kappa^2 beta = alpha`.
pub fn kappa_bound(kind: LocalizationKind, d: usize, alpha: f64, nhat: usize, l0: usize) -> f64 {
    let half = (d as f64 - 1.0) / 2.0;
    match kind {
        LocalizationKind::HarmonicHyper => {
            let q = 2.0 * nhat as f64 + l0 as f64 + half;
            (alpha * q / (q + 1.0)).sqrt() / q
        }
        LocalizationKind::CoulombHyper => {
            let s = nhat as f64 + half;
            alpha / (2.0 * s * s)
        }
    }
}

/// The `"auto"` schedule: harmonic `kappa^2 = min(bound/2, nhat^{-(d+1)/4}/10)`,
/// Coulomb `kappa = min(bound/2, nhat^{-5/4}/10)`.
pub fn auto_kappa(kind: LocalizationKind, d: usize, alpha: f64, nhat: usize, l0: usize) -> f64 {
    let b = kappa_bound(kind, d, alpha, nhat, l0);
    let n = (nhat.max(1)) as f64;
    match kind {
        LocalizationKind::HarmonicHyper => (0.5 * b).min(n.powf(-(d as f64 + 1.0) / 4.0) / 10.0).sqrt(),
        LocalizationKind::CoulombHyper => (0.5 * b).min(n.powf(-1.25) / 10.0),
    }
}

/// Validate a localization request and fix every quantum number.
///
/// Harmonic plans need a Helmholtz expansion of pure parity and take the
/// coupling from `alpha`; Coulomb plans need a zero-energy Coulomb
/// expansion whose coupling must equal `alpha`.
pub fn plan(
    kind: LocalizationKind,
    alpha: f64,
    expansion: &HelmholtzExpansion,
    nhat: usize,
    kappa: KappaChoice,
) -> Result<LocalizationPlan> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::param("alpha", format!("coupling must be finite and > 0, got {alpha}")));
    }
    let d = expansion.d();
    match (kind, expansion.family()) {
        (LocalizationKind::HarmonicHyper, ModeFamily::Helmholtz) => {}
        (LocalizationKind::CoulombHyper, ModeFamily::CoulombZeroEnergy { alpha: a }) => {
            if a != alpha {
                return Err(Error::param(
                    "alpha",
                    format!("plan coupling {alpha} differs from the expansion's {a}"),
                ));
            }
        }
        (k, f) => {
            return Err(Error::param("expansion", format!("{k} plans cannot use a {f:?} expansion")));
        }
    }
    let parity = expansion.parity();
    if kind == LocalizationKind::HarmonicHyper && parity == Parity::Mixed {
        return Err(Error::param(
            "expansion",
            "harmonic localization needs an even or an odd expansion, got mixed parity",
        ));
    }
    let l0 = expansion.max_degree().unwrap_or(0);
    if nhat < l0 || nhat == 0 {
        return Err(Error::param("nhat", format!("need nhat >= max(l0, 1), got nhat={nhat}, l0={l0}")));
    }
    let mut warnings = vec![];
    if nhat < 4 * l0 {
        warnings.push(format!("nhat={nhat} is below 4*l0={}; the Bessel regime may not be reached", 4 * l0));
    }
    let bound = kappa_bound(kind, d, alpha, nhat, l0);
    let (kappa, kappa_auto) = match kappa {
        KappaChoice::Auto => (auto_kappa(kind, d, alpha, nhat, l0), true),
        KappaChoice::Fixed(k) => {
            if !(k > 0.0) || !k.is_finite() {
                return Err(Error::param("kappa", format!("must be finite and > 0, got {k}")));
            }
            let q = match kind {
                LocalizationKind::HarmonicHyper => k * k,
                LocalizationKind::CoulombHyper => k,
            };
            if q >= bound {
                return Err(Error::param(
                    "kappa",
                    format!("kappa={k} violates the plan bound ({} < {bound:e} required)", if kind == LocalizationKind::HarmonicHyper { "kappa^2" } else { "kappa" }),
                ));
            }
            (k, false)
        }
    };
    let op = Operator::new(kind.family(), alpha, Space::new(d, kappa)?)?;
    let level = match (kind, parity) {
        (LocalizationKind::HarmonicHyper, Parity::Odd) => 2 * nhat - 1,
        (LocalizationKind::HarmonicHyper, _) => 2 * nhat,
        (LocalizationKind::CoulombHyper, _) => nhat,
    };
    let lambda = op.level_eigenvalue(level);
    if kind == LocalizationKind::HarmonicHyper && !(lambda > 0.0) {
        return Err(Error::Numerical(format!("harmonic plan energy {lambda} is not positive")));
    }
    let mut modes = Vec::with_capacity(expansion.modes().len());
    for md in expansion.modes() {
        let n = radial_index(kind, parity, nhat, md.l)
            .ok_or_else(|| Error::param("nhat", format!("nhat={nhat} too small for degree {}", md.l)))?;
        debug_assert_eq!(op.level(n, md.l), level);
        op.eigenstate(n, md.l, md.m)?;
        modes.push(PlannedMode {
            l: md.l,
            m: md.m,
            c: md.c,
            n,
            log_amplitude: op.log_amplitude_at(n, md.l, lambda),
        });
    }
    Ok(LocalizationPlan {
        kind,
        d,
        alpha,
        parity,
        l0,
        nhat,
        kappa,
        kappa_auto,
        kappa_bound: bound,
        level,
        lambda,
        modes,
        warnings,
    })
}

impl LocalizationPlan {
    pub fn operator(&self) -> Result<Operator> {
        Operator::new(self.kind.family(), self.alpha, Space::new(self.d, self.kappa)?)
    }

    pub fn space(&self) -> Space {
        Space { d: self.d, kappa: self.kappa }
    }

    /// Geodesic distance per unit of `|x|` in the comparison chart.
    pub fn scale(&self) -> f64 {
        match self.kind {
            LocalizationKind::HarmonicHyper => 1.0 / self.lambda.sqrt(),
            LocalizationKind::CoulombHyper => 1.0,
        }
    }

    /// Mode family of the Helmholtz profiles the plan converges to.
    pub fn mode_family(&self) -> ModeFamily {
        match self.kind {
            LocalizationKind::HarmonicHyper => ModeFamily::Helmholtz,
            LocalizationKind::CoulombHyper => ModeFamily::CoulombZeroEnergy { alpha: self.alpha },
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))
    }
}

struct SynthMode {
    planned: PlannedMode,
    /// `c A^{-1}`
    weight: f64,
    state: Eigenstate,
    /// index into the distinct radial parts
    radial: usize,
}

/// The eigenfunction `sum c_lm A^{-1} psi_{n_l l m}` of a plan.
pub struct LocalizedField {
    plan: LocalizationPlan,
    space: Space,
    modes: Vec<SynthMode>,
    radials: Vec<Eigenstate>,
}

pub fn synthesize(plan: &LocalizationPlan) -> Result<LocalizedField> {
    let op = plan.operator()?;
    let mut modes = Vec::with_capacity(plan.modes.len());
    let mut radials: Vec<Eigenstate> = vec![];
    for pm in &plan.modes {
        let state = op.eigenstate(pm.n, pm.l, pm.m)?;
        if state.lambda != plan.lambda {
            return Err(Error::Numerical(format!(
                "mode ({}, {}) has eigenvalue {} instead of {}",
                pm.l, pm.m, state.lambda, plan.lambda
            )));
        }
        let weight = pm.c * (-pm.log_amplitude).exp();
        if !weight.is_finite() {
            return Err(Error::Overflow { term: pm.n });
        }
        let radial = match radials.iter().position(|s| s.n == pm.n && s.l == pm.l) {
            Some(i) => i,
            None => {
                radials.push(state);
                radials.len() - 1
            }
        };
        modes.push(SynthMode {
            planned: *pm,
            weight,
            state,
            radial,
        });
    }
    Ok(LocalizedField {
        plan: plan.clone(),
        space: plan.space(),
        modes,
        radials,
    })
}

impl LocalizedField {
    pub fn plan(&self) -> &LocalizationPlan {
        &self.plan
    }

    pub fn lambda(&self) -> f64 {
        self.plan.lambda
    }

    /// Eigenstates with their weights `c A^{-1}`, in plan order.
    pub fn terms(&self) -> impl Iterator<Item = (f64, &Eigenstate)> {
        self.modes.iter().map(|m| (m.weight, &m.state))
    }

    /// Value at `r`-chart polar coordinates.
    pub fn eval_polar(&self, r: f64, omega: &[f64]) -> Result<f64> {
        let vals: Vec<f64> = self.radials.iter().map(|s| s.radial.value_at(r)).collect::<Result<_>>()?;
        let mut terms = Vec::with_capacity(self.modes.len());
        for m in &self.modes {
            let f = vals[m.radial];
            if f != 0.0 {
                terms.push(m.weight * f * real_harmonic(self.plan.d, m.planned.l, m.planned.m, omega)?);
            }
        }
        Ok(compensated_sum(terms))
    }

    /// `psi(exp_p(scale x))`, with `x` in the comparison chart.
    pub fn eval_rescaled(&self, x: &[f64]) -> Result<f64> {
        let (s, omega) = split_point(self.plan.d, x)?;
        let r = self.space.rho_to_r(s * self.plan.scale());
        self.eval_polar(r, &omega)
    }

    /// Gradient of [`LocalizedField::eval_rescaled`]: analytic radial
    /// derivative, angular part by central differences of `Y(x/|x|)`.
    pub fn gradient_rescaled(&self, x: &[f64]) -> Result<Vec<f64>> {
        let d = self.plan.d;
        let (s, omega) = split_point(d, x)?;
        if s < 1e-6 {
            return fd_gradient(&|y: &[f64]| self.eval_rescaled(y), x, 1e-3);
        }
        let scale = self.plan.scale();
        let rho = s * scale;
        let r = self.space.rho_to_r(rho);
        let chain = self.space.dr_drho(rho) * scale;
        let jets: Vec<(f64, f64)> = self
            .radials
            .iter()
            .map(|st| st.radial.jet(r).map(|j| (j.v, j.d1 * chain)))
            .collect::<Result<_>>()?;
        let mut grad = vec![vec![]; d];
        for m in &self.modes {
            let (l, mi) = (m.planned.l, m.planned.m);
            let (f, df) = jets[m.radial];
            let y = real_harmonic(d, l, mi, &omega)?;
            let gy = if l == 0 {
                vec![0.0; d]
            } else {
                fd_gradient(
                    &|p: &[f64]| {
                        let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                        let w: Vec<f64> = p.iter().map(|v| v / n).collect();
                        real_harmonic(d, l, mi, &w)
                    },
                    &omega,
                    1e-3,
                )?
            };
            // grad Y(x/|x|) = (grad Y)(omega) / s for the degree-0 extension
            for i in 0..d {
                grad[i].push(m.weight * (df * y * omega[i] + f * gy[i] / s));
            }
        }
        Ok(grad.into_iter().map(compensated_sum).collect())
    }

    /// Radial residual of every distinct `(n_l, l)` part against the plan's
    /// `lambda`, in the `r` chart.
    pub fn mode_residuals(&self, grid: &RadialGrid) -> Result<Vec<f64>> {
        let op = self.plan.operator()?;
        let v = |r: f64| op.potential(r).unwrap_or(f64::NAN);
        self.radials
            .iter()
            .map(|st| {
                crate::geometry::radial_schrodinger_residual(
                    &self.space,
                    st.l,
                    &v,
                    self.plan.lambda,
                    RadialInput::Analytic(&st.radial),
                    grid,
                )
                .map(|p| p.relative_sup)
            })
            .collect()
    }

    /// `r`-chart radius reached by the comparison-chart radius `s`.
    pub fn chart_radius(&self, s: f64) -> f64 {
        self.space.rho_to_r(s * self.plan.scale())
    }
}

/// Fourth-order central-difference gradient with step `h`.
pub fn fd_gradient(f: &dyn Fn(&[f64]) -> Result<f64>, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut g = Vec::with_capacity(x.len());
    let mut p = x.to_vec();
    for i in 0..x.len() {
        let mut at = |t: f64| {
            p[i] = x[i] + t;
            let v = f(&p);
            p[i] = x[i];
            v
        };
        let (a, b, c, e) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
        g.push((-a + 8.0 * b - 8.0 * c + e) / (12.0 * h));
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub d: usize,
    pub inner: f64,
    pub radius: f64,
    pub n_radii: usize,
    pub n_directions: usize,
    pub points: usize,
}

impl From<&BallGrid> for GridSummary {
    fn from(g: &BallGrid) -> Self {
        GridSummary {
            d: g.d,
            inner: g.inner,
            radius: g.radius,
            n_radii: g.radii.len(),
            n_directions: g.directions.len(),
            points: g.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeContribution {
    pub l: usize,
    pub m: usize,
    /// `max |c A^{-1} psi_{n_l l m}(exp(scale x)) - c B_lm(x)|`
    pub c0_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub grid: GridSummary,
    pub order: usize,
    /// geodesic distance per unit `|x|`: `1/sqrt(lambda)` or 1
    pub scale: f64,
    pub c0_error: f64,
    /// `max(C0 error, sup of the first partials of the difference)`
    pub c1_error: Option<f64>,
    pub per_mode: Vec<ModeContribution>,
}

/// Discrete `C^k` distance (`k` = 0 or 1) between the rescaled field and
/// `target` on `grid`. Partial derivatives of `target` use fourth-order
/// central differences with step `1e-3`.
pub fn localization_error(
    psi: &LocalizedField,
    target: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
    grid: &BallGrid,
    order: usize,
) -> Result<ErrorReport> {
    let plan = psi.plan();
    if order > 1 {
        return Err(Error::param("order", format!("only C^0 and C^1 errors are measured, got k={order}")));
    }
    if grid.d != plan.d {
        return Err(Error::param("grid", format!("grid dimension {} differs from the plan's {}", grid.d, plan.d)));
    }
    if plan.kind == LocalizationKind::CoulombHyper && !(grid.inner > 0.0) {
        return Err(Error::param(
            "grid",
            "Coulomb localization needs an annulus whose closure avoids the origin (inner radius > 0)",
        ));
    }
    let bessel: Vec<BesselMode> = plan
        .modes
        .iter()
        .map(|m| bessel_mode(plan.d, plan.mode_family(), m.l, m.m))
        .collect::<Result<_>>()?;
    let points = grid.points();
    let rows: Vec<(f64, f64, Vec<f64>)> = points
        .par_iter()
        .map(|x| {
            let (s, omega) = split_point(plan.d, x)?;
            let r = psi.chart_radius(s);
            let e0 = (psi.eval_polar(r, &omega)? - target(x)?).abs();
            let e1 = if order == 1 {
                let gp = psi.gradient_rescaled(x)?;
                let gt = fd_gradient(&|y: &[f64]| target(y), x, 1e-3)?;
                gp.iter().zip(&gt).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            } else {
                0.0
            };
            let per: Vec<f64> = psi
                .modes
                .iter()
                .zip(&bessel)
                .map(|(m, b)| {
                    let f = psi.radials[m.radial].radial.value_at(r)?;
                    let y = real_harmonic(plan.d, m.planned.l, m.planned.m, &omega)?;
                    Ok((m.weight * f * y - m.planned.c * b.eval(x)?).abs())
                })
                .collect::<Result<_>>()?;
            Ok((e0, e1, per))
        })
        .collect::<Result<_>>()?;
    let c0 = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let grad = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let per_mode = plan
        .modes
        .iter()
        .enumerate()
        .map(|(i, m)| ModeContribution {
            l: m.l,
            m: m.m,
            c0_error: rows.iter().map(|r| r.2[i]).fold(0.0, f64::max),
        })
        .collect();
    Ok(ErrorReport {
        grid: grid.into(),
        order,
        scale: plan.scale(),
        c0_error: c0,
        c1_error: (order == 1).then_some(c0.max(grad)),
        per_mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub nhat: usize,
    pub kappa: f64,
    pub lambda: f64,
    pub c0_error: f64,
    pub c1_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub kind: LocalizationKind,
    pub order: usize,
    pub rows: Vec<StudyRow>,
    /// least-squares slope of `ln error` against `ln nhat` (`C^order` error)
    pub slope: f64,
    /// 95% confidence half-width of the slope
    pub half_width: f64,
    /// steps along the list where the error did not decrease
    pub violations: usize,
}

/// Errors of the auto-curvature plans for each `nhat`, against the
/// expansion itself, and their log-log rate.
pub fn convergence_study(
    kind: LocalizationKind,
    alpha: f64,
    expansion: &HelmholtzExpansion,
    nhats: &[usize],
    grid: &BallGrid,
    order: usize,
) -> Result<ConvergenceStudy> {
    if nhats.len() < 3 {
        return Err(Error::param("nhat", format!("a rate needs at least 3 values, got {}", nhats.len())));
    }
    if nhats.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("nhat", "values must be strictly increasing"));
    }
    let target = |x: &[f64]| expansion.eval(x);
    let mut rows = Vec::with_capacity(nhats.len());
    for &n in nhats {
        let p = plan(kind, alpha, expansion, n, KappaChoice::Auto)?;
        let psi = synthesize(&p)?;
        let rep = localization_error(&psi, &target, grid, order)?;
        rows.push(StudyRow {
            nhat: n,
            kappa: p.kappa,
            lambda: p.lambda,
            c0_error: rep.c0_error,
            c1_error: rep.c1_error,
        });
    }
    let err = |r: &StudyRow| if order == 1 { r.c1_error.unwrap_or(r.c0_error) } else { r.c0_error };
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.nhat as f64).ln(), err(r).ln())).collect();
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::Numerical("an error of zero or non-finite size has no logarithm".into()));
    }
    let (slope, se) = fit_line(&pts);
    let violations = rows.windows(2).filter(|w| err(&w[1]) >= err(&w[0])).count();
    Ok(ConvergenceStudy {
        kind,
        order,
        slope,
        half_width: t_quantile_975(pts.len() - 2) * se,
        rows,
        violations,
    })
}

/// Least-squares slope and its standard error.
pub fn fit_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    if pts.len() < 3 {
        return (b, f64::NAN);
    }
    let sse: f64 = pts.iter().map(|p| (p.1 - my - b * (p.0 - mx)).powi(2)).sum();
    (b, (sse / (n - 2.0) / sxx).sqrt())
}

/// Two-sided 95% Student-t quantile.
fn t_quantile_975(dof: usize) -> f64 {
    if dof == 0 {
        return f64::INFINITY;
    }
    StudentsT::new(0.0, 1.0, dof as f64)
        .map(|t| t.inverse_cdf(0.975))
        .unwrap_or(f64::NAN)
}

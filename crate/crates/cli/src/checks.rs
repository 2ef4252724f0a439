//! Named verification suites. Each check is a measured value and the
//! tolerance it must meet; `verify` passes iff every check does.

use crate::output::{num, Artifact, Meta, RunOutput, Table};
use crate::{CliError, CliResult};
use hyperloc::geometry::{
    radial_schrodinger_residual, BallGrid, RadialCoord, RadialFunction, RadialGrid, RadialInput, Space,
};
use hyperloc::heatkernel::{
    descent_check, large_time_rate, recurrence_up_check, total_mass, Bump, HeatKernel, KernelBound, Propagator,
    RadialProfile, TimeRadiusGrid,
};
use hyperloc::helmholtz::{
    agmon_hormander_quotient, hyperbolic_radial_helmholtz, HelmholtzExpansion, Mode, ModeFamily, QuotientReport,
    RadialHelmholtzOptions,
};
use hyperloc::localization::{
    convergence_study, localization_error, plan, synthesize, KappaChoice, LocalizationKind,
};
use hyperloc::spectra::{Family, Operator};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Below(f64),
    Above(f64),
    Within(f64, f64),
    Equals(f64),
}

impl Bound {
    pub fn admits(self, v: f64) -> bool {
        match self {
            Bound::AtMost(b) => v <= b,
            Bound::AtLeast(b) => v >= b,
            Bound::Below(b) => v < b,
            Bound::Above(b) => v > b,
            Bound::Within(lo, hi) => (lo..=hi).contains(&v),
            Bound::Equals(b) => v == b,
        }
    }

    /// Distance outside the admitted set, relative to the bound's scale.
    fn excess(self, v: f64) -> f64 {
        if !v.is_finite() {
            return f64::INFINITY;
        }
        let rel = |a: f64, b: f64| (a - b) / b.abs().max(f64::MIN_POSITIVE);
        match self {
            Bound::AtMost(b) | Bound::Below(b) => rel(v, b),
            Bound::Above(b) | Bound::AtLeast(b) => rel(b, v),
            Bound::Within(lo, hi) => rel(lo, v).max(rel(v, hi)),
            Bound::Equals(b) => (v - b).abs(),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(b) => write!(f, "<= {b:e}"),
            Bound::AtLeast(b) => write!(f, ">= {b:e}"),
            Bound::Below(b) => write!(f, "< {b:e}"),
            Bound::Above(b) => write!(f, "> {b:e}"),
            Bound::Within(lo, hi) => write!(f, "in [{lo:e}, {hi:e}]"),
            Bound::Equals(b) => write!(f, "== {b:e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, bound: Bound) -> Self {
        Check {
            name: name.into(),
            value,
            bound,
        }
    }

    pub fn passed(&self) -> bool {
        self.bound.admits(self.value)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:e} ({})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.bound
        )
    }
}

/// The failing check furthest outside its bound, or the passing check
/// closest to its bound.
pub fn worst(checks: &[Check]) -> Option<&Check> {
    checks
        .iter()
        .max_by(|a, b| a.bound.excess(a.value).total_cmp(&b.bound.excess(b.value)))
}

pub const SUITES: [&str; 9] = [
    "eigen-residuals",
    "degeneracy",
    "limits",
    "localization",
    "helmholtz-decay",
    "heat-recurrence",
    "mass",
    "bounds",
    "propagator",
];

pub fn run_suite(name: &str) -> CliResult<Vec<Check>> {
    let checks = match name {
        "eigen-residuals" => eigen_residuals()?,
        "degeneracy" => degeneracy(),
        "limits" => {
            let mut v = flat_limit(Family::Harmonic)?;
            v.extend(flat_limit(Family::Coulomb)?);
            v.extend(heat_flat_limit()?);
            v
        }
        "localization" => {
            let mut v = harmonic_rate()?;
            v.extend(harmonic_end_to_end()?);
            v.extend(coulomb_end_to_end()?);
            v
        }
        "helmholtz-decay" => helmholtz_decay()?,
        "heat-recurrence" => {
            let mut v = heat_closed_form()?;
            v.extend(heat_recurrence()?);
            v
        }
        "mass" => heat_mass()?,
        "bounds" => heat_bounds()?,
        "propagator" => propagator()?,
        other => {
            return Err(CliError::Validation(format!(
                "unknown suite `{other}`; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    };
    Ok(checks)
}

/// Run one suite, or every suite for `all`. The second value is true when
/// every check passed.
pub fn run_verify(name: &str) -> CliResult<(RunOutput, bool)> {
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        return Err(CliError::Validation(format!(
            "unknown suite `{bad}`; expected one of {} or all",
            SUITES.join(", ")
        )));
    }
    let mut t = Table::new(&["suite", "check", "value", "tolerance", "pass"]);
    let mut summary = Vec::new();
    let mut all = Vec::new();
    for n in names {
        let checks = run_suite(n)?;
        for c in &checks {
            t.push(vec![n.into(), c.name.clone(), num(c.value), c.bound.to_string(), c.passed().to_string()]);
            summary.push(format!("[{n}] {c}"));
        }
        all.extend(checks);
    }
    let ok = all.iter().all(Check::passed);
    if let Some(w) = worst(&all) {
        summary.push(if ok {
            format!("all checks passed; closest to tolerance: {} = {:e} ({})", w.name, w.value, w.bound)
        } else {
            format!("worst defect: {} = {:e} ({})", w.name, w.value, w.bound)
        });
    }
    Ok((
        RunOutput {
            meta: Meta {
                command: format!("verify {name}"),
                config_hash: crate::output::text_hash(name),
            },
            artifacts: vec![Artifact::Csv {
                name: format!("verify_{name}.csv"),
                table: t,
            }],
            summary,
        },
        ok,
    ))
}

fn op(f: Family, alpha: f64, d: usize, k: f64) -> CliResult<Operator> {
    Ok(Operator::new(f, alpha, Space::new(d, k)?)?)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Harmonic => "harmonic",
        Family::Coulomb => "coulomb",
    }
}

/// Radial residuals of every admissible `n <= 8`, `l <= 4` on
/// `r in [0.05, 10]`, one check per operator.
pub fn eigen_residuals() -> CliResult<Vec<Check>> {
    let grid = RadialGrid::uniform(RadialCoord::Areal, 0.05, 10.0, 400)?;
    let mut out = Vec::new();
    for fam in [Family::Harmonic, Family::Coulomb] {
        for d in [2usize, 3] {
            for k in [0.1, 0.02] {
                let o = op(fam, 1.0, d, k)?;
                let v = |r: f64| o.potential(r).unwrap_or(f64::NAN);
                let mut worst = 0.0f64;
                let mut count = 0;
                for n in 0..=8 {
                    for l in 0..=4 {
                        if !o.admissible(n, l) {
                            continue;
                        }
                        let f = o.radial(n, l)?;
                        let res = radial_schrodinger_residual(
                            &o.space,
                            l,
                            &v,
                            o.eigenvalue(n, l)?,
                            RadialInput::Analytic(&f),
                            &grid,
                        )?;
                        worst = worst.max(res.relative_sup);
                        count += 1;
                    }
                }
                out.push(Check::new(
                    format!("{} d={d} kappa={k} residual over {count} states", family_name(fam)),
                    worst,
                    Bound::AtMost(1e-6),
                ));
            }
        }
    }
    Ok(out)
}

/// Largest spread of eigenvalues within one level, `N <= 20`.
pub fn degeneracy() -> Vec<Check> {
    let mut out = Vec::new();
    for fam in [Family::Harmonic, Family::Coulomb] {
        for d in [2usize, 3] {
            let o = match op(fam, 1.0, d, 0.01) {
                Ok(o) => o,
                Err(_) => continue,
            };
            let mut spread = 0.0f64;
            for big_n in 0..=20usize {
                let vals: Vec<f64> = (0..=big_n)
                    .filter_map(|l| {
                        let n = match fam {
                            Family::Harmonic if (big_n - l) % 2 == 0 => (big_n - l) / 2,
                            Family::Coulomb => big_n - l,
                            _ => return None,
                        };
                        o.eigenvalue(n, l).ok()
                    })
                    .collect();
                for v in &vals {
                    spread = spread.max((v - vals[0]).abs());
                }
            }
            out.push(Check::new(
                format!("{} d={d} level spread, N <= 20", family_name(fam)),
                spread,
                Bound::Equals(0.0),
            ));
        }
    }
    out
}

/// Sup distance between hyperbolic and flat radial parts as `kappa`
/// halves; the ratios of successive errors, over every `(n, l)` with
/// `n <= 6`, `l <= 3` admissible at both curvatures.
pub fn flat_limit_ratios(fam: Family) -> CliResult<Vec<(usize, usize, f64, f64)>> {
    let kappas = [0.08, 0.04, 0.02, 0.01];
    let rs: Vec<f64> = (1..=500).map(|i| 5.0 * i as f64 / 500.0).collect();
    let flat = op(fam, 1.0, 3, 0.0)?;
    let mut out = Vec::new();
    for n in 0..=6 {
        for l in 0..=3 {
            let fe = flat.radial(n, l)?;
            let mut errs = Vec::new();
            for &k in &kappas {
                let o = op(fam, 1.0, 3, k)?;
                if !o.admissible(n, l) {
                    errs.push(None);
                    continue;
                }
                let fh = o.radial(n, l)?;
                let mut e = 0.0f64;
                for &r in &rs {
                    e = e.max((fh.value(r)? - fe.value(r)?).abs());
                }
                errs.push(Some(e));
            }
            for (i, w) in errs.windows(2).enumerate() {
                if let (Some(a), Some(b)) = (w[0], w[1]) {
                    out.push((n, l, kappas[i], a / b));
                }
            }
        }
    }
    Ok(out)
}

pub fn flat_limit(fam: Family) -> CliResult<Vec<Check>> {
    let ratios = flat_limit_ratios(fam)?;
    let band = match fam {
        Family::Harmonic => Bound::Within(3.0, 5.0),
        Family::Coulomb => Bound::Within(1.7, 2.3),
    };
    let lo = ratios.iter().map(|r| r.3).fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().map(|r| r.3).fold(f64::NEG_INFINITY, f64::max);
    let name = family_name(fam);
    Ok(vec![
        Check::new(format!("{name} flat-limit error ratio, smallest of {}", ratios.len()), lo, band),
        Check::new(format!("{name} flat-limit error ratio, largest of {}", ratios.len()), hi, band),
    ])
}

/// Relative distance to the Euclidean Gaussian for tiny curvature.
pub fn heat_flat_limit() -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for d in 2..=5 {
        let kern = HeatKernel::new(d, 1e-3)?;
        let mut e = 0.0f64;
        for i in 0..=30 {
            let rho = 0.1 * i as f64;
            e = e.max((kern.value(1.0, rho)? / kern.euclidean(1.0, rho) - 1.0).abs());
        }
        out.push(Check::new(format!("heat kernel d={d} kappa=1e-3 vs Gaussian"), e, Bound::AtMost(1e-4)));
    }
    Ok(out)
}

fn single_mode(family: ModeFamily, modes: &[(usize, usize, f64)]) -> CliResult<HelmholtzExpansion> {
    Ok(HelmholtzExpansion::new(3, family, modes.iter().map(|&(l, m, c)| Mode { l, m, c }).collect())?)
}

/// Log-log rate of the `l = 0` error on the unit ball, `d = 3`.
pub fn harmonic_rate() -> CliResult<Vec<Check>> {
    let e = single_mode(ModeFamily::Helmholtz, &[(0, 1, 1.0)])?;
    let grid = BallGrid::new(3, 1.0, 64, 8)?;
    let st = convergence_study(LocalizationKind::HarmonicHyper, 1.0, &e, &[40, 80, 160, 320], &grid, 0)?;
    Ok(vec![
        Check::new("harmonic l=0 rate slope, nhat 40..320", st.slope, Bound::Within(-2.0, -0.5)),
        Check::new("harmonic l=0 rate, non-decreasing steps", st.violations as f64, Bound::AtMost(1.0)),
    ])
}

/// Worst mode residual of a synthesized field on the image of the ball of
/// radius `s` under the rescaling.
fn synthesized_residual(p: &hyperloc::localization::LocalizationPlan, s: f64) -> CliResult<f64> {
    let psi = synthesize(p)?;
    let r = psi.chart_radius(s);
    let grid = RadialGrid::uniform(RadialCoord::Areal, 0.02 * r, r, 300)?;
    Ok(psi.mode_residuals(&grid)?.into_iter().fold(0.0, f64::max))
}

/// Largest gap between a mode's own eigenvalue and the plan's.
fn eigenvalue_spread(p: &hyperloc::localization::LocalizationPlan) -> CliResult<f64> {
    let o = p.operator()?;
    let mut s = 0.0f64;
    for m in &p.modes {
        s = s.max((o.eigenvalue(m.n, m.l)? - p.lambda).abs());
    }
    Ok(s)
}

pub fn harmonic_end_to_end() -> CliResult<Vec<Check>> {
    let e = single_mode(ModeFamily::Helmholtz, &[(0, 1, 1.0), (2, 1, 0.5)])?;
    let p = plan(LocalizationKind::HarmonicHyper, 1.0, &e, 160, KappaChoice::Auto)?;
    let psi = synthesize(&p)?;
    let grid = BallGrid::new(3, 1.0, 64, 12)?;
    let rep = localization_error(&psi, &|x: &[f64]| e.eval(x), &grid, 1)?;
    Ok(vec![
        Check::new("harmonic nhat=160 C0 error, unit ball", rep.c0_error, Bound::AtMost(0.05)),
        Check::new(
            "harmonic nhat=160 C1 error, unit ball",
            rep.c1_error.unwrap_or(f64::NAN),
            Bound::AtMost(0.2),
        ),
        Check::new("harmonic nhat=160 mode residuals", synthesized_residual(&p, 1.0)?, Bound::AtMost(1e-6)),
        Check::new("harmonic nhat=160 eigenvalue spread", eigenvalue_spread(&p)?, Bound::Equals(0.0)),
    ])
}

pub fn coulomb_end_to_end() -> CliResult<Vec<Check>> {
    let e = single_mode(ModeFamily::CoulombZeroEnergy { alpha: 1.0 }, &[(0, 1, 1.0), (1, 1, 0.5)])?;
    let p = plan(LocalizationKind::CoulombHyper, 1.0, &e, 160, KappaChoice::Auto)?;
    let psi = synthesize(&p)?;
    let grid = BallGrid::annulus(3, 0.3, 1.5, 64, 12)?;
    let rep = localization_error(&psi, &|x: &[f64]| e.eval(x), &grid, 0)?;
    Ok(vec![
        Check::new("coulomb nhat=160 C0 error, annulus 0.3..1.5", rep.c0_error, Bound::AtMost(0.05)),
        Check::new("coulomb rescaling factor", rep.scale, Bound::Equals(1.0)),
        Check::new("coulomb nhat=160 eigenvalue spread", eigenvalue_spread(&p)?, Bound::Equals(0.0)),
    ])
}

/// `max / median` of the quotients over the upper half of the radius range.
pub fn quotient_spread(q: &QuotientReport) -> f64 {
    let lo = q.radii.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = q.radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let mut upper: Vec<f64> = q
        .radii
        .iter()
        .zip(&q.quotients)
        .filter(|(r, _)| **r >= mid)
        .map(|(_, v)| *v)
        .collect();
    upper.sort_by(f64::total_cmp);
    let n = upper.len();
    if n == 0 {
        return f64::NAN;
    }
    let median = if n % 2 == 1 {
        upper[n / 2]
    } else {
        0.5 * (upper[n / 2 - 1] + upper[n / 2])
    };
    upper[n - 1] / median
}

/// Radial Helmholtz solution in `H^3(1)`, `lambda = 2`, and the constant
/// function as a negative control.
pub fn helmholtz_decay() -> CliResult<Vec<Check>> {
    let s = Space::new(3, 1.0)?;
    let opts = RadialHelmholtzOptions {
        window: Some((5.0, 25.0)),
        ..Default::default()
    };
    let sol = hyperbolic_radial_helmholtz(&s, 2.0, 0, 25.0, &opts)?;
    let r = &sol.report;
    let rho: Vec<f64> = (0..=2500).map(|i| i as f64 * 0.01).collect();
    let radii: Vec<f64> = (1..=25).map(|i| i as f64).collect();
    let control = agmon_hormander_quotient(&s, &rho, &vec![1.0; rho.len()], &radii)?;
    Ok(vec![
        Check::new(
            "envelope rate relative to -(d-1)kappa/2 over [5, 25]",
            (r.fitted_rate / r.target_rate - 1.0).abs(),
            Bound::AtMost(0.05),
        ),
        Check::new("quotient max/median, upper half of R", quotient_spread(&r.quotient), Bound::AtMost(2.0)),
        Check::new("constant field quotient max/median", quotient_spread(&control), Bound::Above(2.0)),
    ])
}

/// `d = 3` closed form against `-(1/(2 pi sqrt(4 pi t))) (kappa/sinh) d/drho`
/// of the Gaussian factor, by fourth-order differences.
pub fn heat_closed_form() -> CliResult<Vec<Check>> {
    let kern = HeatKernel::new(3, 1.0)?;
    let k = kern.kappa;
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 5.0] {
        let e = |r: f64| (-k * k * t - r * r / (4.0 * t)).exp();
        for rho in [0.5, 1.0, 2.0, 4.0] {
            let h = 1e-3;
            let de = (-e(rho + 2.0 * h) + 8.0 * e(rho + h) - 8.0 * e(rho - h) + e(rho - 2.0 * h)) / (12.0 * h);
            let op_form = -1.0 / (2.0 * PI * (4.0 * PI * t).sqrt()) * k / (k * rho).sinh() * de;
            let closed = kern.value(t, rho)?;
            worst = worst.max((closed - op_form).abs() / closed.abs());
        }
    }
    Ok(vec![Check::new("d=3 closed form vs differentiated Gaussian", worst, Bound::AtMost(1e-8))])
}

fn line_grid(times: &[f64], r0: f64, r1: f64, n: usize) -> TimeRadiusGrid {
    TimeRadiusGrid {
        times: times.to_vec(),
        radii: (0..n).map(|i| r0 + (r1 - r0) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn heat_recurrence() -> CliResult<Vec<Check>> {
    let up = line_grid(&[0.2, 1.0, 5.0], 0.2, 10.0, 50);
    let down = line_grid(&[0.2, 1.0, 5.0], 0.0, 10.0, 26);
    Ok(vec![
        Check::new("recurrence d=3 -> 5", recurrence_up_check(3, 1.0, &up)?, Bound::AtMost(1e-6)),
        Check::new("recurrence d=2 -> 4", recurrence_up_check(2, 1.0, &up)?, Bound::AtMost(1e-4)),
        Check::new("descent d=2 <- 3", descent_check(2, 1.0, &down)?, Bound::AtMost(1e-5)),
        Check::new("descent d=4 <- 5", descent_check(4, 1.0, &down)?, Bound::AtMost(1e-4)),
    ])
}

pub fn heat_mass() -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    let k3 = HeatKernel::new(3, 1.0)?;
    for t in [0.1, 1.0, 5.0] {
        out.push(Check::new(
            format!("d=3 |mass - 1| at t={t}"),
            (total_mass(&k3, t)? - 1.0).abs(),
            Bound::AtMost(1e-6),
        ));
    }
    for d in [2usize, 4, 5] {
        let kern = HeatKernel::new(d, 1.0)?;
        out.push(Check::new(
            format!("d={d} |mass - 1| at t=1"),
            (total_mass(&kern, 1.0)? - 1.0).abs(),
            Bound::AtMost(1e-6),
        ));
    }
    Ok(out)
}

pub fn heat_bounds() -> CliResult<Vec<Check>> {
    let kern = HeatKernel::new(3, 1.0)?;
    let cal = TimeRadiusGrid::sweep(0.01, 10.0, 25, 20.0, 81, false)?;
    let ver = TimeRadiusGrid::sweep(0.01, 10.0, 25, 20.0, 81, true)?;
    let b = KernelBound::calibrate(kern, &cal)?;
    let chk = b.check(&ver)?;
    let rate = large_time_rate(&kern, 1.0, &[10.0, 20.0, 30.0, 40.0, 50.0])?;
    // -kappa^2 (d-1)^2 / 4
    let want = -kern.kappa * kern.kappa;
    Ok(vec![
        Check::new("d=3 min H on the verification grid", chk.min_value, Bound::AtLeast(0.0)),
        Check::new("d=3 max H/B on the verification grid", chk.max_ratio, Bound::AtMost(1.0)),
        Check::new("d=3 large-t rate relative error", (rate / want - 1.0).abs(), Bound::AtMost(0.05)),
    ])
}

pub fn propagator() -> CliResult<Vec<Check>> {
    let p = Propagator::new(HeatKernel::new(3, 1.0)?)?;
    let v0 = Bump::new(1.0, 1.0)?;
    let radii: Vec<f64> = (0..=12).map(|i| 0.1 * i as f64).collect();
    let mut errs = Vec::new();
    for t in [1e-2, 1e-3] {
        let w = p.apply_many(&v0, t, &radii)?;
        errs.push(w.iter().zip(&radii).map(|(a, &r)| (a - v0.value(r)).abs()).fold(0.0, f64::max));
    }
    let mut residual = 0.0f64;
    for (t, rho) in [(0.1, 0.5), (0.3, 0.2), (0.5, 1.0), (1.0, 2.0)] {
        residual = residual.max(p.heat_residual(&v0, t, rho)?);
    }
    let half = p.tabulate(&v0, 0.5, 9.0, 0.02)?;
    let rs: Vec<f64> = (0..=15).map(|i| 0.2 * i as f64).collect();
    let two = p.apply_many(&half, 0.5, &rs)?;
    let one = p.apply_many(&v0, 1.0, &rs)?;
    let semigroup = two.iter().zip(&one).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::new("recovery error ratio t=1e-3 / t=1e-2", errs[1] / errs[0], Bound::Below(1.0)),
        Check::new("heat equation residual", residual, Bound::AtMost(1e-3)),
        Check::new("semigroup defect t=0.5+0.5", semigroup, Bound::AtMost(1e-3)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_worst() {
        let c = [
            Check::new("a", 0.5, Bound::AtMost(1.0)),
            Check::new("b", 3.0, Bound::Within(1.7, 2.3)),
            Check::new("c", 2.0, Bound::AtMost(1.0)),
        ];
        assert!(c[0].passed() && !c[1].passed() && !c[2].passed());
        assert_eq!(worst(&c).unwrap().name, "c");
        assert!(Bound::Equals(0.0).admits(0.0));
        assert!(!Bound::Above(2.0).admits(2.0));
    }

    #[test]
    fn unknown_suite_is_a_validation_error() {
        assert_eq!(run_verify("nope").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn degeneracy_suite_is_exact() {
        assert!(degeneracy().iter().all(Check::passed));
    }
}

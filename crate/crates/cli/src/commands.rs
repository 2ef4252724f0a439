//! The `expand`, `localize`, `study` and `heat` commands. Each returns its
//! tables in memory; the binary writes them, the regression runner compares
//! them.

use crate::config::{
    ExpandConfig, FitConfig, HeatKernelConfig, HeatSolveConfig, LocalizeConfig, Preset, StudyConfig, TargetConfig,
};
use crate::output::{config_hash, num, opt_num, to_json, Artifact, Meta, RunOutput, Table};
use crate::CliResult;
use hyperloc::heatkernel::{
    descent, recurrence_up_check, Bump, HeatKernel, KernelBound, Propagator, RadialProfile, TimeRadiusGrid,
};
use hyperloc::helmholtz::{expand, ExpandOptions, ExpansionFit, HelmholtzExpansion, ModeFamily};
use hyperloc::localization::{convergence_study, localization_error, plan, synthesize};
use hyperloc::specfun::SphereQuadrature;
use serde_json::json;

type TargetFn = Box<dyn Fn(&[f64]) -> hyperloc::Result<f64> + Sync + Send>;

/// The target field of a config as a callable.
pub fn target_function(d: usize, family: ModeFamily, cfg: &TargetConfig) -> CliResult<TargetFn> {
    let dot = |k: &[f64], x: &[f64]| k.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    Ok(match cfg.preset {
        Preset::PlaneWave => {
            let k = cfg.wavevector.clone().unwrap_or_default();
            Box::new(move |x: &[f64]| Ok(dot(&k, x).cos()))
        }
        Preset::SineWave => {
            let k = cfg.wavevector.clone().unwrap_or_default();
            Box::new(move |x: &[f64]| Ok(dot(&k, x).sin()))
        }
        Preset::Modes => {
            let e = HelmholtzExpansion::new(d, family, cfg.modes.clone())?;
            Box::new(move |x: &[f64]| e.eval(x))
        }
    })
}

fn fit_target(d: usize, family: ModeFamily, target: &TargetFn, fit: &FitConfig) -> CliResult<ExpansionFit> {
    let quad = SphereQuadrature::new(d, fit.degree())?;
    let opts = ExpandOptions {
        l0: fit.l0,
        radii: fit.radii.clone(),
        floor: fit.floor,
    };
    Ok(expand(target, family, &quad, &opts)?)
}

/// The expansion to localize: fitted when a `[fit]` table is given,
/// otherwise the mode list itself.
fn expansion_of(d: usize, family: ModeFamily, target_cfg: &TargetConfig, fit: Option<&FitConfig>, target: &TargetFn) -> CliResult<HelmholtzExpansion> {
    match fit {
        Some(f) => Ok(fit_target(d, family, target, f)?.expansion),
        None => Ok(HelmholtzExpansion::new(d, family, target_cfg.modes.clone())?),
    }
}

pub fn run_expand(cfg: &ExpandConfig) -> CliResult<RunOutput> {
    let family = cfg.mode_family();
    let target = target_function(cfg.d, family, &cfg.target)?;
    let fit = fit_target(cfg.d, family, &target, &cfg.fit)?;
    let mut t = Table::new(&["l", "m", "c", "noise", "residual_rms", "usable_radii", "kept"]);
    for f in &fit.fits {
        t.push(vec![
            f.l.to_string(),
            f.m.to_string(),
            num(f.c),
            num(f.noise),
            num(f.residual_rms),
            f.usable_radii.to_string(),
            f.kept.to_string(),
        ]);
    }
    let kept = fit.expansion.modes().len();
    Ok(RunOutput {
        meta: Meta {
            command: "expand".into(),
            config_hash: config_hash(cfg)?,
        },
        artifacts: vec![
            Artifact::Json {
                name: "expansion.json".into(),
                text: fit.expansion.to_json()?,
            },
            Artifact::Csv {
                name: "expand_fit.csv".into(),
                table: t,
            },
        ],
        summary: vec![format!(
            "fitted {} modes up to degree {}, kept {kept}, parity {:?}",
            fit.fits.len(),
            cfg.fit.l0,
            fit.expansion.parity()
        )],
    })
}

const RUN_COLUMNS: [&str; 6] = ["nhat", "kappa", "lambda", "c0_error", "c1_error", "slope"];

pub fn run_localize(cfg: &LocalizeConfig) -> CliResult<RunOutput> {
    let family = cfg.mode_family();
    let target = target_function(cfg.d, family, &cfg.target)?;
    let expansion = expansion_of(cfg.d, family, &cfg.target, cfg.fit.as_ref(), &target)?;
    let grid = cfg.grid.build(cfg.d)?;
    let mut t = Table::new(&RUN_COLUMNS);
    let mut runs = Vec::new();
    let mut summary = Vec::new();
    for &n in &cfg.nhat {
        for &k in &cfg.kappa {
            let p = plan(cfg.kind, cfg.alpha, &expansion, n, k)?;
            for w in &p.warnings {
                summary.push(format!("warning (nhat={n}): {w}"));
            }
            let psi = synthesize(&p)?;
            let rep = localization_error(&psi, &*target, &grid, cfg.order)?;
            t.push(vec![
                n.to_string(),
                num(p.kappa),
                num(p.lambda),
                num(rep.c0_error),
                opt_num(rep.c1_error),
                String::new(),
            ]);
            summary.push(format!(
                "nhat={n} kappa={:e} lambda={:e} C0={:e}{}",
                p.kappa,
                p.lambda,
                rep.c0_error,
                rep.c1_error.map(|c| format!(" C1={c:e}")).unwrap_or_default()
            ));
            runs.push(json!({ "plan": p, "report": rep }));
        }
    }
    let doc = json!({ "expansion": expansion, "runs": runs });
    Ok(RunOutput {
        meta: Meta {
            command: "localize".into(),
            config_hash: config_hash(cfg)?,
        },
        artifacts: vec![
            Artifact::Csv {
                name: "localize.csv".into(),
                table: t,
            },
            Artifact::Json {
                name: "localize.json".into(),
                text: to_json(&doc)?,
            },
        ],
        summary,
    })
}

pub fn run_study(cfg: &StudyConfig) -> CliResult<RunOutput> {
    let lc = cfg.as_localize();
    let family = lc.mode_family();
    let target = target_function(cfg.d, family, &cfg.target)?;
    let expansion = expansion_of(cfg.d, family, &cfg.target, cfg.fit.as_ref(), &target)?;
    let grid = cfg.grid.build(cfg.d)?;
    let st = convergence_study(cfg.kind, cfg.alpha, &expansion, &cfg.nhat, &grid, cfg.order)?;
    let mut t = Table::new(&RUN_COLUMNS);
    for r in &st.rows {
        t.push(vec![
            r.nhat.to_string(),
            num(r.kappa),
            num(r.lambda),
            num(r.c0_error),
            opt_num(r.c1_error),
            num(st.slope),
        ]);
    }
    let summary = vec![format!(
        "slope {:.4} +/- {:.4} (95%), {} non-decreasing steps",
        st.slope, st.half_width, st.violations
    )];
    Ok(RunOutput {
        meta: Meta {
            command: "study".into(),
            config_hash: config_hash(cfg)?,
        },
        artifacts: vec![
            Artifact::Csv {
                name: "study.csv".into(),
                table: t,
            },
            Artifact::Json {
                name: "study.json".into(),
                text: to_json(&st)?,
            },
        ],
        summary,
    })
}

/// Kernel table with the calibrated bound and the dimension-shift defects
/// where the neighbouring dimension is supported.
pub fn run_heat_kernel(cfg: &HeatKernelConfig) -> CliResult<RunOutput> {
    let kern = HeatKernel::new(cfg.d, cfg.kappa)?;
    let c = cfg.calibration;
    let cal = TimeRadiusGrid::sweep(c.t0, c.t1, c.nt, c.r1, c.nr, false)?;
    let bound = KernelBound::calibrate(kern, &cal)?;
    let mut t = Table::new(&["t", "rho", "H", "B", "recurrence_defect", "descent_defect"]);
    for &time in &cfg.times {
        for &rho in &cfg.radii {
            let h = kern.value(time, rho)?;
            let up = if cfg.d + 2 <= 5 && rho > 0.0 {
                let g = TimeRadiusGrid {
                    times: vec![time],
                    radii: vec![rho],
                };
                Some(recurrence_up_check(cfg.d, cfg.kappa, &g)?)
            } else {
                None
            };
            let down = if cfg.d < 5 {
                let d = descent(cfg.d, cfg.kappa, time, rho)?;
                let s = h.abs().max(d.abs());
                Some(if s == 0.0 { 0.0 } else { (h - d).abs() / s })
            } else {
                None
            };
            t.push(vec![num(time), num(rho), num(h), num(bound.value(time, rho)), opt_num(up), opt_num(down)]);
        }
    }
    let chk = bound.check(&TimeRadiusGrid::sweep(c.t0, c.t1, c.nt, c.r1, c.nr, true)?)?;
    let summary = vec![format!(
        "d={} kappa={}: bound constant c={:e}, verification max H/B={:e}, min H={:e}",
        cfg.d, cfg.kappa, bound.c, chk.max_ratio, chk.min_value
    )];
    Ok(RunOutput {
        meta: Meta {
            command: "heat kernel".into(),
            config_hash: config_hash(cfg)?,
        },
        artifacts: vec![
            Artifact::Csv {
                name: "heat_kernel.csv".into(),
                table: t,
            },
            Artifact::Json {
                name: "heat_bound.json".into(),
                text: to_json(&json!({ "bound": bound, "calibration": cal_summary(&c), "verification": chk }))?,
            },
        ],
        summary,
    })
}

fn cal_summary(c: &crate::config::SweepConfig) -> serde_json::Value {
    json!({ "t0": c.t0, "t1": c.t1, "nt": c.nt, "r1": c.r1, "nr": c.nr })
}

/// Propagator snapshots in long format, `t = 0` rows holding the datum.
pub fn run_heat_solve(cfg: &HeatSolveConfig) -> CliResult<RunOutput> {
    let p = Propagator::new(HeatKernel::new(cfg.d, cfg.kappa)?)?;
    let v0 = Bump::new(cfg.initial.amplitude, cfg.initial.radius)?;
    let mut t = Table::new(&["t", "rho", "w"]);
    for &r in &cfg.radii {
        t.push(vec![num(0.0), num(r), num(v0.value(r))]);
    }
    for &time in &cfg.times {
        let w = p.apply_many(&v0, time, &cfg.radii)?;
        for (&r, v) in cfg.radii.iter().zip(w) {
            t.push(vec![num(time), num(r), num(v)]);
        }
    }
    Ok(RunOutput {
        meta: Meta {
            command: "heat solve".into(),
            config_hash: config_hash(cfg)?,
        },
        artifacts: vec![Artifact::Csv {
            name: "heat_solve.csv".into(),
            table: t,
        }],
        summary: vec![format!("d={} kappa={}: C_d = {:e}", cfg.d, cfg.kappa, p.c_d)],
    })
}

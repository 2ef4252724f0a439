//! Golden-file regression.
//!
//! A fixture set is a directory with one subdirectory per fixture:
//!
//! ```text
//! <set>/<name>/fixture.toml   command, table name, per-column tolerances
//! <set>/<name>/config.toml    run config (not used by `verify`)
//! <set>/<name>/expected.csv   the golden table
//! ```
//!
//! Columns without a tolerance must match as text.

use crate::config::{self, ExpandConfig, HeatKernelConfig, HeatSolveConfig, LocalizeConfig, StudyConfig};
use crate::output::{RunOutput, Table};
use crate::{checks, commands, CliError, CliResult};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    #[serde(default)]
    pub abs: f64,
    #[serde(default)]
    pub rel: f64,
}

impl Tolerance {
    pub fn admits(&self, expected: f64, actual: f64) -> bool {
        (actual - expected).abs() <= self.abs + self.rel * expected.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureCommand {
    Expand,
    Localize,
    Study,
    HeatKernel,
    HeatSolve,
    Verify,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSpec {
    pub command: FixtureCommand,
    /// suite name for `verify`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    /// which CSV artifact of the run is compared
    pub table: String,
    #[serde(default)]
    pub tolerances: BTreeMap<String, Tolerance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenFixture {
    pub name: String,
    pub dir: PathBuf,
    pub spec: FixtureSpec,
    pub expected: Option<Table>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    /// one message per mismatching cell or structural difference
    Fail(Vec<String>),
    Missing(String),
    Regenerated { changed_cells: usize, previous: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureReport {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressReport {
    pub fixtures: Vec<FixtureReport>,
}

impl RegressReport {
    pub fn passed(&self) -> bool {
        self.fixtures
            .iter()
            .all(|f| matches!(f.outcome, Outcome::Pass | Outcome::Regenerated { .. }))
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in &self.fixtures {
            match &f.outcome {
                Outcome::Pass => out.push(format!("PASS {}", f.name)),
                Outcome::Missing(why) => out.push(format!("FAIL {}: missing {why}", f.name)),
                Outcome::Fail(diffs) => {
                    out.push(format!("FAIL {}: {} difference(s)", f.name, diffs.len()));
                    out.extend(diffs.iter().map(|d| format!("  {d}")));
                }
                Outcome::Regenerated {
                    changed_cells,
                    previous,
                } => out.push(if *previous {
                    format!("REGENERATED {}: {changed_cells} cell(s) changed", f.name)
                } else {
                    format!("REGENERATED {}: new golden", f.name)
                }),
            }
        }
        out
    }
}

fn spec_of(dir: &Path) -> CliResult<FixtureSpec> {
    let text = std::fs::read_to_string(dir.join("fixture.toml")).map_err(|e| CliError::Io(e.to_string()))?;
    toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {}", dir.display(), e.message())))
}

/// Run the fixture's command and return its outputs.
pub fn run(dir: &Path, spec: &FixtureSpec) -> CliResult<RunOutput> {
    let cfg = dir.join("config.toml");
    match spec.command {
        FixtureCommand::Expand => commands::run_expand(&config::load::<ExpandConfig>(&cfg)?),
        FixtureCommand::Localize => commands::run_localize(&config::load::<LocalizeConfig>(&cfg)?),
        FixtureCommand::Study => commands::run_study(&config::load::<StudyConfig>(&cfg)?),
        FixtureCommand::HeatKernel => commands::run_heat_kernel(&config::load::<HeatKernelConfig>(&cfg)?),
        FixtureCommand::HeatSolve => commands::run_heat_solve(&config::load::<HeatSolveConfig>(&cfg)?),
        FixtureCommand::Verify => {
            let suite = spec
                .suite
                .as_deref()
                .ok_or_else(|| CliError::Validation("verify fixtures need `suite`".into()))?;
            Ok(checks::run_verify(suite)?.0)
        }
    }
}

/// Cell-by-cell comparison; rows are numbered from 1 after the header.
pub fn compare(expected: &Table, actual: &Table, tol: &BTreeMap<String, Tolerance>) -> Vec<String> {
    let mut diffs = Vec::new();
    if expected.header != actual.header {
        diffs.push(format!("header differs: expected {:?}, got {:?}", expected.header, actual.header));
        return diffs;
    }
    if expected.rows.len() != actual.rows.len() {
        diffs.push(format!("expected {} rows, got {}", expected.rows.len(), actual.rows.len()));
    }
    for (i, (e, a)) in expected.rows.iter().zip(&actual.rows).enumerate() {
        for (j, col) in expected.header.iter().enumerate() {
            let (ev, av) = (&e[j], &a[j]);
            let ok = match tol.get(col) {
                Some(t) => match (ev.parse::<f64>(), av.parse::<f64>()) {
                    (Ok(x), Ok(y)) => t.admits(x, y),
                    _ => ev == av,
                },
                None => ev == av,
            };
            if !ok {
                let t = tol
                    .get(col)
                    .map(|t| format!(" (tolerance abs {:e}, rel {:e})", t.abs, t.rel))
                    .unwrap_or_else(|| " (exact)".into());
                diffs.push(format!("row {}, column `{col}`: expected {ev}, got {av}{t}", i + 1));
            }
        }
    }
    diffs
}

fn changed_cells(old: &Table, new: &Table) -> usize {
    if old.header != new.header {
        return new.rows.len() * new.header.len();
    }
    let common: usize = old
        .rows
        .iter()
        .zip(&new.rows)
        .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x != y).count())
        .sum();
    common + old.rows.len().abs_diff(new.rows.len()) * new.header.len()
}

/// Load every fixture under `set`, sorted by name.
pub fn load_set(set: &Path) -> CliResult<Vec<GoldenFixture>> {
    let entries = std::fs::read_dir(set)
        .map_err(|e| CliError::Validation(format!("fixture set {}: {e}", set.display())))?;
    let mut dirs: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    let mut out = Vec::new();
    for dir in dirs {
        let name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let spec = spec_of(&dir)?;
        let csv = dir.join("expected.csv");
        let expected = if csv.exists() { Some(Table::read_csv(&csv)?) } else { None };
        out.push(GoldenFixture {
            name,
            dir,
            spec,
            expected,
        });
    }
    Ok(out)
}

/// Compare (or with `regenerate`, rewrite) every fixture in `set`; when
/// `only` is non-empty, just those fixtures, and a name with no fixture is
/// reported as missing.
pub fn regress(set: &Path, only: &[String], regenerate: bool) -> CliResult<RegressReport> {
    let all = load_set(set)?;
    let mut fixtures = Vec::new();
    let selected: Vec<&GoldenFixture> = if only.is_empty() {
        if all.is_empty() {
            return Err(CliError::Validation(format!("no fixtures under {}", set.display())));
        }
        all.iter().collect()
    } else {
        let mut v = Vec::new();
        for n in only {
            match all.iter().find(|f| &f.name == n) {
                Some(f) => v.push(f),
                None => fixtures.push(FixtureReport {
                    name: n.clone(),
                    outcome: Outcome::Missing("fixture directory".into()),
                }),
            }
        }
        v
    };
    for f in selected {
        let needs_config = f.spec.command != FixtureCommand::Verify;
        if needs_config && !f.dir.join("config.toml").exists() {
            fixtures.push(FixtureReport {
                name: f.name.clone(),
                outcome: Outcome::Missing("config.toml".into()),
            });
            continue;
        }
        if f.expected.is_none() && !regenerate {
            fixtures.push(FixtureReport {
                name: f.name.clone(),
                outcome: Outcome::Missing("expected.csv".into()),
            });
            continue;
        }
        let out = run(&f.dir, &f.spec)?;
        let actual = out.table(&f.spec.table).ok_or_else(|| {
            CliError::Validation(format!("fixture {}: the run produced no table `{}`", f.name, f.spec.table))
        })?;
        let outcome = if regenerate {
            std::fs::write(f.dir.join("expected.csv"), actual.to_csv(&out.meta)?)?;
            match &f.expected {
                Some(old) => Outcome::Regenerated {
                    changed_cells: changed_cells(old, actual),
                    previous: true,
                },
                None => Outcome::Regenerated {
                    changed_cells: 0,
                    previous: false,
                },
            }
        } else {
            let diffs = compare(f.expected.as_ref().expect("checked above"), actual, &f.spec.tolerances);
            if diffs.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(diffs)
            }
        };
        fixtures.push(FixtureReport {
            name: f.name.clone(),
            outcome,
        });
    }
    Ok(RegressReport { fixtures })
}

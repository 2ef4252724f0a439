//! Run configurations. One TOML file per run; every file carries
//! `schema_version` and is validated in full before any computation.

use crate::{CliError, CliResult};
use hyperloc::helmholtz::{Mode, ModeFamily, Parity};
use hyperloc::localization::{KappaChoice, LocalizationKind};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

fn bad(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("config field `{path}`: {msg}"))
}

/// Parse a TOML config, reporting the offending field path on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Validation(format!("malformed config: {}", e.message())))?;
    match table.get("schema_version") {
        None => return Err(bad("schema_version", "missing")),
        Some(toml::Value::Integer(v)) if *v == SCHEMA_VERSION as i64 => {}
        Some(v) => return Err(bad("schema_version", format!("expected {SCHEMA_VERSION}, got {v}"))),
    }
    let de = toml::Deserializer::parse(text)
        .map_err(|e| CliError::Validation(format!("malformed config: {}", e.message())))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let msg = e.inner().message().to_string();
        if path == "." {
            CliError::Validation(format!("config: {msg}"))
        } else {
            bad(&path, msg)
        }
    })
}

pub fn load<T: DeserializeOwned + Validate>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: T = parse(&text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub trait Validate {
    fn validate(&self) -> CliResult<()>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `cos(k . x)`
    PlaneWave,
    /// `sin(k . x)`
    SineWave,
    /// a finite list of modes
    Modes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub preset: Preset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavevector: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<Mode>,
}

impl TargetConfig {
    pub fn parity(&self) -> Parity {
        match self.preset {
            Preset::PlaneWave => Parity::Even,
            Preset::SineWave => Parity::Odd,
            Preset::Modes => Parity::of_degrees(self.modes.iter().map(|m| m.l)),
        }
    }

    fn validate(&self, d: usize, family: ModeFamily) -> CliResult<()> {
        match self.preset {
            Preset::PlaneWave | Preset::SineWave => {
                if family != ModeFamily::Helmholtz {
                    return Err(bad("target.preset", "plane-wave presets solve the Helmholtz equation only"));
                }
                if !self.modes.is_empty() {
                    return Err(bad("target.modes", "not used by plane-wave presets"));
                }
                let k = self.wavevector.as_ref().ok_or_else(|| bad("target.wavevector", "missing"))?;
                if k.len() != d {
                    return Err(bad("target.wavevector", format!("needs {d} components, got {}", k.len())));
                }
                let norm = k.iter().map(|c| c * c).sum::<f64>().sqrt();
                if !((norm - 1.0).abs() <= 1e-12) {
                    return Err(bad("target.wavevector", format!("must have unit length, got {norm}")));
                }
            }
            Preset::Modes => {
                if self.wavevector.is_some() {
                    return Err(bad("target.wavevector", "only used by plane-wave presets"));
                }
                if self.modes.is_empty() {
                    return Err(bad("target.modes", "need at least one mode"));
                }
                hyperloc::helmholtz::HelmholtzExpansion::new(d, family, self.modes.clone())
                    .map_err(|e| bad("target.modes", e))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    /// highest degree fitted
    pub l0: usize,
    /// probe radii
    pub radii: Vec<f64>,
    /// exactness degree of the sphere rule; defaults to `3 l0`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere_degree: Option<usize>,
    #[serde(default = "default_floor")]
    pub floor: f64,
}

fn default_floor() -> f64 {
    1e-12
}

impl FitConfig {
    pub fn degree(&self) -> usize {
        self.sphere_degree.unwrap_or(3 * self.l0)
    }

    fn validate(&self) -> CliResult<()> {
        if self.radii.is_empty() {
            return Err(bad("fit.radii", "need at least one probe radius"));
        }
        if let Some(r) = self.radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(bad("fit.radii", format!("probe radii must be finite and > 0, got {r}")));
        }
        if self.degree() < self.l0 {
            return Err(bad("fit.sphere_degree", format!("must be at least l0 = {}", self.l0)));
        }
        if !(self.floor >= 0.0) {
            return Err(bad("fit.floor", "must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Helmholtz,
    Coulomb,
}

fn one() -> f64 {
    1.0
}

fn check_alpha(alpha: f64) -> CliResult<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(bad("alpha", format!("must be finite and > 0, got {alpha}")));
    }
    Ok(())
}

fn check_dim(d: usize, lo: usize, hi: usize) -> CliResult<()> {
    if d < lo || d > hi {
        return Err(bad("d", format!("must lie in {lo}..={hi}, got {d}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandConfig {
    pub schema_version: u32,
    pub d: usize,
    pub family: FamilyName,
    #[serde(default = "one")]
    pub alpha: f64,
    pub target: TargetConfig,
    pub fit: FitConfig,
}

impl ExpandConfig {
    pub fn mode_family(&self) -> ModeFamily {
        match self.family {
            FamilyName::Helmholtz => ModeFamily::Helmholtz,
            FamilyName::Coulomb => ModeFamily::CoulombZeroEnergy { alpha: self.alpha },
        }
    }
}

impl Validate for ExpandConfig {
    fn validate(&self) -> CliResult<()> {
        check_dim(self.d, 2, 8)?;
        check_alpha(self.alpha)?;
        self.target.validate(self.d, self.mode_family())?;
        self.fit.validate()?;
        if self.d >= 4 && self.fit.l0 > 0 {
            // the product rule is zonal-only past S^2
            return Err(bad("fit.l0", "expansion past degree 0 needs d <= 3"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub radius: f64,
    #[serde(default)]
    pub inner: f64,
    #[serde(default = "default_radial")]
    pub n_radial: usize,
    #[serde(default = "default_sphere")]
    pub sphere_degree: usize,
}

fn default_radial() -> usize {
    64
}

fn default_sphere() -> usize {
    12
}

impl GridConfig {
    pub fn build(&self, d: usize) -> hyperloc::Result<hyperloc::geometry::BallGrid> {
        hyperloc::geometry::BallGrid::annulus(d, self.inner, self.radius, self.n_radial, self.sphere_degree)
    }

    fn validate(&self, kind: LocalizationKind) -> CliResult<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(bad("grid.radius", "must be finite and > 0"));
        }
        if !(self.inner >= 0.0 && self.inner < self.radius) {
            return Err(bad("grid.inner", "must satisfy 0 <= inner < radius"));
        }
        if kind == LocalizationKind::CoulombHyper && self.inner == 0.0 {
            return Err(bad("grid.inner", "Coulomb errors are measured on an annulus; set inner > 0"));
        }
        if self.n_radial < 2 {
            return Err(bad("grid.n_radial", "need at least 2 radii"));
        }
        Ok(())
    }
}

/// Settings shared by `localize` and `study`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizeConfig {
    pub schema_version: u32,
    pub d: usize,
    pub kind: LocalizationKind,
    #[serde(default = "one")]
    pub alpha: f64,
    /// declared parity of the target; checked against it
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    pub target: TargetConfig,
    /// needed when the target is not a finite mode list
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitConfig>,
    pub nhat: Vec<usize>,
    #[serde(default = "auto_kappa")]
    pub kappa: Vec<KappaChoice>,
    pub grid: GridConfig,
    /// 0 for C^0 errors, 1 for C^0 and C^1
    #[serde(default)]
    pub order: usize,
}

fn auto_kappa() -> Vec<KappaChoice> {
    vec![KappaChoice::Auto]
}

impl LocalizeConfig {
    pub fn mode_family(&self) -> ModeFamily {
        match self.kind {
            LocalizationKind::HarmonicHyper => ModeFamily::Helmholtz,
            LocalizationKind::CoulombHyper => ModeFamily::CoulombZeroEnergy { alpha: self.alpha },
        }
    }

    fn validate_common(&self) -> CliResult<()> {
        check_dim(self.d, 2, 8)?;
        check_alpha(self.alpha)?;
        self.target.validate(self.d, self.mode_family())?;
        let parity = self.target.parity();
        if let Some(p) = self.parity {
            if p != parity {
                return Err(bad(
                    "parity",
                    format!("declared {p:?} but the target is {parity:?}").to_lowercase(),
                ));
            }
        }
        if self.kind == LocalizationKind::HarmonicHyper && parity == Parity::Mixed {
            return Err(bad("target", "the harmonic construction needs a target of a single parity"));
        }
        match (&self.fit, self.target.preset) {
            (Some(f), _) => {
                f.validate()?;
                if self.d >= 4 && f.l0 > 0 {
                    return Err(bad("fit.l0", "expansion past degree 0 needs d <= 3"));
                }
            }
            (None, Preset::Modes) => {}
            (None, _) => return Err(bad("fit", "plane-wave targets must be expanded first; add a [fit] table")),
        }
        if self.nhat.is_empty() {
            return Err(bad("nhat", "need at least one value"));
        }
        if self.nhat.contains(&0) {
            return Err(bad("nhat", "values must be > 0"));
        }
        if self.order > 1 {
            return Err(bad("order", format!("must be 0 or 1, got {}", self.order)));
        }
        self.grid.validate(self.kind)
    }
}

impl Validate for LocalizeConfig {
    fn validate(&self) -> CliResult<()> {
        self.validate_common()?;
        if self.kappa.is_empty() {
            return Err(bad("kappa", "need at least one value"));
        }
        for k in &self.kappa {
            if let KappaChoice::Fixed(v) = k {
                if !(v.is_finite() && *v > 0.0) {
                    return Err(bad("kappa", format!("fixed values must be finite and > 0, got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// A convergence sweep: `localize` settings with the automatic curvature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub schema_version: u32,
    pub d: usize,
    pub kind: LocalizationKind,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    pub target: TargetConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitConfig>,
    pub nhat: Vec<usize>,
    pub grid: GridConfig,
    #[serde(default)]
    pub order: usize,
}

impl StudyConfig {
    pub fn as_localize(&self) -> LocalizeConfig {
        LocalizeConfig {
            schema_version: self.schema_version,
            d: self.d,
            kind: self.kind,
            alpha: self.alpha,
            parity: self.parity,
            target: self.target.clone(),
            fit: self.fit.clone(),
            nhat: self.nhat.clone(),
            kappa: auto_kappa(),
            grid: self.grid,
            order: self.order,
        }
    }
}

impl Validate for StudyConfig {
    fn validate(&self) -> CliResult<()> {
        self.as_localize().validate_common()?;
        if self.nhat.len() < 3 {
            return Err(bad("nhat", "a rate needs at least 3 values"));
        }
        if self.nhat.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("nhat", "values must be strictly increasing"));
        }
        Ok(())
    }
}

/// Calibration sweep for the Gaussian bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub t0: f64,
    pub t1: f64,
    pub nt: usize,
    pub r1: f64,
    pub nr: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            t0: 0.01,
            t1: 10.0,
            nt: 25,
            r1: 20.0,
            nr: 81,
        }
    }
}

fn check_kappa(k: f64) -> CliResult<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(bad("kappa", format!("must be finite and > 0, got {k}")));
    }
    Ok(())
}

fn check_times(times: &[f64]) -> CliResult<()> {
    if times.is_empty() {
        return Err(bad("times", "need at least one time"));
    }
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(bad("times", format!("times must be finite and > 0, got {t}")));
    }
    Ok(())
}

fn check_radii(radii: &[f64]) -> CliResult<()> {
    if radii.is_empty() {
        return Err(bad("radii", "need at least one radius"));
    }
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(bad("radii", format!("radii must be finite and >= 0, got {r}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatKernelConfig {
    pub schema_version: u32,
    pub d: usize,
    pub kappa: f64,
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    #[serde(default)]
    pub calibration: SweepConfig,
}

impl Validate for HeatKernelConfig {
    fn validate(&self) -> CliResult<()> {
        check_dim(self.d, 2, 5)?;
        check_kappa(self.kappa)?;
        check_times(&self.times)?;
        check_radii(&self.radii)?;
        let c = &self.calibration;
        if !(c.t0 > 0.0 && c.t1 > c.t0 && c.r1 > 0.0) || c.nt < 2 || c.nr < 2 {
            return Err(bad(
                "calibration",
                "need 0 < t0 < t1, r1 > 0 and at least 2 samples per axis",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub amplitude: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatSolveConfig {
    pub schema_version: u32,
    pub d: usize,
    pub kappa: f64,
    pub initial: BumpConfig,
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
}

impl Validate for HeatSolveConfig {
    fn validate(&self) -> CliResult<()> {
        check_dim(self.d, 3, 5)?;
        check_kappa(self.kappa)?;
        check_times(&self.times)?;
        check_radii(&self.radii)?;
        if !self.initial.amplitude.is_finite() {
            return Err(bad("initial.amplitude", "must be finite"));
        }
        if !(self.initial.radius.is_finite() && self.initial.radius > 0.0) {
            return Err(bad("initial.radius", "must be finite and > 0"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOCALIZE: &str = r#"
schema_version = 1
d = 3
kind = "harmonic_hyper"
nhat = [40]
[target]
preset = "modes"
modes = [{ l = 0, m = 1, c = 1.0 }]
[grid]
radius = 1.0
"#;

    #[test]
    fn minimal_localize_config() {
        let c: LocalizeConfig = parse(LOCALIZE).unwrap();
        c.validate().unwrap();
        assert_eq!(c.kappa, vec![KappaChoice::Auto]);
        assert_eq!(c.grid.n_radial, 64);
    }

    #[test]
    fn errors_name_the_field() {
        let text = LOCALIZE.replace("radius = 1.0", "radius = \"one\"");
        let e = parse::<LocalizeConfig>(&text).unwrap_err().to_string();
        assert!(e.contains("grid.radius"), "{e}");
        let text = LOCALIZE.replace("radius = 1.0", "radius = 1.0\nextra = 2");
        let e = parse::<LocalizeConfig>(&text).unwrap_err().to_string();
        assert!(e.contains("extra"), "{e}");
        let text = LOCALIZE.replace("radius = 1.0", "radius = -1.0");
        let e = parse::<LocalizeConfig>(&text).unwrap().validate().unwrap_err().to_string();
        assert!(e.contains("grid.radius"), "{e}");
    }

    #[test]
    fn schema_version_is_required() {
        let text = LOCALIZE.replace("schema_version = 1", "");
        assert!(parse::<LocalizeConfig>(&text).unwrap_err().to_string().contains("schema_version"));
        let text = LOCALIZE.replace("schema_version = 1", "schema_version = 7");
        assert!(parse::<LocalizeConfig>(&text).is_err());
    }

    #[test]
    fn declared_parity_must_match() {
        let text = LOCALIZE.replace("nhat = [40]", "nhat = [40]\nparity = \"odd\"");
        let e = parse::<LocalizeConfig>(&text).unwrap().validate().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("parity"));
    }

    #[test]
    fn round_trips_through_toml() {
        let c: LocalizeConfig = parse(LOCALIZE).unwrap();
        let back: LocalizeConfig = parse(&toml::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}

//! Closed-form bound states of the harmonic-oscillator and Coulomb
//! operators `-Delta + alpha V`, on `H^d(kappa)` and on `R^d`.
//!
//! Hyperbolic potentials in the `r` chart:
//! `V^C = -sqrt(kappa^2 + r^-2)`, `V^H = r^2 / (1 + kappa^2 r^2)`.
//!
//! The eigenvalues returned by [`Operator::eigenvalue`] are the ones the
//! radial residual certifies. They differ from the widely quoted closed
//! forms (kept as [`Operator::published_eigenvalue`]) by the constant
//! `kappa^2 (d-1)^2 / 4`, the bottom of the continuous spectrum of
//! `-Delta_kappa`. The shift is the same for every `(n, l)`, so level
//! degeneracies are unaffected.

use crate::error::{Error, Result};
use crate::geometry::{Jet, RadialFunction, Space};
use crate::specfun::{
    harmonic_dimension, jacobi_jet_y, laguerre_jet, log_gamma, real_harmonic, PolyJet,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Coulomb,
    Harmonic,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Coulomb => "coulomb",
            Family::Harmonic => "harmonic",
        })
    }
}

/// Operator family, coupling and underlying space (`kappa = 0` selects the
/// Euclidean operator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Operator {
    pub family: Family,
    pub alpha: f64,
    pub space: Space,
}

impl Operator {
    pub fn new(family: Family, alpha: f64, space: Space) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::param("alpha", format!("coupling must be > 0, got {alpha}")));
        }
        Ok(Operator { family, alpha, space })
    }

    pub fn d(&self) -> usize {
        self.space.d
    }

    pub fn kappa(&self) -> f64 {
        self.space.kappa
    }

    pub fn is_hyperbolic(&self) -> bool {
        !self.space.is_euclidean()
    }

    /// Unscaled potential shape `V(r)`.
    pub fn potential_shape(&self, r: f64) -> Result<f64> {
        let k = self.kappa();
        match self.family {
            Family::Coulomb => {
                if !(r > 0.0) {
                    return Err(Error::param("r", "Coulomb potential is singular at r = 0"));
                }
                Ok(-(k * k + 1.0 / (r * r)).sqrt())
            }
            Family::Harmonic => Ok(r * r / (1.0 + k * k * r * r)),
        }
    }

    /// `alpha V(r)`
    pub fn potential(&self, r: f64) -> Result<f64> {
        Ok(self.alpha * self.potential_shape(r)?)
    }

    /// `beta = (sqrt(kappa^4 + 4 alpha) - kappa^2) / 2`; equals `sqrt(alpha)` when flat.
    pub fn beta(&self) -> f64 {
        let k2 = self.kappa() * self.kappa();
        // rationalized to avoid cancellation for small kappa
        2.0 * self.alpha / ((k2 * k2 + 4.0 * self.alpha).sqrt() + k2)
    }

    /// Energy level index: `2n + l` (harmonic) or `n + l` (Coulomb).
    pub fn level(&self, n: usize, l: usize) -> usize {
        match self.family {
            Family::Harmonic => 2 * n + l,
            Family::Coulomb => n + l,
        }
    }

    /// Strict admissibility window for hyperbolic bound states.
    pub fn admissible(&self, n: usize, l: usize) -> bool {
        if !self.is_hyperbolic() {
            return true;
        }
        let k = self.kappa();
        let half = (self.d() as f64 - 1.0) / 2.0;
        match self.family {
            Family::Harmonic => ((2 * n + l) as f64) < self.beta() / (k * k) - half,
            Family::Coulomb => ((n + l) as f64) < (self.alpha / (2.0 * k)).sqrt() - half,
        }
    }

    fn check(&self, n: usize, l: usize) -> Result<()> {
        if self.admissible(n, l) {
            Ok(())
        } else {
            Err(Error::Inadmissible {
                n,
                l,
                reason: format!(
                    "outside the {} window for kappa={}, alpha={}, d={}",
                    self.family,
                    self.kappa(),
                    self.alpha,
                    self.d()
                ),
            })
        }
    }

    /// Eigenvalue of level `big_n` without the admissibility check. Every
    /// `(n, l)` with the same level goes through this one expression.
    pub fn level_eigenvalue(&self, big_n: usize) -> f64 {
        let d = self.d() as f64;
        let k2 = self.kappa() * self.kappa();
        self.published_level_eigenvalue(big_n) + k2 * (d - 1.0) * (d - 1.0) / 4.0
    }

    fn published_level_eigenvalue(&self, big_n: usize) -> f64 {
        let d = self.d() as f64;
        let nn = big_n as f64;
        let k2 = self.kappa() * self.kappa();
        match self.family {
            Family::Harmonic => {
                let q = nn + (d - 1.0) / 2.0;
                self.beta() * (2.0 * nn + d) - k2 * q * q
            }
            Family::Coulomb => {
                let nu = nn + (d - 1.0) / 2.0;
                -self.alpha * self.alpha / (4.0 * nu * nu) - k2 * nu * nu
            }
        }
    }

    /// Certified eigenvalue of the `(n, l)` bound state.
    pub fn eigenvalue(&self, n: usize, l: usize) -> Result<f64> {
        self.check(n, l)?;
        Ok(self.level_eigenvalue(self.level(n, l)))
    }

    /// The commonly quoted closed form, which omits `kappa^2 (d-1)^2 / 4`.
    pub fn published_eigenvalue(&self, n: usize, l: usize) -> Result<f64> {
        self.check(n, l)?;
        Ok(self.published_level_eigenvalue(self.level(n, l)))
    }

    /// Radial part `f_{nl}` in the `r` chart.
    pub fn radial(&self, n: usize, l: usize) -> Result<RadialEigenfunction> {
        self.check(n, l)?;
        let d = self.d() as f64;
        let k = self.kappa();
        let lf = l as f64;
        let shape = match (self.family, self.is_hyperbolic()) {
            (Family::Harmonic, true) => {
                let beta = self.beta();
                Shape::HyperHarmonic {
                    c: -beta / (k * k),
                    a: lf + (d - 2.0) / 2.0,
                    b: -beta / (k * k) - 0.5,
                }
            }
            (Family::Coulomb, true) => {
                let nu = (n + l) as f64 + (d - 1.0) / 2.0;
                let g = self.alpha / (2.0 * k * nu);
                Shape::HyperCoulomb {
                    c: -(n as f64) - g,
                    a: 2.0 * lf + d - 2.0,
                    b: -(n as f64) - lf - (d - 1.0) / 2.0 - g,
                }
            }
            (Family::Harmonic, false) => Shape::FlatHarmonic {
                g: self.alpha.sqrt(),
                theta: lf + d / 2.0 - 1.0,
            },
            (Family::Coulomb, false) => Shape::FlatCoulomb {
                nu: (n + l) as f64 + (d - 1.0) / 2.0,
                theta: 2.0 * lf + d - 2.0,
            },
        };
        Ok(RadialEigenfunction {
            op: *self,
            n,
            l,
            shape,
        })
    }

    pub fn eigenstate(&self, n: usize, l: usize, m: usize) -> Result<Eigenstate> {
        let radial = self.radial(n, l)?;
        // validates (d, l, m)
        let mut probe = vec![0.0; self.d()];
        probe[self.d() - 1] = 1.0;
        real_harmonic(self.d(), l, m, &probe)?;
        Ok(Eigenstate {
            lambda: self.eigenvalue(n, l)?,
            n,
            l,
            m,
            radial,
        })
    }

    /// `ln A_{nl}` with `lambda` the energy entering the harmonic constant.
    pub fn log_amplitude_at(&self, n: usize, l: usize, lambda: f64) -> f64 {
        let d = self.d() as f64;
        let lf = l as f64;
        let nf = n as f64;
        match self.family {
            Family::Harmonic => {
                -lf * (0.5 * lambda.ln() - std::f64::consts::LN_2)
                    + log_gamma(nf + lf + d / 2.0).unwrap()
                    + (d / 2.0 - 1.0) * std::f64::consts::LN_2
                    - log_gamma(nf + 1.0).unwrap()
            }
            Family::Coulomb => {
                log_gamma(nf + 2.0 * lf + d - 1.0).unwrap()
                    - log_gamma(nf + 1.0).unwrap()
                    - (lf - 1.0 + d / 2.0) * self.alpha.ln()
            }
        }
    }

    /// Amplitude constant `A_{nl}`; the harmonic one is built from the
    /// Euclidean energy `sqrt(alpha)(4n + 2l + d)`.
    pub fn amplitude_constant(&self, n: usize, l: usize) -> f64 {
        let lam = self.alpha.sqrt() * (4 * n + 2 * l + self.d()) as f64;
        self.log_amplitude_at(n, l, lam).exp()
    }

    /// `A_{nl}` built from a given energy (harmonic); the Coulomb constant
    /// does not depend on it.
    pub fn amplitude_constant_at(&self, n: usize, l: usize, lambda: f64) -> f64 {
        self.log_amplitude_at(n, l, lambda).exp()
    }

    /// Leading large-`n` behaviour of `A_{nl}`.
    pub fn amplitude_estimate(&self, n: usize, l: usize) -> f64 {
        let d = self.d() as f64;
        let lf = l as f64;
        let nf = n as f64;
        match self.family {
            Family::Harmonic => {
                self.alpha.powf(-lf / 4.0) * 2f64.powf(d / 2.0 - 1.0) * nf.powf(lf / 2.0 + d / 2.0 - 1.0)
            }
            Family::Coulomb => nf.powf(2.0 * lf + d - 2.0) / self.alpha.powf(lf + d / 2.0 - 1.0),
        }
    }

    /// The Stirling estimate as commonly printed, with an extra
    /// exponential factor that makes `exact / estimate` tend to
    /// `e^{l+d/2-1}` (harmonic, even `d`), `e^{l+d/2-1/2}` (odd `d`) or
    /// `e^{2l+d-2}` (Coulomb) instead of 1.
    pub fn amplitude_estimate_published(&self, n: usize, l: usize) -> f64 {
        let d = self.d() as f64;
        let lf = l as f64;
        let e = match self.family {
            Family::Harmonic => {
                if self.d() % 2 == 0 {
                    lf + d / 2.0 - 1.0
                } else {
                    lf + d / 2.0 - 0.5
                }
            }
            Family::Coulomb => 2.0 * lf + d - 2.0,
        };
        self.amplitude_estimate(n, l) / e.exp()
    }
}

/// Degeneracy of level `big_n` counted from the harmonic dimensions.
pub fn multiplicity(family: Family, d: usize, big_n: usize) -> usize {
    match family {
        Family::Coulomb => (0..=big_n).map(|j| harmonic_dimension(d, j)).sum(),
        Family::Harmonic => (0..=big_n / 2).map(|k| harmonic_dimension(d, big_n - 2 * k)).sum(),
    }
}

/// Brute-force count of admissible `(n, l, m)` on level `big_n`.
pub fn multiplicity_by_enumeration(op: &Operator, big_n: usize) -> usize {
    let mut count = 0;
    for n in 0..=big_n {
        for l in 0..=big_n {
            if op.level(n, l) == big_n && op.admissible(n, l) {
                count += harmonic_dimension(op.d(), l);
            }
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    HyperHarmonic { c: f64, a: f64, b: f64 },
    HyperCoulomb { c: f64, a: f64, b: f64 },
    FlatHarmonic { g: f64, theta: f64 },
    FlatCoulomb { nu: f64, theta: f64 },
}

/// Radial eigenfunction `f_{nl}(r)` with analytic derivatives in `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEigenfunction {
    pub op: Operator,
    pub n: usize,
    pub l: usize,
    shape: Shape,
}

impl RadialEigenfunction {
    /// Value at `r >= 0`; the origin is handled by its limit.
    pub fn value_at(&self, r: f64) -> Result<f64> {
        if r > 0.0 {
            return Ok(self.jet(r)?.v);
        }
        if self.l > 0 {
            return Ok(0.0);
        }
        // all weights equal 1 at the origin; polynomial at its base point
        Ok(self.poly(0.0)?.value)
    }

    /// Polynomial factor and its derivatives with respect to its own argument.
    fn poly(&self, r: f64) -> Result<PolyJet> {
        let n = self.n;
        let k = self.op.kappa();
        match self.shape {
            Shape::HyperHarmonic { a, b, .. } => jacobi_jet_y(n, a, b, -k * k * r * r),
            Shape::HyperCoulomb { a, b, .. } => {
                let kr = k * r;
                let q = (1.0 + kr * kr).sqrt();
                jacobi_jet_y(n, a, b, -2.0 * kr * (kr + q))
            }
            Shape::FlatHarmonic { g, theta } => laguerre_jet(n, theta, g * r * r),
            Shape::FlatCoulomb { nu, theta } => laguerre_jet(n, theta, self.op.alpha * r / nu),
        }
    }
}

impl RadialFunction for RadialEigenfunction {
    fn jet(&self, r: f64) -> Result<Jet> {
        if !(r > 0.0) {
            return Err(Error::param("r", "radial jets need r > 0"));
        }
        let k = self.op.kappa();
        let lf = self.l as f64;
        // ln w, (ln w)', (ln w)'' and the polynomial argument's derivatives
        let (ln_w, a1, a2, x1, x2) = match self.shape {
            Shape::HyperHarmonic { c, .. } => {
                let g = 1.0 + k * k * r * r;
                (
                    0.5 * c * (k * k * r * r).ln_1p(),
                    c * k * k * r / g,
                    c * k * k * (1.0 - k * k * r * r) / (g * g),
                    4.0 * k * k * r,
                    4.0 * k * k,
                )
            }
            Shape::HyperCoulomb { c, .. } => {
                let kr = k * r;
                let q = (1.0 + kr * kr).sqrt();
                let s = q + kr;
                let s2 = s * s;
                (
                    c * kr.asinh(),
                    c * k / q,
                    -c * k * k * kr / (q * q * q),
                    4.0 * s2 * k / q,
                    4.0 * s2 * k * k * (2.0 / (q * q) - kr / (q * q * q)),
                )
            }
            Shape::FlatHarmonic { g, .. } => (-0.5 * g * r * r, -g * r, -g, 2.0 * g * r, 2.0 * g),
            Shape::FlatCoulomb { nu, .. } => {
                let al = self.op.alpha;
                (-0.5 * al * r / nu, -0.5 * al / nu, 0.0, al / nu, 0.0)
            }
        };
        let p = self.poly(r)?;
        let g0 = (lf * r.ln() + ln_w).exp();
        let dl = lf / r + a1;
        let g1 = g0 * dl;
        let g2 = g0 * (dl * dl - lf / (r * r) + a2);
        let p0 = p.value;
        let p1 = p.d1 * x1;
        let p2 = p.d2 * x1 * x1 + p.d1 * x2;
        Ok(Jet {
            v: g0 * p0,
            d1: g1 * p0 + g0 * p1,
            d2: g2 * p0 + 2.0 * g1 * p1 + g0 * p2,
        })
    }
}

/// A bound state `psi_{nlm} = f_{nl}(r) Y_{lm}(omega)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenstate {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub lambda: f64,
    pub radial: RadialEigenfunction,
}

impl Eigenstate {
    pub fn operator(&self) -> &Operator {
        &self.radial.op
    }

    /// Value at `(r, omega)`, `omega` a unit vector.
    pub fn eval(&self, r: f64, omega: &[f64]) -> Result<f64> {
        let y = real_harmonic(self.radial.op.d(), self.l, self.m, omega)?;
        Ok(self.radial.value_at(r)? * y)
    }

    /// Value at a point given by its `r`-chart Cartesian coordinates.
    pub fn eval_point(&self, x: &[f64]) -> Result<f64> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            let mut e = vec![0.0; x.len()];
            e[x.len() - 1] = 1.0;
            return self.eval(0.0, &e);
        }
        let omega: Vec<f64> = x.iter().map(|v| v / r).collect();
        self.eval(r, &omega)
    }
}

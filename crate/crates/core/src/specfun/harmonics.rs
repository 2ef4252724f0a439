//! Real orthonormal spherical harmonics and product quadrature on spheres.
//!
//! Indexing: `m` runs from 1. `m = 1` is always the zonal harmonic. For
//! `d = 2` the axis is `e_1` and `m = 2` is `sin(l theta)`. For `d = 3`
//! the polar axis is `e_3`, and `m = 2k` / `m = 2k+1` carry `cos(k phi)` /
//! `sin(k phi)`. For `d >= 4` only the zonal harmonic about `e_d` is
//! provided.

use super::gamma::log_gamma;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Surface area of the unit sphere `S^{d-1}` in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / log_gamma(h).expect("positive").exp()
}

/// Dimension of the space of degree-`l` harmonics on `S^{d-1}`.
pub fn harmonic_dimension(d: usize, l: usize) -> usize {
    match d {
        0 | 1 => usize::from(l <= 1),
        2 => {
            if l == 0 {
                1
            } else {
                2
            }
        }
        _ => binomial(l + d - 1, d - 1) - if l >= 2 { binomial(l + d - 3, d - 1) } else { 0 },
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Number of basis harmonics of degree `l` this library can evaluate.
pub fn available_harmonics(d: usize, l: usize) -> usize {
    if d <= 3 {
        harmonic_dimension(d, l)
    } else {
        1
    }
}

/// Normalized associated Legendre function with `int_{-1}^{1} P^2 dt = 1`.
fn legendre_normalized(l: usize, mu: usize, t: f64) -> f64 {
    let s = (1.0 - t * t).max(0.0).sqrt();
    let mut pmm = std::f64::consts::FRAC_1_SQRT_2;
    for k in 1..=mu {
        let kf = k as f64;
        pmm *= ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    if l == mu {
        return pmm;
    }
    let muf = mu as f64;
    let mut p_prev = pmm;
    let mut p = (2.0 * muf + 3.0).sqrt() * t * pmm;
    for ll in (mu + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - muf * muf)).sqrt();
        let b = ((2.0 * lf + 1.0) * (lf + muf - 1.0) * (lf - muf - 1.0)
            / ((2.0 * lf - 3.0) * (lf - muf) * (lf + muf)))
            .sqrt();
        let next = a * t * p - b * p_prev;
        p_prev = p;
        p = next;
    }
    p
}

/// Gegenbauer polynomial `C_l^{(lambda)}(t)`.
pub fn gegenbauer(l: usize, lambda: f64, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut c0 = 1.0;
    let mut c1 = 2.0 * lambda * t;
    for n in 2..=l {
        let nf = n as f64;
        let c2 = (2.0 * t * (nf + lambda - 1.0) * c1 - (nf + 2.0 * lambda - 2.0) * c0) / nf;
        c0 = c1;
        c1 = c2;
    }
    c1
}

fn zonal_norm(d: usize, l: usize) -> f64 {
    let lam = (d as f64 - 2.0) / 2.0;
    let lf = l as f64;
    let log_h = sphere_area(d - 1).ln()
        + PI.ln()
        + (1.0 - 2.0 * lam) * std::f64::consts::LN_2
        + log_gamma(lf + 2.0 * lam).unwrap()
        - log_gamma(lf + 1.0).unwrap()
        - (lf + lam).ln()
        - 2.0 * log_gamma(lam).unwrap();
    (-0.5 * log_h).exp()
}

/// Real orthonormal spherical harmonic `Y_{l,m}(omega)` for a unit vector
/// `omega` in `R^d`.
pub fn real_harmonic(d: usize, l: usize, m: usize, omega: &[f64]) -> Result<f64> {
    if omega.len() != d {
        return Err(Error::param("omega", format!("expected {d} coordinates, got {}", omega.len())));
    }
    if d < 2 {
        return Err(Error::param("d", "dimension must be at least 2"));
    }
    let avail = available_harmonics(d, l);
    if m == 0 || m > harmonic_dimension(d, l) {
        return Err(Error::param("m", format!("m={m} out of range 1..={} for l={l}, d={d}", harmonic_dimension(d, l))));
    }
    if m > avail {
        return Err(Error::Unsupported(format!(
            "non-zonal harmonics (l={l}, m={m}) in dimension {d}"
        )));
    }
    match d {
        2 => {
            if l == 0 {
                return Ok(1.0 / (2.0 * PI).sqrt());
            }
            let th = omega[1].atan2(omega[0]);
            let lf = l as f64;
            Ok(if m == 1 { (lf * th).cos() } else { (lf * th).sin() } / PI.sqrt())
        }
        3 => {
            let t = omega[2].clamp(-1.0, 1.0);
            if m == 1 {
                return Ok(legendre_normalized(l, 0, t) / (2.0 * PI).sqrt());
            }
            let k = m / 2;
            let phi = omega[1].atan2(omega[0]);
            let ang = if m % 2 == 0 {
                (k as f64 * phi).cos()
            } else {
                (k as f64 * phi).sin()
            };
            Ok(legendre_normalized(l, k, t) * ang / PI.sqrt())
        }
        _ => {
            let t = omega[d - 1].clamp(-1.0, 1.0);
            Ok(gegenbauer(l, (d as f64 - 2.0) / 2.0, t) * zonal_norm(d, l))
        }
    }
}

/// Product quadrature rule on `S^{d-1}`.
///
/// For `d <= 3` the rule integrates products of harmonics of degree up to
/// `l_max` exactly. For `d >= 4` it is a rule in the polar variable only and
/// is exact for zonal integrands of that degree.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub d: usize,
    pub l_max: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub zonal_only: bool,
}

impl SphereQuadrature {
    pub fn new(d: usize, l_max: usize) -> Result<Self> {
        use super::quad::{gauss_chebyshev_u, gauss_legendre};
        if d < 2 {
            return Err(Error::param("d", "dimension must be at least 2"));
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match d {
            2 => {
                let n = 2 * l_max + 2;
                for j in 0..n {
                    let th = 2.0 * PI * j as f64 / n as f64;
                    nodes.push(vec![th.cos(), th.sin()]);
                    weights.push(2.0 * PI / n as f64);
                }
            }
            3 => {
                let (ts, wt) = gauss_legendre(l_max + 1);
                let nphi = 2 * l_max + 2;
                for (t, w) in ts.iter().zip(&wt) {
                    let s = (1.0 - t * t).sqrt();
                    for j in 0..nphi {
                        let phi = 2.0 * PI * j as f64 / nphi as f64;
                        nodes.push(vec![s * phi.cos(), s * phi.sin(), *t]);
                        weights.push(w * 2.0 * PI / nphi as f64);
                    }
                }
            }
            _ => {
                let ring = sphere_area(d - 1);
                let (ts, wt, extra) = if d % 2 == 1 {
                    let (x, w) = gauss_legendre(l_max + (d - 1) / 2);
                    (x, w, (d - 3) / 2)
                } else {
                    let (x, w) = gauss_chebyshev_u(l_max + d / 2 - 1);
                    (x, w, (d - 4) / 2)
                };
                for (t, w) in ts.iter().zip(&wt) {
                    let mut node = vec![0.0; d];
                    node[0] = (1.0 - t * t).sqrt();
                    node[d - 1] = *t;
                    nodes.push(node);
                    weights.push(ring * w * (1.0 - t * t).powi(extra as i32));
                }
            }
        }
        Ok(SphereQuadrature {
            d,
            l_max,
            nodes,
            weights,
            zonal_only: d >= 4,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_q w_q f(omega_q)`
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        super::quad::compensated_sum(self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)))
    }
}

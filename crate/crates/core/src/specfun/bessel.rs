//! Bessel functions of the first kind of real non-negative order.
//!
//! Small arguments use the power series in double-double. Larger
//! arguments use Miller's backward recurrence normalized with
//! `(x/2)^mu = sum_k (mu+2k) Gamma(mu+k)/k! J_{mu+2k}(x)`, where `mu` is
//! the fractional part of the order.

use super::dd::Dd;
use super::gamma::log_gamma;
use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 25.0;

fn validate(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::param("nu", format!("need a finite order >= 0, got {nu}")));
    }
    if !x.is_finite() {
        return Err(Error::param("x", "non-finite argument"));
    }
    Ok(())
}

/// `sum_k (-x^2/4)^k / (k! (nu+1)_k)` in double-double.
fn reduced_series(nu: f64, x: f64) -> f64 {
    // every factor stays in double-double: the terms grow to about e^x
    // before cancelling
    let z = (Dd::from(x) * Dd::from(x)).mul_f64(-0.25);
    let nu_dd = Dd::from(nu);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        term = term * z / ((nu_dd + Dd::from(k)).mul_f64(k));
        sum = sum + term;
        if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) && k > 0.5 * x {
            break;
        }
        if k > 10_000.0 {
            break;
        }
    }
    sum.to_f64()
}

/// Miller backward recurrence. Returns `J_nu(x)` for `x > 0`.
fn miller(nu: f64, x: f64) -> f64 {
    let j = nu.floor() as usize;
    let mu = nu - j as f64;
    let top = nu.max(x);
    let n_start = (top + 12.0 * x.cbrt() + 60.0).ceil() as usize;
    let n_start = n_start + (n_start % 2); // even, so the last normalization term is included

    // weights for orders mu + 2k
    let kmax = n_start / 2;
    let mut w = vec![0.0; kmax + 1];
    let g1 = log_gamma(mu + 1.0).expect("positive").exp();
    w[0] = g1;
    let mut g = g1; // Gamma(mu+k)/k! at k = 1
    for (k, wk) in w.iter_mut().enumerate().skip(1) {
        if k > 1 {
            g *= (mu + k as f64 - 1.0) / k as f64;
        }
        *wk = (mu + 2.0 * k as f64) * g;
    }

    let mut f_next = 0.0f64; // order index k+1
    let mut f = 1e-30f64; // order index k
    let mut sum = 0.0f64;
    let mut wanted = 0.0f64;
    let mut k = n_start;
    loop {
        if k % 2 == 0 {
            sum += w[k / 2] * f;
        }
        if k == j {
            wanted = f;
        }
        if k == 0 {
            break;
        }
        let f_prev = 2.0 * (mu + k as f64) / x * f - f_next;
        f_next = f;
        f = f_prev;
        k -= 1;
        if f.abs() > 1e200 {
            f *= 1e-200;
            f_next *= 1e-200;
            sum *= 1e-200;
            wanted *= 1e-200;
        }
    }
    let scale = if mu == 0.0 { 1.0 } else { (0.5 * x).powf(mu) };
    wanted * scale / sum
}

/// Bessel function `J_nu(x)`.
///
/// Relative accuracy is about `1e-12` away from zeros for `nu <= 200` and
/// `|x| <= 1e4`. Negative `x` is accepted for integer orders only.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    validate(nu, x)?;
    if x < 0.0 {
        if nu != nu.floor() {
            return Err(Error::param(
                "x",
                "negative argument with non-integer order is complex",
            ));
        }
        let sign = if (nu as u64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * bessel_j(nu, -x)?);
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        let lpre = nu * (0.5 * x).ln() - log_gamma(nu + 1.0)?;
        return Ok(lpre.exp() * reduced_series(nu, x));
    }
    Ok(miller(nu, x))
}

/// `x^{-nu} J_nu(x)`, an entire function of `x^2`; finite at the origin.
pub fn bessel_j_reduced(nu: f64, x: f64) -> Result<f64> {
    validate(nu, x)?;
    let x = x.abs();
    if x <= SERIES_LIMIT {
        let lpre = -nu * std::f64::consts::LN_2 - log_gamma(nu + 1.0)?;
        return Ok(lpre.exp() * reduced_series(nu, x));
    }
    let j = miller(nu, x);
    if j == 0.0 {
        return Ok(0.0);
    }
    Ok(j.signum() * (j.abs().ln() - nu * x.ln()).exp())
}

/// `J_nu'(x)` from `J_nu' = (nu/x) J_nu - J_{nu+1}`.
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(if nu == 1.0 {
            0.5
        } else if nu == 0.0 || nu > 1.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    Ok(nu / x * bessel_j(nu, x)? - bessel_j(nu + 1.0, x)?)
}

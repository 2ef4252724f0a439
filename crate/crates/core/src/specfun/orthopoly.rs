//! Jacobi and generalized Laguerre polynomials.
//!
//! Both are evaluated as terminating hypergeometric sums carried in
//! double-double arithmetic:
//!
//! ```text
//! P_n^{(a,b)}(x) = C(n+a, n) 2F1(-n, n+a+b+1; a+1; y),  y = (1-x)/2
//! L_n^{(t)}(x)   = C(n+t, n) 1F1(-n; t+1; x)
//! ```
//!
//! The sums alternate in sign in the oscillatory region, so accuracy is
//! limited by cancellation, not by the parameter sizes. With `M` the sum
//! of absolute term values (leading term normalized to one) the rounding
//! error is at most about `(n+1) 2^-104 M`. An evaluation is rejected as
//! ill-conditioned when that bound exceeds `1e-8 max(1, |S|)`, where `S`
//! is the normalized sum. For the harmonic and Coulomb parameterizations
//! (`y <= 0`, `b` large and negative) the peak term grows roughly like
//! `exp(2 sqrt(n |b| |y|))`, so the accepted range is about
//! `n |b| |y| < 600`. Larger products are refused rather than returned
//! inaccurate.

use super::dd::Dd;
use crate::error::{Error, Result};

const DD_EPS: f64 = 4.93e-32; // 2^-104

/// Value and first two derivatives with respect to the polynomial argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Sum `sum_k prod_{j<k} (j-n)(p+j) / ((q+j)(j+1)) * z^k` with `p = None`
/// meaning the 1F1 variant (no numerator Pochhammer).
///
/// Parameters and term ratios are formed in double-double; rounding them
/// to double would be amplified by the cancellation in the sum.
fn terminating_sum(n: usize, p: Option<Dd>, q: Dd, z: f64) -> Result<(Dd, f64)> {
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut mag = 1.0f64;
    for k in 0..n {
        let kf = k as f64;
        let mut num = Dd::new(kf - n as f64);
        if let Some(p) = p {
            num = num * (p + Dd::new(kf));
        }
        let den = (q + Dd::new(kf)).mul_f64(kf + 1.0);
        term = (term * num).mul_f64(z) / den;
        if !term.is_finite() {
            return Err(Error::Overflow { term: k + 1 });
        }
        sum = sum + term;
        mag += term.hi.abs();
        if !mag.is_finite() {
            return Err(Error::Overflow { term: k + 1 });
        }
    }
    Ok((sum, mag))
}

fn binom_dd(n: usize, a: f64) -> Dd {
    // C(n+a, n) = prod_{k=1}^{n} (a+k)/k
    let mut b = Dd::ONE;
    for k in 1..=n {
        b = (b * (Dd::new(a) + Dd::new(k as f64))).div_f64(k as f64);
    }
    b
}

fn check_conditioning(n: usize, sum: Dd, mag: f64, what: &str) -> Result<()> {
    let bound = (n as f64 + 1.0) * DD_EPS * mag;
    if bound > 1e-8 * sum.to_f64().abs().max(1.0) {
        return Err(Error::IllConditioned(format!(
            "{what} of degree {n}: cancellation bound {bound:.3e} exceeds 1e-8"
        )));
    }
    Ok(())
}

/// Jacobi polynomial in terms of `y = (1-x)/2`.
///
/// Passing `y` directly avoids the rounding of `x` near 1, which matters
/// when the argument is `1 + O(kappa^2)`.
pub fn jacobi_y(n: usize, a: f64, b: f64, y: f64) -> Result<f64> {
    if !(a > -1.0) || !a.is_finite() {
        return Err(Error::param("a", format!("need a > -1, got {a}")));
    }
    if !b.is_finite() || !y.is_finite() {
        return Err(Error::param("b", "non-finite parameter or argument"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let p = Dd::new(n as f64 + 1.0) + Dd::new(a) + Dd::new(b);
    let (sum, mag) = terminating_sum(n, Some(p), Dd::new(a) + Dd::ONE, y)?;
    check_conditioning(n, sum, mag, "Jacobi polynomial")?;
    let v = (sum * binom_dd(n, a)).to_f64();
    if !v.is_finite() {
        return Err(Error::Overflow { term: n });
    }
    Ok(v)
}

/// Jacobi polynomial `P_n^{(a,b)}(x)`.
pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> Result<f64> {
    jacobi_y(n, a, b, 0.5 * (1.0 - x))
}

/// Jacobi polynomial with its first two x-derivatives, argument given as `y`.
pub fn jacobi_jet_y(n: usize, a: f64, b: f64, y: f64) -> Result<PolyJet> {
    let value = jacobi_y(n, a, b, y)?;
    let s = n as f64 + a + b;
    let d1 = if n >= 1 {
        0.5 * (s + 1.0) * jacobi_y(n - 1, a + 1.0, b + 1.0, y)?
    } else {
        0.0
    };
    let d2 = if n >= 2 {
        0.25 * (s + 1.0) * (s + 2.0) * jacobi_y(n - 2, a + 2.0, b + 2.0, y)?
    } else {
        0.0
    };
    Ok(PolyJet { value, d1, d2 })
}

/// Generalized Laguerre polynomial `L_n^{(theta)}(x)`.
pub fn laguerre(n: usize, theta: f64, x: f64) -> Result<f64> {
    if !(theta > -1.0) || !theta.is_finite() {
        return Err(Error::param("theta", format!("need theta > -1, got {theta}")));
    }
    if !x.is_finite() {
        return Err(Error::param("x", "non-finite argument"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let (sum, mag) = terminating_sum(n, None, Dd::new(theta) + Dd::ONE, x)?;
    check_conditioning(n, sum, mag, "Laguerre polynomial")?;
    let v = (sum * binom_dd(n, theta)).to_f64();
    if !v.is_finite() {
        return Err(Error::Overflow { term: n });
    }
    Ok(v)
}

/// Laguerre polynomial with first and second derivatives.
pub fn laguerre_jet(n: usize, theta: f64, x: f64) -> Result<PolyJet> {
    let value = laguerre(n, theta, x)?;
    let d1 = if n >= 1 {
        -laguerre(n - 1, theta + 1.0, x)?
    } else {
        0.0
    };
    let d2 = if n >= 2 {
        laguerre(n - 2, theta + 2.0, x)?
    } else {
        0.0
    };
    Ok(PolyJet { value, d1, d2 })
}

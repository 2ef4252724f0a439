use crate::error::{Error, Result};
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn stirling(x: f64) -> f64 {
    let z = 1.0 / (x * x);
    let series = (1.0 / 12.0)
        + z * (-1.0 / 360.0
            + z * (1.0 / 1260.0 + z * (-1.0 / 1680.0 + z * (1.0 / 1188.0 + z * (-691.0 / 360360.0)))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series / x
}

/// `ln |Γ(x)|`. Poles at the non-positive integers are reported as errors.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::param("x", format!("non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::param("x", format!("pole of the gamma function at {x}")));
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (PI * x).sin().abs();
        return Ok(PI.ln() - s.ln() - log_gamma(1.0 - x)?);
    }
    if x >= 15.0 {
        return Ok(stirling(x));
    }
    // shift up into the asymptotic range
    let k = (15.0 - x).ceil() as usize;
    let mut prod = 1.0;
    for j in 0..k {
        prod *= x + j as f64;
    }
    Ok(stirling(x + k as f64) - prod.ln())
}

/// `Γ(x)` for arguments where it is representable.
pub fn gamma(x: f64) -> Result<f64> {
    let lg = log_gamma(x)?;
    let sign = if x > 0.0 || (x.floor() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    Ok(sign * lg.exp())
}

/// Rising factorial `(q)_n = q (q+1) ... (q+n-1)`.
pub fn pochhammer(q: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (q + k as f64))
}

/// `ln n!`
pub fn log_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        log_gamma(n as f64 + 1.0).expect("positive argument")
    }
}

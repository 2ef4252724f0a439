//! Adaptive Dormand-Prince 5(4) integrator for small first-order systems.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOpts {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOpts {
    fn default() -> Self {
        OdeOpts {
            rtol: 1e-12,
            atol: 1e-300,
            max_steps: 2_000_000,
        }
    }
}

/// Integrator state; the step size carries over between calls to
/// [`Dopri5::advance`].
pub struct Dopri5<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    h: f64,
    opts: OdeOpts,
    pub steps: usize,
}

impl<const N: usize> Dopri5<N> {
    pub fn new(t0: f64, y0: [f64; N], h0: f64, opts: OdeOpts) -> Self {
        Dopri5 {
            t: t0,
            y: y0,
            h: h0,
            opts,
            steps: 0,
        }
    }

    /// Integrate up to exactly `t_end`.
    pub fn advance<F: FnMut(f64, &[f64; N]) -> [f64; N]>(&mut self, f: &mut F, t_end: f64) -> Result<()> {
        while self.t < t_end {
            let mut h = self.h.min(t_end - self.t);
            let last = h >= t_end - self.t;
            let mut k = [[0.0; N]; 7];
            k[0] = f(self.t, &self.y);
            for s in 1..7 {
                let mut ys = self.y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    for j in 0..s {
                        *yi += h * A[s][j] * k[j][i];
                    }
                }
                k[s] = f(self.t + C[s] * h, &ys);
            }
            let mut ynew = self.y;
            for (i, yi) in ynew.iter_mut().enumerate() {
                for j in 0..6 {
                    *yi += h * A[6][j] * k[j][i];
                }
            }
            let ymax = self
                .y
                .iter()
                .chain(ynew.iter())
                .fold(0.0f64, |m, v| m.max(v.abs()));
            let sc = self.opts.atol + self.opts.rtol * ymax;
            let mut err = 0.0;
            for i in 0..N {
                let mut e = 0.0;
                for j in 0..7 {
                    e += E[j] * k[j][i];
                }
                err += (h * e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::Numerical(format!("ODE right-hand side not finite near t={}", self.t)));
            }
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            if err <= 1.0 {
                self.t = if last { t_end } else { self.t + h };
                self.y = ynew;
                if !last {
                    self.h = h * fac;
                }
            } else {
                h *= fac;
                self.h = h;
            }
            self.steps += 1;
            if self.steps > self.opts.max_steps {
                return Err(Error::Numerical("ODE step budget exhausted".into()));
            }
            if self.h < 1e-14 * self.t.abs().max(1e-300) {
                return Err(Error::Numerical(format!("ODE step size underflow at t={}", self.t)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_phase() {
        let mut f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut s = Dopri5::new(0.0, [0.0, 1.0], 0.01, OdeOpts::default());
        s.advance(&mut f, 10.0).unwrap();
        assert!((s.y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((s.y[1] - 10f64.cos()).abs() < 1e-10);
        assert_eq!(s.t, 10.0);
    }

    #[test]
    fn exponential_growth() {
        let mut f = |_t: f64, y: &[f64; 1]| [y[0]];
        let mut s = Dopri5::new(0.0, [1.0], 0.1, OdeOpts::default());
        for i in 1..=5 {
            s.advance(&mut f, i as f64).unwrap();
        }
        assert!((s.y[0] / 5f64.exp() - 1.0).abs() < 1e-10);
    }
}

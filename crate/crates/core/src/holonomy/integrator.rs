//! Dormand–Prince 5(4) with standard step-size control, on complex states.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions {
    /// Relative and absolute tolerance per component.
    pub tol: f64,
    pub max_steps: usize,
    /// Smallest step, relative to the interval length.
    pub min_step: f64,
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        IntegratorOptions {
            tol,
            max_steps: 2_000_000,
            min_step: 1e-14,
        }
    }
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self::with_tol(1e-10)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth minus fourth order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

fn combine(y: &[C], h: f64, terms: &[(f64, &[C])], out: &mut [C]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = C::new(0.0, 0.0);
        for (w, k) in terms {
            s += k[i] * *w;
        }
        *o = y[i] + s * h;
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t1`. `f` may fail, e.g. to
/// report an escaping trajectory.
pub fn integrate<F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: &[C],
    opts: &IntegratorOptions,
) -> Result<(Vec<C>, IntegrationStats)>
where
    F: FnMut(f64, &[C], &mut [C]) -> Result<()>,
{
    let dim = y0.len();
    let span = t1 - t0;
    let mut stats = IntegrationStats::default();
    if span == 0.0 || dim == 0 {
        return Ok((y0.to_vec(), stats));
    }
    let dir = span.signum();
    let h_min = opts.min_step * span.abs();
    let mut h = dir * (span.abs() * 1e-2).min(opts.tol.powf(0.2) * span.abs());
    let mut t = t0;
    let mut y = y0.to_vec();
    let z = || vec![C::new(0.0, 0.0); dim];
    let (mut k1, mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (z(), z(), z(), z(), z(), z(), z());
    let (mut tmp, mut y_new) = (z(), z());
    f(t, &y, &mut k1)?;
    while (t1 - t) * dir > 0.0 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::Integration {
                t,
                message: format!("step budget of {} exhausted", opts.max_steps),
            });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        combine(&y, h, &[(A21, &k1)], &mut tmp);
        f(t + C2 * h, &tmp, &mut k2)?;
        combine(&y, h, &[(A31, &k1), (A32, &k2)], &mut tmp);
        f(t + C3 * h, &tmp, &mut k3)?;
        combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)], &mut tmp);
        f(t + C4 * h, &tmp, &mut k4)?;
        combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], &mut tmp);
        f(t + C5 * h, &tmp, &mut k5)?;
        combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], &mut tmp);
        f(t + h, &tmp, &mut k6)?;
        combine(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], &mut y_new);
        f(t + h, &y_new, &mut k7)?;

        let mut err: f64 = 0.0;
        for i in 0..dim {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = opts.tol * (1.0 + y[i].norm().max(y_new[i].norm()));
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            return Err(Error::Integration {
                t,
                message: "non-finite error estimate".into(),
            });
        }
        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < h_min && (t1 - t) * dir > h_min {
            return Err(Error::Integration {
                t,
                message: format!("step size {:.3e} below minimum {:.3e}", h.abs(), h_min),
            });
        }
    }
    Ok((y, stats))
}

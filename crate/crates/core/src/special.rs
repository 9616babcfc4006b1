//! Scalar special functions and quadrature used by the oracles and the
//! kernel-bound check.

use std::sync::OnceLock;

use crate::error::{Error, Result};

// B_2, B_4, ..., B_14
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k>=0} (k + a)^{-s}`, analytically continued to
/// real `s > -10`, `s != 1`, for `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const HEAD: usize = 24;
    let mut sum: f64 = (0..HEAD).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = HEAD as f64 + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial (s)_{2j-1} / (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut xpow = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        sum += b / fact * rising * xpow;
        let m = 2.0 * j as f64 + 2.0;
        rising *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        xpow /= x * x;
    }
    sum
}

/// Riemann zeta on the real line (`s != 1`).
pub fn zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

const GL_ORDER: usize = 12;

fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut x = [0.0; GL_ORDER];
        let mut w = [0.0; GL_ORDER];
        for i in 0..n {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    let (mut q0, mut q1) = (1.0, z);
                    for k in 2..=n {
                        let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                        q0 = q1;
                        q1 = q2;
                    }
                    let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                    w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                    break;
                }
            }
            x[i] = z;
        }
        (x, w)
    })
}

fn gl(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * x
        .iter()
        .zip(w)
        .map(|(xi, wi)| wi * f(c + h * xi))
        .sum::<f64>()
}

/// Panels an [`integrate`] call may accept before giving up.
const MAX_PANELS: usize = 200_000;

/// Adaptive Gauss-Legendre quadrature of a smooth integrand on `[a, b]`.
///
/// Bisects until the one-panel and two-panel estimates agree to `tol`
/// (absolute, scaled to each panel's share of the interval). Fails with a
/// data error when the refinement budget runs out.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Parameter("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a, b, gl(&f, a, b), 0u32)];
    let mut total = 0.0;
    let width = (b - a).abs();
    let mut panels = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Data(format!(
                "quadrature on [{a}, {b}] did not reach tolerance {tol}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let left = gl(&f, lo, mid);
        let right = gl(&f, mid, hi);
        let err = (left + right - whole).abs();
        if !err.is_finite() {
            return Err(Error::Data("integrand is not finite".into()));
        }
        if err <= tol * ((hi - lo).abs() / width).max(1e-3) || depth >= 50 {
            if depth >= 50 {
                log::warn!("quadrature hit the refinement limit on [{lo}, {hi}]");
            }
            total += left + right;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

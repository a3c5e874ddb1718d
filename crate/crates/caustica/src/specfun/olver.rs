//! The transition function behind the large-order Bessel zero asymptotics:
//! λ_{k,n} ≈ n·p0(a_k/n^{2/3}), where p0(t) = z >= 1 solves
//!
//!     sqrt(z²-1) - arccos(1/z) = (2/3)·t^{3/2}.
//!
//! p0(0) = 1, p0 is strictly increasing, and p0'(0+) = 2^{-1/3} ≈ 0.7937
//! (the Taylor series starts 1 + 2^{-1/3}·t + (3/10)·2^{-2/3}·t² + ...,
//! which reproduces λ_{1,n} ≈ n + 1.8557·n^{1/3}).

use crate::error::{Error, Result};

/// Largest supported argument; covers every zero with λ <= 1e5 at n >= 1.
pub const MAX_T: f64 = 100.0;

const CBRT_HALF: f64 = 0.7937005259840997; // 2^{-1/3}

/// Forward map: g(z) = sqrt(z²-1) - arccos(1/z) for z >= 1.
fn g(z: f64) -> f64 {
    (z * z - 1.0).max(0.0).sqrt() - (1.0 / z).acos()
}

/// Derivative g'(z) = sqrt(z²-1)/z.
fn g_prime(z: f64) -> f64 {
    (z * z - 1.0).max(0.0).sqrt() / z
}

/// p0(t): invert g(z) = (2/3)·t^{3/2} by safeguarded Newton.
pub fn olver_p0(t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain(format!(
            "olver_p0: argument must be finite and nonnegative, got {t}"
        )));
    }
    if t > MAX_T {
        return Err(Error::domain(format!(
            "olver_p0: argument {t} exceeds supported range {MAX_T}"
        )));
    }
    // Near the fold the Newton derivative vanishes; the Taylor series is
    // accurate to O(t³) there.
    if t < 1e-5 {
        return Ok(1.0 + CBRT_HALF * t + 0.3 * CBRT_HALF * CBRT_HALF * t * t);
    }

    let y = 2.0 / 3.0 * t.powf(1.5);
    // Starting point: Taylor for small t, the large-z tail otherwise.
    let mut z = if t < 1.2 {
        1.0 + CBRT_HALF * t + 0.3 * CBRT_HALF * CBRT_HALF * t * t
    } else {
        let zt = y + std::f64::consts::FRAC_PI_2;
        zt + 0.5 / zt
    };
    let mut lo = 1.0;
    let mut hi = y + 2.0 + std::f64::consts::FRAC_PI_2;
    z = z.clamp(lo + 1e-12, hi);

    for iter in 0..100 {
        let fz = g(z) - y;
        if fz > 0.0 {
            hi = z;
        } else {
            lo = z;
        }
        let dz = g_prime(z);
        let newton = z - fz / dz;
        let next = if dz > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - z).abs() <= 1e-15 * z {
            return Ok(next);
        }
        z = next;
        if iter == 99 {
            return Err(Error::NoConvergence {
                context: format!("olver_p0({t})"),
                iterations: 100,
                last: z,
                residual: (g(z) - y).abs(),
            });
        }
    }
    unreachable!()
}

/// F(t) = p0(t) - 1, the relative excess of a zero over its order.
pub fn olver_f(t: f64) -> Result<f64> {
    Ok(olver_p0(t)? - 1.0)
}

/// Inverse direction: t such that p0(t) = z, i.e. t = ((3/2)·g(z))^{2/3}.
/// Used to estimate which zero index sits near a given λ/n.
pub fn olver_t_of_z(z: f64) -> f64 {
    if z <= 1.0 {
        return 0.0;
    }
    (1.5 * g(z)).powf(2.0 / 3.0)
}

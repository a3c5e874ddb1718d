//! Action integral I₁(μ) and the genericity diagnostic: the inflection
//! structure of the curve {(I₁(μ), μ)}.
//!
//! I₁(μ) = (1/π)·∫_{a(s) >= μ} √(1 - μ²/a(s)²) ds. The integrand vanishes
//! like √(s - s_±) at the turning points; substituting s = s_± ∓ t² on each
//! branch makes it smooth, so composite Simpson converges at full order.
//! For the round sphere I₁(μ) = 1 - μ exactly, which pins the quadrature in
//! tests.
//!
//! The signed curvature of {(I₁(μ), μ)} reduces to κ = -I₁''/(1+I₁'²)^{3/2};
//! zeros of κ are inflection points, nondegenerate when dκ/dμ ≠ 0 there.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::simpson;
use crate::revolution::profile::RevolutionProfile;

/// Samples of μ ↦ I₁(μ) with derived curvature of {(I₁, μ)}.
#[derive(Debug, Clone, Serialize)]
pub struct ActionCurve {
    pub mus: Vec<f64>,
    pub actions: Vec<f64>,
    /// κ at interior sample points (first/last entries are extrapolated
    /// copies so the vectors align).
    pub curvatures: Vec<f64>,
}

/// I₁(μ) for one μ ∈ (0, A).
pub fn action_integral(profile: &RevolutionProfile, mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < profile.sup_a) {
        return Err(Error::domain(format!(
            "action_integral: mu = {mu} outside (0, {})",
            profile.sup_a
        )));
    }
    let (s_lo, s_hi) = profile.caustics(mu)?;
    let s_mid = profile.s_max;
    let integrand = |s: f64| {
        let a = profile.a(s);
        let q = 1.0 - mu * mu / (a * a);
        q.max(0.0).sqrt()
    };
    // Left branch: s = s_lo + t².
    let t_left = (s_mid - s_lo).sqrt();
    let left = simpson(
        |t| 2.0 * t * integrand(s_lo + t * t),
        0.0,
        t_left,
        2048,
    );
    // Right branch: s = s_hi - t².
    let t_right = (s_hi - s_mid).sqrt();
    let right = simpson(
        |t| 2.0 * t * integrand(s_hi - t * t),
        0.0,
        t_right,
        2048,
    );
    Ok((left + right) / std::f64::consts::PI)
}

/// Verdict of the genericity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GenericityVerdict {
    /// Finitely many inflection points, all nondegenerate (or none at all).
    Generic,
    /// Some inflection point has |dκ/dμ| below the nondegeneracy threshold.
    Degenerate,
    /// Curvature is zero to within the numerical noise floor everywhere
    /// (e.g. the round sphere, where I₁ is exactly affine).
    DegenerateFlat,
    /// Curvature barely exceeds the noise floor; no safe call.
    Inconclusive,
}

/// One detected zero of κ.
#[derive(Debug, Clone, Serialize)]
pub struct InflectionPoint {
    pub mu: f64,
    pub curvature_slope: f64,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericityReport {
    pub verdict: GenericityVerdict,
    pub inflections: Vec<InflectionPoint>,
    pub max_abs_curvature: f64,
    pub noise_floor: f64,
    pub curve: ActionCurve,
}

/// Scan κ(μ) on [0.05·A, 0.95·A] and classify the curve.
pub fn genericity_check(profile: &RevolutionProfile) -> Result<GenericityReport> {
    let a_sup = profile.sup_a;
    let mu_lo = 0.05 * a_sup;
    let mu_hi = 0.95 * a_sup;
    let samples = 241usize;
    let h = (mu_hi - mu_lo) / (samples - 1) as f64;

    let mut mus = Vec::with_capacity(samples);
    let mut actions = Vec::with_capacity(samples);
    for i in 0..samples {
        let mu = mu_lo + h * i as f64;
        mus.push(mu);
        actions.push(action_integral(profile, mu)?);
    }

    // Central differences for I₁' and I₁''; κ = -I₁''/(1+I₁'²)^{3/2}.
    let mut curvatures = vec![0.0; samples];
    for i in 1..samples - 1 {
        let d1 = (actions[i + 1] - actions[i - 1]) / (2.0 * h);
        let d2 = (actions[i + 1] - 2.0 * actions[i] + actions[i - 1]) / (h * h);
        curvatures[i] = -d2 / (1.0 + d1 * d1).powf(1.5);
    }
    curvatures[0] = curvatures[1];
    curvatures[samples - 1] = curvatures[samples - 2];

    // Noise floor: quadrature error (~1e-11) amplified by the second
    // difference, with a safety factor.
    let noise_floor = 20.0 * 1e-11 / (h * h);
    let max_abs = curvatures.iter().fold(0.0f64, |m, &k| m.max(k.abs()));

    let curve = ActionCurve {
        mus: mus.clone(),
        actions,
        curvatures: curvatures.clone(),
    };

    if max_abs <= noise_floor {
        return Ok(GenericityReport {
            verdict: GenericityVerdict::DegenerateFlat,
            inflections: Vec::new(),
            max_abs_curvature: max_abs,
            noise_floor,
            curve,
        });
    }
    if max_abs <= 10.0 * noise_floor {
        return Ok(GenericityReport {
            verdict: GenericityVerdict::Inconclusive,
            inflections: Vec::new(),
            max_abs_curvature: max_abs,
            noise_floor,
            curve,
        });
    }

    // Sign changes of κ, ignoring values below the relative zero threshold.
    let zero_tol = 1e-10 * max_abs;
    let slope_scale = max_abs / (mu_hi - mu_lo);
    let slope_threshold = 1e-6 * slope_scale;
    let mut inflections = Vec::new();
    let mut last_signed: Option<(usize, f64)> = None;
    for (i, &k) in curvatures.iter().enumerate().take(samples - 1).skip(1) {
        if k.abs() <= zero_tol {
            continue;
        }
        if let Some((j, prev)) = last_signed {
            if prev.signum() != k.signum() {
                // Inflection between samples j and i; local slope of κ.
                let mu_star = 0.5 * (mus[j] + mus[i]);
                let slope = (k - prev) / (mus[i] - mus[j]);
                inflections.push(InflectionPoint {
                    mu: mu_star,
                    curvature_slope: slope,
                    nondegenerate: slope.abs() >= slope_threshold,
                });
            }
        }
        last_signed = Some((i, k));
    }

    let verdict = if inflections.iter().all(|p| p.nondegenerate) {
        GenericityVerdict::Generic
    } else {
        GenericityVerdict::Degenerate
    };
    Ok(GenericityReport {
        verdict,
        inflections,
        max_abs_curvature: max_abs,
        noise_floor,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_action_is_affine() {
        // Closed form I₁(μ) = 1 - μ.
        let p = RevolutionProfile::round();
        for &mu in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let v = action_integral(&p, mu).unwrap();
            assert!(
                (v - (1.0 - mu)).abs() <= 1e-10,
                "I₁({mu}) = {v}, want {}",
                1.0 - mu
            );
        }
    }

    #[test]
    fn action_strictly_decreasing() {
        for p in [RevolutionProfile::round(), RevolutionProfile::perturbed(0.1)] {
            let mut prev = f64::MAX;
            let a = p.sup_a;
            for i in 1..40 {
                let mu = a * i as f64 / 41.0;
                let v = action_integral(&p, mu).unwrap();
                assert!(v < prev, "I₁ not decreasing at μ = {mu}");
                prev = v;
            }
            // Tends to zero at the equatorial circle.
            let near_top = action_integral(&p, 0.999 * a).unwrap();
            assert!(near_top < 0.05);
        }
    }

    #[test]
    fn round_sphere_is_degenerate_flat() {
        let report = genericity_check(&RevolutionProfile::round()).unwrap();
        assert_eq!(report.verdict, GenericityVerdict::DegenerateFlat, "{report:?}");
    }

    #[test]
    fn perturbed_profile_is_generic() {
        let report = genericity_check(&RevolutionProfile::perturbed(0.1)).unwrap();
        assert_eq!(report.verdict, GenericityVerdict::Generic);
        // The inflection count is an observation, not an assertion; it must
        // at least be consistent with every slope exceeding the threshold.
        for p in &report.inflections {
            assert!(p.nondegenerate);
        }
    }

    #[test]
    fn rejects_mu_outside_range() {
        let p = RevolutionProfile::round();
        assert!(action_integral(&p, 0.0).is_err());
        assert!(action_integral(&p, 1.0).is_err());
    }
}

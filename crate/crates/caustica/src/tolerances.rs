//! Frozen constants for the non-effective "≲" bounds, with provenance.
//!
//! Protocol: measure each constant on the calibration range (disk
//! λ ∈ [142, 569], i.e. the lower half of the 16-level sweep grid) with
//! `cargo run --release -p caustica --example calibrate`, freeze it here
//! with headroom, and assert no degradation beyond 2x on the extension
//! range (λ up to 2274). Contract-level tolerances (1e-12 zero residuals
//! and the like) live next to their checks instead.

/// Olver zero asymptotics: n·max_k|λ_{k,n} - n·p0(a_k/n^{2/3})| measured
/// 0.01428 over the direct scan n ∈ {50,...,800}, a_k/n^{2/3} <= 2 (mpmath
/// cross-check agrees to 5 digits), and 0.0104 over sweep bands. Frozen
/// with ~2x headroom.
pub const OLVER_RESIDUAL_C: f64 = 0.03;

/// Pairwise zero-spacing bound: max over band pairs n_1 < n_2 of
/// n_1^{1/3}|a_{k_1}-a_{k_2}|/(n_2-n_1); measured 1.334 over the sweep in
/// the cone μ >= 0.3.
pub const ZERO_PAIR_RATIO_C: f64 = 2.7;

/// Interior caustic spacing: min adjacent μ gap × λ over μ ∈ [0.3, 0.9];
/// measured 2.814 on calibration, 2.853 on the extension (gaps exceed 1/λ
/// because only a sparse subset of orders contributes to a band of width
/// λ^{-1/3}). Frozen at the calibration floor; asserted at half this value
/// on λ ∈ [500, 2000].
pub const INTERIOR_SPACING_C: f64 = 2.8;

/// Boundary caustic spacing: min adjacent μ gap × λ·√ε over [1-2ε, 1-ε/2],
/// ε = λ^{-1/3}; measured 1.507 calibration / 1.563 extension.
pub const BOUNDARY_SPACING_C: f64 = 1.5;

/// Fold envelope: max over interior sample points of
/// |φ_ν(x)|·⟨d·λ^{2/3}⟩^{1/4}/λ^{1/6}; measured 0.753 at the first level
/// and 0.756 at the sweep max (growth 1.004x across the full range).
pub const ENVELOPE_RATIO_CAL: f64 = 0.76;

/// Far-zone amplitude (d·λ^{2/3} >= 10): max |φ_ν(x)| measured 1.337
/// across the sweep; stays O(1) because the derivative-term contribution
/// carries a ⟨t⟩^{1/4} weight that cancels its λ^{-1/6} prefactor.
pub const FAR_ZONE_ABS: f64 = 1.5;

/// Deep-shadow leakage: |φ|/envelope at depths t ∈ {15, 20, 30} behind the
/// caustic; measured 4.3e-29 (super-polynomial decay leaves nothing at
/// those depths). The 1e-8 figure is the asserted ceiling.
pub const SHADOW_LEAK: f64 = 1e-8;

/// Near-boundary split, Σ_A (deep shadow side) as a fraction of Σ_total at
/// α = 0.1: measured max 2.07e-4 over radii {1-λ^{-1/3}, 1-λ^{-2/3+α}, 1}
/// and the full sweep. At desk scale the A-floor sits at t = λ^α ≈ 2, so
/// the fraction is small but nowhere near the asymptotic λ^{-∞} regime.
pub const ABC_A_FRACTION: f64 = 1e-3;

/// Σ_C/λ^{8/9}: measured max 0.148.
pub const ABC_C_OVER_L89: f64 = 0.3;

/// Σ_B/λ^{8/9} in the η ≳ λ^{-2/3+α} regime: measured max 0.117.
pub const ABC_B_OVER_L89: f64 = 0.25;

/// Σ_B/λ^{2/3+α} in the η ≲ λ^{-2/3+α} regime: measured max 0.0992.
pub const ABC_B_OVER_L23A: f64 = 0.2;

/// Local Weyl density window for Σ_{λ_ν <= Λ}|φ_ν(x)|²/(Λ²/4π) at interior
/// points; measured 0.997 at r = 0.5, Λ = 60.
pub const WEYL_RATIO_WINDOW: (f64, f64) = (0.7, 1.3);

/// Band members keep 1-μ >= c·λ^{-2/3}: the first zero sits
/// 2^{-1/3}a_1 ≈ 1.8557 above the order in these units; measured min
/// 1.8498 over the sweep.
pub const MU_BOUNDARY_GAP_C: f64 = 1.5;

/// Disk band cardinality over λ^{2/3} (multiplicity counted): measured
/// window [1.68, 2.54] over λ ∈ [142, 2274] (the scatter is the disk's
/// O(λ^{2/3}) counting remainder showing through the thin window).
pub const BAND_COUNT_WINDOW: (f64, f64) = (1.2, 3.2);

/// Exponent-slope assertion offsets at desk scale (subleading corrections
/// are visible at λ <= 2274/341). Measured slopes: interior disk 0.311,
/// boundary disk 0.315, perturbed revolution 0.292 — all close to the
/// conjectured sharp 1/3 and far under the proven bounds.
pub const DISK_SLOPE_TOL: f64 = 0.03;
pub const REVOLUTION_SLOPE_TOL: f64 = 0.05;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_constants_positive_and_ordered() {
        assert!(OLVER_RESIDUAL_C > 0.0);
        assert!(INTERIOR_SPACING_C > 0.0);
        assert!(BOUNDARY_SPACING_C > 0.0);
        assert!(WEYL_RATIO_WINDOW.0 < 1.0 && 1.0 < WEYL_RATIO_WINDOW.1);
        assert!(BAND_COUNT_WINDOW.0 < BAND_COUNT_WINDOW.1);
        assert!(ABC_A_FRACTION < 1.0);
        assert!(ENVELOPE_RATIO_CAL < FAR_ZONE_ABS);
    }
}

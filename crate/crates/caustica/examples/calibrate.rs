//! Calibration run behind the frozen constants in `caustica::tolerances`.
//!
//! Measures every "≲"-type constant on the calibration range (disk
//! λ ∈ [125, 500], revolution λ ∈ [60, 150]) and prints the observed
//! extremes next to the frozen values, plus the assertion-range extremes
//! (λ up to 2000) for the no-growth checks. Rerun with
//!
//!     cargo run --release -p caustica --example calibrate
//!
//! when anything upstream of the band machinery changes.

use caustica::bands::{check_caustic_spacing, check_gap, check_zero_asymptotics, BandEvaluator};
use caustica::bands::{CutoffSpec, SpacingRegion};
use caustica::disk::{disk_band_spectrum, DiskSpectrum};
use caustica::norms::{
    abc_decomposition, envelope_ratio, local_weyl_ratio, region_grid, shadow_decay_max,
    sup_over_region, Region,
};
use caustica::revolution::{rev_band_spectrum, RevSpectrum, RevolutionProfile};
use caustica::specfun::AiryZeroTable;
use caustica::sweep::{fit_loglog, log_spaced_lambdas};

fn main() {
    let cutoff = CutoffSpec::default();
    let lambdas = log_spaced_lambdas(125.0, 2000.0, 16, 1.137);
    let disk = DiskSpectrum::new(0.0);
    let airy = AiryZeroTable::new(2000).unwrap();

    let mut interior_min_cal = f64::MAX;
    let mut interior_min_ext = f64::MAX;
    let mut boundary_min_cal = f64::MAX;
    let mut boundary_min_ext = f64::MAX;
    let mut envelope_per_lambda = Vec::new();
    let mut far_zone_max = 0.0f64;
    let mut shadow_max = 0.0f64;
    let mut count_ratio = (f64::MAX, f64::MIN);
    let mut mu_gap_min = f64::MAX;
    let mut pair_ratio_max = 0.0f64;
    let mut olver_resid_max = 0.0f64;
    let mut abc_a_frac = 0.0f64;
    let mut abc_c_ratio = 0.0f64;
    let mut abc_b_l89 = 0.0f64;
    let mut abc_b_l23a = 0.0f64;
    let mut sup_points = Vec::new();
    let mut boundary_sup_points = Vec::new();
    let interior = Region::DiskAnnulus { r_lo: 0.3, r_hi: 0.7 };
    let boundary_region = Region::DiskAnnulus { r_lo: 0.9, r_hi: 1.0 };

    for &lambda in &lambdas {
        let calibration = lambda <= 500.0 * 1.137 + 1.0;
        let delta = lambda.powf(-1.0 / 3.0);
        let db = disk_band_spectrum(&disk, lambda, delta, &cutoff).unwrap();
        let band = &db.band;

        let gap = check_gap(band, 0.95);
        assert!(gap.injective, "gap violation at λ={lambda}");

        let spacing = check_caustic_spacing(
            band,
            SpacingRegion::Interior { mu_lo: 0.3, mu_hi: 0.9 },
        );
        if let Some(g) = spacing.normalized_min_gap {
            if calibration {
                interior_min_cal = interior_min_cal.min(g);
            } else {
                interior_min_ext = interior_min_ext.min(g);
            }
        }
        let bspacing = check_caustic_spacing(
            band,
            SpacingRegion::Boundary { eps: lambda.powf(-1.0 / 3.0) },
        );
        if let Some(g) = bspacing.normalized_min_gap {
            if calibration {
                boundary_min_cal = boundary_min_cal.min(g);
            } else {
                boundary_min_ext = boundary_min_ext.min(g);
            }
        }

        let grid = region_grid(&db, &interior);
        let env = envelope_ratio(&db, &grid, 0.05);
        envelope_per_lambda.push((lambda, env.max_ratio));
        far_zone_max = far_zone_max.max(env.far_zone_max_abs);
        shadow_max = shadow_max.max(shadow_decay_max(&db, &interior, 0.05));

        let cr = band.counted_size() as f64 / lambda.powf(2.0 / 3.0);
        count_ratio = (count_ratio.0.min(cr), count_ratio.1.max(cr));

        for m in &band.modes {
            mu_gap_min = mu_gap_min.min((1.0 - m.nu.mu) * lambda.powf(2.0 / 3.0));
        }

        let za = check_zero_asymptotics(band, &airy, 0.3).unwrap();
        pair_ratio_max = pair_ratio_max.max(za.max_pair_ratio);
        if za.inspected > 0 {
            olver_resid_max = olver_resid_max.max(za.max_residual * za.n_min as f64);
        }

        let alpha = 0.1;
        let split = lambda.powf(-2.0 / 3.0 + alpha);
        let l89 = lambda.powf(8.0 / 9.0);
        let l23a = lambda.powf(2.0 / 3.0 + alpha);
        for r in [1.0 - lambda.powf(-1.0 / 3.0), 1.0 - split, 1.0] {
            let abc = abc_decomposition(&db, r, alpha).unwrap();
            if abc.total > 0.0 {
                abc_a_frac = abc_a_frac.max(abc.sum_a / abc.total);
            }
            abc_c_ratio = abc_c_ratio.max(abc.sum_c / l89);
            if (1.0 - r) >= split {
                abc_b_l89 = abc_b_l89.max(abc.sum_b / l89);
            } else {
                abc_b_l23a = abc_b_l23a.max(abc.sum_b / l23a);
            }
        }

        let sup = sup_over_region(&db, &interior);
        sup_points.push((lambda, sup.sup_value.sqrt()));
        let bsup = sup_over_region(&db, &boundary_region);
        boundary_sup_points.push((lambda, bsup.sup_value.sqrt()));
        eprintln!(
            "λ={lambda:9.2} modes={:4} count/λ^(2/3)={cr:.3} sup={:.4e} bsup={:.4e} env={:.3}",
            band.counted_size(),
            sup.sup_value,
            bsup.sup_value,
            env.max_ratio
        );
    }

    println!("== disk calibration (λ in [142, 569]) vs extension (λ to 2274) ==");
    println!("interior spacing c: cal {interior_min_cal:.4}, ext {interior_min_ext:.4} (frozen INTERIOR_SPACING_C, assert >= c/2)");
    println!("boundary spacing c': cal {boundary_min_cal:.4}, ext {boundary_min_ext:.4} (frozen BOUNDARY_SPACING_C)");
    let env_first = envelope_per_lambda.first().unwrap().1;
    let env_max = envelope_per_lambda
        .iter()
        .fold(0.0f64, |m, &(_, e)| m.max(e));
    println!("envelope ratio: first {env_first:.4}, max {env_max:.4}, growth {:.3}x", env_max / env_first);
    println!("far-zone |φ| max: {far_zone_max:.4} (frozen FAR_ZONE_ABS)");
    println!("shadow leak max: {shadow_max:.3e} (frozen SHADOW_LEAK)");
    println!("band count / λ^(2/3): [{:.3}, {:.3}] (frozen BAND_COUNT_WINDOW)", count_ratio.0, count_ratio.1);
    println!("(1-μ)λ^(2/3) min: {mu_gap_min:.4} (frozen MU_BOUNDARY_GAP_C)");
    println!("zero-pair ratio max: {pair_ratio_max:.4} (frozen ZERO_PAIR_RATIO_C)");
    println!("olver n·residual max over bands: {olver_resid_max:.5} (frozen OLVER_RESIDUAL_C)");
    println!("abc: A/total max {abc_a_frac:.3e}, C/λ^(8/9) max {abc_c_ratio:.4}, B/λ^(8/9) max {abc_b_l89:.4}, B/λ^(2/3+α) max {abc_b_l23a:.4}");
    let fit = fit_loglog(&sup_points, 8).unwrap();
    println!("interior sup slope: {:.4} (bound 5/12+0.03 = {:.4})", fit.slope, 5.0 / 12.0 + 0.03);
    let bfit = fit_loglog(&boundary_sup_points, 8).unwrap();
    println!("boundary sup slope: {:.4} (bound 4/9+0.03 = {:.4})", bfit.slope, 4.0 / 9.0 + 0.03);
    let weyl = local_weyl_ratio(0.5, 60.0).unwrap();
    println!("local Weyl ratio at r=0.5, Λ=60: {weyl:.4} (frozen WEYL_RATIO_WINDOW)");

    // Revolution side: perturbed profile, λ ∈ [60, 300].
    println!("== revolution (perturbed 0.1) ==");
    let profile = RevolutionProfile::perturbed(0.1);
    let s_max = profile.s_max;
    let spectrum = RevSpectrum::new(profile, 0.05);
    let rev_region = Region::RevolutionIntervals {
        intervals: vec![(0.35, s_max - 0.25), (s_max + 0.25, std::f64::consts::PI - 0.35)],
    };
    let mut rev_sup = Vec::new();
    for &lambda in &log_spaced_lambdas(60.0, 300.0, 8, 1.137) {
        let delta = lambda.powf(-1.0 / 3.0);
        let rb = rev_band_spectrum(&spectrum, lambda, delta, &cutoff).unwrap();
        let gap = check_gap(&rb.band, spectrum.profile.sup_a - 0.05);
        let sup = sup_over_region(&rb, &rev_region);
        rev_sup.push((lambda, sup.sup_value.sqrt()));
        let cr = rb.band.counted_size() as f64 / lambda.powf(2.0 / 3.0);
        eprintln!(
            "rev λ={lambda:8.2} modes={:4} count/λ^(2/3)={cr:.3} sup={:.4e} gap_injective={}",
            rb.band.counted_size(),
            sup.sup_value,
            gap.injective
        );
    }
    let rfit = fit_loglog(&rev_sup, 8).unwrap();
    println!("revolution sup slope: {:.4} (bound 5/12+0.05 = {:.4})", rfit.slope, 5.0 / 12.0 + 0.05);
}

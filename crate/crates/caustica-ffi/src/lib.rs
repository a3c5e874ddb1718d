//! C ABI for the caustica library: scalar special functions, plus opaque
//! band handles with projector-sum and region-sup entry points, so other
//! languages can drive the spectral machinery.
//!
//! Conventions:
//! - every fallible call returns a [`CausticaStatus`] and writes results
//!   through out-pointers, which must be non-null;
//! - handles come from `*_new` and must be released with the matching
//!   `*_free`; they are never shared across a `*_free`;
//! - all panics are caught at the boundary and surfaced as
//!   `CAUSTICA_STATUS_INTERNAL`.
//!
//! The header `include/caustica.h` is generated by cbindgen at build time.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use caustica::bands::CutoffSpec;
use caustica::disk::{disk_band_spectrum, DiskBand, DiskSpectrum};
use caustica::norms::{projector_sum, sup_over_region, Region};
use caustica::revolution::{rev_band_spectrum, RevBand, RevSpectrum, RevolutionProfile};
use caustica::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CausticaStatus {
    Ok = 0,
    /// Argument outside the mathematical domain.
    Domain = 1,
    /// Invalid index (zero in a 1-based convention, or out of range).
    Index = 2,
    /// Iteration failed to converge.
    NoConvergence = 3,
    /// A numerical invariant failed.
    Numerical = 4,
    /// Grid too coarse for the requested frequency.
    Resolution = 5,
    /// Operation not supported for this input.
    Unsupported = 6,
    /// Bad configuration value.
    Config = 7,
    /// Null pointer argument.
    NullPointer = 8,
    /// Unexpected internal failure (caught panic).
    Internal = 99,
}

fn status_of(e: &Error) -> CausticaStatus {
    match e {
        Error::Domain(_) => CausticaStatus::Domain,
        Error::Index(_) => CausticaStatus::Index,
        Error::NoConvergence { .. } => CausticaStatus::NoConvergence,
        Error::Numerical(_) => CausticaStatus::Numerical,
        Error::Resolution { .. } => CausticaStatus::Resolution,
        Error::Unsupported(_) => CausticaStatus::Unsupported,
        Error::Config(_) | Error::Json(_) => CausticaStatus::Config,
        Error::Io(_) | Error::InsufficientData(_) => CausticaStatus::Internal,
    }
}

fn guarded<F: FnOnce() -> CausticaStatus>(f: F) -> CausticaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(CausticaStatus::Internal)
}

macro_rules! write_out {
    ($ptr:expr, $value:expr) => {{
        if $ptr.is_null() {
            return CausticaStatus::NullPointer;
        }
        unsafe { *$ptr = $value };
        CausticaStatus::Ok
    }};
}

macro_rules! try_ffi {
    ($expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn caustica_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Airy function Ai(x).
#[no_mangle]
pub extern "C" fn caustica_airy_ai(x: f64, out: *mut f64) -> CausticaStatus {
    guarded(|| {
        let v = try_ffi!(caustica::specfun::airy_ai(x));
        write_out!(out, v)
    })
}

/// Derivative Ai'(x).
#[no_mangle]
pub extern "C" fn caustica_airy_ai_prime(x: f64, out: *mut f64) -> CausticaStatus {
    guarded(|| {
        let v = try_ffi!(caustica::specfun::airy_ai_prime(x));
        write_out!(out, v)
    })
}

/// k-th zero of Ai as a positive magnitude (1-based k).
#[no_mangle]
pub extern "C" fn caustica_airy_zero(k: u32, out: *mut f64) -> CausticaStatus {
    guarded(|| {
        let v = try_ffi!(caustica::specfun::airy_zero(k));
        write_out!(out, v)
    })
}

/// Bessel J_n(x) for integer order n >= 0, x >= 0.
#[no_mangle]
pub extern "C" fn caustica_bessel_j(n: u32, x: f64, out: *mut f64) -> CausticaStatus {
    guarded(|| {
        let v = try_ffi!(caustica::specfun::bessel_j(n, x));
        write_out!(out, v)
    })
}

/// Derivative J_n'(x).
#[no_mangle]
pub extern "C" fn caustica_bessel_j_prime(n: u32, x: f64, out: *mut f64) -> CausticaStatus {
    guarded(|| {
        let v = try_ffi!(caustica::specfun::bessel_j_prime(n, x));
        write_out!(out, v)
    })
}

/// k-th positive zero of J_n (1-based k).
#[no_mangle]
pub extern "C" fn caustica_bessel_zero(n: u32, k: u32, out: *mut f64) -> CausticaStatus {
    guarded(|| {
        let v = try_ffi!(caustica::specfun::bessel_zero(n, k));
        write_out!(out, v.value)
    })
}

/// Transition function p0(t): the z >= 1 solving
/// sqrt(z²-1) - arccos(1/z) = (2/3)t^{3/2}.
#[no_mangle]
pub extern "C" fn caustica_olver_p0(t: f64, out: *mut f64) -> CausticaStatus {
    guarded(|| {
        let v = try_ffi!(caustica::specfun::olver_p0(t));
        write_out!(out, v)
    })
}

/// One band member as seen through the C ABI.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct CausticaMode {
    /// Frequency λ_{k,n}.
    pub lambda: f64,
    /// Angular momentum magnitude |n|.
    pub n: u32,
    /// Radial index, 1-based.
    pub k: u32,
    /// Clairaut parameter |n|/λ.
    pub mu: f64,
    /// Cutoff weight φ((λ_ν-λ)/δ)² in (0, 1].
    pub weight: f64,
    /// 1 for n = 0, 2 for the ±n pair.
    pub multiplicity: u8,
}

/// Opaque disk band handle.
pub struct CausticaDiskBand {
    inner: DiskBand,
}

/// Opaque revolution band handle.
pub struct CausticaRevBand {
    inner: RevBand,
}

/// Build a disk band at level `lambda` and width `delta` (pass delta <= 0
/// for the default λ^{-1/3}); modes with |n| < n_min_fraction·λ are
/// dropped (0 keeps everything).
#[no_mangle]
pub extern "C" fn caustica_disk_band_new(
    lambda: f64,
    delta: f64,
    n_min_fraction: f64,
    out: *mut *mut CausticaDiskBand,
) -> CausticaStatus {
    guarded(|| {
        if out.is_null() {
            return CausticaStatus::NullPointer;
        }
        if !(0.0..1.0).contains(&n_min_fraction) {
            return CausticaStatus::Config;
        }
        let delta = if delta > 0.0 {
            delta
        } else {
            lambda.powf(-1.0 / 3.0)
        };
        let spectrum = DiskSpectrum::new(n_min_fraction);
        let band = try_ffi!(disk_band_spectrum(
            &spectrum,
            lambda,
            delta,
            &CutoffSpec::default()
        ));
        let handle = Box::into_raw(Box::new(CausticaDiskBand { inner: band }));
        write_out!(out, handle)
    })
}

/// Release a disk band handle.
///
/// # Safety
/// `handle` must come from [`caustica_disk_band_new`] and must not be used
/// afterwards. Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn caustica_disk_band_free(handle: *mut CausticaDiskBand) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Number of stored (n, k) members of the band.
///
/// # Safety
/// `handle` must be a live handle from [`caustica_disk_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_disk_band_len(handle: *const CausticaDiskBand) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.inner.band.modes.len()
}

/// Fetch band member `i` (0-based over the stored members).
///
/// # Safety
/// `handle` must be a live handle from [`caustica_disk_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_disk_band_mode(
    handle: *const CausticaDiskBand,
    i: usize,
    out: *mut CausticaMode,
) -> CausticaStatus {
    if handle.is_null() {
        return CausticaStatus::NullPointer;
    }
    let band = &unsafe { &*handle }.inner.band;
    let Some(m) = band.modes.get(i) else {
        return CausticaStatus::Index;
    };
    write_out!(
        out,
        CausticaMode {
            lambda: m.nu.lambda,
            n: m.nu.n,
            k: m.nu.k,
            mu: m.nu.mu,
            weight: m.weight,
            multiplicity: m.multiplicity,
        }
    )
}

/// Weighted projector sum S(r) = Σ w·mult·|φ(r)|² of a disk band.
///
/// # Safety
/// `handle` must be a live handle from [`caustica_disk_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_disk_band_projector_sum(
    handle: *const CausticaDiskBand,
    r: f64,
    out: *mut f64,
) -> CausticaStatus {
    guarded(|| {
        if handle.is_null() {
            return CausticaStatus::NullPointer;
        }
        if !(0.0..=1.0).contains(&r) {
            return CausticaStatus::Domain;
        }
        let v = projector_sum(&unsafe { &*handle }.inner, r);
        write_out!(out, v)
    })
}

/// Sup of the projector sum over the annulus [r_lo, r_hi] ⊂ (0, 1].
///
/// # Safety
/// `handle` must be a live handle from [`caustica_disk_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_disk_band_sup(
    handle: *const CausticaDiskBand,
    r_lo: f64,
    r_hi: f64,
    out_sup: *mut f64,
    out_argmax: *mut f64,
) -> CausticaStatus {
    guarded(|| {
        if handle.is_null() {
            return CausticaStatus::NullPointer;
        }
        let region = Region::DiskAnnulus { r_lo, r_hi };
        if region.validate().is_err() {
            return CausticaStatus::Config;
        }
        let result = sup_over_region(&unsafe { &*handle }.inner, &region);
        if out_argmax.is_null() {
            return CausticaStatus::NullPointer;
        }
        unsafe { *out_argmax = result.argmax };
        write_out!(out_sup, result.sup_value)
    })
}

/// Build a revolution band for a builtin profile ("round" or
/// "perturbed(eps)") at level `lambda`, width `delta` (<= 0 for λ^{-1/3}),
/// inside the cone |n| <= (A - cone_eps)·λ.
#[no_mangle]
pub extern "C" fn caustica_rev_band_new(
    profile: *const c_char,
    cone_eps: f64,
    lambda: f64,
    delta: f64,
    out: *mut *mut CausticaRevBand,
) -> CausticaStatus {
    guarded(|| {
        if out.is_null() || profile.is_null() {
            return CausticaStatus::NullPointer;
        }
        let name = match unsafe { CStr::from_ptr(profile) }.to_str() {
            Ok(s) => s,
            Err(_) => return CausticaStatus::Config,
        };
        let profile = if name == "round" {
            RevolutionProfile::round()
        } else if let Some(eps) = name
            .strip_prefix("perturbed(")
            .and_then(|s| s.strip_suffix(')'))
            .and_then(|s| s.trim().parse::<f64>().ok())
        {
            if !(eps.abs() < 0.25) {
                return CausticaStatus::Config;
            }
            RevolutionProfile::perturbed(eps)
        } else {
            return CausticaStatus::Config;
        };
        if !(cone_eps > 0.0 && cone_eps < profile.sup_a) {
            return CausticaStatus::Config;
        }
        let delta = if delta > 0.0 {
            delta
        } else {
            lambda.powf(-1.0 / 3.0)
        };
        let spectrum = RevSpectrum::new(profile, cone_eps);
        let band = try_ffi!(rev_band_spectrum(
            &spectrum,
            lambda,
            delta,
            &CutoffSpec::default()
        ));
        let handle = Box::into_raw(Box::new(CausticaRevBand { inner: band }));
        write_out!(out, handle)
    })
}

/// Release a revolution band handle.
///
/// # Safety
/// `handle` must come from [`caustica_rev_band_new`] and must not be used
/// afterwards. Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn caustica_rev_band_free(handle: *mut CausticaRevBand) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Number of stored (n, k) members.
///
/// # Safety
/// `handle` must be a live handle from [`caustica_rev_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_rev_band_len(handle: *const CausticaRevBand) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.inner.band.modes.len()
}

/// Fetch band member `i` (0-based).
///
/// # Safety
/// `handle` must be a live handle from [`caustica_rev_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_rev_band_mode(
    handle: *const CausticaRevBand,
    i: usize,
    out: *mut CausticaMode,
) -> CausticaStatus {
    if handle.is_null() {
        return CausticaStatus::NullPointer;
    }
    let band = &unsafe { &*handle }.inner.band;
    let Some(m) = band.modes.get(i) else {
        return CausticaStatus::Index;
    };
    write_out!(
        out,
        CausticaMode {
            lambda: m.nu.lambda,
            n: m.nu.n,
            k: m.nu.k,
            mu: m.nu.mu,
            weight: m.weight,
            multiplicity: m.multiplicity,
        }
    )
}

/// Weighted projector sum S(s) of a revolution band at arclength s.
///
/// # Safety
/// `handle` must be a live handle from [`caustica_rev_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_rev_band_projector_sum(
    handle: *const CausticaRevBand,
    s: f64,
    out: *mut f64,
) -> CausticaStatus {
    guarded(|| {
        if handle.is_null() {
            return CausticaStatus::NullPointer;
        }
        let band = &unsafe { &*handle }.inner;
        if !(s >= 0.0 && s <= band.profile.length) {
            return CausticaStatus::Domain;
        }
        let v = projector_sum(band, s);
        write_out!(out, v)
    })
}

/// Sup of the projector sum over the s-interval [s_lo, s_hi] ⊂ (0, L).
///
/// # Safety
/// `handle` must be a live handle from [`caustica_rev_band_new`].
#[no_mangle]
pub unsafe extern "C" fn caustica_rev_band_sup(
    handle: *const CausticaRevBand,
    s_lo: f64,
    s_hi: f64,
    out_sup: *mut f64,
    out_argmax: *mut f64,
) -> CausticaStatus {
    guarded(|| {
        if handle.is_null() {
            return CausticaStatus::NullPointer;
        }
        let band = &unsafe { &*handle }.inner;
        let region = Region::RevolutionIntervals {
            intervals: vec![(s_lo, s_hi)],
        };
        if region.validate().is_err() || s_hi > band.profile.length {
            return CausticaStatus::Config;
        }
        let result = sup_over_region(band, &region);
        if out_argmax.is_null() {
            return CausticaStatus::NullPointer;
        }
        unsafe { *out_argmax = result.argmax };
        write_out!(out_sup, result.sup_value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_functions_through_the_abi() {
        let mut v = 0.0f64;
        assert_eq!(caustica_airy_ai(0.0, &mut v), CausticaStatus::Ok);
        assert!((v - 0.3550280538878172).abs() < 1e-14);
        assert_eq!(caustica_bessel_zero(0, 1, &mut v), CausticaStatus::Ok);
        assert!((v - 2.404825557695773).abs() < 1e-11);
        assert_eq!(caustica_olver_p0(0.0, &mut v), CausticaStatus::Ok);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn error_codes_map() {
        let mut v = 0.0f64;
        assert_eq!(caustica_airy_ai(f64::NAN, &mut v), CausticaStatus::Domain);
        assert_eq!(caustica_airy_zero(0, &mut v), CausticaStatus::Index);
        assert_eq!(caustica_bessel_j(0, -1.0, &mut v), CausticaStatus::Domain);
        assert_eq!(
            caustica_airy_ai(0.0, std::ptr::null_mut()),
            CausticaStatus::NullPointer
        );
    }

    #[test]
    fn disk_band_handle_lifecycle() {
        let mut handle: *mut CausticaDiskBand = std::ptr::null_mut();
        assert_eq!(
            caustica_disk_band_new(150.0, -1.0, 0.0, &mut handle),
            CausticaStatus::Ok
        );
        assert!(!handle.is_null());
        unsafe {
            let len = caustica_disk_band_len(handle);
            assert!(len > 0);
            let mut mode = std::mem::zeroed::<CausticaMode>();
            assert_eq!(caustica_disk_band_mode(handle, 0, &mut mode), CausticaStatus::Ok);
            assert!(mode.lambda > 0.0 && mode.mu < 1.0);
            assert_eq!(
                caustica_disk_band_mode(handle, len, &mut mode),
                CausticaStatus::Index
            );
            let mut s = 0.0;
            assert_eq!(
                caustica_disk_band_projector_sum(handle, 0.5, &mut s),
                CausticaStatus::Ok
            );
            assert!(s >= 0.0);
            let (mut sup, mut arg) = (0.0, 0.0);
            assert_eq!(
                caustica_disk_band_sup(handle, 0.3, 0.7, &mut sup, &mut arg),
                CausticaStatus::Ok
            );
            assert!(sup > 0.0 && (0.3..=0.7).contains(&arg));
            assert_eq!(
                caustica_disk_band_sup(handle, 0.7, 0.3, &mut sup, &mut arg),
                CausticaStatus::Config
            );
            caustica_disk_band_free(handle);
        }
    }

    #[test]
    fn rev_band_handle_lifecycle() {
        let name = std::ffi::CString::new("perturbed(0.1)").unwrap();
        let mut handle: *mut CausticaRevBand = std::ptr::null_mut();
        assert_eq!(
            caustica_rev_band_new(name.as_ptr(), 0.05, 40.0, -1.0, &mut handle),
            CausticaStatus::Ok
        );
        unsafe {
            assert!(caustica_rev_band_len(handle) > 0);
            let mut s = 0.0;
            assert_eq!(
                caustica_rev_band_projector_sum(handle, 1.0, &mut s),
                CausticaStatus::Ok
            );
            let (mut sup, mut arg) = (0.0, 0.0);
            assert_eq!(
                caustica_rev_band_sup(handle, 0.4, 1.1, &mut sup, &mut arg),
                CausticaStatus::Ok
            );
            assert!(sup > 0.0 && arg >= 0.4 && arg <= 1.1);
            caustica_rev_band_free(handle);
        }
        let bad = std::ffi::CString::new("torus").unwrap();
        assert_eq!(
            caustica_rev_band_new(bad.as_ptr(), 0.05, 40.0, -1.0, &mut handle),
            CausticaStatus::Config
        );
    }
}

//! Joint spectrum, normalized eigenfunctions, and caustics of the Dirichlet
//! Laplacian on the unit disk.
//!
//! Eigenfunctions in polar coordinates are c_{k,n}·J_n(λ_{k,n} r)·e^{inθ}
//! with λ_{k,n} the k-th zero of J_n, so the joint spectrum is the zero set
//! of the Bessel family and everything reduces to specfun calls. Modes are
//! stored for n >= 0 with a multiplicity-2 flag standing in for the ±n pair
//! (|φ|² is θ-independent either way).

use std::sync::Arc;

use serde::Serialize;

use crate::bands::{
    assemble_band, Band, BandEvaluator, CutoffSpec, JointEigenvalue, SourceKind, SpectrumSource,
};
use crate::error::{Error, Result};
use crate::specfun::{bessel_zeros_in_interval, j_with_prime, BesselZero};
use crate::sweep::Cache;

/// The caustic circle r = μ of a disk mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Caustic {
    pub mu: f64,
}

impl Caustic {
    /// Distance from the caustic circle to the boundary circle r = 1.
    pub fn boundary_distance(&self) -> f64 {
        1.0 - self.mu
    }
}

/// A Dirichlet disk eigenfunction with its L² normalization constant.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiskMode {
    pub nu: JointEigenvalue,
    /// c_{k,n} with ∫_D |c·J_n(λr)e^{inθ}|² = 1.
    pub c: f64,
}

impl DiskMode {
    pub fn caustic(&self) -> Caustic {
        Caustic { mu: self.nu.mu }
    }
}

/// Normalization constant from the closed-form radial integral at a zero:
/// ∫_0^1 J_n(λ r)² r dr = J_{n+1}(λ)²/2 when J_n(λ) = 0, so
/// c = 1/(√π·|J_{n+1}(λ)|).
pub fn disk_norm_const(n: u32, k: u32, zero: &BesselZero) -> Result<f64> {
    debug_assert_eq!((zero.n, zero.k), (n, k));
    let j_next = j_with_prime(n + 1, zero.value).0;
    if j_next.abs() < 1e-300 {
        return Err(Error::numerical(format!(
            "disk_norm_const({n},{k}): J_{{n+1}} vanishes at {};
             the supplied zero is not a zero of J_n",
            zero.value
        )));
    }
    Ok(1.0 / (std::f64::consts::PI.sqrt() * j_next.abs()))
}

/// |φ(r,θ)|² = c²·J_n(λ r)² of one mode (θ-independent; the ±n multiplicity
/// flag is applied by callers).
pub fn disk_eigenfunction_sq(mode: &DiskMode, r: f64) -> f64 {
    let j = j_with_prime(mode.nu.n, mode.nu.lambda * r).0;
    mode.c * mode.c * j * j
}

/// Spectrum source for the disk. Zero lookups go through the shared cache
/// when one is attached.
#[derive(Clone, Default)]
pub struct DiskSpectrum {
    /// Cone restriction: drop modes with |n| < fraction·λ (0 keeps all).
    pub n_min_fraction: f64,
    pub cache: Option<Arc<Cache>>,
}

impl DiskSpectrum {
    pub fn new(n_min_fraction: f64) -> Self {
        DiskSpectrum {
            n_min_fraction,
            cache: None,
        }
    }

    pub fn with_cache(n_min_fraction: f64, cache: Arc<Cache>) -> Self {
        DiskSpectrum {
            n_min_fraction,
            cache: Some(cache),
        }
    }

    fn zeros_in(&self, n: u32, lo: f64, hi: f64) -> Result<Vec<BesselZero>> {
        match &self.cache {
            None => bessel_zeros_in_interval(n, lo, hi),
            Some(cache) => {
                let key = format!("disk/w/{n}/{:016x}/{:016x}", lo.to_bits(), hi.to_bits());
                let packed = cache.get_or_compute(&key, || {
                    let zs = bessel_zeros_in_interval(n, lo, hi)?;
                    let mut flat = Vec::with_capacity(2 * zs.len());
                    for z in &zs {
                        flat.push(z.k as f64);
                        flat.push(z.value);
                    }
                    Ok(flat)
                })?;
                Ok(packed
                    .chunks_exact(2)
                    .map(|c| BesselZero {
                        n,
                        k: c[0] as u32,
                        value: c[1],
                    })
                    .collect())
            }
        }
    }
}

impl SpectrumSource for DiskSpectrum {
    fn kind(&self) -> SourceKind {
        SourceKind::Disk
    }

    fn eigenvalues_in(&self, lo: f64, hi: f64) -> Result<Vec<(JointEigenvalue, u8)>> {
        if !(hi > 0.0) {
            return Ok(Vec::new());
        }
        let lo = lo.max(0.0);
        // Zeros of J_n exceed n, so orders at or above hi contribute nothing.
        let n_max = hi.ceil() as u32;
        let n_min = (self.n_min_fraction * lo).floor().max(0.0) as u32;
        let mut out = Vec::new();
        for n in n_min..=n_max {
            if (n as f64) < self.n_min_fraction * lo {
                continue;
            }
            if n as f64 >= hi {
                break;
            }
            for z in self.zeros_in(n, lo, hi)? {
                let mult = if n == 0 { 1 } else { 2 };
                out.push((JointEigenvalue::new(z.value, n, z.k), mult));
            }
        }
        Ok(out)
    }
}

/// A disk band: the generic [`Band`] plus the normalized mode data aligned
/// with `band.modes`.
#[derive(Debug, Clone, Serialize)]
pub struct DiskBand {
    pub band: Band,
    pub modes: Vec<DiskMode>,
}

/// Build the band at level λ and width δ: all (n, k) with λ_{k,n} in the
/// cutoff support, normalized and weighted.
pub fn disk_band_spectrum(
    spectrum: &DiskSpectrum,
    lambda: f64,
    delta: f64,
    cutoff: &CutoffSpec,
) -> Result<DiskBand> {
    let band = assemble_band(spectrum, lambda, delta, cutoff)?;
    let modes = band
        .modes
        .iter()
        .map(|m| {
            let zero = BesselZero {
                n: m.nu.n,
                k: m.nu.k,
                value: m.nu.lambda,
            };
            Ok(DiskMode {
                nu: m.nu,
                c: disk_norm_const(m.nu.n, m.nu.k, &zero)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiskBand { band, modes })
}

impl BandEvaluator for DiskBand {
    fn band(&self) -> &Band {
        &self.band
    }

    fn eval_sq(&self, i: usize, x: f64) -> f64 {
        disk_eigenfunction_sq(&self.modes[i], x)
    }

    fn caustic_distance(&self, i: usize, x: f64) -> f64 {
        (x - self.modes[i].nu.mu).abs()
    }

    fn caustic_coords(&self, i: usize) -> (f64, f64) {
        let mu = self.modes[i].nu.mu;
        (mu, mu)
    }
}

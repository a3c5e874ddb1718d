//! Frequency-band assembly over a spectrum source, plus the lattice, caustic
//! spacing, and zero-asymptotics diagnostics that run per band.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{olver_p0, AiryZeroTable};

/// One point ν = (λ_{k,n}, n) of a joint spectrum. `n` stores |n|; the ±n
/// pair of an axisymmetric surface is carried as a multiplicity flag on the
/// band mode instead of as two entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointEigenvalue {
    /// Frequency λ_{k,n} (square root of the Laplace eigenvalue).
    pub lambda: f64,
    /// Angular momentum magnitude |n|.
    pub n: u32,
    /// Radial index, 1-based.
    pub k: u32,
    /// Clairaut parameter μ = |n|/λ.
    pub mu: f64,
}

impl JointEigenvalue {
    pub fn new(lambda: f64, n: u32, k: u32) -> Self {
        JointEigenvalue {
            lambda,
            n,
            k,
            mu: n as f64 / lambda,
        }
    }
}

/// Smooth even cutoff: φ = 1 on [-plateau, plateau], φ = 0 off
/// (-support, support), glued by h(u) = g(u)/(g(u)+g(1-u)) with
/// g(u) = e^{-1/u}·1_{u>0}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CutoffSpec {
    pub plateau_half_width: f64,
    pub support_half_width: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec {
            plateau_half_width: 1.0,
            support_half_width: 2.0,
        }
    }
}

fn bump(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = bump(u);
        a / (a + bump(1.0 - u))
    }
}

impl CutoffSpec {
    /// φ(t), the cutoff profile in band units.
    pub fn phi(&self, t: f64) -> f64 {
        let u = (self.support_half_width - t.abs())
            / (self.support_half_width - self.plateau_half_width);
        smooth_step(u)
    }

    /// φ((λ_ν-λ)/δ)², the summation weight of a mode.
    pub fn weight(&self, lambda_nu: f64, lambda: f64, delta: f64) -> f64 {
        let p = self.phi((lambda_nu - lambda) / delta);
        p * p
    }
}

/// Which surface a band was extracted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SourceKind {
    Disk,
    Revolution,
}

/// One band member with its cutoff weight.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BandMode {
    pub nu: JointEigenvalue,
    /// φ((λ_ν-λ)/δ)² ∈ (0, 1].
    pub weight: f64,
    /// 1 for n = 0, 2 for the ±n pair.
    pub multiplicity: u8,
}

/// The modes hit by the cutoff at level λ and width δ, with their caustic
/// parameters μ sorted ascending (one entry per stored ±n pair).
#[derive(Debug, Clone, Serialize)]
pub struct Band {
    pub source: SourceKind,
    pub lambda: f64,
    pub delta: f64,
    pub modes: Vec<BandMode>,
    pub mus: Vec<f64>,
}

impl Band {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Sum of multiplicities (counts ±n separately).
    pub fn counted_size(&self) -> usize {
        self.modes.iter().map(|m| m.multiplicity as usize).sum()
    }
}

/// Anything that can enumerate its joint spectrum inside a frequency window.
pub trait SpectrumSource {
    fn kind(&self) -> SourceKind;
    /// All (ν, multiplicity) with λ_ν in [lo, hi], sorted by (n, k).
    fn eigenvalues_in(&self, lo: f64, hi: f64) -> Result<Vec<(JointEigenvalue, u8)>>;
}

/// A band together with the data needed to evaluate its eigenfunctions at a
/// radial coordinate (r on the disk, s on a revolution surface). |φ|² is
/// θ-independent on both surfaces, so one coordinate suffices; the ±n
/// multiplicity flag is applied by the summation layer, not here.
pub trait BandEvaluator: Sync {
    fn band(&self) -> &Band;
    /// |φ_i(x)|² of band mode i at coordinate x.
    fn eval_sq(&self, i: usize, x: f64) -> f64;
    /// Distance from x to the caustic set of mode i.
    fn caustic_distance(&self, i: usize, x: f64) -> f64;
    /// The caustic coordinates of mode i (the two branches coincide on the
    /// disk).
    fn caustic_coords(&self, i: usize) -> (f64, f64);
}

/// Collect the cutoff support window around λ into a [`Band`].
pub fn assemble_band<S: SpectrumSource + ?Sized>(
    source: &S,
    lambda: f64,
    delta: f64,
    cutoff: &CutoffSpec,
) -> Result<Band> {
    if !(lambda > 0.0) || !(delta > 0.0) {
        return Err(Error::domain(format!(
            "assemble_band: need lambda > 0 and delta > 0, got ({lambda}, {delta})"
        )));
    }
    let half = cutoff.support_half_width * delta;
    let raw = source.eigenvalues_in(lambda - half, lambda + half)?;
    let mut modes: Vec<BandMode> = raw
        .into_iter()
        .filter_map(|(nu, multiplicity)| {
            let weight = cutoff.weight(nu.lambda, lambda, delta);
            (weight > 0.0).then_some(BandMode {
                nu,
                weight,
                multiplicity,
            })
        })
        .collect();
    modes.sort_by(|a, b| (a.nu.n, a.nu.k).cmp(&(b.nu.n, b.nu.k)));
    let mut mus: Vec<f64> = modes.iter().map(|m| m.nu.mu).collect();
    mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Band {
        source: source.kind(),
        lambda,
        delta,
        modes,
        mus,
    })
}

/// Report of the per-n uniqueness (deformed-lattice) check.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    /// Modes inspected after the cone restriction.
    pub inspected: usize,
    /// Whether mode -> n is injective on the inspected set.
    pub injective: bool,
    /// Smallest |n_1 - n_2| over distinct inspected pairs (None if < 2 modes).
    pub min_n_gap: Option<u32>,
    /// Offending (n, k, k') triples when not injective.
    pub violations: Vec<(u32, u32, u32)>,
}

/// Check that distinct band members inside the cone |n| <= mu_max·λ carry
/// distinct angular momenta.
pub fn check_gap(band: &Band, mu_max: f64) -> GapReport {
    let cone: Vec<&BandMode> = band
        .modes
        .iter()
        .filter(|m| (m.nu.n as f64) <= mu_max * m.nu.lambda)
        .collect();
    let mut violations = Vec::new();
    let mut min_n_gap: Option<u32> = None;
    for (i, a) in cone.iter().enumerate() {
        for b in cone.iter().skip(i + 1) {
            if a.nu.n == b.nu.n {
                violations.push((a.nu.n, a.nu.k, b.nu.k));
            } else {
                let gap = a.nu.n.abs_diff(b.nu.n);
                min_n_gap = Some(min_n_gap.map_or(gap, |g| g.min(gap)));
            }
        }
    }
    GapReport {
        inspected: cone.len(),
        injective: violations.is_empty(),
        min_n_gap,
        violations,
    }
}

/// Where to measure caustic spacing.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum SpacingRegion {
    /// μ window compactly inside the cone; gaps normalized by 1/λ.
    Interior { mu_lo: f64, mu_hi: f64 },
    /// Boundary window [1-2ε, 1-ε/2] (disk); gaps normalized by λ^{-1}ε^{-1/2}.
    Boundary { eps: f64 },
}

/// Spacing diagnostics for the caustic parameters of a band.
#[derive(Debug, Clone, Serialize)]
pub struct SpacingReport {
    pub region: SpacingRegion,
    /// Number of caustic parameters inside the region.
    pub count: usize,
    /// Smallest adjacent gap, raw.
    pub min_gap: Option<f64>,
    /// min_gap divided by the region's expected scale (1/λ interior,
    /// λ^{-1}ε^{-1/2} boundary). None with fewer than two caustics, which
    /// counts as a trivial pass.
    pub normalized_min_gap: Option<f64>,
    pub trivial_pass: bool,
}

pub fn check_caustic_spacing(band: &Band, region: SpacingRegion) -> SpacingReport {
    let (lo, hi, scale) = match region {
        SpacingRegion::Interior { mu_lo, mu_hi } => (mu_lo, mu_hi, 1.0 / band.lambda),
        SpacingRegion::Boundary { eps } => (
            1.0 - 2.0 * eps,
            1.0 - 0.5 * eps,
            1.0 / (band.lambda * eps.sqrt()),
        ),
    };
    let mus: Vec<f64> = band
        .mus
        .iter()
        .copied()
        .filter(|&mu| mu >= lo && mu <= hi)
        .collect();
    let min_gap = mus
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(None, |acc: Option<f64>, g| {
            Some(acc.map_or(g, |a: f64| a.min(g)))
        });
    SpacingReport {
        region,
        count: mus.len(),
        min_gap,
        normalized_min_gap: min_gap.map(|g| g / scale),
        trivial_pass: mus.len() < 2,
    }
}

/// Residuals of the large-order zero asymptotics over a disk band.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroAsymptoticsReport {
    /// Modes inside the cone n >= mu_min·λ.
    pub inspected: usize,
    /// max |λ_{k,n} - n·p0(a_k/n^{2/3})| over the cone.
    pub max_residual: f64,
    /// Smallest n in the cone (the O(1/n) bound is checked against it).
    pub n_min: u32,
    /// max of a_k/n^{2/3} over the cone (bounded per the asymptotics' domain).
    pub max_argument: f64,
    /// max over pairs n_1 < n_2 of n_1^{1/3}|a_{k_1}-a_{k_2}|/(n_2-n_1).
    pub max_pair_ratio: f64,
}

/// Check λ_{k,n} = n·p0(a_k/n^{2/3}) + O(1/n) over the cone n >= mu_min·λ of
/// a disk band, and the pairwise a_k spacing bound that follows from it.
pub fn check_zero_asymptotics(
    band: &Band,
    airy: &AiryZeroTable,
    mu_min: f64,
) -> Result<ZeroAsymptoticsReport> {
    if band.source != SourceKind::Disk {
        return Err(Error::Unsupported(
            "zero asymptotics check applies to disk bands only".into(),
        ));
    }
    let cone: Vec<&BandMode> = band
        .modes
        .iter()
        .filter(|m| m.nu.n as f64 >= mu_min * m.nu.lambda && m.nu.n > 0)
        .collect();
    let mut max_residual = 0.0f64;
    let mut max_argument = 0.0f64;
    let mut n_min = u32::MAX;
    for m in &cone {
        let a_k = airy.get(m.nu.k).ok_or_else(|| {
            Error::numerical(format!(
                "airy zero table too small: need k = {}, have {}",
                m.nu.k,
                airy.count()
            ))
        })?;
        let nf = m.nu.n as f64;
        let t = a_k / nf.powf(2.0 / 3.0);
        let predicted = nf * olver_p0(t)?;
        max_residual = max_residual.max((m.nu.lambda - predicted).abs());
        max_argument = max_argument.max(t);
        n_min = n_min.min(m.nu.n);
    }
    let mut max_pair_ratio = 0.0f64;
    for (i, a) in cone.iter().enumerate() {
        for b in cone.iter().skip(i + 1) {
            let (n1, n2) = if a.nu.n < b.nu.n {
                (a, b)
            } else {
                (b, a)
            };
            if n1.nu.n == n2.nu.n {
                continue;
            }
            let a1 = airy.get(n1.nu.k).unwrap();
            let a2 = airy.get(n2.nu.k).unwrap();
            let ratio = (n1.nu.n as f64).cbrt() * (a1 - a2).abs()
                / ((n2.nu.n - n1.nu.n) as f64);
            max_pair_ratio = max_pair_ratio.max(ratio);
        }
    }
    Ok(ZeroAsymptoticsReport {
        inspected: cone.len(),
        max_residual,
        n_min: if n_min == u32::MAX { 0 } else { n_min },
        max_argument,
        max_pair_ratio,
    })
}

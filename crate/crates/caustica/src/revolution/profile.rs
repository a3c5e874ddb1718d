//! Revolution profiles a(s) on [0, L] defining the metric ds² + a(s)²dθ²,
//! with validation of the simple-surface conditions (vanishing at both
//! poles, positive inside, a single nondegenerate maximum).

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Evaluator for a profile function and its first two derivatives.
pub trait ProfileFn: Send + Sync {
    fn length(&self) -> f64;
    fn a(&self, s: f64) -> f64;
    fn a_prime(&self, s: f64) -> f64;
    fn a_second(&self, s: f64) -> f64;
    /// Content identifier for cache keys; must change whenever values do.
    fn content_id(&self) -> String;
}

struct Round;

impl ProfileFn for Round {
    fn length(&self) -> f64 {
        std::f64::consts::PI
    }
    fn a(&self, s: f64) -> f64 {
        s.sin()
    }
    fn a_prime(&self, s: f64) -> f64 {
        s.cos()
    }
    fn a_second(&self, s: f64) -> f64 {
        -s.sin()
    }
    fn content_id(&self) -> String {
        "round".into()
    }
}

struct Perturbed {
    eps: f64,
}

impl ProfileFn for Perturbed {
    fn length(&self) -> f64 {
        std::f64::consts::PI
    }
    fn a(&self, s: f64) -> f64 {
        s.sin() + self.eps * (2.0 * s).sin()
    }
    fn a_prime(&self, s: f64) -> f64 {
        s.cos() + 2.0 * self.eps * (2.0 * s).cos()
    }
    fn a_second(&self, s: f64) -> f64 {
        -s.sin() - 4.0 * self.eps * (2.0 * s).sin()
    }
    fn content_id(&self) -> String {
        format!("perturbed({:e})", self.eps)
    }
}

/// Quintic-Hermite interpolation of tabulated (s, a, a', a'') samples; C²
/// and exact on the given data.
pub struct TableProfile {
    s: Vec<f64>,
    a: Vec<f64>,
    ap: Vec<f64>,
    app: Vec<f64>,
    id: String,
}

impl TableProfile {
    pub fn new(rows: Vec<(f64, f64, f64, f64)>) -> Result<TableProfile> {
        if rows.len() < 3 {
            return Err(Error::config("profile table needs at least 3 rows"));
        }
        for w in rows.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::config("profile table s values must increase"));
            }
        }
        if rows[0].0 != 0.0 {
            return Err(Error::config("profile table must start at s = 0"));
        }
        let mut id = String::from("table:");
        for r in &rows {
            let _ = write!(
                id,
                "{:x}.{:x}.{:x}.{:x};",
                r.0.to_bits(),
                r.1.to_bits(),
                r.2.to_bits(),
                r.3.to_bits()
            );
        }
        Ok(TableProfile {
            s: rows.iter().map(|r| r.0).collect(),
            a: rows.iter().map(|r| r.1).collect(),
            ap: rows.iter().map(|r| r.2).collect(),
            app: rows.iter().map(|r| r.3).collect(),
            id: format!("table:{:016x}", fnv(id.as_bytes())),
        })
    }

    fn cell(&self, s: f64) -> usize {
        match self.s.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(self.s.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.s.len() - 2),
        }
    }

    /// Quintic Hermite on one cell in normalized coordinates; `d` selects the
    /// derivative order (0, 1, 2).
    fn eval(&self, s: f64, d: u8) -> f64 {
        let i = self.cell(s.clamp(self.s[0], *self.s.last().unwrap()));
        let h = self.s[i + 1] - self.s[i];
        let t = (s - self.s[i]) / h;
        let (f0, f1) = (self.a[i], self.a[i + 1]);
        let (g0, g1) = (self.ap[i] * h, self.ap[i + 1] * h);
        let (k0, k1) = (self.app[i] * h * h, self.app[i + 1] * h * h);
        // Quintic Hermite basis (value, slope, curvature at both ends).
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let (h00, h10, h20, h01, h11, h21) = match d {
            0 => (
                1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
                t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
                0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5,
                10.0 * t3 - 15.0 * t4 + 6.0 * t5,
                -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
                0.5 * t3 - t4 + 0.5 * t5,
            ),
            1 => (
                -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
                1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
                t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4,
                30.0 * t2 - 60.0 * t3 + 30.0 * t4,
                -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
                1.5 * t2 - 4.0 * t3 + 2.5 * t4,
            ),
            _ => (
                -60.0 * t + 180.0 * t2 - 120.0 * t3,
                -36.0 * t + 96.0 * t2 - 60.0 * t3,
                1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3,
                60.0 * t - 180.0 * t2 + 120.0 * t3,
                -24.0 * t + 84.0 * t2 - 60.0 * t3,
                3.0 * t - 12.0 * t2 + 10.0 * t3,
            ),
        };
        let v = h00 * f0 + h10 * g0 + h20 * k0 + h01 * f1 + h11 * g1 + h21 * k1;
        v / h.powi(d as i32)
    }
}

fn fnv(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl ProfileFn for TableProfile {
    fn length(&self) -> f64 {
        *self.s.last().unwrap()
    }
    fn a(&self, s: f64) -> f64 {
        self.eval(s, 0)
    }
    fn a_prime(&self, s: f64) -> f64 {
        self.eval(s, 1)
    }
    fn a_second(&self, s: f64) -> f64 {
        self.eval(s, 2)
    }
    fn content_id(&self) -> String {
        self.id.clone()
    }
}

/// A profile together with its derived quantities A = sup a and s_max.
#[derive(Clone)]
pub struct RevolutionProfile {
    f: Arc<dyn ProfileFn>,
    /// Domain length L.
    pub length: f64,
    /// A = sup a(s).
    pub sup_a: f64,
    /// Location of the maximum.
    pub s_max: f64,
}

impl RevolutionProfile {
    /// Round sphere: a(s) = sin s on [0, π].
    pub fn round() -> RevolutionProfile {
        Self::from_fn(Arc::new(Round))
    }

    /// a(s) = sin s + eps·sin 2s; breaks the equatorial symmetry while
    /// keeping a single nondegenerate maximum for |eps| < 1/4.
    pub fn perturbed(eps: f64) -> RevolutionProfile {
        Self::from_fn(Arc::new(Perturbed { eps }))
    }

    pub fn from_table(rows: Vec<(f64, f64, f64, f64)>) -> Result<RevolutionProfile> {
        Ok(Self::from_fn(Arc::new(TableProfile::new(rows)?)))
    }

    pub fn from_fn(f: Arc<dyn ProfileFn>) -> RevolutionProfile {
        let length = f.length();
        // Locate the maximum: coarse grid scan, then bisection on a'.
        let grid = 4096;
        let mut best_i = 0;
        let mut best = f64::MIN;
        for i in 1..grid {
            let s = length * i as f64 / grid as f64;
            let v = f.a(s);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let mut lo = length * (best_i as f64 - 1.0) / grid as f64;
        let mut hi = length * (best_i as f64 + 1.0) / grid as f64;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f.a_prime(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s_max = 0.5 * (lo + hi);
        let sup_a = f.a(s_max);
        RevolutionProfile {
            f,
            length,
            sup_a,
            s_max,
        }
    }

    pub fn a(&self, s: f64) -> f64 {
        self.f.a(s)
    }

    pub fn a_prime(&self, s: f64) -> f64 {
        self.f.a_prime(s)
    }

    pub fn a_second(&self, s: f64) -> f64 {
        self.f.a_second(s)
    }

    pub fn content_id(&self) -> String {
        self.f.content_id()
    }

    /// The two solutions of a(s) = mu with s₋ < s_max < s₊, each bisected on
    /// its monotone branch to 1e-12.
    pub fn caustics(&self, mu: f64) -> Result<(f64, f64)> {
        if !(mu > 0.0 && mu < self.sup_a) {
            return Err(Error::domain(format!(
                "caustics: mu = {mu} outside (0, A = {})",
                self.sup_a
            )));
        }
        let left = bisect_monotone(|s| self.a(s) - mu, 0.0, self.s_max, true);
        let right = bisect_monotone(|s| self.a(s) - mu, self.s_max, self.length, false);
        Ok((left, right))
    }
}

/// Bisection for f = 0 on [lo, hi] where f is increasing (rising = true) or
/// decreasing; assumes a sign change exists.
fn bisect_monotone(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rising: bool) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if (v > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Outcome of one validation clause.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationClause {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Structured report of the simple-surface validation.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub clauses: Vec<ValidationClause>,
}

/// Check the simple-surface conditions on a grid of `grid_points` (>= 1e4)
/// samples: a(0) = a(L) = 0, a > 0 inside, a' has a single zero located at a
/// nondegenerate maximum.
pub fn validate_profile(profile: &RevolutionProfile, grid_points: usize) -> ValidationReport {
    let n = grid_points.max(10_000);
    let len = profile.length;
    let tol_end = 1e-9 * profile.sup_a.max(1e-12);
    let mut clauses = Vec::new();

    let a0 = profile.a(0.0).abs();
    let al = profile.a(len).abs();
    clauses.push(ValidationClause {
        name: "vanishes_at_poles".into(),
        passed: a0 <= tol_end && al <= tol_end,
        detail: format!("|a(0)| = {a0:.3e}, |a(L)| = {al:.3e}"),
    });

    let mut positive = true;
    let mut min_val = f64::MAX;
    let mut min_at = 0.0;
    for i in 1..n {
        let s = len * i as f64 / n as f64;
        let v = profile.a(s);
        if v < min_val {
            min_val = v;
            min_at = s;
        }
        if v <= 0.0 {
            positive = false;
        }
    }
    clauses.push(ValidationClause {
        name: "positive_inside".into(),
        passed: positive,
        detail: format!("min a = {min_val:.3e} at s = {min_at:.4}"),
    });

    // a' sign pattern: positive until s_max, negative after; count crossings.
    let mut crossings = 0;
    let mut prev = profile.a_prime(len * 0.5 / n as f64);
    for i in 1..n {
        let s = len * (i as f64 + 0.5) / n as f64;
        let v = profile.a_prime(s);
        if v != 0.0 && prev != 0.0 && v.signum() != prev.signum() {
            crossings += 1;
        }
        if v != 0.0 {
            prev = v;
        }
    }
    clauses.push(ValidationClause {
        name: "single_critical_point".into(),
        passed: crossings == 1,
        detail: format!("a' sign changes: {crossings}"),
    });

    let app = profile.a_second(profile.s_max);
    clauses.push(ValidationClause {
        name: "nondegenerate_maximum".into(),
        passed: app < 0.0,
        detail: format!("a''(s_max) = {app:.6e}"),
    });

    ValidationReport {
        passed: clauses.iter().all(|c| c.passed),
        clauses,
    }
}

//! Minimal double-double arithmetic (~31 significant digits).
//!
//! The Airy Maclaurin series suffers catastrophic cancellation for |x|
//! beyond ~5 and the oscillatory phase 2/3·x^{3/2} loses absolute accuracy
//! for large x; both are evaluated in double-double to keep the final f64
//! result correct to its last bits. Only the handful of operations those
//! two uses need are implemented.

/// Unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Knuth two-sum: exact a + b as (sum, roundoff).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Fast two-sum, requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Exact product via FMA: a*b as (prod, roundoff).
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const TWO_PI: Dd = Dd {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };
    pub const FRAC_PI_4: Dd = Dd {
        hi: 0.7853981633974483,
        lo: 3.061616997868383e-17,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[cfg(test)]
    pub fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let r = ((self.hi - p) - e + self.lo) / b;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }

    /// One Newton step on top of the f64 sqrt gives a full dd sqrt.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let y = self.hi.sqrt();
        let yd = Dd::from_f64(y);
        let r = self.sub(yd.mul(yd)).div_f64(2.0 * y);
        yd.add(r)
    }

    /// Reduce self modulo 2π into roughly [0, 2π).
    pub fn rem_two_pi(self) -> Dd {
        let q = (self.hi / Dd::TWO_PI.hi).floor();
        self.sub(Dd::TWO_PI.mul_f64(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_roundoff() {
        let a = Dd::from_f64(1.0);
        let b = Dd::from_f64(1e-20);
        let s = a.add(b);
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, 1e-20);
    }

    #[test]
    fn mul_exact_small_ints() {
        let a = Dd::from_f64(3.0);
        let b = Dd::from_f64(7.0);
        assert_eq!(a.mul(b).to_f64(), 21.0);
        assert_eq!(a.mul(b).lo, 0.0);
    }

    #[test]
    fn sqrt_two_squared() {
        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        let back = r.mul(r).sub(two);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn div_f64_roundtrip() {
        let a = Dd::new(1.0, 1e-19);
        let q = a.div_f64(3.0);
        let back = q.mul_f64(3.0).sub(a);
        assert!(back.to_f64().abs() < 1e-30);
    }

    #[test]
    fn phase_reduction_matches_naive_for_small() {
        let x = Dd::from_f64(7.5);
        let r = x.rem_two_pi();
        // dd result may differ from the naive f64 subtraction by one ulp.
        assert!((r.to_f64() - (7.5 - std::f64::consts::TAU)).abs() < 5e-16);
    }
}

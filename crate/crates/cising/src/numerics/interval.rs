//! Closed rational intervals with outward dyadic rounding.
//!
//! All transcendental enclosures (pi, e, sin, cos) are produced from
//! alternating-series tails, so every interval returned here is a
//! mathematically certified enclosure, not a heuristic error bar.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CisingError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    /// Symmetric interval [-r, r].
    pub fn pm(r: BigRational) -> Self {
        debug_assert!(!r.is_negative());
        RatInterval { lo: -r.clone(), hi: r }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / big(2)
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Largest |x| over the interval.
    pub fn abs_upper(&self) -> BigRational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest |x| over the interval (zero if the interval straddles 0).
    pub fn abs_lower(&self) -> BigRational {
        if self.contains_zero() {
            BigRational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> RatInterval {
        RatInterval::new(self.abs_lower(), self.abs_upper())
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn add(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &RatInterval) -> RatInterval {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, c: &BigRational) -> RatInterval {
        if c.is_negative() {
            RatInterval::new(&self.hi * c, &self.lo * c)
        } else {
            RatInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn shift(&self, c: &BigRational) -> RatInterval {
        RatInterval::new(&self.lo + c, &self.hi + c)
    }

    pub fn recip(&self) -> Result<RatInterval> {
        if self.contains_zero() {
            return Err(CisingError::Domain(
                "interval reciprocal across zero".into(),
            ));
        }
        Ok(RatInterval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, o: &RatInterval) -> Result<RatInterval> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn sq(&self) -> RatInterval {
        let lo_abs = self.abs_lower();
        let hi_abs = self.abs_upper();
        RatInterval::new(&lo_abs * &lo_abs, &hi_abs * &hi_abs)
    }

    pub fn powi(&self, mut k: u64) -> RatInterval {
        let mut base = self.clone();
        let mut acc = RatInterval::point(BigRational::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn max_with(&self, v: &BigRational) -> RatInterval {
        RatInterval::new(self.lo.clone().max(v.clone()), self.hi.clone().max(v.clone()))
    }

    pub fn hull(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
        )
    }

    /// Round endpoints outward to denominator 2^prec. Keeps the enclosure
    /// valid while stopping rational blow-up in long computations.
    pub fn compress(&self, prec: u32) -> RatInterval {
        RatInterval::new(dyadic_floor(&self.lo, prec), dyadic_ceil(&self.hi, prec))
    }

    /// Certified square root; requires lo >= 0.
    pub fn sqrt(&self, prec: u32) -> Result<RatInterval> {
        if self.lo.is_negative() {
            return Err(CisingError::Domain("sqrt of negative interval".into()));
        }
        Ok(RatInterval::new(
            sqrt_lower(&self.lo, prec),
            sqrt_upper(&self.hi, prec),
        ))
    }

    /// Some(true)/Some(false) when the comparison is decided, None on overlap.
    pub fn certified_lt(&self, o: &RatInterval) -> Option<bool> {
        if self.hi < o.lo {
            Some(true)
        } else if self.lo >= o.hi {
            Some(false)
        } else {
            None
        }
    }
}

fn pow2(prec: u32) -> BigInt {
    BigInt::one() << prec
}

fn dyadic_floor(v: &BigRational, prec: u32) -> BigRational {
    let scaled = v * BigRational::from_integer(pow2(prec));
    BigRational::new(scaled.floor().to_integer(), pow2(prec))
}

fn dyadic_ceil(v: &BigRational, prec: u32) -> BigRational {
    let scaled = v * BigRational::from_integer(pow2(prec));
    BigRational::new(scaled.ceil().to_integer(), pow2(prec))
}

/// Floor bound for sqrt(v) at roughly prec fractional bits.
fn sqrt_lower(v: &BigRational, prec: u32) -> BigRational {
    if v.is_zero() {
        return BigRational::zero();
    }
    // sqrt(p/q) = sqrt(p*q)/q; scale by 4^prec so isqrt keeps prec bits.
    let p = v.numer();
    let q = v.denom();
    let scaled = p * q * (BigInt::one() << (2 * prec));
    let s = scaled.sqrt(); // floor integer sqrt
    BigRational::new(s, q * pow2(prec))
}

fn sqrt_upper(v: &BigRational, prec: u32) -> BigRational {
    if v.is_zero() {
        return BigRational::zero();
    }
    let p = v.numer();
    let q = v.denom();
    let scaled = p * q * (BigInt::one() << (2 * prec));
    let s = scaled.sqrt() + BigInt::one();
    BigRational::new(s, q * pow2(prec))
}

/// Enclosure of atan(1/x) for integer x >= 2, alternating Gregory series.
fn atan_inv(x: i64, prec: u32) -> RatInterval {
    let xr = big(x);
    let x2 = &xr * &xr;
    let mut term = xr.recip(); // 1/x, k = 0 power part
    let mut sum = BigRational::zero();
    let eps = BigRational::new(BigInt::one(), pow2(prec + 6));
    let mut k: i64 = 0;
    loop {
        let t = &term / big(2 * k + 1);
        if t < eps {
            // alternating series: partial sums bracket the limit
            return if k % 2 == 0 {
                RatInterval::new(sum.clone(), sum + t)
            } else {
                RatInterval::new(sum.clone() - t, sum)
            };
        }
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term = term / &x2;
        k += 1;
    }
}

static PI_CACHE: Mutex<Option<(u32, RatInterval)>> = Mutex::new(None);

/// Certified enclosure of pi (Machin's formula).
pub fn pi(prec: u32) -> RatInterval {
    {
        let cache = PI_CACHE.lock().unwrap();
        if let Some((p, iv)) = cache.as_ref() {
            if *p >= prec {
                return iv.compress(prec + 4);
            }
        }
    }
    let a = atan_inv(5, prec + 8);
    let b = atan_inv(239, prec + 8);
    let iv = a.scale(&big(16)).sub(&b.scale(&big(4))).compress(prec + 4);
    let mut cache = PI_CACHE.lock().unwrap();
    *cache = Some((prec, iv.clone()));
    iv
}

/// Certified enclosure of e.
pub fn euler_e(prec: u32) -> RatInterval {
    let eps = BigRational::new(BigInt::one(), pow2(prec + 4));
    let mut term = BigRational::one();
    let mut sum = BigRational::one(); // k = 0
    let mut k: i64 = 1;
    loop {
        term = term / big(k);
        sum += &term;
        // remainder of sum_{j>k} 1/j! is < 2 / (k+1)!
        let rem = &term / big(k + 1) * big(2);
        if rem < eps {
            return RatInterval::new(sum.clone(), sum + rem);
        }
        k += 1;
    }
}

/// cos over an interval x with |x| <= 2, via the Maclaurin series with a
/// geometric tail bound.
pub fn cos_small(x: &RatInterval, prec: u32) -> Result<RatInterval> {
    if x.abs_upper() > big(2) {
        return Err(CisingError::Domain("cos_small needs |x| <= 2".into()));
    }
    trig_series(x, prec, true)
}

/// sin over an interval x with |x| <= 2.
pub fn sin_small(x: &RatInterval, prec: u32) -> Result<RatInterval> {
    if x.abs_upper() > big(2) {
        return Err(CisingError::Domain("sin_small needs |x| <= 2".into()));
    }
    trig_series(x, prec, false)
}

fn trig_series(x: &RatInterval, prec: u32, is_cos: bool) -> Result<RatInterval> {
    let work = prec + 16;
    let x2 = x.sq().compress(work);
    let eps = BigRational::new(BigInt::one(), pow2(prec + 4));
    // term_k for cos: x^{2k}/(2k)!; for sin: x^{2k+1}/(2k+1)! = x * y_k
    // where y_k = x^{2k}/(2k+1)!. Sum interval terms, bound the tail by a
    // geometric series once the term ratio drops below 1/2.
    let mut sum = RatInterval::point(BigRational::one());
    let mut pow = RatInterval::point(BigRational::one()); // x^{2k} enclosure
    let mut fact = BigRational::one(); // (2k)! for cos, (2k+1)! for sin
    let mut k: u64 = 0;
    loop {
        k += 1;
        pow = pow.mul(&x2).compress(work);
        let (d1, d2) = if is_cos {
            (2 * k - 1, 2 * k)
        } else {
            (2 * k, 2 * k + 1)
        };
        fact = fact * big(d1 as i64) * big(d2 as i64);
        let term_mag = pow.abs_upper() / &fact;
        let term = pow.scale(&fact.recip());
        if k % 2 == 1 {
            sum = sum.sub(&term);
        } else {
            sum = sum.add(&term);
        }
        sum = sum.compress(work);
        // ratio of the next term to this one
        let next_ratio =
            x2.abs_upper() / (big((d2 + 1) as i64) * big((d2 + 2) as i64));
        if next_ratio < rat(1, 2) && &term_mag * big(2) < eps {
            let tail = &term_mag * big(2);
            sum = sum.add(&RatInterval::pm(tail));
            break;
        }
        if k > 200 {
            return Err(CisingError::Indeterminate(
                "trig series failed to converge".into(),
            ));
        }
    }
    let out = if is_cos { sum } else { sum.mul(x) };
    Ok(out.compress(prec + 4))
}

/// Certified enclosure of cos(pi * t) for rational t.
pub fn cos_pi(t: &BigRational, prec: u32) -> RatInterval {
    // reduce mod 2 into [0, 2)
    let two = big(2);
    let mut u = t - (t / &two).floor() * &two;
    let mut sign = BigRational::one();
    if u > BigRational::one() {
        u = &two - &u; // cos(pi(2-u)) = cos(pi u)
    }
    if u > rat(1, 2) {
        u = BigRational::one() - &u;
        sign = -sign; // cos(pi(1-u)) = -cos(pi u)
    }
    // now u in [0, 1/2]
    let enc = if u > rat(1, 4) {
        // cos(pi u) = sin(pi (1/2 - u))
        sin_quarter(&(rat(1, 2) - &u), prec)
    } else {
        cos_quarter(&u, prec)
    };
    enc.scale(&sign)
}

/// Certified enclosure of sin(pi * t) for rational t.
pub fn sin_pi(t: &BigRational, prec: u32) -> RatInterval {
    cos_pi(&(rat(1, 2) - t), prec)
}

fn cos_quarter(u: &BigRational, prec: u32) -> RatInterval {
    debug_assert!(!u.is_negative() && u <= &rat(1, 4));
    let x = pi(prec + 8).scale(u);
    cos_small(&x, prec).expect("|x| <= pi/4")
}

fn sin_quarter(u: &BigRational, prec: u32) -> RatInterval {
    debug_assert!(!u.is_negative() && u <= &rat(1, 4));
    let x = pi(prec + 8).scale(u);
    sin_small(&x, prec).expect("|x| <= pi/4")
}

/// Exact rational from an f64 (every finite f64 is a dyadic rational).
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    BigRational::from_float(v)
}

/// f64 approximation of a rational, good enough for display and seeding
/// floating-point root finders. Not certified.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Decimal string with about `digits` fractional digits (midpoint of the
/// interval if it has width). Truncated, not rounded.
pub fn decimal_string(v: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (v * BigRational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let mag = scaled.abs();
    let (int_part, frac_part) = mag.div_rem(&scale);
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_matches_known_digits() {
        let iv = pi(128);
        // 3.14159265358979 < pi < 3.14159265358980
        assert!(iv.lo > rat(314159265358979, 100000000000000));
        assert!(iv.hi < rat(314159265358980, 100000000000000));
        assert!(iv.width() < BigRational::new(BigInt::one(), BigInt::one() << 120));
    }

    #[test]
    fn e_matches_known_digits() {
        let iv = euler_e(96);
        assert!(iv.lo > rat(271828182845904, 100000000000000));
        assert!(iv.hi < rat(271828182845906, 100000000000000));
    }

    #[test]
    fn cos_pi_special_points() {
        for (t, want) in [
            (rat(0, 1), big(1)),
            (rat(1, 2), big(0)),
            (rat(1, 1), big(-1)),
            (rat(3, 2), big(0)),
            (rat(2, 1), big(1)),
            (rat(1, 3), rat(1, 2)),
            (rat(2, 3), rat(-1, 2)),
            (rat(-1, 3), rat(1, 2)),
        ] {
            let iv = cos_pi(&t, 80);
            assert!(iv.contains(&want), "cos(pi*{t}) enclosure misses {want}");
            assert!(iv.width() < BigRational::new(BigInt::one(), BigInt::one() << 70));
        }
    }

    #[test]
    fn sin_pi_special_points() {
        for (t, want) in [
            (rat(0, 1), big(0)),
            (rat(1, 2), big(1)),
            (rat(1, 6), rat(1, 2)),
            (rat(5, 6), rat(1, 2)),
            (rat(7, 6), rat(-1, 2)),
        ] {
            let iv = sin_pi(&t, 80);
            assert!(iv.contains(&want), "sin(pi*{t}) enclosure misses {want}");
        }
    }

    #[test]
    fn sin_cos_pythagoras() {
        // sin^2 + cos^2 = 1 must hold within enclosure widths
        for num in 1..20i64 {
            let t = rat(num, 23);
            let s = sin_pi(&t, 64);
            let c = cos_pi(&t, 64);
            let sum = s.sq().add(&c.sq());
            assert!(sum.contains(&BigRational::one()), "t = {t}");
        }
    }

    #[test]
    fn sqrt_two_enclosure() {
        let iv = RatInterval::point(big(2)).sqrt(100).unwrap();
        let v = &iv.lo * &iv.lo;
        assert!(v <= big(2));
        let v = &iv.hi * &iv.hi;
        assert!(v >= big(2));
        assert!(iv.width() < BigRational::new(BigInt::one(), BigInt::one() << 90));
    }

    #[test]
    fn interval_mul_signs() {
        let a = RatInterval::new(rat(-2, 1), rat(3, 1));
        let b = RatInterval::new(rat(-5, 1), rat(1, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-15, 1));
        assert_eq!(p.hi, rat(10, 1));
    }

    #[test]
    fn compress_is_outward() {
        let a = RatInterval::new(rat(1, 3), rat(2, 3));
        let c = a.compress(8);
        assert!(c.lo <= a.lo && c.hi >= a.hi);
        assert!(c.width() < rat(1, 3) + rat(1, 64));
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for v in [0.5, -3.25, 1.0e-3, 6.02e23] {
            let r = rational_from_f64(v).unwrap();
            assert_eq!(rational_to_f64(&r), v);
        }
    }
}

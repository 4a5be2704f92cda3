//! A complex number the rest of the crate can trust: either exact (an
//! element of a cyclotomic field) or an approximation carrying a rigorous
//! error radius. Exact op exact stays exact; anything touching an
//! approximation degrades to an approximation with a propagated bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CisingError, Result};
use crate::numerics::cyclotomic::Cyclotomic;
use crate::numerics::interval::RatInterval;

/// Working precision (bits) when an exact value has to degrade to approx.
pub const DEFAULT_PREC: u32 = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxComplex {
    pub re: BigRational,
    pub im: BigRational,
    /// |true value - (re + i*im)| <= err
    pub err: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComplexValue {
    Exact(Cyclotomic),
    Approx(ApproxComplex),
}

impl ApproxComplex {
    pub fn new(re: BigRational, im: BigRational, err: BigRational) -> Self {
        debug_assert!(!err.is_negative());
        ApproxComplex { re, im, err }
    }

    pub fn zero() -> Self {
        ApproxComplex::new(BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    /// Upper bound on |center|.
    fn center_abs_upper(&self) -> BigRational {
        // |re| + |im| over-approximates sqrt(re^2 + im^2); cheap and rational
        self.re.abs() + self.im.abs()
    }

    /// Lower bound on |center| (certified, via interval sqrt).
    fn center_abs_lower(&self, prec: u32) -> BigRational {
        let sq = &self.re * &self.re + &self.im * &self.im;
        RatInterval::point(sq)
            .sqrt(prec)
            .expect("nonnegative")
            .lo
            .max(BigRational::zero())
    }

    pub fn add(&self, o: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(&self.re + &o.re, &self.im + &o.im, &self.err + &o.err)
    }

    pub fn sub(&self, o: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(&self.re - &o.re, &self.im - &o.im, &self.err + &o.err)
    }

    pub fn neg(&self) -> ApproxComplex {
        ApproxComplex::new(-self.re.clone(), -self.im.clone(), self.err.clone())
    }

    pub fn conj(&self) -> ApproxComplex {
        ApproxComplex::new(self.re.clone(), -self.im.clone(), self.err.clone())
    }

    pub fn mul(&self, o: &ApproxComplex) -> ApproxComplex {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let err = self.center_abs_upper() * &o.err
            + o.center_abs_upper() * &self.err
            + &self.err * &o.err;
        ApproxComplex::new(re, im, err)
    }

    pub fn inv(&self, prec: u32) -> Result<ApproxComplex> {
        let lo = self.center_abs_lower(prec + 8);
        if lo <= self.err {
            return Err(CisingError::Indeterminate(
                "reciprocal of a value whose error disk contains zero".into(),
            ));
        }
        let n2 = &self.re * &self.re + &self.im * &self.im;
        let re = &self.re / &n2;
        let im = -&self.im / &n2;
        // |1/(c+d) - 1/c| <= err / (|c| (|c| - err)) for |d| <= err < |c|
        let err = &self.err / (&lo * (&lo - &self.err));
        Ok(ApproxComplex::new(re, im, err))
    }

    /// Round the center to dyadic rationals, folding the rounding into err.
    pub fn compress(&self, prec: u32) -> ApproxComplex {
        let ulp = BigRational::new(BigInt::one(), BigInt::one() << prec);
        let snap = |v: &BigRational| {
            let s = v * BigRational::from_integer(BigInt::one() << prec);
            BigRational::new(s.round().to_integer(), BigInt::one() << prec)
        };
        ApproxComplex::new(snap(&self.re), snap(&self.im), &self.err + ulp * BigRational::from_integer(BigInt::from(2)))
    }

    pub fn re_im(&self) -> (RatInterval, RatInterval) {
        (
            RatInterval::new(&self.re - &self.err, &self.re + &self.err),
            RatInterval::new(&self.im - &self.err, &self.im + &self.err),
        )
    }

    pub fn abs_enclosure(&self, prec: u32) -> RatInterval {
        let c = RatInterval::point(&self.re * &self.re + &self.im * &self.im)
            .sqrt(prec)
            .expect("nonnegative");
        RatInterval::new(
            (c.lo - &self.err).max(BigRational::zero()),
            c.hi + &self.err,
        )
    }
}

impl ComplexValue {
    pub fn zero() -> Self {
        ComplexValue::Exact(Cyclotomic::zero())
    }

    pub fn one() -> Self {
        ComplexValue::Exact(Cyclotomic::one())
    }

    pub fn from_int(v: i64) -> Self {
        ComplexValue::Exact(Cyclotomic::from_int(v))
    }

    pub fn from_rational(q: BigRational) -> Self {
        ComplexValue::Exact(Cyclotomic::from_rational(q))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Cyclotomic> {
        match self {
            ComplexValue::Exact(c) => Some(c),
            ComplexValue::Approx(_) => None,
        }
    }

    /// Degrade to a centered approximation at the given precision.
    pub fn to_approx(&self, prec: u32) -> ApproxComplex {
        match self {
            ComplexValue::Exact(c) => {
                if let Some(q) = c.to_rational() {
                    return ApproxComplex::new(q, BigRational::zero(), BigRational::zero());
                }
                let (re, im) = c.re_im(prec);
                let err = re.width().max(im.width());
                ApproxComplex::new(re.midpoint(), im.midpoint(), err)
            }
            ComplexValue::Approx(a) => a.clone(),
        }
    }

    fn binop(
        &self,
        o: &ComplexValue,
        exact: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic,
        approx: impl Fn(&ApproxComplex, &ApproxComplex) -> ApproxComplex,
    ) -> ComplexValue {
        match (self, o) {
            (ComplexValue::Exact(a), ComplexValue::Exact(b)) => ComplexValue::Exact(exact(a, b)),
            _ => ComplexValue::Approx(approx(
                &self.to_approx(DEFAULT_PREC),
                &o.to_approx(DEFAULT_PREC),
            )),
        }
    }

    pub fn add(&self, o: &ComplexValue) -> ComplexValue {
        self.binop(o, Cyclotomic::add, ApproxComplex::add)
    }

    pub fn sub(&self, o: &ComplexValue) -> ComplexValue {
        self.binop(o, Cyclotomic::sub, ApproxComplex::sub)
    }

    pub fn mul(&self, o: &ComplexValue) -> ComplexValue {
        self.binop(o, Cyclotomic::mul, ApproxComplex::mul)
    }

    pub fn neg(&self) -> ComplexValue {
        match self {
            ComplexValue::Exact(c) => ComplexValue::Exact(c.neg()),
            ComplexValue::Approx(a) => ComplexValue::Approx(a.neg()),
        }
    }

    pub fn conj(&self) -> ComplexValue {
        match self {
            ComplexValue::Exact(c) => ComplexValue::Exact(c.conj()),
            ComplexValue::Approx(a) => ComplexValue::Approx(a.conj()),
        }
    }

    pub fn div(&self, o: &ComplexValue) -> Result<ComplexValue> {
        match (self, o) {
            (ComplexValue::Exact(a), ComplexValue::Exact(b)) => {
                Ok(ComplexValue::Exact(a.div(b)?))
            }
            _ => {
                let inv = o.to_approx(DEFAULT_PREC).inv(DEFAULT_PREC)?;
                Ok(ComplexValue::Approx(self.to_approx(DEFAULT_PREC).mul(&inv)))
            }
        }
    }

    pub fn pow(&self, k: i64) -> Result<ComplexValue> {
        match self {
            ComplexValue::Exact(c) => Ok(ComplexValue::Exact(c.pow(k)?)),
            ComplexValue::Approx(_) => {
                if k < 0 {
                    let inv = self.to_approx(DEFAULT_PREC).inv(DEFAULT_PREC)?;
                    return ComplexValue::Approx(inv).pow(-k);
                }
                let mut acc = ComplexValue::one();
                let mut base = self.clone();
                let mut k = k as u64;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = acc.mul(&base);
                    }
                    k >>= 1;
                    if k > 0 {
                        base = base.mul(&base);
                    }
                }
                Ok(acc)
            }
        }
    }

    pub fn scale(&self, q: &BigRational) -> ComplexValue {
        match self {
            ComplexValue::Exact(c) => ComplexValue::Exact(c.scale(q)),
            ComplexValue::Approx(a) => ComplexValue::Approx(ApproxComplex::new(
                &a.re * q,
                &a.im * q,
                &a.err * q.abs(),
            )),
        }
    }

    /// Exact zero test for exact values; certified for approx values only
    /// when the error disk excludes zero or the value is a true point zero.
    pub fn certified_zero(&self) -> Result<bool> {
        match self {
            ComplexValue::Exact(c) => Ok(c.is_zero()),
            ComplexValue::Approx(a) => {
                if a.re.is_zero() && a.im.is_zero() && a.err.is_zero() {
                    Ok(true)
                } else if a.center_abs_lower(DEFAULT_PREC) > a.err {
                    Ok(false)
                } else {
                    Err(CisingError::Indeterminate(
                        "zero test on an error disk containing zero".into(),
                    ))
                }
            }
        }
    }

    pub fn re_im(&self, prec: u32) -> (RatInterval, RatInterval) {
        match self {
            ComplexValue::Exact(c) => c.re_im(prec),
            ComplexValue::Approx(a) => a.re_im(),
        }
    }

    pub fn abs_enclosure(&self, prec: u32) -> RatInterval {
        match self {
            ComplexValue::Exact(c) => c.abs_enclosure(prec),
            ComplexValue::Approx(a) => a.abs_enclosure(prec),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            ComplexValue::Exact(c) => c.to_rational(),
            ComplexValue::Approx(a) => {
                if a.err.is_zero() && a.im.is_zero() {
                    Some(a.re.clone())
                } else {
                    None
                }
            }
        }
    }

    pub fn eq_exact(&self, o: &ComplexValue) -> Option<bool> {
        match (self, o) {
            (ComplexValue::Exact(a), ComplexValue::Exact(b)) => Some(a.eq(b)),
            _ => None,
        }
    }
}

impl std::fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prec = 64;
        let (re, im) = self.re_im(prec);
        let digits = 12;
        write!(
            f,
            "{} + {}i",
            crate::numerics::interval::decimal_string(&re.midpoint(), digits),
            crate::numerics::interval::decimal_string(&im.midpoint(), digits)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::interval::rat;

    #[test]
    fn exact_stays_exact() {
        let a = ComplexValue::Exact(Cyclotomic::root_of_unity(8, 1));
        let b = ComplexValue::Exact(Cyclotomic::root_of_unity(8, 1));
        let p = a.mul(&b);
        assert!(p.is_exact());
        assert_eq!(p.eq_exact(&ComplexValue::Exact(Cyclotomic::i())), Some(true));
    }

    #[test]
    fn approx_error_propagation_contains_truth() {
        // (1 +- 0.01) * (2 +- 0.01): true products of extremes stay inside
        let a = ApproxComplex::new(rat(1, 1), rat(0, 1), rat(1, 100));
        let b = ApproxComplex::new(rat(2, 1), rat(0, 1), rat(1, 100));
        let p = a.mul(&b);
        // extreme true values: 0.99*1.99 = 1.9701 .. 1.01*2.01 = 2.0301
        let (re, _) = p.re_im();
        assert!(re.contains(&rat(19701, 10000)));
        assert!(re.contains(&rat(20301, 10000)));
    }

    #[test]
    fn approx_inverse_certified() {
        let a = ApproxComplex::new(rat(2, 1), rat(0, 1), rat(1, 10));
        let inv = a.inv(64).unwrap();
        // true reciprocal of 2.1 is ~0.476, of 1.9 is ~0.526
        let (re, _) = inv.re_im();
        assert!(re.contains(&rat(10, 21)));
        assert!(re.contains(&rat(10, 19)));
        // disk containing zero must refuse
        let z = ApproxComplex::new(rat(1, 100), rat(0, 1), rat(1, 10));
        assert!(z.inv(64).is_err());
    }

    #[test]
    fn mixed_arithmetic_degrades() {
        let e = ComplexValue::Exact(Cyclotomic::root_of_unity(3, 1));
        let a = ComplexValue::Approx(ApproxComplex::new(rat(1, 2), rat(0, 1), rat(1, 1000)));
        let s = e.add(&a);
        assert!(!s.is_exact());
        // Re(zeta_3) = -1/2, so the sum's real part encloses 0
        let (re, _) = s.re_im(64);
        assert!(re.contains(&rat(0, 1)));
    }
}

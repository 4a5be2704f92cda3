//! Integer polynomials: height, Sylvester resultant, certified Mahler
//! measure, minimal polynomials of the supported weight values, and the
//! evaluation lower bounds built from them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CisingError, Result};
use crate::numerics::cyclotomic::cyclotomic_poly;
use crate::numerics::interval::RatInterval;
use crate::numerics::weightspec::WeightSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct IntPoly {
    /// Lowest degree first; no trailing zeros unless the zero polynomial.
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Max |coefficient| (0 for the zero polynomial).
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// gcd of coefficient magnitudes; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Exact evaluation at a rational complex point.
    pub fn eval_rational_complex(
        &self,
        re: &BigRational,
        im: &BigRational,
    ) -> (BigRational, BigRational) {
        let mut acc_re = BigRational::zero();
        let mut acc_im = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            // acc = acc * z + c
            let nre = &acc_re * re - &acc_im * im + BigRational::from_integer(c.clone());
            let nim = &acc_re * im + &acc_im * re;
            acc_re = nre;
            acc_im = nim;
        }
        (acc_re, acc_im)
    }

    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(c.to_f64().unwrap_or(f64::MAX), 0.0);
        }
        acc
    }
}

/// Exact resultant via Bareiss fraction-free elimination of the Sylvester
/// matrix. Requires both polynomials non-constant.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    let n = p.degree();
    let m = q.degree();
    if n == 0 || m == 0 || p.is_zero() || q.is_zero() {
        return Err(CisingError::Domain(
            "resultant requires non-constant polynomials".into(),
        ));
    }
    let size = n + m;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // m rows of P's coefficients (highest first), then n rows of Q's
    for r in 0..m {
        for (k, c) in p.coeffs.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..n {
        for (k, c) in q.coeffs.iter().rev().enumerate() {
            mat[m + r][r + k] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

// ---- certified Mahler measure ----------------------------------------

/// Certified enclosure of |a_n| * prod max(1, |root|). Root enclosures come
/// from floating-point starts hardened by the disk bound
/// |z - root| <= deg * |P(z)/P'(z)| with exact rational evaluation.
pub fn mahler_measure(p: &IntPoly, prec: u32) -> Result<RatInterval> {
    if p.is_zero() {
        return Err(CisingError::Domain("Mahler measure of zero polynomial".into()));
    }
    let mut acc = RatInterval::point(BigRational::from_integer(p.leading().abs()));
    // roots at zero contribute max(1, 0) = 1
    let first_nonzero = p.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    let reduced = IntPoly::new(p.coeffs[first_nonzero..].to_vec());
    if reduced.degree() == 0 {
        return Ok(acc);
    }
    // M is multiplicative, so split into square-free parts: P = prod Q_i^i
    for (mult, q) in squarefree_decomposition(&reduced)? {
        if q.degree() == 0 {
            continue;
        }
        let radii = certified_root_abs(&q, prec + 8)?;
        for r in radii {
            let factor = r.max_with(&BigRational::one()).powi(mult as u64);
            acc = acc.mul(&factor).compress(prec + 16);
        }
    }
    Ok(acc.compress(prec))
}

/// Yun's algorithm, run exactly over Q[x]: P = c * prod Q_i^i with each Q_i
/// square-free. The rational constant is dropped (callers fold the leading
/// coefficient in separately, and roots are unaffected). Returns
/// (multiplicity, primitive integer factor) pairs.
pub fn squarefree_decomposition(p: &IntPoly) -> Result<Vec<(usize, IntPoly)>> {
    let to_rat = |p: &IntPoly| -> Vec<BigRational> {
        p.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    };
    let pr = to_rat(p);
    let dp = rat_poly_deriv(&pr);
    let a = rat_poly_gcd_monic(&pr, &dp);
    let mut b = rat_poly_div_exact(&pr, &a)?;
    let mut c = rat_poly_div_exact(&dp, &a)?;
    let mut out = vec![];
    let mut i = 1;
    while b.len() > 1 {
        let d = rat_poly_sub(&c, &rat_poly_deriv(&b));
        let g = rat_poly_gcd_monic(&b, &d);
        if g.len() > 1 {
            out.push((i, rat_poly_to_primitive_int(&g)));
        }
        b = rat_poly_div_exact(&b, &g)?;
        c = rat_poly_div_exact(&d, &g)?;
        i += 1;
        if i > p.degree() + 2 {
            return Err(CisingError::Domain("square-free decomposition diverged".into()));
        }
    }
    if out.is_empty() {
        out.push((1, p.primitive_part()));
    }
    Ok(out)
}

fn rat_poly_deriv(a: &[BigRational]) -> Vec<BigRational> {
    if a.len() <= 1 {
        return vec![];
    }
    a[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as u64 + 1)))
        .collect()
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim_rat(out)
}

/// Monic gcd over Q[x]; gcd with zero is the other argument made monic,
/// gcd of constants is 1.
fn rat_poly_gcd_monic(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r0 = trim_rat(a.to_vec());
    let mut r1 = trim_rat(b.to_vec());
    while !r1.is_empty() {
        let r = rat_poly_rem(&r0, &r1);
        r0 = r1;
        r1 = r;
    }
    if r0.is_empty() || r0.len() == 1 {
        return vec![BigRational::one()];
    }
    let lead = r0.last().unwrap().recip();
    r0.iter().map(|c| c * &lead).collect()
}

fn rat_poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return trim_rat(rem);
    }
    let lead = b[db].recip();
    for i in (db..rem.len()).rev() {
        let c = &rem[i] * &lead;
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            let adj = &c * &b[j];
            rem[i - db + j] -= adj;
        }
    }
    rem.truncate(db);
    trim_rat(rem)
}

fn rat_poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Result<Vec<BigRational>> {
    if b.is_empty() {
        return Err(CisingError::Domain("polynomial division by zero".into()));
    }
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return if trim_rat(rem).is_empty() {
            Ok(vec![])
        } else {
            Err(CisingError::Domain("inexact polynomial division".into()))
        };
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    let lead = b[db].recip();
    for i in (db..rem.len()).rev() {
        let c = &rem[i] * &lead;
        quot[i - db] = c.clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            let adj = &c * &b[j];
            rem[i - db + j] -= adj;
        }
    }
    rem.truncate(db);
    if !trim_rat(rem).is_empty() {
        return Err(CisingError::Domain("inexact polynomial division".into()));
    }
    Ok(trim_rat(quot))
}

fn trim_rat(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rat_poly_to_primitive_int(a: &[BigRational]) -> IntPoly {
    let mut den = BigInt::one();
    for c in a {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = a
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut g = IntPoly::new(ints).primitive_part();
    if g.leading().is_negative() {
        g = IntPoly::new(g.coeffs.iter().map(|c| -c).collect());
    }
    g
}

/// Certified enclosures of |root| for a square-free polynomial, one per
/// root. Refines with exact-rational Newton steps until every disk has
/// radius below 2^-prec and the disks are pairwise disjoint.
fn certified_root_abs(q: &IntPoly, prec: u32) -> Result<Vec<RatInterval>> {
    let deg = q.degree();
    let mut approx = durand_kerner(q);
    let dq = q.derivative();
    let target = BigRational::new(BigInt::one(), BigInt::one() << prec);
    // rational centers snapped to dyadics to keep arithmetic small
    let mut centers: Vec<(BigRational, BigRational)> = approx
        .drain(..)
        .map(|z| (snap(z.re, 64), snap(z.im, 64)))
        .collect();
    for _round in 0..64 {
        let mut radii = Vec::with_capacity(deg);
        let mut all_small = true;
        for (re, im) in &centers {
            let (pr, pi) = q.eval_rational_complex(re, im);
            let (dr, di) = dq.eval_rational_complex(re, im);
            let dnorm2 = &dr * &dr + &di * &di;
            if dnorm2.is_zero() {
                all_small = false;
                radii.push(None);
                continue;
            }
            // R = deg * |P(z)| / |P'(z)|; certified upper bound via sqrt
            let ratio2 = (&pr * &pr + &pi * &pi) / dnorm2;
            let r = RatInterval::point(ratio2)
                .sqrt(prec + 8)?
                .hi
                * BigRational::from_integer(BigInt::from(deg as u64));
            if r > target {
                all_small = false;
            }
            radii.push(Some(r));
        }
        if all_small {
            let rs: Vec<BigRational> = radii.into_iter().map(|r| r.unwrap()).collect();
            if disks_disjoint(&centers, &rs) {
                // each disk holds >= 1 root; disjoint disks + root count
                // force exactly one root apiece
                let mut out = Vec::with_capacity(deg);
                for ((re, im), r) in centers.iter().zip(rs.iter()) {
                    let c = RatInterval::point(re * re + im * im).sqrt(prec + 8)?;
                    out.push(RatInterval::new(
                        (c.lo - r).max(BigRational::zero()),
                        c.hi + r,
                    ));
                }
                return Ok(out);
            }
        }
        // Newton step on every center, compressed to stop blow-up
        for (re, im) in centers.iter_mut() {
            let (pr, pi) = q.eval_rational_complex(re, im);
            let (dr, di) = dq.eval_rational_complex(re, im);
            let dn = &dr * &dr + &di * &di;
            if dn.is_zero() {
                // nudge off the critical point
                *re += BigRational::new(BigInt::one(), BigInt::from(997));
                continue;
            }
            let sre = (&pr * &dr + &pi * &di) / &dn;
            let sim = (&pi * &dr - &pr * &di) / &dn;
            *re = snap_r(&(&*re - sre), prec + 64);
            *im = snap_r(&(&*im - sim), prec + 64);
        }
    }
    Err(CisingError::Indeterminate(
        "root certification did not converge".into(),
    ))
}

fn snap(v: f64, bits: u32) -> BigRational {
    let r = BigRational::from_float(v).unwrap_or_else(BigRational::zero);
    snap_r(&r, bits)
}

fn snap_r(v: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let s = v * BigRational::from_integer(scale.clone());
    BigRational::new(s.round().to_integer(), scale)
}

fn disks_disjoint(centers: &[(BigRational, BigRational)], radii: &[BigRational]) -> bool {
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let dre = &centers[i].0 - &centers[j].0;
            let dim = &centers[i].1 - &centers[j].1;
            let d2 = &dre * &dre + &dim * &dim;
            let rsum = &radii[i] + &radii[j];
            if d2 <= &rsum * &rsum {
                return false;
            }
        }
    }
    true
}

fn durand_kerner(q: &IntPoly) -> Vec<Complex64> {
    let deg = q.degree();
    let lead = q.leading().to_f64().unwrap_or(1.0);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(lead, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let delta = q.eval_f64(roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-13 {
            break;
        }
    }
    roots
}

// ---- minimal polynomials and lower bounds -----------------------------

/// Minimal polynomial over Z for the exactly-representable weight specs.
/// For polarpi the magnitude is folded in by scaling the cyclotomic
/// polynomial of the phase (irreducibility of that scaling is a documented
/// precondition, not checked here).
pub fn minimal_polynomial(spec: &WeightSpec) -> Result<IntPoly> {
    match spec {
        WeightSpec::Real(q) => Ok(IntPoly::new(vec![-q.numer().clone(), q.denom().clone()])),
        WeightSpec::Rou { k, n } => {
            let (_, prim_n) = primitive_form(*k, *n);
            Ok(IntPoly::new(cyclotomic_poly(prim_n).to_vec()))
        }
        WeightSpec::PolarPi { r, a, b } => {
            if r.is_zero() {
                return Ok(IntPoly::from_i64(&[0, 1]));
            }
            // fold the sign of r into the phase: -e^{i pi a/b} = e^{i pi (a+b)/b}
            let (mag, a) = if r.is_negative() {
                (-r.clone(), a + *b as i64)
            } else {
                (r.clone(), *a)
            };
            // value = mag * zeta_{2b}^a
            let (_, prim_n) = primitive_form(a, 2 * b);
            if mag.is_one() {
                return Ok(IntPoly::new(cyclotomic_poly(prim_n).to_vec()));
            }
            // clear denominators of mag^d * Phi(x / mag)
            let phi = cyclotomic_poly(prim_n);
            let d = phi.len() - 1;
            let p = mag.numer();
            let q = mag.denom();
            let coeffs: Vec<BigInt> = phi
                .iter()
                .enumerate()
                .map(|(j, c)| c * p.pow((d - j) as u32) * q.pow(j as u32))
                .collect();
            Ok(IntPoly::new(coeffs).primitive_part())
        }
        WeightSpec::Rect { .. } => Err(CisingError::Domain(
            "no minimal polynomial for approximate rect values".into(),
        )),
    }
}

/// Reduce zeta_n^k to a primitive root: returns (k', n') with gcd(k',n')=1.
pub fn primitive_form(k: i64, n: u64) -> (u64, u64) {
    let k = k.rem_euclid(n as i64) as u64;
    if k == 0 {
        return (0, 1);
    }
    let g = k.gcd(&n);
    (k / g, n / g)
}

#[derive(Debug, Clone)]
pub struct BoundResult {
    /// Certified positive rational lower bound.
    pub bound: BigRational,
    /// Enclosure of the constant C (C_y or C_w).
    pub constant_c: RatInterval,
    /// Degree d of the minimal polynomial involved.
    pub degree: u64,
    /// Height of that minimal polynomial.
    pub height: BigInt,
    /// Echo of the size parameters (n, m) the bound was computed for.
    pub size_n: u64,
    pub size_m: u64,
}

/// Lower bound on |P(y)| over integer P of degree n and height <= H with
/// P(y) != 0, given the minimal polynomial of y:
/// C_y = sqrt(d+1) * height(min poly); bound = C_y^{-n} * ((n+1) H)^{-(d-1)}.
pub fn poly_eval_lower_bound(
    y_min_poly: &IntPoly,
    n: u64,
    h: &BigInt,
) -> Result<BoundResult> {
    let d = y_min_poly.degree() as u64;
    if d == 0 {
        return Err(CisingError::Domain(
            "minimal polynomial must have positive degree".into(),
        ));
    }
    let hy = y_min_poly.height();
    let c = RatInterval::point(BigRational::from_integer(BigInt::from(d + 1)))
        .sqrt(96)?
        .scale(&BigRational::from_integer(hy.clone()));
    // use the upper end of C so the bound is a certified lower bound
    let c_pow = c.hi.clone().max(BigRational::one());
    let mut bound = BigRational::one();
    for _ in 0..n {
        bound /= &c_pow;
    }
    let base = BigRational::from_integer(BigInt::from(n + 1) * h);
    for _ in 0..d.saturating_sub(1) {
        bound /= &base;
    }
    Ok(BoundResult {
        bound,
        constant_c: c,
        degree: d,
        height: hy,
        size_n: n,
        size_m: 0,
    })
}

/// Lower bound on a nonzero partition value for a connected multigraph with
/// n vertices and m edges: no-field (m+1)^{-(d-1)} C_y^{-m} 2^{-(d-1)n};
/// with a vertex field both weights must be roots of unity w^{t1}, w^{t2}
/// and the exponent budget becomes t1*m + t2*n.
pub fn partition_lower_bound(
    y: &WeightSpec,
    z: Option<&WeightSpec>,
    n: u64,
    m: u64,
) -> Result<BoundResult> {
    match z {
        None => {
            let min_poly = minimal_polynomial(y)?;
            // Z is an integer polynomial in y of degree m with height <= 2^n
            let h = BigInt::one() << n;
            let mut b = poly_eval_lower_bound(&min_poly, m, &h)?;
            b.size_n = n;
            b.size_m = m;
            Ok(b)
        }
        Some(z) => {
            let (ky, ny) = rou_of(y)?;
            let (kz, nz) = rou_of(z)?;
            let l = ny.lcm(&nz);
            let t1 = ky * (l / ny);
            let t2 = kz * (l / nz);
            let min_poly = IntPoly::new(cyclotomic_poly(l).to_vec());
            // Z is an integer polynomial in w of degree t1*m + t2*n,
            // height <= 2^n
            let h = BigInt::one() << n;
            let mut b = poly_eval_lower_bound(&min_poly, t1 * m + t2 * n, &h)?;
            b.size_n = n;
            b.size_m = m;
            Ok(b)
        }
    }
}

fn rou_of(spec: &WeightSpec) -> Result<(u64, u64)> {
    match spec {
        WeightSpec::Rou { k, n } => Ok(primitive_form(*k, *n)),
        WeightSpec::PolarPi { r, a, b } if r.abs().is_one() => {
            let a = if r.is_negative() { a + *b as i64 } else { *a };
            Ok(primitive_form(a, 2 * b))
        }
        WeightSpec::Real(q) if q.abs().is_one() => {
            Ok(if q.is_one() { (0, 1) } else { (1, 2) })
        }
        _ => Err(CisingError::Domain(
            "field lower bound requires both weights to be roots of unity".into(),
        )),
    }
}

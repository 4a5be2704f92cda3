//! Counting minimum s-t cuts through an unreliable norm oracle: the
//! interval-shrinking search, the bisection-based exact (k, C) recovery at
//! desk scale, a Max-Cut threshold decision, and the brute-force references
//! they are checked against.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CisingError, Result};
use crate::graph::{Dsu, IsingInstance, Multigraph, RandomClusterInstance};
use crate::numerics::interval::{rat, rational_from_f64, rational_to_f64};
use crate::numerics::value::ComplexValue;
use crate::partition::{z_ising_with, z_split_with, EvalConfig};

/// What a noisy oracle reports when the true value is exactly zero: zero,
/// or a fixed nonsense value (the multiplicative error bound says nothing
/// about the zero case, so any answer is fair game).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroBehavior {
    Zero,
    Adversarial,
}

/// Wraps an exact evaluator with seeded multiplicative noise: every query
/// returns v̂ with |v|/K <= v̂ <= K|v| (for |v| != 0), deterministically
/// given the seed.
pub struct NoisyOracle<'a> {
    exact_fn: Box<dyn Fn(&BigRational) -> BigRational + 'a>,
    noise_factor: BigRational,
    rng: ChaCha8Rng,
    zero_behavior: ZeroBehavior,
    queries: u64,
}

/// Largest admissible noise factor, 22/21.
pub fn max_noise_factor() -> BigRational {
    rat(22, 21)
}

impl<'a> NoisyOracle<'a> {
    pub fn new(
        exact_fn: impl Fn(&BigRational) -> BigRational + 'a,
        noise_factor: BigRational,
        seed: u64,
        zero_behavior: ZeroBehavior,
    ) -> Result<Self> {
        if noise_factor < BigRational::one() || noise_factor > max_noise_factor() {
            return Err(CisingError::Domain(
                "noise factor must lie in [1, 22/21]".into(),
            ));
        }
        Ok(NoisyOracle {
            exact_fn: Box::new(exact_fn),
            noise_factor,
            rng: ChaCha8Rng::seed_from_u64(seed),
            zero_behavior,
            queries: 0,
        })
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// A multiplicative factor in [1/K, K]: exp(u ln K) for uniform
    /// u in [-1, 1], computed in floating point and then clamped exactly.
    fn draw_factor(&mut self) -> BigRational {
        let k = &self.noise_factor;
        let u: f64 = self.rng.gen_range(-1.0..=1.0);
        let approx = (u * rational_to_f64(k).ln()).exp();
        let factor = rational_from_f64(approx).unwrap_or_else(BigRational::one);
        let inv_k = k.recip();
        if factor < inv_k {
            inv_k
        } else if &factor > k {
            k.clone()
        } else {
            factor
        }
    }

    /// Noisy |f(eps)|.
    pub fn query(&mut self, eps: &BigRational) -> BigRational {
        self.queries += 1;
        let v = (self.exact_fn)(eps).abs();
        let factor = self.draw_factor();
        if v.is_zero() {
            return match self.zero_behavior {
                ZeroBehavior::Zero => BigRational::zero(),
                ZeroBehavior::Adversarial => BigRational::one(),
            };
        }
        v * factor
    }
}

/// One shrink round: query the 11 grid points of [lo, hi], look at the
/// signs of consecutive differences, and keep the four-fifths of the
/// interval the sign pattern certifies. The true root of the (linear,
/// decreasing) function stays inside as long as the oracle respects its
/// multiplicative bound.
fn shrink_round(
    oracle: &mut NoisyOracle,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<(BigRational, BigRational)> {
    let step = (hi - lo) / BigRational::from(BigInt::from(10u32));
    let values: Vec<BigRational> = (0..=10)
        .map(|i| oracle.query(&(lo + BigRational::from(BigInt::from(i as u32)) * &step)))
        .collect();
    let first_four_increasing = (0..4).all(|i| values[i] > values[i + 1]);
    if first_four_increasing {
        let new_lo = lo + BigRational::from(BigInt::from(2u32)) * &step;
        return Ok((new_lo, hi.clone()));
    }
    let last_four_decreasing = (6..10).all(|i| values[i] < values[i + 1]);
    if last_four_decreasing {
        let new_hi = lo + BigRational::from(BigInt::from(8u32)) * &step;
        return Ok((lo.clone(), new_hi));
    }
    Err(CisingError::OracleContract(
        "neither sign pattern holds; oracle noise exceeds its bound".into(),
    ))
}

/// Shrink [lo, hi] around the unique root of a linear decreasing function,
/// queried through a noisy oracle, for `rounds` rounds. Each round
/// multiplies the width by exactly 4/5.
pub fn interval_shrink(
    oracle: &mut NoisyOracle,
    lo: &BigRational,
    hi: &BigRational,
    rounds: u32,
) -> Result<(BigRational, BigRational)> {
    if lo >= hi {
        return Err(CisingError::Domain("need lo < hi".into()));
    }
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    for _ in 0..rounds {
        let (l, h) = shrink_round(oracle, &lo, &hi)?;
        lo = l;
        hi = h;
    }
    Ok((lo, hi))
}

/// Number of minimum-cardinality s-t cuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinCutResult {
    /// Minimum number of edges whose removal disconnects s from t.
    pub k: usize,
    /// Number of edge subsets of that size which do so.
    pub count: u64,
}

fn terminals_connected(g: &Multigraph, s: usize, t: usize, removed: u32) -> bool {
    let mut dsu = Dsu::new(g.n());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if removed & (1 << i) == 0 {
            dsu.union(u, v);
        }
    }
    dsu.same(s, t)
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exhaustively count minimum-cardinality s-t cuts (m <= 20).
pub fn count_min_cuts_brute(g: &Multigraph, s: usize, t: usize) -> Result<MinCutResult> {
    let m = g.m();
    if m > 20 {
        return Err(CisingError::CapExceeded(format!(
            "brute-force cut counting capped at 20 edges, got {m}"
        )));
    }
    if s == t || s >= g.n() || t >= g.n() {
        return Err(CisingError::Domain("invalid terminals".into()));
    }
    if !terminals_connected(g, s, t, 0) {
        return Err(CisingError::Domain("terminals are disconnected".into()));
    }
    let mut best_k = usize::MAX;
    let mut count = 0u64;
    for mask in 1u32..(1 << m) {
        let k = mask.count_ones() as usize;
        if k > best_k {
            continue;
        }
        if !terminals_connected(g, s, t, mask) {
            if k < best_k {
                best_k = k;
                count = 1;
            } else {
                count += 1;
            }
        }
    }
    let result = MinCutResult { k: best_k, count };
    debug_assert!(BigInt::from(count) <= binom(m, best_k));
    Ok(result)
}

/// Parameters of the bisection counter: the large edge weight M = 2^{4m}
/// and the grid resolution of the shrinking step.
#[derive(Debug, Clone)]
pub struct BisectionParams {
    pub m: usize,
    pub big_m: BigRational,
    pub subintervals: u32,
}

impl BisectionParams {
    pub fn new(m: usize) -> Self {
        let big_m = BigRational::from(BigInt::one() << (4 * m));
        BisectionParams { m, big_m, subintervals: 10 }
    }
}

const BISECTION_MAX_ROUNDS: u32 = 4096;

/// Recover the minimum-cut size and count of `g` between `s` and `t` by
/// root-finding against a noisy partition-function oracle.
///
/// All edges get the huge weight M = 2^{4m}; the oracle reports
/// |-eps*Z_st + Z_s|t*(1-eps)/2| up to the noise factor, and the interval
/// shrinker localizes the root eps* = Z_s|t / (2 Z_st + Z_s|t). The ratio
/// Z_s|t / Z_st is dominated by the minimum cuts, so once the enclosure is
/// tight enough exactly one pair (k, C) is consistent with it.
pub fn count_min_cuts_bisection(
    g: &Multigraph,
    s: usize,
    t: usize,
    noise_factor: BigRational,
    seed: u64,
) -> Result<MinCutResult> {
    let m = g.m();
    if m > 10 {
        return Err(CisingError::CapExceeded(format!(
            "bisection counting capped at 10 edges, got {m}"
        )));
    }
    if s == t || s >= g.n() || t >= g.n() {
        return Err(CisingError::Domain("invalid terminals".into()));
    }
    if g.edges().iter().any(|&(u, v)| (u, v) == (s.min(t), s.max(t))) {
        return Err(CisingError::Domain(
            "bisection counting assumes no direct s-t edge".into(),
        ));
    }
    if !terminals_connected(g, s, t, 0) {
        return Err(CisingError::Domain("terminals are disconnected".into()));
    }
    let params = BisectionParams::new(m);
    let q = rat(2, 1);

    let inst = RandomClusterInstance::uniform(
        g.clone(),
        ComplexValue::from_rational(q.clone()),
        ComplexValue::from_rational(params.big_m.clone()),
    );
    let cfg = EvalConfig { cap_n: g.n(), cap_m: m };
    let split = z_split_with(&inst, s, t, &cfg)?;
    let z_st = split
        .z_st
        .to_rational()
        .ok_or_else(|| CisingError::Domain("expected a rational split value".into()))?;
    let z_split_val = split
        .z_s_bar_t
        .to_rational()
        .ok_or_else(|| CisingError::Domain("expected a rational split value".into()))?;

    // f(eps) = -eps Z_st + Z_s|t (1 - eps)/2, linear and decreasing with
    // its root eps* strictly inside (0, 1).
    let half = rat(1, 2);
    let f = |eps: &BigRational| -> BigRational {
        -eps * &z_st + &z_split_val * (BigRational::one() - eps) * &half
    };
    let root = &z_split_val / (BigRational::from(BigInt::from(2u32)) * &z_st + &z_split_val);
    let mut oracle = NoisyOracle::new(f, noise_factor, seed, ZeroBehavior::Adversarial)?;

    let delta = BigRational::new(BigInt::one() << (2 * m), BigInt::one());
    let delta = delta / &params.big_m; // 4^m / M = 2^{-2m}
    let one = BigRational::one();
    let count_cap = BigInt::one() << m;

    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    let mut width = BigRational::one();
    for _ in 0..BISECTION_MAX_ROUNDS {
        let (l, h) = shrink_round(&mut oracle, &lo, &hi)?;
        lo = l;
        hi = h;
        // Exact shrink-rate and root-containment invariants.
        width = width * rat(4, 5);
        if &hi - &lo != width {
            return Err(CisingError::OracleContract("shrink rate violated".into()));
        }
        if root < lo || root > hi {
            return Err(CisingError::OracleContract(
                "true root escaped the interval".into(),
            ));
        }
        if hi >= one {
            continue; // ratio upper bound not finite yet
        }
        // eps -> ratio = 2 eps / (1 - eps) is increasing on [0, 1).
        let two = BigRational::from(BigInt::from(2u32));
        let ratio_lo = &two * &lo / (&one - &lo);
        let ratio_hi = &two * &hi / (&one - &hi);
        if ratio_lo.is_zero() {
            continue;
        }
        // Candidate (k, C): C is within multiplicative slack (1 +- delta)
        // of ratio * M^k / q, must be a positive integer <= min(2^m, binom(m,k)).
        let mut candidates: Vec<(usize, BigInt)> = Vec::new();
        let mut m_pow = BigRational::one();
        for k in 1..=m {
            m_pow = m_pow * &params.big_m;
            let c_lo = &ratio_lo * &m_pow * (&one - &delta) / (&q * (&one + &delta));
            let c_hi = &ratio_hi * &m_pow * (&one + &delta) / (&q * (&one - &delta));
            let mut c = c_lo.ceil().to_integer();
            if c < BigInt::one() {
                c = BigInt::one();
            }
            let top = c_hi.floor().to_integer().min(count_cap.clone()).min(binom(m, k));
            while c <= top {
                candidates.push((k, c.clone()));
                if candidates.len() > 1 {
                    break;
                }
                c += 1;
            }
            if candidates.len() > 1 {
                break;
            }
        }
        if candidates.len() == 1 {
            let (k, c) = candidates.pop().unwrap();
            let count = c.to_u64().expect("count fits in u64 under the caps");
            return Ok(MinCutResult { k, count });
        }
    }
    Err(CisingError::OracleContract(
        "could not certify a unique (k, C) within the round budget".into(),
    ))
}

/// Largest number of bichromatic edges over all two-colorings.
pub fn maxcut_brute(g: &Multigraph) -> usize {
    let n = g.n();
    let mut best = 0;
    for mask in 0..(1u32 << n) {
        let cut = g
            .edges()
            .iter()
            .filter(|&&(u, v)| (mask >> u) & 1 != (mask >> v) & 1)
            .count();
        best = best.max(cut);
    }
    best
}

fn certified_sign(v: &ComplexValue) -> Result<i8> {
    if v.certified_zero()? {
        return Ok(0);
    }
    let mut prec = 128;
    loop {
        let (re, _) = v.re_im(prec);
        if re.is_positive() {
            return Ok(1);
        }
        if re.is_negative() {
            return Ok(-1);
        }
        if prec >= 4096 {
            return Err(CisingError::Indeterminate(
                "could not certify a sign at 4096 bits".into(),
            ));
        }
        prec *= 2;
    }
}

/// Decide whether maxcut(g) >= b by one exact partition-function value at
/// a powered-down weight: pick the least k with 2^m |y|^k < 1/4, then
/// maxcut >= b iff |Z(G; y^k)| > (3/4) |y^k|^{m-b}. The gap between the
/// two cases keeps the exact value away from the decision threshold.
pub fn maxcut_threshold_check(g: &Multigraph, b: usize, y: &ComplexValue) -> Result<bool> {
    let m = g.m();
    if b > m {
        return Err(CisingError::Domain("threshold b must be at most m".into()));
    }
    let abs = y.abs_enclosure(192);
    if !abs.is_positive() {
        return Err(CisingError::Domain("need y != 0".into()));
    }
    if abs.hi >= BigRational::one() {
        return Err(CisingError::Domain("need |y| < 1".into()));
    }
    // Least k with 2^m |y|^k < 1/4, certified from above.
    let two_m = BigRational::from(BigInt::one() << m);
    let quarter = rat(1, 4);
    let mut k = 1i64;
    let mut pow_hi = abs.hi.clone();
    while &two_m * &pow_hi >= quarter {
        k += 1;
        pow_hi = pow_hi * &abs.hi;
    }
    let yk = y.pow(k)?;
    let inst = IsingInstance::uniform(g.clone(), yk.clone(), ComplexValue::one());
    let cfg = EvalConfig { cap_n: g.n(), cap_m: m };
    let z = z_ising_with(&inst, &cfg)?;
    // Compare |Z|^2 against (9/16) |y^k|^{2(m-b)} exactly.
    let z_sq = z.mul(&z.conj());
    let yk_sq = yk.mul(&yk.conj());
    let threshold = yk_sq.pow((m - b) as i64)?.scale(&rat(9, 16));
    let diff = z_sq.sub(&threshold);
    Ok(certified_sign(&diff)? > 0)
}

/// True when the exact |Z(G; y^k)| from `maxcut_threshold_check`'s setup
/// lands strictly outside the band [(1/4), (3/4)] * |y^k|^{m-b} — exposed
/// so tests can assert the decision gap is never tight.
pub fn maxcut_band_avoided(g: &Multigraph, b: usize, y: &ComplexValue) -> Result<bool> {
    let m = g.m();
    if b > m {
        return Err(CisingError::Domain("threshold b must be at most m".into()));
    }
    let abs = y.abs_enclosure(192);
    let two_m = BigRational::from(BigInt::one() << m);
    let quarter = rat(1, 4);
    let mut k = 1i64;
    let mut pow_hi = abs.hi.clone();
    while &two_m * &pow_hi >= quarter {
        k += 1;
        pow_hi = pow_hi * &abs.hi;
    }
    let yk = y.pow(k)?;
    let inst = IsingInstance::uniform(g.clone(), yk.clone(), ComplexValue::one());
    let cfg = EvalConfig { cap_n: g.n(), cap_m: m };
    let z = z_ising_with(&inst, &cfg)?;
    let z_sq = z.mul(&z.conj());
    let yk_sq = yk.mul(&yk.conj());
    let unit = yk_sq.pow((m - b) as i64)?;
    let upper = unit.scale(&rat(9, 16));
    let lower = unit.scale(&rat(1, 16));
    let above = certified_sign(&z_sq.sub(&upper))? > 0;
    let below = certified_sign(&z_sq.sub(&lower))? < 0;
    Ok(above || below)
}

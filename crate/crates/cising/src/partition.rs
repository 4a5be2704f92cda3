//! Exact partition-function evaluators.
//!
//! Three evaluation paths for the spin sum, picked automatically:
//! uniform weights bucket assignments by (monochromatic edges, spins up);
//! all-monomial weights (r * zeta^a) accumulate rational coefficients per
//! exponent; everything else falls back to per-assignment products. All
//! paths agree exactly and the subset sums mirror them for the
//! random-cluster form.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CisingError, Result};
use crate::graph::{Dsu, IsingInstance, Multigraph, RandomClusterInstance, TuttePoint};
use crate::numerics::cyclotomic::Cyclotomic;
use crate::numerics::value::ComplexValue;

#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    pub cap_n: usize,
    pub cap_m: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { cap_n: 24, cap_m: 24 }
    }
}

fn check_caps(n: usize, m: usize, cfg: &EvalConfig) -> Result<()> {
    if n > cfg.cap_n {
        return Err(CisingError::CapExceeded(format!(
            "n = {n} exceeds vertex cap {}",
            cfg.cap_n
        )));
    }
    if m > cfg.cap_m {
        return Err(CisingError::CapExceeded(format!(
            "m = {m} exceeds edge cap {}",
            cfg.cap_m
        )));
    }
    Ok(())
}

/// Spin-sum partition function: sum over sigma in {0,1}^V of
/// prod_e phi_e^{[sigma_u = sigma_v]} * prod_v tau_v^{sigma_v}.
pub fn z_ising(inst: &IsingInstance) -> Result<ComplexValue> {
    z_ising_with(inst, &EvalConfig::default())
}

pub fn z_ising_with(inst: &IsingInstance, cfg: &EvalConfig) -> Result<ComplexValue> {
    let n = inst.graph.n();
    let m = inst.graph.m();
    check_caps(n, m, cfg)?;
    if let Some((y, lambda)) = inst.uniform_weights() {
        let counts = mono_spin_counts(&inst.graph);
        return eval_buckets(&counts, &y, &lambda);
    }
    if let Some(v) = z_ising_monomial(inst)? {
        return Ok(v);
    }
    z_ising_general(inst)
}

/// counts[i][k] = number of assignments with i monochromatic edges and k
/// up-spins, filled by Gray-code enumeration with incremental updates.
fn mono_spin_counts(g: &Multigraph) -> Vec<Vec<u64>> {
    let n = g.n();
    let m = g.m();
    let mut incident: Vec<Vec<usize>> = vec![vec![]; n.max(1)];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if u != v {
            incident[u].push(i);
            incident[v].push(i);
        }
    }
    let mut counts = vec![vec![0u64; n + 1]; m + 1];
    // start at sigma = all zeros: every edge monochromatic
    let mut sigma = vec![false; n];
    let mut mono = m;
    let mut ones = 0usize;
    counts[mono][ones] += 1;
    let total: u64 = 1u64 << n;
    for step in 1..total {
        let v = step.trailing_zeros() as usize; // Gray code flip position
        sigma[v] = !sigma[v];
        ones = if sigma[v] { ones + 1 } else { ones - 1 };
        for &e in &incident[v] {
            let (a, b) = g.edges()[e];
            let other = if a == v { b } else { a };
            if sigma[v] == sigma[other] {
                mono += 1;
            } else {
                mono -= 1;
            }
        }
        counts[mono][ones] += 1;
    }
    counts
}

fn eval_buckets(counts: &[Vec<u64>], y: &ComplexValue, lambda: &ComplexValue) -> Result<ComplexValue> {
    // z = sum counts[i][k] y^i lambda^k, powers built incrementally
    let mut acc = ComplexValue::zero();
    let mut y_pow = ComplexValue::one();
    for row in counts {
        let mut l_pow = ComplexValue::one();
        for (k, &c) in row.iter().enumerate() {
            if c != 0 {
                let term = y_pow.mul(&l_pow).scale(&BigRational::from_integer(c.into()));
                acc = acc.add(&term);
            }
            if k + 1 < row.len() {
                l_pow = l_pow.mul(lambda);
            }
        }
        y_pow = y_pow.mul(y);
    }
    Ok(acc)
}

/// Fast path when every weight is rational * root of unity: accumulate the
/// rational coefficient of each exponent of the common-order root.
fn z_ising_monomial(inst: &IsingInstance) -> Result<Option<ComplexValue>> {
    let mut order = 1u64;
    let mut parts: Vec<(BigRational, u64, u64)> = vec![]; // (r, a, native order)
    for w in inst.phi.iter().chain(inst.tau.iter()) {
        let Some(c) = w.as_exact() else { return Ok(None) };
        let Some((r, a)) = c.as_monomial() else { return Ok(None) };
        order = num_integer::lcm(order, c.order());
        parts.push((r, a, c.order()));
    }
    let m = inst.graph.m();
    let n = inst.graph.n();
    // lift exponents to the common order
    let lifted: Vec<(BigRational, u64)> = parts
        .into_iter()
        .map(|(r, a, nat)| (r, a * (order / nat) % order))
        .collect();
    let (edge_w, vert_w) = lifted.split_at(m);
    let mut coeffs = vec![BigRational::zero(); order as usize];
    for mask in 0u64..1u64 << n {
        let mut r = BigRational::one();
        let mut exp = 0u64;
        let mut zero = false;
        for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
            if (mask >> u & 1) == (mask >> v & 1) {
                if edge_w[e].0.is_zero() {
                    zero = true;
                    break;
                }
                r *= &edge_w[e].0;
                exp += edge_w[e].1;
            }
        }
        if zero {
            continue;
        }
        for v in 0..n {
            if mask >> v & 1 == 1 {
                if vert_w[v].0.is_zero() {
                    zero = true;
                    break;
                }
                r *= &vert_w[v].0;
                exp += vert_w[v].1;
            }
        }
        if zero {
            continue;
        }
        coeffs[(exp % order) as usize] += r;
    }
    // fold buckets into a single cyclotomic value
    let mut acc = Cyclotomic::zero();
    for (e, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&Cyclotomic::root_of_unity(order, e as i64).scale(c));
        }
    }
    Ok(Some(ComplexValue::Exact(acc)))
}

fn z_ising_general(inst: &IsingInstance) -> Result<ComplexValue> {
    let n = inst.graph.n();
    let mut acc = ComplexValue::zero();
    for mask in 0u64..1u64 << n {
        let mut prod = ComplexValue::one();
        for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
            if (mask >> u & 1) == (mask >> v & 1) {
                prod = prod.mul(&inst.phi[e]);
            }
        }
        for v in 0..n {
            if mask >> v & 1 == 1 {
                prod = prod.mul(&inst.tau[v]);
            }
        }
        acc = acc.add(&prod);
    }
    Ok(acc)
}

/// Random-cluster sum: sum over A subseteq E of q^{kappa(A)} prod gamma_e.
pub fn z_tutte_rc(inst: &RandomClusterInstance) -> Result<ComplexValue> {
    z_tutte_rc_with(inst, &EvalConfig::default())
}

pub fn z_tutte_rc_with(inst: &RandomClusterInstance, cfg: &EvalConfig) -> Result<ComplexValue> {
    let split = rc_split_sum(inst, None, cfg)?;
    Ok(split.0)
}

#[derive(Debug, Clone)]
pub struct SplitValues {
    /// Contribution from subsets where s and t share a component.
    pub z_st: ComplexValue,
    /// Contribution from subsets where they do not.
    pub z_s_bar_t: ComplexValue,
    pub terminals: (usize, usize),
}

/// Partition the random-cluster sum by whether the terminals are joined.
pub fn z_split(inst: &RandomClusterInstance, s: usize, t: usize) -> Result<SplitValues> {
    z_split_with(inst, s, t, &EvalConfig::default())
}

pub fn z_split_with(
    inst: &RandomClusterInstance,
    s: usize,
    t: usize,
    cfg: &EvalConfig,
) -> Result<SplitValues> {
    if s == t {
        return Err(CisingError::Domain("terminals must differ".into()));
    }
    let n = inst.graph.n();
    if s >= n || t >= n {
        return Err(CisingError::Domain("terminal out of range".into()));
    }
    let (joined, split) = rc_split_sum(inst, Some((s, t)), cfg)?;
    Ok(SplitValues { z_st: joined, z_s_bar_t: split, terminals: (s, t) })
}

/// Shared subset enumeration. With terminals, returns (joined, apart);
/// without, returns (total, 0). Uniform exact weights are bucketed by
/// (kappa, |A|, joined) with integer counts before any field arithmetic.
fn rc_split_sum(
    inst: &RandomClusterInstance,
    terminals: Option<(usize, usize)>,
    cfg: &EvalConfig,
) -> Result<(ComplexValue, ComplexValue)> {
    let n = inst.graph.n();
    let m = inst.graph.m();
    check_caps(n, m, cfg)?;
    let uniform = inst
        .gamma
        .first()
        .filter(|g0| inst.gamma.iter().all(|g| g == *g0));
    let q_pows = power_table(&inst.q, n);
    if let Some(g0) = uniform {
        // counts[kappa][size][joined]
        let mut counts = vec![vec![[0u64; 2]; m + 1]; n + 1];
        for mask in 0u64..1u64 << m {
            let mut dsu = Dsu::new(n);
            for (i, &(u, v)) in inst.graph.edges().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    dsu.union(u, v);
                }
            }
            let k = dsu.components();
            let joined = terminals.map_or(false, |(s, t)| dsu.same(s, t));
            counts[k][mask.count_ones() as usize][joined as usize] += 1;
        }
        let g_pows = power_table(g0, m);
        let mut joined_acc = ComplexValue::zero();
        let mut apart_acc = ComplexValue::zero();
        for (k, row) in counts.iter().enumerate() {
            for (sz, pair) in row.iter().enumerate() {
                for (j, &c) in pair.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let term = q_pows[k]
                        .mul(&g_pows[sz])
                        .scale(&BigRational::from_integer(c.into()));
                    if j == 1 {
                        joined_acc = joined_acc.add(&term);
                    } else {
                        apart_acc = apart_acc.add(&term);
                    }
                }
            }
        }
        return Ok(match terminals {
            Some(_) => (joined_acc, apart_acc),
            None => (apart_acc.add(&joined_acc), ComplexValue::zero()),
        });
    }
    let mut joined_acc = ComplexValue::zero();
    let mut apart_acc = ComplexValue::zero();
    for mask in 0u64..1u64 << m {
        let mut dsu = Dsu::new(n);
        let mut prod = ComplexValue::one();
        for (i, &(u, v)) in inst.graph.edges().iter().enumerate() {
            if mask >> i & 1 == 1 {
                dsu.union(u, v);
                prod = prod.mul(&inst.gamma[i]);
            }
        }
        let term = q_pows[dsu.components()].mul(&prod);
        if terminals.map_or(true, |(s, t)| dsu.same(s, t)) {
            joined_acc = joined_acc.add(&term);
        } else {
            apart_acc = apart_acc.add(&term);
        }
    }
    Ok(match terminals {
        Some(_) => (joined_acc, apart_acc),
        None => (joined_acc, ComplexValue::zero()),
    })
}

fn power_table(base: &ComplexValue, up_to: usize) -> Vec<ComplexValue> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(ComplexValue::one());
    for i in 0..up_to {
        let next = out[i].mul(base);
        out.push(next);
    }
    out
}

/// Two-variable rank-nullity sum:
/// T(G; x, y) = sum_A (x-1)^{kappa(A)-kappa(E)} (y-1)^{|A|-n+kappa(A)}.
pub fn tutte(g: &Multigraph, pt: &TuttePoint) -> Result<ComplexValue> {
    tutte_with(g, pt, &EvalConfig::default())
}

pub fn tutte_with(g: &Multigraph, pt: &TuttePoint, cfg: &EvalConfig) -> Result<ComplexValue> {
    let n = g.n();
    let m = g.m();
    check_caps(n, m, cfg)?;
    let kappa_e = g.kappa_mask(if m == 64 { u64::MAX } else { (1u64 << m) - 1 });
    // bucket subsets by (kappa, |A|); both exponents are nonnegative
    let mut counts = vec![vec![0u64; m + 1]; n + 1];
    for mask in 0u64..1u64 << m {
        counts[g.kappa_mask(mask)][mask.count_ones() as usize] += 1;
    }
    let one = ComplexValue::one();
    let xm1 = pt.x.sub(&one);
    let ym1 = pt.y.sub(&one);
    let x_pows = power_table(&xm1, n);
    let y_pows = power_table(&ym1, m + n);
    let mut acc = ComplexValue::zero();
    for (k, row) in counts.iter().enumerate() {
        for (sz, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = x_pows[k - kappa_e]
                .mul(&y_pows[sz + k - n])
                .scale(&BigRational::from_integer(c.into()));
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

/// Closed forms at y in {0, 1, -1} (uniform weights required).
pub fn z_ising_closed_form(inst: &IsingInstance) -> Result<ComplexValue> {
    let (y, lambda) = inst
        .uniform_weights()
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| CisingError::Domain("closed form needs uniform weights".into()))?;
    let n = inst.graph.n();
    let m = inst.graph.m();
    let one = ComplexValue::one();
    if y.eq_exact(&one) == Some(true) {
        // every assignment weighs lambda^{ones}: (1 + lambda)^n
        return one.add(&lambda).pow(n as i64);
    }
    if y.eq_exact(&ComplexValue::from_int(-1)) == Some(true) {
        // (-1)^{[sigma_u = sigma_v]} = -(-1)^{sigma_u + sigma_v} factorizes
        // into per-vertex terms: (-1)^m prod_v (1 + (-1)^{deg v} lambda)
        let mut acc = ComplexValue::from_int(if m % 2 == 0 { 1 } else { -1 });
        for v in 0..n {
            let f = if inst.graph.degree(v) % 2 == 0 {
                one.add(&lambda)
            } else {
                one.sub(&lambda)
            };
            acc = acc.mul(&f);
        }
        return Ok(acc);
    }
    if y.eq_exact(&ComplexValue::zero()) == Some(true) {
        // only proper 2-colorings survive; per component the two class-swap
        // colorings give lambda^a + lambda^b
        let mut acc = one.clone();
        for classes in inst.graph.bipartition_class_sizes() {
            match classes {
                None => return Ok(ComplexValue::zero()),
                Some((a, b)) => {
                    let t = lambda.pow(a as i64)?.add(&lambda.pow(b as i64)?);
                    acc = acc.mul(&t);
                }
            }
        }
        return Ok(acc);
    }
    Err(CisingError::Domain(
        "closed form only at y in {0, 1, -1}".into(),
    ))
}

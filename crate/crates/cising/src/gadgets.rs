//! Two-terminal gadget algebra: series/parallel weight composition,
//! stretch/thicken shifts with exact prefactor tracking, edge substitution,
//! constructive chains that land on a real weight in (-1, 0), the pinned
//! equality gadget, and pendant-field constructions with certified residual
//! bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CisingError, Result};
use crate::graph::{IsingInstance, Multigraph, RandomClusterInstance};
use crate::numerics::cyclotomic::Cyclotomic;
use crate::numerics::interval::{euler_e, rat, RatInterval};
use crate::numerics::value::ComplexValue;
use crate::numerics::weightspec::WeightSpec;
use crate::partition::{z_ising_with, z_split_with, EvalConfig};

/// Series composition of two random-cluster edge weights:
/// w1*w2 / (q + w1 + w2).
pub fn series_weight(
    w1: &ComplexValue,
    w2: &ComplexValue,
    q: &ComplexValue,
) -> Result<ComplexValue> {
    let den = q.add(w1).add(w2);
    if den.certified_zero()? {
        return Err(CisingError::Domain(
            "series composition undefined: q + w1 + w2 = 0".into(),
        ));
    }
    w1.mul(w2).div(&den)
}

/// Parallel composition of two random-cluster edge weights:
/// (1+w1)(1+w2) - 1.
pub fn parallel_weight(w1: &ComplexValue, w2: &ComplexValue) -> ComplexValue {
    let one = ComplexValue::one();
    one.add(w1).mul(&one.add(w2)).sub(&one)
}

/// k parallel copies of a spin weight y: y' = y^k, substitution scalar 1.
pub fn thicken(y: &ComplexValue, k: u64) -> Result<(ComplexValue, ComplexValue)> {
    if k == 0 {
        return Err(CisingError::Domain("thicken requires k >= 1".into()));
    }
    Ok((y.pow(k as i64)?, ComplexValue::one()))
}

/// k serial copies of a spin weight y. With alpha = y - 1 the new weight
/// solves (1 + q/alpha') = (1 + q/alpha)^k; the returned scalar is the
/// per-edge substitution prefactor, folded pairwise as (q + w_partial + w).
pub fn stretch(y: &ComplexValue, q: &ComplexValue, k: u64) -> Result<(ComplexValue, ComplexValue)> {
    if k == 0 {
        return Err(CisingError::Domain("stretch requires k >= 1".into()));
    }
    let one = ComplexValue::one();
    let alpha = y.sub(&one);
    if alpha.certified_zero()? {
        return Err(CisingError::Domain("stretch undefined at y = 1".into()));
    }
    let mut w = alpha.clone();
    let mut scalar = ComplexValue::one();
    for _ in 1..k {
        scalar = scalar.mul(&q.add(&w).add(&alpha));
        w = series_weight(&w, &alpha, q)?;
    }
    Ok((w.add(&one), scalar))
}

/// A random-cluster graph with two distinguished terminals; substituting it
/// for an edge implements the effective weight q * Z_st / Z_{s|t}.
#[derive(Debug, Clone)]
pub struct TwoTerminalGadget {
    pub inst: RandomClusterInstance,
    pub s: usize,
    pub t: usize,
}

impl TwoTerminalGadget {
    pub fn new(inst: RandomClusterInstance, s: usize, t: usize) -> Result<Self> {
        if s == t {
            return Err(CisingError::Domain("gadget terminals must differ".into()));
        }
        if s >= inst.graph.n() || t >= inst.graph.n() {
            return Err(CisingError::Domain("gadget terminal out of range".into()));
        }
        Ok(TwoTerminalGadget { inst, s, t })
    }
}

/// Effective edge weight of a two-terminal gadget: q * Z_st / Z_{s|t},
/// computed by subset enumeration.
pub fn effective_weight(gadget: &TwoTerminalGadget) -> Result<ComplexValue> {
    effective_weight_with(gadget, &EvalConfig::default())
}

pub fn effective_weight_with(gadget: &TwoTerminalGadget, cfg: &EvalConfig) -> Result<ComplexValue> {
    let sv = z_split_with(&gadget.inst, gadget.s, gadget.t, cfg)?;
    if sv.z_s_bar_t.certified_zero()? {
        return Err(CisingError::Domain(
            "gadget implements no weight: Z_{s|t} = 0".into(),
        ));
    }
    gadget.inst.q.mul(&sv.z_st).div(&sv.z_s_bar_t)
}

/// Per-edge substitution scalar Z_{s|t}(gadget) / q^2.
pub fn substitution_scalar_with(
    gadget: &TwoTerminalGadget,
    cfg: &EvalConfig,
) -> Result<ComplexValue> {
    let sv = z_split_with(&gadget.inst, gadget.s, gadget.t, cfg)?;
    sv.z_s_bar_t.div(&gadget.inst.q.mul(&gadget.inst.q))
}

/// Replace edge `edge_index` of `inst` by a copy of the gadget, identifying
/// the endpoints with the gadget terminals. Returns the new instance and the
/// scalar c = Z_{s|t}(gadget)/q^2 with
/// Z(new) = c * Z(old with that edge reweighted to the effective weight).
pub fn substitute(
    inst: &RandomClusterInstance,
    edge_index: usize,
    gadget: &TwoTerminalGadget,
) -> Result<(RandomClusterInstance, ComplexValue)> {
    substitute_with(inst, edge_index, gadget, &EvalConfig::default())
}

pub fn substitute_with(
    inst: &RandomClusterInstance,
    edge_index: usize,
    gadget: &TwoTerminalGadget,
    cfg: &EvalConfig,
) -> Result<(RandomClusterInstance, ComplexValue)> {
    if edge_index >= inst.graph.m() {
        return Err(CisingError::Domain(format!(
            "edge index {edge_index} out of range"
        )));
    }
    if inst.q.eq_exact(&gadget.inst.q) == Some(false) {
        return Err(CisingError::Domain(
            "gadget and host instance must share q".into(),
        ));
    }
    let (host_u, host_v) = inst.graph.edges()[edge_index];
    let n_host = inst.graph.n();
    // Gadget-internal vertices are appended after the host vertices.
    let mut next = n_host;
    let mut map = Vec::with_capacity(gadget.inst.graph.n());
    for g in 0..gadget.inst.graph.n() {
        if g == gadget.s {
            map.push(host_u);
        } else if g == gadget.t {
            map.push(host_v);
        } else {
            map.push(next);
            next += 1;
        }
    }
    let mut edges = Vec::new();
    let mut gamma = Vec::new();
    for (i, &(u, v)) in inst.graph.edges().iter().enumerate() {
        if i == edge_index {
            continue;
        }
        edges.push((u, v));
        gamma.push(inst.gamma[i].clone());
    }
    for (i, &(u, v)) in gadget.inst.graph.edges().iter().enumerate() {
        edges.push((map[u], map[v]));
        gamma.push(gadget.inst.gamma[i].clone());
    }
    let graph = Multigraph::new(next, edges)?;
    let scalar = substitution_scalar_with(gadget, cfg)?;
    Ok((RandomClusterInstance { graph, q: inst.q.clone(), gamma }, scalar))
}

/// One shift step: replace every current edge by k serial or k parallel
/// copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetStep {
    Stretch { k: u64 },
    Thicken { k: u64 },
}

impl std::fmt::Display for GadgetStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GadgetStep::Stretch { k } => write!(f, "stretch({k})"),
            GadgetStep::Thicken { k } => write!(f, "thicken({k})"),
        }
    }
}

/// A composed shift chain: the symbolic step list together with the folded
/// effective weight and the accumulated per-edge substitution prefactor.
#[derive(Debug, Clone)]
pub struct GadgetChain {
    pub q: ComplexValue,
    pub steps: Vec<GadgetStep>,
    pub start_weight: ComplexValue,
    pub effective_weight: ComplexValue,
    pub prefactor_per_edge: ComplexValue,
}

impl GadgetChain {
    /// Fold the closed forms over the steps. Thickening a compound gadget
    /// raises its scalar to the k-th power; stretching additionally picks up
    /// the pairwise series factors (q + w_partial + w).
    pub fn build(q: &ComplexValue, start: &ComplexValue, steps: Vec<GadgetStep>) -> Result<Self> {
        let one = ComplexValue::one();
        let mut y = start.clone();
        let mut scalar = ComplexValue::one();
        for step in &steps {
            match *step {
                GadgetStep::Thicken { k } => {
                    if k == 0 {
                        return Err(CisingError::Domain("thicken requires k >= 1".into()));
                    }
                    y = y.pow(k as i64)?;
                    scalar = scalar.pow(k as i64)?;
                }
                GadgetStep::Stretch { k } => {
                    if k == 0 {
                        return Err(CisingError::Domain("stretch requires k >= 1".into()));
                    }
                    let w_step = y.sub(&one);
                    if w_step.certified_zero()? {
                        return Err(CisingError::Domain("stretch undefined at y = 1".into()));
                    }
                    let mut w = w_step.clone();
                    let mut extra = ComplexValue::one();
                    for _ in 1..k {
                        extra = extra.mul(&q.add(&w).add(&w_step));
                        w = series_weight(&w, &w_step, q)?;
                    }
                    y = w.add(&one);
                    scalar = scalar.pow(k as i64)?.mul(&extra);
                }
            }
        }
        Ok(GadgetChain {
            q: q.clone(),
            steps,
            start_weight: start.clone(),
            effective_weight: y,
            prefactor_per_edge: scalar,
        })
    }

    /// Build the chain explicitly as a two-terminal graph. Each step acts on
    /// the whole compound gadget built so far: thickening places k copies in
    /// parallel between the terminals, stretching joins k copies in series
    /// through fresh junction vertices — mirroring how the weight fold
    /// composes the closed forms.
    pub fn explicit_gadget(&self) -> Result<TwoTerminalGadget> {
        // Gadget state: vertex count with s = 0, t = 1, plus the edge list.
        let mut n = 2usize;
        let mut edges = vec![(0usize, 1usize)];
        // Re-embed a copy of the current gadget between vertices a and b of
        // the new graph, appending fresh internal vertices starting at
        // `next`. Returns the updated `next`.
        let embed = |edges_in: &[(usize, usize)],
                     n_in: usize,
                     a: usize,
                     b: usize,
                     mut next: usize,
                     out: &mut Vec<(usize, usize)>|
         -> usize {
            let mut map = vec![0usize; n_in];
            map[0] = a;
            map[1] = b;
            for item in map.iter_mut().take(n_in).skip(2) {
                *item = next;
                next += 1;
            }
            for &(u, v) in edges_in {
                out.push((map[u], map[v]));
            }
            next
        };
        for step in &self.steps {
            match *step {
                GadgetStep::Thicken { k } => {
                    let mut out = Vec::new();
                    let mut next = 2;
                    for _ in 0..k {
                        next = embed(&edges, n, 0, 1, next, &mut out);
                    }
                    edges = out;
                    n = next;
                }
                GadgetStep::Stretch { k } => {
                    let mut out = Vec::new();
                    // Junction vertices between the serial copies.
                    let junctions: Vec<usize> = (0..k as usize - 1).map(|j| 2 + j).collect();
                    let mut next = 2 + junctions.len();
                    for c in 0..k as usize {
                        let a = if c == 0 { 0 } else { junctions[c - 1] };
                        let b = if c == k as usize - 1 { 1 } else { junctions[c] };
                        next = embed(&edges, n, a, b, next, &mut out);
                    }
                    edges = out;
                    n = next;
                }
            }
        }
        let gamma = self.start_weight.sub(&ComplexValue::one());
        let graph = Multigraph::new(n, edges)?;
        TwoTerminalGadget::new(RandomClusterInstance::uniform(graph, self.q.clone(), gamma), 0, 1)
    }

    /// Rebuild the explicit graph and check by subset enumeration that it
    /// implements the stored effective weight with the stored prefactor.
    pub fn verify_brute_force(&self, cfg: &EvalConfig) -> Result<bool> {
        let gadget = self.explicit_gadget()?;
        let w_star = effective_weight_with(&gadget, cfg)?;
        let want_w = self.effective_weight.sub(&ComplexValue::one());
        if !w_star.sub(&want_w).certified_zero()? {
            return Ok(false);
        }
        let scalar = substitution_scalar_with(&gadget, cfg)?;
        Ok(scalar.sub(&self.prefactor_per_edge).certified_zero()?)
    }
}

/// Smallest k >= 1 such that k * (2*pi*a/b) lies in (pi/2, pi) or
/// (pi, 3*pi/2) modulo 2*pi. The base angle must avoid the four axis points.
pub fn find_k_angle(a: i64, b: u64) -> Result<u64> {
    if b == 0 {
        return Err(CisingError::Domain("angle denominator must be nonzero".into()));
    }
    find_k_turns(&rat(a as i64, b as i64))
}

/// Same search with the angle given as a fraction of a full turn.
pub fn find_k_turns(turns: &BigRational) -> Result<u64> {
    let one = BigRational::one();
    let frac = |v: &BigRational| -> BigRational { v - v.floor() };
    let base = frac(turns);
    let quarter = rat(1, 4);
    let half = rat(1, 2);
    let three_quarters = rat(3, 4);
    if base.is_zero() || base == quarter || base == half || base == three_quarters {
        return Err(CisingError::Domain(
            "angle lies on an axis: no stretch target exists".into(),
        ));
    }
    let cap = base
        .denom()
        .to_u64()
        .ok_or_else(|| CisingError::Domain("angle denominator too large".into()))?;
    let mut cur = BigRational::zero();
    for k in 1..=cap {
        cur += &base;
        if cur >= one {
            cur -= &one;
        }
        let inside = (cur > quarter && cur < half) || (cur > half && cur < three_quarters);
        if inside {
            return Ok(k);
        }
    }
    Err(CisingError::Domain(
        "no multiple of the angle entered the target arcs".into(),
    ))
}

/// Certify that a chain's effective weight is real and strictly inside
/// (-1, 0), refining precision until both endpoints separate.
fn certify_negative_unit(v: &ComplexValue) -> Result<()> {
    if let Some(c) = v.as_exact() {
        if !c.is_real() {
            return Err(CisingError::Domain(
                "effective weight has a nonzero imaginary part".into(),
            ));
        }
    }
    let minus_one = -BigRational::one();
    let zero = BigRational::zero();
    if let Some(r) = v.to_rational() {
        return if r > minus_one && r < zero {
            Ok(())
        } else {
            Err(CisingError::Domain(
                "effective weight is not inside (-1, 0)".into(),
            ))
        };
    }
    let mut prec = 128;
    while prec <= 4096 {
        let (re, _) = v.re_im(prec);
        if re.lo > minus_one && re.hi < zero {
            return Ok(());
        }
        if re.hi < minus_one || re.lo > zero {
            return Err(CisingError::Domain(
                "effective weight is not inside (-1, 0)".into(),
            ));
        }
        prec *= 2;
    }
    Err(CisingError::Indeterminate(
        "could not separate effective weight from {-1, 0}".into(),
    ))
}

/// Search for the smallest k such that stretching the purely imaginary
/// weight y by k yields z_k = ((y+1)^k + (y-1)^k) / ((y+1)^k - (y-1)^k)
/// purely imaginary with 0 < |z_k| < 1.
fn imaginary_stretch_k(y: &Cyclotomic, cap: u64) -> Result<u64> {
    let one = Cyclotomic::one();
    let u = y.add(&one);
    let v = y.sub(&one);
    let mut uk = one.clone();
    let mut vk = one;
    for k in 1..=cap {
        uk = uk.mul(&u);
        vk = vk.mul(&v);
        let num = uk.add(&vk);
        let den = uk.sub(&vk);
        if den.is_zero() {
            continue;
        }
        let z = num.div(&den)?;
        // For |x| = 1 the Möbius image z is purely imaginary; keep the check
        // anyway so a bad input fails loudly instead of silently.
        if !z.add(&z.conj()).is_zero() {
            continue;
        }
        if let Some(zsq) = z.mul(&z).to_rational() {
            if zsq > -BigRational::one() && zsq.is_negative() {
                return Ok(k);
            }
        }
    }
    Err(CisingError::Domain(format!(
        "no stretch exponent up to {cap} gave an imaginary weight inside the unit disk"
    )))
}

/// Normalised polar form of a weight spec: radius r > 0 (rational) and the
/// angle as a fraction of pi, reduced into [0, 2).
pub(crate) fn polar_form(spec: &WeightSpec) -> Result<(BigRational, BigRational)> {
    let two = rat(2, 1);
    let (r, mut t) = match spec {
        WeightSpec::Rou { k, n } => (BigRational::one(), rat(2 * *k as i64, *n as i64)),
        WeightSpec::PolarPi { r, a, b } => {
            (r.clone(), rat(*a as i64, *b as i64))
        }
        WeightSpec::Real(v) => (v.clone(), BigRational::zero()),
        WeightSpec::Rect { re, im } => {
            if re.is_zero() && !im.is_zero() {
                let t = if im.is_positive() { rat(1, 2) } else { rat(3, 2) };
                (im.abs(), t)
            } else {
                return Err(CisingError::Domain(
                    "rectangular weights are only accepted on the imaginary axis".into(),
                ));
            }
        }
    };
    let mut r = r;
    if r.is_negative() {
        r = -r;
        t += BigRational::one();
    }
    if r.is_zero() {
        return Err(CisingError::Domain("weight is zero".into()));
    }
    t -= two.clone() * (&t / &two).floor();
    Ok((r, t))
}

/// Exact value r * e^{i*pi*t} as a cyclotomic number (t rational).
fn polar_to_cyclotomic(r: &BigRational, t: &BigRational) -> Result<Cyclotomic> {
    let denom = t
        .denom()
        .to_u64()
        .ok_or_else(|| CisingError::Domain("angle denominator too large".into()))?;
    let numer = t
        .numer()
        .to_i64()
        .ok_or_else(|| CisingError::Domain("angle numerator too large".into()))?;
    Ok(Cyclotomic::root_of_unity(2 * denom, numer).scale(r))
}

/// Build a stretch/thicken chain (q = 2) carrying the given weight to a real
/// effective weight strictly inside (-1, 0). Covers weights on the unit
/// circle off the axes, purely imaginary weights off {0, +-i}, and weights
/// with angle an odd multiple of pi/(2*qbar).
pub fn chain_to_negative_unit(spec: &WeightSpec) -> Result<GadgetChain> {
    let (r, t) = polar_form(spec)?;
    let one = BigRational::one();
    let q = ComplexValue::from_int(2);
    let start = ComplexValue::Exact(polar_to_cyclotomic(&r, &t)?);

    let mut steps: Vec<GadgetStep> = Vec::new();
    if r == one {
        // Unit circle: rotate into the left half plane, then 2-stretch onto
        // the real axis (the result is Re of the rotated weight).
        let k = find_k_turns(&(&t / rat(2, 1)))?;
        if k > 1 {
            steps.push(GadgetStep::Thicken { k });
        }
        steps.push(GadgetStep::Stretch { k: 2 });
    } else {
        // Reduced angle t = a / (2*qbar) with a odd: a qbar-thickening makes
        // the weight purely imaginary with radius r^qbar.
        let two = BigInt::from(2u32);
        let denom = t.denom();
        if t.is_zero() || denom % &two != BigInt::zero() {
            return Err(CisingError::Domain(
                "weight angle is not an odd multiple of pi/(2*qbar)".into(),
            ));
        }
        let qbar = (denom / &two)
            .to_u64()
            .ok_or_else(|| CisingError::Domain("angle denominator too large".into()))?;
        if qbar > 1 {
            steps.push(GadgetStep::Thicken { k: qbar });
        }
        let radius = pow_rat(&r, qbar);
        if radius == one {
            return Err(CisingError::Domain(
                "thickening lands on +-i: hypotheses unmet".into(),
            ));
        }
        if radius < one {
            steps.push(GadgetStep::Thicken { k: 2 });
        } else {
            let rsq = &radius * &radius;
            // The rotation angle of the stretch map has |sin| = 2r/(1+r^2),
            // so a hit inside the target arcs is guaranteed well before this
            // cap.
            let cap = 64 + ((rat(16, 1) * (&rsq + &one)) / &radius)
                .ceil()
                .to_integer()
                .to_u64()
                .unwrap_or(u64::MAX);
            let y_imag = polar_to_cyclotomic(&r, &t)?.pow(qbar as i64)?;
            let k = imaginary_stretch_k(&y_imag, cap)?;
            steps.push(GadgetStep::Stretch { k });
            steps.push(GadgetStep::Thicken { k: 2 });
        }
    }

    let chain = GadgetChain::build(&q, &start, steps)?;
    certify_negative_unit(&chain.effective_weight)?;
    Ok(chain)
}

fn pow_rat(r: &BigRational, k: u64) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= r;
    }
    out
}

/// Partition sum with the two terminal spins pinned; the gadget's effective
/// interaction matrix is [[branch(0,0), branch(0,1)], [branch(1,0),
/// branch(1,1)]]. Vertex weights of the pinned vertices are included.
pub fn pinned_branch(
    inst: &IsingInstance,
    s: usize,
    t: usize,
    sigma_s: bool,
    sigma_t: bool,
    cfg: &EvalConfig,
) -> Result<ComplexValue> {
    let n = inst.graph.n();
    if s == t || s >= n || t >= n {
        return Err(CisingError::Domain("bad pinned terminals".into()));
    }
    if n > cfg.cap_n + 2 || inst.graph.m() > cfg.cap_m {
        return Err(CisingError::CapExceeded(format!(
            "pinned enumeration over {} vertices / {} edges exceeds caps",
            n,
            inst.graph.m()
        )));
    }
    let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut total = ComplexValue::zero();
    for mask in 0u64..1u64 << free.len() {
        let mut spin = vec![false; n];
        spin[s] = sigma_s;
        spin[t] = sigma_t;
        for (i, &v) in free.iter().enumerate() {
            spin[v] = mask >> i & 1 == 1;
        }
        let mut term = ComplexValue::one();
        for (i, &(u, v)) in inst.graph.edges().iter().enumerate() {
            if spin[u] == spin[v] {
                term = term.mul(&inst.phi[i]);
            }
        }
        for (v, tau) in inst.tau.iter().enumerate() {
            if spin[v] {
                term = term.mul(tau);
            }
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// Binary equality up to a scalar: a 2-stretch followed by a 2-thicken with
/// vertex weight -1 on the two internal vertices. The effective interaction
/// matrix is (y^2-1)^2 times the identity pattern.
#[derive(Debug, Clone)]
pub struct EqualityGadget {
    pub steps: Vec<GadgetStep>,
    pub inst: IsingInstance,
    pub s: usize,
    pub t: usize,
    pub scale: ComplexValue,
}

pub fn equality_gadget(y: &ComplexValue) -> Result<EqualityGadget> {
    let one = ComplexValue::one();
    let y2m1 = y.mul(y).sub(&one);
    if y2m1.certified_zero()? {
        return Err(CisingError::Domain(
            "equality gadget degenerates at y = +-1".into(),
        ));
    }
    let scale = y2m1.mul(&y2m1);
    // Terminals 0, 1; internal path vertices 2, 3 carry weight -1.
    let graph = Multigraph::new(4, vec![(0, 2), (2, 1), (0, 3), (3, 1)])?;
    let phi = vec![y.clone(); 4];
    let minus_one = ComplexValue::from_int(-1);
    let tau = vec![one.clone(), one, minus_one.clone(), minus_one];
    Ok(EqualityGadget {
        steps: vec![GadgetStep::Stretch { k: 2 }, GadgetStep::Thicken { k: 2 }],
        inst: IsingInstance { graph, phi, tau },
        s: 0,
        t: 1,
        scale,
    })
}

/// Effective real interaction implemented by the two-branch 2-stretch with
/// vertex weight z on the internal vertices (one branch carries y, the
/// other 1/y): w = (1 + z^2 + z(y^2 + y^{-2})) / (1+z)^2.
pub fn field_real_weight(y: &ComplexValue, z: &ComplexValue) -> Result<ComplexValue> {
    let one = ComplexValue::one();
    let onez = one.add(z);
    if onez.certified_zero()? {
        return Err(CisingError::Domain(
            "field gadget undefined at vertex weight -1".into(),
        ));
    }
    let y2 = y.mul(y);
    let y2inv = one.div(&y2)?;
    let num = one.add(&z.mul(z)).add(&z.mul(&y2.add(&y2inv)));
    num.div(&onez.mul(&onez))
}

/// Explicit graph realising `field_real_weight`: terminals 0, 1; internal
/// vertices 2 (on the y branch) and 3 (on the 1/y branch), both weighted z.
pub fn field_real_gadget(y: &ComplexValue, z: &ComplexValue) -> Result<IsingInstance> {
    let one = ComplexValue::one();
    if one.add(z).certified_zero()? {
        return Err(CisingError::Domain(
            "field gadget undefined at vertex weight -1".into(),
        ));
    }
    let y_inv = one.div(y)?;
    let graph = Multigraph::new(4, vec![(0, 2), (2, 1), (0, 3), (3, 1)])?;
    let phi = vec![y.clone(), y.clone(), y_inv.clone(), y_inv];
    let tau = vec![one.clone(), one, z.clone(), z.clone()];
    Ok(IsingInstance { graph, phi, tau })
}

/// Parameters shared by the pendant-field constructions.
#[derive(Debug, Clone)]
pub struct FieldGadgetParams {
    /// Implemented real interaction on the pendant edges.
    pub w: ComplexValue,
    /// Half the number of parallel pendant edges per partner.
    pub t: u64,
    /// Power target (field-power variant; 1 otherwise).
    pub r: u64,
    /// Deviation of the effective vertex weight from the target.
    pub alpha: ComplexValue,
    /// Global prefactor dividing Z of the augmented graph.
    pub scale: ComplexValue,
}

/// A pendant-field construction: the augmented instance, its parameters, and
/// a certified upper bound on |Z(augmented)/scale - Z(target)|.
#[derive(Debug, Clone)]
pub struct FieldGadget {
    pub inst: IsingInstance,
    pub params: FieldGadgetParams,
    pub residual_bound: BigRational,
}

const FIELD_PREC: u32 = 192;

fn require_unit_modulus(z: &ComplexValue) -> Result<()> {
    let one = ComplexValue::one();
    if !z.mul(&z.conj()).sub(&one).certified_zero()? {
        return Err(CisingError::Domain(
            "vertex weight must lie on the unit circle".into(),
        ));
    }
    Ok(())
}

/// Cancel a unit-circle vertex weight z down to 1: attach one pendant
/// partner per vertex through 2t parallel edges of real weight w, |w| < 1.
/// Z(G'; y, z) / (w^{2t}+z)^n approximates Z(G; y, 1) with error at most
/// e * 2^n * n^2 * |alpha|, alpha = w^{2t}(z^2-1)/(w^{2t}+z).
pub fn field_cancel_construct(
    g: &Multigraph,
    y: &ComplexValue,
    z: &ComplexValue,
    w: &ComplexValue,
    t: u64,
) -> Result<FieldGadget> {
    if t == 0 {
        return Err(CisingError::Domain("pendant bundle needs t >= 1".into()));
    }
    require_unit_modulus(z)?;
    let n = g.n();
    let one = ComplexValue::one();

    if w.certified_zero()? {
        // Inequality gadget: a single weight-0 pendant edge forces the
        // partner to disagree, contributing exactly z per vertex.
        let mut edges = g.edges().to_vec();
        let mut phi = vec![y.clone(); g.m()];
        for v in 0..n {
            edges.push((v, n + v));
            phi.push(ComplexValue::zero());
        }
        let graph = Multigraph::new(2 * n, edges)?;
        let tau = vec![z.clone(); 2 * n];
        let scale = z.pow(n as i64)?;
        return Ok(FieldGadget {
            inst: IsingInstance { graph, phi, tau },
            params: FieldGadgetParams {
                w: w.clone(),
                t,
                r: 1,
                alpha: ComplexValue::zero(),
                scale,
            },
            residual_bound: BigRational::zero(),
        });
    }

    if w.abs_enclosure(FIELD_PREC).hi >= BigRational::one() {
        return Err(CisingError::Domain(
            "pendant interaction must satisfy |w| < 1".into(),
        ));
    }

    let w2t = w.pow(2 * t as i64)?;
    let den = w2t.add(z);
    if den.certified_zero()? {
        return Err(CisingError::Domain("degenerate pendant: w^{2t} + z = 0".into()));
    }
    let alpha = w2t.mul(&z.mul(z).sub(&one)).div(&den)?;
    let scale = den.pow(n as i64)?;

    let mut edges = g.edges().to_vec();
    let mut phi = vec![y.clone(); g.m()];
    for v in 0..n {
        for _ in 0..2 * t {
            edges.push((v, n + v));
            phi.push(w.clone());
        }
    }
    let graph = Multigraph::new(2 * n, edges)?;
    let tau = vec![z.clone(); 2 * n];

    let alpha_abs = alpha.abs_enclosure(FIELD_PREC).hi;
    let pow2n = BigRational::from_integer(BigInt::from(2u32).pow(n as u32));
    let n2 = rat((n * n) as i64, 1);
    let residual_bound = euler_e(FIELD_PREC).hi * pow2n * n2 * alpha_abs;

    Ok(FieldGadget {
        inst: IsingInstance { graph, phi, tau },
        params: FieldGadgetParams { w: w.clone(), t, r: 1, alpha, scale },
        residual_bound,
    })
}

/// Raise a unit-circle vertex weight z to the r-th power: attach r-1 pendant
/// partners per vertex, each through 2t parallel edges of real weight w,
/// |w| > 1. Z(G'; y, z) / (w^{2t}+z)^{n(r-1)} approximates Z(G; y, z^r)
/// with error at most 4^n * |alpha|,
/// alpha = z((z+mu)^{r-1} - z^{r-1}), mu = (1-z^2)/(w^{2t}+z).
pub fn field_power_construct(
    g: &Multigraph,
    y: &ComplexValue,
    z: &ComplexValue,
    w: &ComplexValue,
    t: u64,
    r: u64,
) -> Result<FieldGadget> {
    if t == 0 || r == 0 {
        return Err(CisingError::Domain("pendant bundle needs t >= 1, r >= 1".into()));
    }
    require_unit_modulus(z)?;
    if w.abs_enclosure(FIELD_PREC).lo <= BigRational::one() {
        return Err(CisingError::Domain(
            "pendant interaction must satisfy |w| > 1".into(),
        ));
    }
    let n = g.n();
    let one = ComplexValue::one();
    let w2t = w.pow(2 * t as i64)?;
    let den = w2t.add(z);
    if den.certified_zero()? {
        return Err(CisingError::Domain("degenerate pendant: w^{2t} + z = 0".into()));
    }
    let mu = one.sub(&z.mul(z)).div(&den)?;
    let alpha = z.mul(&z.add(&mu).pow(r as i64 - 1)?.sub(&z.pow(r as i64 - 1)?));
    let scale = den.pow((n as i64) * (r as i64 - 1))?;

    let mut edges = g.edges().to_vec();
    let mut phi = vec![y.clone(); g.m()];
    let mut next = n;
    for v in 0..n {
        for _ in 0..r - 1 {
            let partner = next;
            next += 1;
            for _ in 0..2 * t {
                edges.push((v, partner));
                phi.push(w.clone());
            }
        }
    }
    let graph = Multigraph::new(next, edges)?;
    let tau = vec![z.clone(); next];

    let alpha_abs = alpha.abs_enclosure(FIELD_PREC).hi;
    let pow4n = BigRational::from_integer(BigInt::from(4u32).pow(n as u32));
    let residual_bound = pow4n * alpha_abs;

    Ok(FieldGadget {
        inst: IsingInstance { graph, phi, tau },
        params: FieldGadgetParams { w: w.clone(), t, r, alpha, scale },
        residual_bound,
    })
}

/// |Z(augmented)/scale - Z(reference)| as a certified enclosure; used to
/// check residual bounds by brute force.
pub fn field_gadget_residual(
    gadget: &FieldGadget,
    reference: &IsingInstance,
    cfg: &EvalConfig,
) -> Result<RatInterval> {
    let z_aug = z_ising_with(&gadget.inst, cfg)?;
    let z_ref = z_ising_with(reference, cfg)?;
    let diff = z_aug.div(&gadget.params.scale)?.sub(&z_ref);
    Ok(diff.abs_enclosure(FIELD_PREC))
}

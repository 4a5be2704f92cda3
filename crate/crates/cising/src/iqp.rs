//! Diagonal-phase circuits with Hadamard boundary layers: parsing, exact
//! dense strong simulation, the circuit-to-spin-system encodings for full
//! and partial measurement, the CZ decomposition at theta = pi/8, and a
//! Parseval identity checker.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{CisingError, Result};
use crate::graph::{IsingInstance, Multigraph};
use crate::numerics::cyclotomic::Cyclotomic;
use crate::numerics::value::ComplexValue;
use crate::partition::EvalConfig;

/// Dense-simulation cap: the statevector has 2^n amplitudes.
pub const SIMULATION_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IqpGate {
    /// Single-qubit phase gate diag(e^{i*theta}, e^{-i*theta}).
    P { i: usize },
    /// Two-qubit phase gate: e^{i*theta} on equal bits, e^{-i*theta} otherwise.
    Zz { i: usize, j: usize },
    /// Controlled-Z: diag(1, 1, 1, -1).
    Cz { i: usize, j: usize },
}

/// A circuit of commuting diagonal gates between two Hadamard layers, with
/// the phase angle theta = a*pi/b kept exact.
#[derive(Debug, Clone)]
pub struct IqpCircuit {
    pub n: usize,
    pub theta_a: i64,
    pub theta_b: u64,
    pub gates: Vec<IqpGate>,
}

impl IqpCircuit {
    pub fn new(n: usize, theta_a: i64, theta_b: u64, gates: Vec<IqpGate>) -> Result<Self> {
        if theta_b == 0 {
            return Err(CisingError::Parse("theta denominator must be nonzero".into()));
        }
        for g in &gates {
            match *g {
                IqpGate::P { i } => {
                    if i >= n {
                        return Err(CisingError::Parse(format!("gate line {i} out of range")));
                    }
                }
                IqpGate::Zz { i, j } | IqpGate::Cz { i, j } => {
                    if i >= n || j >= n {
                        return Err(CisingError::Parse(format!(
                            "gate lines {i},{j} out of range"
                        )));
                    }
                    if i == j {
                        return Err(CisingError::Parse(
                            "two-qubit gate needs distinct lines".into(),
                        ));
                    }
                }
            }
        }
        Ok(IqpCircuit { n, theta_a, theta_b, gates })
    }

    /// Number of P gates on each line.
    pub fn p_counts(&self) -> Vec<u64> {
        let mut p = vec![0u64; self.n];
        for g in &self.gates {
            if let IqpGate::P { i } = *g {
                p[i] += 1;
            }
        }
        p
    }

    pub fn has_cz(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, IqpGate::Cz { .. }))
    }
}

/// Which lines are read out, and the observed bits (aligned with
/// `measured`).
#[derive(Debug, Clone)]
pub struct IqpMeasurement {
    pub measured: Vec<usize>,
    pub outcome: Vec<bool>,
}

impl IqpMeasurement {
    pub fn new(measured: Vec<usize>, outcome: Vec<bool>) -> Result<Self> {
        if measured.len() != outcome.len() {
            return Err(CisingError::Parse(
                "outcome length must match the measured set".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &i in &measured {
            if !seen.insert(i) {
                return Err(CisingError::Parse(format!("line {i} measured twice")));
            }
        }
        Ok(IqpMeasurement { measured, outcome })
    }

    pub fn all_lines(n: usize) -> Self {
        IqpMeasurement { measured: (0..n).collect(), outcome: vec![false; n] }
    }
}

/// Parse the circuit grammar. Statements are separated by newlines or `/`:
/// header `iqp <n> theta pi(<a>,<b>)`, then `p <i>`, `zz <i> <j>`,
/// `cz <i> <j>`, optional `measure <i...>` and `outcome <bits>`.
/// `#` starts a comment. Default measurement: all lines, outcome all-zero.
pub fn parse_circuit(text: &str) -> Result<(IqpCircuit, IqpMeasurement)> {
    let mut header: Option<(usize, i64, u64)> = None;
    let mut gates = Vec::new();
    let mut measured: Option<Vec<usize>> = None;
    let mut outcome: Option<Vec<bool>> = None;
    for raw in text.lines().flat_map(|l| l.split('/')) {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let keyword = toks[0].to_ascii_lowercase();
        match keyword.as_str() {
            "iqp" => {
                if header.is_some() {
                    return Err(CisingError::Parse("duplicate iqp header".into()));
                }
                if toks.len() != 4 || !toks[2].eq_ignore_ascii_case("theta") {
                    return Err(CisingError::Parse(
                        "header must be: iqp <n> theta pi(<a>,<b>)".into(),
                    ));
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| CisingError::Parse(format!("bad line count {:?}", toks[1])))?;
                let (a, b) = parse_pi_angle(toks[3])?;
                header = Some((n, a, b));
            }
            "p" => {
                let i = parse_line_index(&toks, 1, 2)?;
                gates.push(IqpGate::P { i });
            }
            "zz" | "cz" => {
                if toks.len() != 3 {
                    return Err(CisingError::Parse(format!("{keyword} needs two lines")));
                }
                let i = parse_line_index(&toks, 1, 3)?;
                let j = parse_line_index(&toks, 2, 3)?;
                if keyword == "zz" {
                    gates.push(IqpGate::Zz { i, j });
                } else {
                    gates.push(IqpGate::Cz { i, j });
                }
            }
            "measure" => {
                if measured.is_some() {
                    return Err(CisingError::Parse("duplicate measure statement".into()));
                }
                let mut lines = Vec::new();
                for t in &toks[1..] {
                    lines.push(t.parse::<usize>().map_err(|_| {
                        CisingError::Parse(format!("bad measured line {t:?}"))
                    })?);
                }
                measured = Some(lines);
            }
            "outcome" => {
                if outcome.is_some() {
                    return Err(CisingError::Parse("duplicate outcome statement".into()));
                }
                if toks.len() != 2 {
                    return Err(CisingError::Parse("outcome needs a bit string".into()));
                }
                let mut bits = Vec::new();
                for ch in toks[1].chars() {
                    match ch {
                        '0' => bits.push(false),
                        '1' => bits.push(true),
                        _ => {
                            return Err(CisingError::Parse(format!(
                                "bad outcome bit {ch:?}"
                            )))
                        }
                    }
                }
                outcome = Some(bits);
            }
            _ => return Err(CisingError::Parse(format!("unknown statement {keyword:?}"))),
        }
    }
    let (n, a, b) = header.ok_or_else(|| CisingError::Parse("missing iqp header".into()))?;
    let circuit = IqpCircuit::new(n, a, b, gates)?;
    let measured = measured.unwrap_or_else(|| (0..n).collect());
    for &i in &measured {
        if i >= n {
            return Err(CisingError::Parse(format!("measured line {i} out of range")));
        }
    }
    let outcome = outcome.unwrap_or_else(|| vec![false; measured.len()]);
    let meas = IqpMeasurement::new(measured, outcome)?;
    Ok((circuit, meas))
}

fn parse_line_index(toks: &[&str], pos: usize, want_len: usize) -> Result<usize> {
    if toks.len() != want_len {
        return Err(CisingError::Parse(format!("{} needs {} argument(s)", toks[0], want_len - 1)));
    }
    toks[pos]
        .parse()
        .map_err(|_| CisingError::Parse(format!("bad line index {:?}", toks[pos])))
}

fn parse_pi_angle(tok: &str) -> Result<(i64, u64)> {
    let lower = tok.to_ascii_lowercase();
    let inner = lower
        .strip_prefix("pi(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| CisingError::Parse(format!("bad angle {tok:?}, want pi(<a>,<b>)")))?;
    let mut parts = inner.split(',');
    let a = parts
        .next()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .ok_or_else(|| CisingError::Parse(format!("bad angle numerator in {tok:?}")))?;
    let b = parts
        .next()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .ok_or_else(|| CisingError::Parse(format!("bad angle denominator in {tok:?}")))?;
    if parts.next().is_some() || b == 0 {
        return Err(CisingError::Parse(format!("bad angle {tok:?}")));
    }
    Ok((a, b))
}

/// Diagonal phase of basis state z: (sign, exponent e) with
/// D_z = sign * zeta_{2b}^{a*e}; e counts P and ZZ contributions in units
/// of theta, sign collects the CZ factors.
pub fn diagonal_phase(c: &IqpCircuit, z: u64) -> (bool, i64) {
    let mut e: i64 = 0;
    let mut neg = false;
    for g in &c.gates {
        match *g {
            IqpGate::P { i } => {
                e += if z >> i & 1 == 0 { 1 } else { -1 };
            }
            IqpGate::Zz { i, j } => {
                e += if (z >> i ^ z >> j) & 1 == 0 { 1 } else { -1 };
            }
            IqpGate::Cz { i, j } => {
                if z >> i & 1 == 1 && z >> j & 1 == 1 {
                    neg = !neg;
                }
            }
        }
    }
    (neg, e)
}

/// Unnormalised output amplitude sum for the full outcome mask y:
/// sum over z of D_z * (-1)^{y . z}. The true amplitude is this over 2^n.
fn amplitude_sum(c: &IqpCircuit, y: u64) -> Cyclotomic {
    let order = 2 * c.theta_b;
    // Accumulate integer coefficients per root-of-unity exponent first.
    let mut coeffs: std::collections::BTreeMap<i64, BigInt> = std::collections::BTreeMap::new();
    for z in 0u64..1u64 << c.n {
        let (neg, e) = diagonal_phase(c, z);
        let parity = (z & y).count_ones() % 2 == 1;
        let sign = if neg ^ parity { -1 } else { 1 };
        *coeffs.entry(c.theta_a * e).or_default() += sign;
    }
    let mut amp = Cyclotomic::zero();
    for (e, coeff) in coeffs {
        amp = amp.add(
            &Cyclotomic::root_of_unity(order, e).scale(&BigRational::from_integer(coeff)),
        );
    }
    amp
}

fn pow2_rational(exp: i64) -> BigRational {
    let two = BigInt::from(2u32);
    if exp >= 0 {
        BigRational::from_integer(two.pow(exp as u32))
    } else {
        BigRational::new(BigInt::one(), two.pow((-exp) as u32))
    }
}

/// Exact outcome probability: marginal over unmeasured lines of the squared
/// output amplitudes. The result is a real cyclotomic number.
pub fn statevector_prob(c: &IqpCircuit, meas: &IqpMeasurement) -> Result<ComplexValue> {
    if c.n > SIMULATION_CAP {
        return Err(CisingError::CapExceeded(format!(
            "{} lines exceed the dense simulation cap {SIMULATION_CAP}",
            c.n
        )));
    }
    for &i in &meas.measured {
        if i >= c.n {
            return Err(CisingError::Parse(format!("measured line {i} out of range")));
        }
    }
    let mut base_y = 0u64;
    for (&i, &bit) in meas.measured.iter().zip(&meas.outcome) {
        if bit {
            base_y |= 1 << i;
        }
    }
    let free: Vec<usize> = (0..c.n).filter(|i| !meas.measured.contains(i)).collect();
    let mut total = Cyclotomic::zero();
    for fill in 0u64..1u64 << free.len() {
        let mut y = base_y;
        for (k, &i) in free.iter().enumerate() {
            if fill >> k & 1 == 1 {
                y |= 1 << i;
            }
        }
        let amp = amplitude_sum(c, y);
        total = total.add(&amp.abs_sq());
    }
    Ok(ComplexValue::Exact(total).scale(&pow2_rational(-2 * c.n as i64)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingKind {
    Full,
    Partial,
}

/// A circuit encoded as a non-uniform spin system. The outcome probability
/// is 2^{scale_exponent} * |Z|^2 (full) or 2^{scale_exponent} * Z (partial;
/// Z is real and non-negative there).
#[derive(Debug, Clone)]
pub struct IsingEncoding {
    pub inst: IsingInstance,
    pub n_qubits: usize,
    pub s_measured: usize,
    pub scale_exponent: i64,
    pub kind: EncodingKind,
}

fn phase(b: u64, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(2 * b, k)
}

/// Encode a fully measured circuit: one vertex per line, one edge per ZZ
/// gate with interaction e^{2i*theta}, vertex weight
/// e^{-2i*p_i*theta} * (-1)^{y_i} (p_i = P-gate count on line i).
pub fn encode_full(c: &IqpCircuit, outcome: &[bool]) -> Result<IsingEncoding> {
    if c.has_cz() {
        return Err(CisingError::Domain(
            "encoding requires P/ZZ gates only; expand CZ gates first".into(),
        ));
    }
    if outcome.len() != c.n {
        return Err(CisingError::Parse("outcome length must equal line count".into()));
    }
    let mut edges = Vec::new();
    for g in &c.gates {
        if let IqpGate::Zz { i, j } = *g {
            edges.push((i, j));
        }
    }
    let interaction = ComplexValue::Exact(phase(c.theta_b, 2 * c.theta_a));
    let phi = vec![interaction; edges.len()];
    let p = c.p_counts();
    let mut tau = Vec::with_capacity(c.n);
    for i in 0..c.n {
        let mut t = phase(c.theta_b, -2 * c.theta_a * p[i] as i64);
        if outcome[i] {
            t = t.neg();
        }
        tau.push(ComplexValue::Exact(t));
    }
    let graph = Multigraph::new(c.n, edges)?;
    Ok(IsingEncoding {
        inst: IsingInstance { graph, phi, tau },
        n_qubits: c.n,
        s_measured: c.n,
        scale_exponent: -2 * c.n as i64,
        kind: EncodingKind::Full,
    })
}

/// Encode a partially measured circuit: the full encoding plus a conjugated
/// copy, with each unmeasured line's two vertices identified (weight 1) and
/// edges lying entirely inside the identified set removed. The partition
/// sum of the result is real and non-negative, and the outcome probability
/// is 2^{-2n+u} times it (u = number of unmeasured lines).
pub fn encode_partial(c: &IqpCircuit, meas: &IqpMeasurement) -> Result<IsingEncoding> {
    if c.has_cz() {
        return Err(CisingError::Domain(
            "encoding requires P/ZZ gates only; expand CZ gates first".into(),
        ));
    }
    if meas.measured.is_empty() {
        return Err(CisingError::Domain("measured set must be nonempty".into()));
    }
    for &i in &meas.measured {
        if i >= c.n {
            return Err(CisingError::Parse(format!("measured line {i} out of range")));
        }
    }
    let s = meas.measured.len();
    let u = c.n - s;
    // Vertex layout: for measured line i, a primary vertex and a conjugate
    // partner; for unmeasured lines a single identified vertex.
    let mut primary = vec![0usize; c.n];
    let mut partner = vec![0usize; c.n];
    let mut next = 0usize;
    let mut is_measured = vec![false; c.n];
    for &i in &meas.measured {
        is_measured[i] = true;
    }
    for i in 0..c.n {
        if is_measured[i] {
            primary[i] = next;
            partner[i] = next + 1;
            next += 2;
        } else {
            primary[i] = next;
            partner[i] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, 2 * c.n - u);

    let fwd = ComplexValue::Exact(phase(c.theta_b, 2 * c.theta_a));
    let rev = ComplexValue::Exact(phase(c.theta_b, -2 * c.theta_a));
    let mut edges = Vec::new();
    let mut phi = Vec::new();
    for g in &c.gates {
        if let IqpGate::Zz { i, j } = *g {
            if !is_measured[i] && !is_measured[j] {
                // Both copies cancel exactly on identified vertices.
                continue;
            }
            edges.push((primary[i], primary[j]));
            phi.push(fwd.clone());
            edges.push((partner[i], partner[j]));
            phi.push(rev.clone());
        }
    }

    let p = c.p_counts();
    let mut tau = vec![ComplexValue::one(); next];
    for (&i, &bit) in meas.measured.iter().zip(&meas.outcome) {
        let mut t = phase(c.theta_b, -2 * c.theta_a * p[i] as i64);
        if bit {
            t = t.neg();
        }
        tau[primary[i]] = ComplexValue::Exact(t.clone());
        tau[partner[i]] = ComplexValue::Exact(t.conj());
    }

    let graph = Multigraph::new(next, edges)?;
    Ok(IsingEncoding {
        inst: IsingInstance { graph, phi, tau },
        n_qubits: c.n,
        s_measured: s,
        scale_exponent: -2 * c.n as i64 + u as i64,
        kind: EncodingKind::Partial,
    })
}

/// Outcome probability implied by an encoding, via exact evaluation of its
/// partition sum.
pub fn encoding_probability(enc: &IsingEncoding, cfg: &EvalConfig) -> Result<ComplexValue> {
    let z = crate::partition::z_ising_with(&enc.inst, cfg)?;
    let scaled = match enc.kind {
        EncodingKind::Full => z.mul(&z.conj()),
        EncodingKind::Partial => z,
    };
    Ok(scaled.scale(&pow2_rational(enc.scale_exponent)))
}

/// Replace every CZ gate by 2 ZZ gates and 14 P gates per involved line,
/// valid (up to a dropped global phase) exactly at theta = pi/8.
pub fn cz_expand(c: &IqpCircuit) -> Result<IqpCircuit> {
    if !c.has_cz() {
        return Ok(c.clone());
    }
    // theta = pi/8 modulo full turns.
    let turns_ok = {
        let t = BigRational::new(BigInt::from(c.theta_a), BigInt::from(c.theta_b));
        let two = BigRational::from_integer(BigInt::from(2u32));
        let r = &t - &two * (&t / &two).floor();
        r == BigRational::new(BigInt::one(), BigInt::from(8u32))
    };
    if !turns_ok {
        return Err(CisingError::Domain(
            "CZ decomposition is only available at theta = pi/8".into(),
        ));
    }
    let mut gates = Vec::new();
    for g in &c.gates {
        match *g {
            IqpGate::Cz { i, j } => {
                gates.push(IqpGate::Zz { i, j });
                gates.push(IqpGate::Zz { i, j });
                for _ in 0..14 {
                    gates.push(IqpGate::P { i });
                }
                for _ in 0..14 {
                    gates.push(IqpGate::P { i: j });
                }
            }
            other => gates.push(other),
        }
    }
    IqpCircuit::new(c.n, c.theta_a, c.theta_b, gates)
}

/// Parseval identity: for C indexed by {0,1}^n,
/// sum_{z'} |sum_z C_z (-1)^{z.z'}|^2 = 2^n sum_z |C_z|^2.
/// Returns (lhs, rhs), computed independently.
pub fn parseval_check(coeffs: &[ComplexValue]) -> Result<(ComplexValue, ComplexValue)> {
    let len = coeffs.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(CisingError::Domain(
            "coefficient vector length must be a power of two".into(),
        ));
    }
    let n = len.trailing_zeros();
    let mut lhs = ComplexValue::zero();
    for zp in 0..len {
        let mut inner = ComplexValue::zero();
        for (z, c) in coeffs.iter().enumerate() {
            let term = if (z & zp).count_ones() % 2 == 1 { c.neg() } else { c.clone() };
            inner = inner.add(&term);
        }
        lhs = lhs.add(&inner.mul(&inner.conj()));
    }
    let mut rhs = ComplexValue::zero();
    for c in coeffs {
        rhs = rhs.add(&c.mul(&c.conj()));
    }
    rhs = rhs.scale(&pow2_rational(n as i64));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::interval::rat;
    use crate::partition::z_ising_with;
    use num_traits::{Signed, Zero};
    use rand::Rng;
    use rand::SeedableRng;

    fn cfg() -> EvalConfig {
        EvalConfig { cap_n: 16, cap_m: 40 }
    }

    fn assert_cv_eq(a: &ComplexValue, b: &ComplexValue) {
        assert!(a.sub(b).certified_zero().unwrap(), "values differ: {a} vs {b}");
    }

    fn cos_sq(a: i64, b: u64) -> ComplexValue {
        // cos^2(theta) = (2 + e^{2i theta} + e^{-2i theta}) / 4
        let z = phase(b, 2 * a).add(&phase(b, -2 * a)).add(&Cyclotomic::from_int(2));
        ComplexValue::Exact(z).scale(&rat(1, 4))
    }

    #[test]
    fn parse_examples() {
        let (c, m) = parse_circuit("iqp 1 theta pi(1,8) / p 0").unwrap();
        assert_eq!(c.n, 1);
        assert_eq!(c.gates, vec![IqpGate::P { i: 0 }]);
        assert_eq!(m.measured, vec![0]);
        assert_eq!(m.outcome, vec![false]);

        let (c, m) =
            parse_circuit("iqp 2 theta pi(1,8) / zz 0 1 / measure 0 / outcome 0").unwrap();
        assert_eq!(c.gates, vec![IqpGate::Zz { i: 0, j: 1 }]);
        assert_eq!(m.measured, vec![0]);

        assert!(parse_circuit("iqp 2 theta pi(1,8) / zz 0 0").is_err());
        assert!(parse_circuit("p 0").is_err()); // missing header
        assert!(parse_circuit("iqp 2 theta pi(1,8) / measure 0 / outcome 00").is_err());
        assert!(parse_circuit("iqp 1 theta pi(1,0)").is_err());
    }

    #[test]
    fn parse_accepts_newlines_and_comments() {
        let text = "# two-line circuit\niqp 2 theta pi(1,6)\nzz 0 1 # coupler\np 1\n";
        let (c, m) = parse_circuit(text).unwrap();
        assert_eq!(c.gates.len(), 2);
        assert_eq!(m.measured, vec![0, 1]);
    }

    #[test]
    fn empty_circuit_has_unit_probability() {
        let c = IqpCircuit::new(3, 1, 8, vec![]).unwrap();
        let p = statevector_prob(&c, &IqpMeasurement::all_lines(3)).unwrap();
        assert_cv_eq(&p, &ComplexValue::one());
    }

    #[test]
    fn single_p_gate_probability() {
        // <0| H P H |0> = cos(theta); probability cos^2(theta).
        let c = IqpCircuit::new(1, 1, 8, vec![IqpGate::P { i: 0 }]).unwrap();
        let p = statevector_prob(&c, &IqpMeasurement::all_lines(1)).unwrap();
        assert_cv_eq(&p, &cos_sq(1, 8));
        // cos^2(pi/8) = (2 + sqrt 2)/4: check the numeric enclosure.
        let (re, _) = p.re_im(96);
        assert!(re.lo < rat(8536, 10000) && re.hi > rat(8535, 10000));
    }

    #[test]
    fn single_zz_gate_probability() {
        let c = IqpCircuit::new(2, 1, 8, vec![IqpGate::Zz { i: 0, j: 1 }]).unwrap();
        let p = statevector_prob(&c, &IqpMeasurement::all_lines(2)).unwrap();
        assert_cv_eq(&p, &cos_sq(1, 8));

        // theta = pi/6: cos^2 = 3/4 exactly.
        let c = IqpCircuit::new(2, 1, 6, vec![IqpGate::Zz { i: 0, j: 1 }]).unwrap();
        let p = statevector_prob(&c, &IqpMeasurement::all_lines(2)).unwrap();
        assert_cv_eq(&p, &ComplexValue::from_rational(rat(3, 4)));
    }

    #[test]
    fn encode_full_examples() {
        // One line, one P gate, outcome 0.
        let c = IqpCircuit::new(1, 1, 8, vec![IqpGate::P { i: 0 }]).unwrap();
        let enc = encode_full(&c, &[false]).unwrap();
        assert_eq!(enc.inst.graph.n(), 1);
        assert_eq!(enc.inst.graph.m(), 0);
        assert_cv_eq(&enc.inst.tau[0], &ComplexValue::Exact(phase(8, -2)));
        let p = encoding_probability(&enc, &cfg()).unwrap();
        assert_cv_eq(&p, &cos_sq(1, 8));

        // Two lines, one ZZ, outcome 00: single edge, unit fields.
        let c = IqpCircuit::new(2, 1, 8, vec![IqpGate::Zz { i: 0, j: 1 }]).unwrap();
        let enc = encode_full(&c, &[false, false]).unwrap();
        assert_eq!(enc.inst.graph.m(), 1);
        assert_cv_eq(&enc.inst.tau[0], &ComplexValue::one());
        let p = encoding_probability(&enc, &cfg()).unwrap();
        assert_cv_eq(&p, &cos_sq(1, 8));

        // Flipping an outcome bit flips the sign of that vertex weight.
        let enc1 = encode_full(&c, &[true, false]).unwrap();
        assert_cv_eq(&enc1.inst.tau[0], &enc.inst.tau[0].neg());
    }

    #[test]
    fn encode_rejects_cz() {
        let c = IqpCircuit::new(2, 1, 8, vec![IqpGate::Cz { i: 0, j: 1 }]).unwrap();
        assert!(encode_full(&c, &[false, false]).is_err());
        assert!(encode_partial(&c, &IqpMeasurement::all_lines(2)).is_err());
    }

    fn random_circuit(rng: &mut impl Rng, n: usize, max_gates: usize, with_cz: bool) -> IqpCircuit {
        let count = rng.gen_range(1..=max_gates);
        let mut gates = Vec::new();
        for _ in 0..count {
            let kind = rng.gen_range(0..if with_cz { 3 } else { 2 });
            match kind {
                0 => gates.push(IqpGate::P { i: rng.gen_range(0..n) }),
                _ => {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n);
                    while j == i {
                        j = rng.gen_range(0..n);
                    }
                    if kind == 1 {
                        gates.push(IqpGate::Zz { i, j });
                    } else {
                        gates.push(IqpGate::Cz { i, j });
                    }
                }
            }
        }
        IqpCircuit::new(n, 1, 8, gates).unwrap()
    }

    #[test]
    fn full_measurement_identity_random_circuits() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(1..=4usize);
            let c = random_circuit(&mut rng, n, 8, false);
            for y_mask in 0u64..1 << n {
                let y: Vec<bool> = (0..n).map(|i| y_mask >> i & 1 == 1).collect();
                let meas = IqpMeasurement::new((0..n).collect(), y.clone()).unwrap();
                let direct = statevector_prob(&c, &meas).unwrap();
                let enc = encode_full(&c, &y).unwrap();
                let via_z = encoding_probability(&enc, &cfg()).unwrap();
                assert_cv_eq(&direct, &via_z);
            }
        }
    }

    #[test]
    fn partial_measurement_example() {
        // Two lines, one ZZ, measure line 0, outcome 0.
        let c = IqpCircuit::new(2, 1, 8, vec![IqpGate::Zz { i: 0, j: 1 }]).unwrap();
        let meas = IqpMeasurement::new(vec![0], vec![false]).unwrap();
        let enc = encode_partial(&c, &meas).unwrap();
        assert_eq!(enc.inst.graph.n(), 3);
        assert_eq!(enc.inst.graph.m(), 2);
        assert_eq!(enc.scale_exponent, -3);
        let z = z_ising_with(&enc.inst, &cfg()).unwrap();
        // Z = 8 cos^2(theta)
        assert_cv_eq(&z, &cos_sq(1, 8).scale(&rat(8, 1)));
        let p = encoding_probability(&enc, &cfg()).unwrap();
        assert_cv_eq(&p, &statevector_prob(&c, &meas).unwrap());
        assert_cv_eq(&p, &cos_sq(1, 8));
    }

    #[test]
    fn partial_all_measured_matches_full() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..6 {
            let n = rng.gen_range(1..=3usize);
            let c = random_circuit(&mut rng, n, 6, false);
            let y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let meas = IqpMeasurement::new((0..n).collect(), y.clone()).unwrap();
            let full = encoding_probability(&encode_full(&c, &y).unwrap(), &cfg()).unwrap();
            let partial =
                encoding_probability(&encode_partial(&c, &meas).unwrap(), &cfg()).unwrap();
            assert_cv_eq(&full, &partial);
        }
    }

    #[test]
    fn partial_empty_circuit_single_line() {
        let c = IqpCircuit::new(2, 1, 8, vec![]).unwrap();
        let meas = IqpMeasurement::new(vec![1], vec![false]).unwrap();
        let p = encoding_probability(&encode_partial(&c, &meas).unwrap(), &cfg()).unwrap();
        // Uniform output: a single measured line gives 1/2... for the empty
        // circuit H H = I, so the outcome is deterministic: 0 with
        // probability 1.
        assert_cv_eq(&p, &ComplexValue::one());
        assert_cv_eq(&p, &statevector_prob(&c, &meas).unwrap());
    }

    #[test]
    fn partial_identity_random_subsets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..8 {
            let n = rng.gen_range(2..=4usize);
            let c = random_circuit(&mut rng, n, 8, false);
            // Random nonempty measured subset.
            let mut measured: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if measured.is_empty() {
                measured.push(rng.gen_range(0..n));
            }
            let outcome: Vec<bool> = measured.iter().map(|_| rng.gen_bool(0.5)).collect();
            let meas = IqpMeasurement::new(measured, outcome).unwrap();
            let enc = encode_partial(&c, &meas).unwrap();
            let z = z_ising_with(&enc.inst, &cfg()).unwrap();
            // The partition sum is its own conjugate and non-negative.
            assert!(z.sub(&z.conj()).certified_zero().unwrap());
            let (re, _) = z.re_im(96);
            assert!(!re.hi.is_negative());
            let p = encoding_probability(&enc, &cfg()).unwrap();
            assert_cv_eq(&p, &statevector_prob(&c, &meas).unwrap());
        }
    }

    #[test]
    fn marginals_sum_to_one() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let c = random_circuit(&mut rng, 3, 8, true);
        let measured = vec![0usize, 2];
        let mut total = ComplexValue::zero();
        for bits in 0u64..4 {
            let outcome = vec![bits & 1 == 1, bits >> 1 & 1 == 1];
            let meas = IqpMeasurement::new(measured.clone(), outcome).unwrap();
            total = total.add(&statevector_prob(&c, &meas).unwrap());
        }
        assert_cv_eq(&total, &ComplexValue::one());
    }

    #[test]
    fn gate_order_is_irrelevant() {
        let gates = vec![
            IqpGate::P { i: 0 },
            IqpGate::Zz { i: 0, j: 1 },
            IqpGate::Cz { i: 1, j: 2 },
            IqpGate::P { i: 2 },
        ];
        let c1 = IqpCircuit::new(3, 1, 8, gates.clone()).unwrap();
        let mut rev = gates;
        rev.reverse();
        let c2 = IqpCircuit::new(3, 1, 8, rev).unwrap();
        for y_mask in 0u64..8 {
            let y: Vec<bool> = (0..3).map(|i| y_mask >> i & 1 == 1).collect();
            let meas = IqpMeasurement::new(vec![0, 1, 2], y).unwrap();
            assert_cv_eq(
                &statevector_prob(&c1, &meas).unwrap(),
                &statevector_prob(&c2, &meas).unwrap(),
            );
        }
    }

    #[test]
    fn cz_matrix_identity() {
        // diag(1,1,1,-1) * e^{-i pi/4} equals the expanded gate product,
        // entry by entry, in the 16th cyclotomic field.
        let global = phase(8, -2); // e^{-i pi/4} = zeta_16^{-2}
        for zi in 0..2i64 {
            for zj in 0..2i64 {
                let cz_sign = if zi == 1 && zj == 1 { -1 } else { 1 };
                let lhs = global.scale(&rat(cz_sign, 1));
                let zz_e = if zi == zj { 1 } else { -1 };
                let p_i = if zi == 0 { 1 } else { -1 };
                let p_j = if zj == 0 { 1 } else { -1 };
                let rhs = phase(8, 2 * zz_e).mul(&phase(8, 14 * p_i)).mul(&phase(8, 14 * p_j));
                assert!(lhs.eq(&rhs), "entry ({zi},{zj}) mismatched");
            }
        }
    }

    #[test]
    fn cz_expand_preserves_probabilities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let c = random_circuit(&mut rng, 3, 6, true);
            let expanded = cz_expand(&c).unwrap();
            assert!(!expanded.has_cz());
            for y_mask in 0u64..8 {
                let y: Vec<bool> = (0..3).map(|i| y_mask >> i & 1 == 1).collect();
                let meas = IqpMeasurement::new(vec![0, 1, 2], y).unwrap();
                assert_cv_eq(
                    &statevector_prob(&c, &meas).unwrap(),
                    &statevector_prob(&expanded, &meas).unwrap(),
                );
            }
        }
    }

    #[test]
    fn cz_expand_requires_pi_over_8() {
        let c = IqpCircuit::new(2, 1, 6, vec![IqpGate::Cz { i: 0, j: 1 }]).unwrap();
        assert!(cz_expand(&c).is_err());
        // No CZ gates: any angle passes through untouched.
        let c = IqpCircuit::new(2, 1, 6, vec![IqpGate::Zz { i: 0, j: 1 }]).unwrap();
        assert_eq!(cz_expand(&c).unwrap().gates.len(), 1);
    }

    #[test]
    fn parseval_spot_values() {
        let one = ComplexValue::one();
        let zero = ComplexValue::zero();
        let (l, r) = parseval_check(&[one.clone(), zero]).unwrap();
        assert_cv_eq(&l, &ComplexValue::from_int(2));
        assert_cv_eq(&r, &ComplexValue::from_int(2));

        let (l, r) = parseval_check(&[one.clone(), one]).unwrap();
        assert_cv_eq(&l, &ComplexValue::from_int(4));
        assert_cv_eq(&r, &ComplexValue::from_int(4));

        assert!(parseval_check(&[]).is_err());
        assert!(parseval_check(&vec![ComplexValue::one(); 3]).is_err());
    }

    #[test]
    fn parseval_random_vectors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for n in 1..=4u32 {
            let coeffs: Vec<ComplexValue> = (0..1usize << n)
                .map(|_| {
                    ComplexValue::Exact(
                        Cyclotomic::root_of_unity(16, rng.gen_range(0..16))
                            .scale(&rat(rng.gen_range(-3..=3), 1)),
                    )
                })
                .collect();
            let (l, r) = parseval_check(&coeffs).unwrap();
            assert_cv_eq(&l, &r);
        }
    }

    #[test]
    fn simulation_cap_enforced() {
        let c = IqpCircuit::new(13, 1, 8, vec![]).unwrap();
        assert!(matches!(
            statevector_prob(&c, &IqpMeasurement::all_lines(13)),
            Err(CisingError::CapExceeded(_))
        ));
    }

    #[test]
    fn prob_is_rational_when_amplitudes_are() {
        // theta = pi/2: P = diag(i, -i); all probabilities rational.
        let c = IqpCircuit::new(2, 1, 2, vec![IqpGate::P { i: 0 }, IqpGate::Zz { i: 0, j: 1 }])
            .unwrap();
        let mut total = BigRational::zero();
        for y_mask in 0u64..4 {
            let y: Vec<bool> = (0..2).map(|i| y_mask >> i & 1 == 1).collect();
            let meas = IqpMeasurement::new(vec![0, 1], y).unwrap();
            let p = statevector_prob(&c, &meas).unwrap();
            total += p.to_rational().unwrap();
        }
        assert!(total.is_one());
    }
}

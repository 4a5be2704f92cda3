//! Complexity classification of parameter points: the ten-item edge-weight
//! classification, the field dichotomy for roots of unity, and the
//! sign-of-Tutte criterion, each with re-verified preconditions and (where a
//! constructive reduction exists) an attached gadget-chain witness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CisingError, Result};
use crate::gadgets::{chain_to_negative_unit, polar_form, GadgetChain};
use crate::numerics::interval::{cos_pi, rat};
use crate::numerics::weightspec::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Exact evaluation in polynomial time.
    ExactFp,
    /// Norm approximation in randomized polynomial time; argument easy.
    NormRpArgFp,
    /// Norm approximation NP-hard; argument easy.
    NormNpHardArgFp,
    /// Equivalent to approximately counting perfect matchings.
    PmEquivalent,
    SharpPHard,
    NpHard,
    NotCovered,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ExactFp => "EXACT_FP",
            Verdict::NormRpArgFp => "NORM_RP_ARG_FP",
            Verdict::NormNpHardArgFp => "NORM_NPHARD_ARG_FP",
            Verdict::PmEquivalent => "PM_EQUIVALENT",
            Verdict::SharpPHard => "SHARP_P_HARD",
            Verdict::NpHard => "NP_HARD",
            Verdict::NotCovered => "NOT_COVERED",
        }
    }
}

/// A classification outcome: which theorem and clause fired, plus an
/// optional constructive witness chain for the hardness reductions that
/// have one.
#[derive(Debug, Clone)]
pub struct PointClassification {
    pub verdict: Verdict,
    /// Which classification theorem applies (1: edge weight, 4: Tutte sign,
    /// 5: field dichotomy).
    pub theorem: u8,
    /// Clause number within the theorem.
    pub item: u8,
    pub witness: Option<GadgetChain>,
    pub notes: Vec<String>,
}

impl PointClassification {
    fn new(verdict: Verdict, theorem: u8, item: u8) -> Self {
        PointClassification { verdict, theorem, item, witness: None, notes: Vec::new() }
    }

    fn with_witness(mut self, chain: GadgetChain) -> Self {
        self.witness = Some(chain);
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn is_zero_weight(spec: &WeightSpec) -> bool {
    match spec {
        WeightSpec::Real(v) => v.is_zero(),
        WeightSpec::PolarPi { r, .. } => r.is_zero(),
        WeightSpec::Rect { re, im } => re.is_zero() && im.is_zero(),
        WeightSpec::Rou { .. } => false,
    }
}

/// Classify an edge weight y = r e^{i pi t} (exact polar or real form) by
/// the ten-clause table. Clauses are tested in order; the hardest
/// applicable verdict wins because the #P-hard clauses precede the NP-hard
/// ones. Rectangular inputs are rejected: whether their argument is a
/// rational multiple of pi is not decidable from the components.
pub fn classify_ising(y: &WeightSpec) -> Result<PointClassification> {
    if matches!(y, WeightSpec::Rect { .. }) {
        return Err(CisingError::Domain(
            "classification needs an exact polar or real weight".into(),
        ));
    }
    if is_zero_weight(y) {
        return Ok(PointClassification::new(Verdict::ExactFp, 1, 1));
    }
    let (r, t) = polar_form(y)?;
    let one = BigRational::one();
    let half = rat(1, 2);
    let three_halves = rat(3, 2);
    let on_axis = t.is_zero() || t == half || t == one || t == three_halves;

    // 1: the four unit-circle axis points (y = 0 was handled above).
    if r == one && on_axis {
        return Ok(PointClassification::new(Verdict::ExactFp, 1, 1));
    }
    // 2-5: real y (t = 0 is the positive reals, t = 1 the negative reals).
    if t.is_zero() {
        return Ok(if r > one {
            PointClassification::new(Verdict::NormRpArgFp, 1, 2)
        } else {
            PointClassification::new(Verdict::NormNpHardArgFp, 1, 3)
                .with_note("norm hardness routed through clause 9")
        });
    }
    if t == one {
        return Ok(if r > one {
            PointClassification::new(Verdict::PmEquivalent, 1, 4)
        } else {
            PointClassification::new(Verdict::SharpPHard, 1, 5)
        });
    }
    // 6: unit circle off the axes.
    if r == one {
        let chain = chain_to_negative_unit(y)?;
        return Ok(PointClassification::new(Verdict::SharpPHard, 1, 6).with_witness(chain));
    }
    // 7: purely imaginary, radius not 0 or 1.
    if t == half || t == three_halves {
        let chain = chain_to_negative_unit(y)?;
        return Ok(PointClassification::new(Verdict::SharpPHard, 1, 7).with_witness(chain));
    }
    // 8: angle an odd multiple of pi/(2*qbar). With t = p/q in lowest
    // terms this is exactly "q even" (reducedness forces p odd and
    // gcd(p, q/2) = 1).
    let two = BigInt::from(2u32);
    if t.denom() % &two == BigInt::zero() {
        let chain = chain_to_negative_unit(y)?;
        return Ok(PointClassification::new(Verdict::SharpPHard, 1, 8).with_witness(chain));
    }
    // 9, 10: remaining points inside / outside the unit circle.
    if r < one {
        return Ok(PointClassification::new(Verdict::NpHard, 1, 9));
    }
    if !t.is_zero() && t != one {
        return Ok(PointClassification::new(Verdict::NpHard, 1, 10));
    }
    Ok(PointClassification::new(Verdict::NotCovered, 1, 0))
}

/// Angle of a root of unity as a fraction of pi in [0, 2), or an error if
/// the weight is not a root of unity.
fn rou_turns_pi(spec: &WeightSpec) -> Result<BigRational> {
    let (r, t) = polar_form(spec)?;
    if !r.is_one() {
        return Err(CisingError::Domain(
            "the field dichotomy applies to roots of unity only".into(),
        ));
    }
    Ok(t)
}

/// Dichotomy for a root-of-unity edge weight y and vertex weight z:
/// exactly solvable iff y = +-1, or y = +-i with z a fourth root of unity;
/// #P-hard otherwise.
pub fn classify_ising_field(y: &WeightSpec, z: &WeightSpec) -> Result<PointClassification> {
    let ty = rou_turns_pi(y)?;
    let tz = rou_turns_pi(z)?;
    let one = BigRational::one();
    let half = rat(1, 2);
    let y_real = ty.is_zero() || ty == one;
    let y_imaginary = ty == half || ty == rat(3, 2);
    let z_fourth_root = (&tz / &half).is_integer();
    if y_real || (y_imaginary && z_fourth_root) {
        Ok(PointClassification::new(Verdict::ExactFp, 5, 1))
    } else {
        Ok(PointClassification::new(Verdict::SharpPHard, 5, 2))
    }
}

/// The point (x, y) = (e^{-a pi i / b}, e^{a pi i / b}) for the
/// sign-of-the-real-part problem on the Tutte plane.
#[derive(Debug, Clone, Copy)]
pub struct TutteSignPoint {
    pub a: u64,
    pub b: u64,
}

impl TutteSignPoint {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 || 2 * a >= 4 * b || a >= 2 * b {
            return Err(CisingError::Domain(
                "need positive a, b with 0 < a/b < 2".into(),
            ));
        }
        Ok(TutteSignPoint { a, b })
    }
}

const COS_PREC_START: u32 = 128;
const COS_PREC_MAX: u32 = 4096;

/// Decide the sign-of-Tutte classification: the four special points are
/// exactly solvable; odd a with cos(a pi / b) < 11/27 is #P-hard (decided
/// by a certified cosine enclosure, refining precision until the comparison
/// is strict); everything else is out of the theorem's reach.
pub fn classify_tutte_sign(pt: &TutteSignPoint) -> Result<PointClassification> {
    let (a, b) = (pt.a, pt.b);
    if 2 * a == b || a == b || 2 * a == 3 * b {
        return Ok(PointClassification::new(Verdict::ExactFp, 4, 1)
            .with_note("special point on the unit Tutte circle"));
    }
    if a % 2 == 0 {
        return Ok(PointClassification::new(Verdict::NotCovered, 4, 3)
            .with_note("criterion requires odd a"));
    }
    let threshold = rat(11, 27);
    let turns = rat(a as i64, b as i64);
    let mut prec = COS_PREC_START;
    loop {
        let c = cos_pi(&turns, prec);
        if c.hi < threshold {
            return Ok(PointClassification::new(Verdict::SharpPHard, 4, 2));
        }
        if c.lo > threshold {
            return Ok(PointClassification::new(Verdict::NotCovered, 4, 3)
                .with_note("cos(a pi / b) is certifiably above 11/27"));
        }
        if prec >= COS_PREC_MAX {
            return Err(CisingError::Indeterminate(format!(
                "cannot separate cos({a} pi / {b}) from 11/27 at {COS_PREC_MAX} bits"
            )));
        }
        prec *= 2;
    }
}

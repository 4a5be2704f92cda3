//! Textual weight grammar shared by the CLI and the file formats:
//! `rou(k,N)`, `polarpi(r,a,b)` (meaning r * e^{i*pi*a/b}), `real(p/q)`,
//! `rect(re,im)` with decimal literals. Keywords are case-insensitive and
//! whitespace is ignored everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{CisingError, Result};
use crate::numerics::cyclotomic::Cyclotomic;
use crate::numerics::value::{ApproxComplex, ComplexValue};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    /// e^{2*pi*i*k/N}
    Rou { k: i64, n: u64 },
    /// r * e^{i*pi*a/b}
    PolarPi { r: BigRational, a: i64, b: u64 },
    Real(BigRational),
    /// Decimal rectangular form; converts to an approximate value.
    Rect { re: BigRational, im: BigRational },
}

impl WeightSpec {
    pub fn parse(input: &str) -> Result<WeightSpec> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.to_ascii_lowercase();
        let open = s
            .find('(')
            .ok_or_else(|| CisingError::Parse(format!("weight `{input}`: missing '('")))?;
        if !s.ends_with(')') {
            return Err(CisingError::Parse(format!("weight `{input}`: missing ')'")));
        }
        let name = &s[..open];
        let args: Vec<&str> = s[open + 1..s.len() - 1].split(',').collect();
        match (name, args.as_slice()) {
            ("rou", [k, n]) => {
                let n = parse_u64(n)?;
                if n == 0 {
                    return Err(CisingError::Parse("rou: N must be positive".into()));
                }
                Ok(WeightSpec::Rou { k: parse_i64(k)?, n })
            }
            ("polarpi", [r, a, b]) => {
                let b = parse_u64(b)?;
                if b == 0 {
                    return Err(CisingError::Parse("polarpi: b must be positive".into()));
                }
                Ok(WeightSpec::PolarPi { r: parse_rational(r)?, a: parse_i64(a)?, b })
            }
            ("real", [q]) => Ok(WeightSpec::Real(parse_rational(q)?)),
            // decimal literals are the documented form; plain rationals are
            // accepted too so Display output stays parseable
            ("rect", [re, im]) => Ok(WeightSpec::Rect {
                re: parse_rational(re)?,
                im: parse_rational(im)?,
            }),
            _ => Err(CisingError::Parse(format!(
                "weight `{input}`: expected rou(k,N), polarpi(r,a,b), real(p/q) or rect(re,im)"
            ))),
        }
    }

    /// Exact whenever the variant permits (everything except RECT).
    pub fn to_value(&self) -> ComplexValue {
        match self {
            WeightSpec::Rou { k, n } => {
                ComplexValue::Exact(Cyclotomic::root_of_unity(*n, *k))
            }
            WeightSpec::PolarPi { r, a, b } => {
                // r * e^{i*pi*a/b} = r * zeta_{2b}^a
                let phase = Cyclotomic::root_of_unity(2 * b, *a);
                ComplexValue::Exact(phase.scale(r))
            }
            WeightSpec::Real(q) => ComplexValue::Exact(Cyclotomic::from_rational(q.clone())),
            WeightSpec::Rect { re, im } => ComplexValue::Approx(ApproxComplex::new(
                re.clone(),
                im.clone(),
                BigRational::zero(),
            )),
        }
    }
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightSpec::Rou { k, n } => write!(f, "rou({k},{n})"),
            WeightSpec::PolarPi { r, a, b } => write!(f, "polarpi({r},{a},{b})"),
            WeightSpec::Real(q) => write!(f, "real({q})"),
            WeightSpec::Rect { re, im } => write!(f, "rect({re},{im})"),
        }
    }
}

fn parse_i64(s: &str) -> Result<i64> {
    s.parse::<i64>()
        .map_err(|_| CisingError::Parse(format!("bad integer `{s}`")))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| CisingError::Parse(format!("bad positive integer `{s}`")))
}

/// `p`, `p/q`, or a decimal literal; all exact.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .parse()
            .map_err(|_| CisingError::Parse(format!("bad rational `{s}`")))?;
        let den: BigInt = q
            .parse()
            .map_err(|_| CisingError::Parse(format!("bad rational `{s}`")))?;
        if den.is_zero() {
            return Err(CisingError::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(BigRational::new(num, den))
    } else {
        parse_decimal(s)
    }
}

/// Decimal literal (optionally signed, optional fractional part) as an
/// exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(CisingError::Parse(format!("bad number `{s}`")));
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(CisingError::Parse(format!("bad number `{s}`")));
    }
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().unwrap()
    };
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let v = BigRational::new(num, den);
    Ok(if neg { -v } else { v })
}

//! Exact selection probabilities.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_u(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `num/den` in lowest terms, or just `num` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num/den` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy decimal rendering with 12 fractional digits, rounded half away from zero.
pub fn fmt_decimal(r: &Rational) -> String {
    let scale = BigInt::from(10u64.pow(12));
    let scaled = (r * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let int = &abs / &scale;
    let frac = &abs % &scale;
    format!("{}{}.{:0>12}", if neg { "-" } else { "" }, int, frac.to_string())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serializes a rational as the string `"num/den"`.
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

pub(crate) fn serialize_rationals<S: Serializer>(rs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(fmt_rational))
}

/// Per-vertex selection probabilities, indexed 0-based by vertex.
///
/// The total is exactly 1 for a mechanism and at most 1 for an inexact one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SelectionDistribution {
    #[serde(serialize_with = "serialize_rationals")]
    probs: Vec<Rational>,
}

impl SelectionDistribution {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        let d = Self { probs };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_counts(counts: &[u64], denom: u64) -> Self {
        Self {
            probs: counts.iter().map(|&c| ratio_u(c, denom)).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            probs: vec![Rational::zero(); n],
        }
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![ratio_u(1, n as u64); n],
        }
    }

    fn validate(&self) -> Result<()> {
        let zero = Rational::zero();
        let one = Rational::one();
        if let Some((i, p)) = self.probs.iter().enumerate().find(|(_, p)| **p < zero || **p > one) {
            return Err(Error::Invariant(format!(
                "probability of vertex {} is {}",
                i + 1,
                fmt_rational(p)
            )));
        }
        if self.total() > one {
            return Err(Error::Invariant(format!(
                "probabilities sum to {} > 1",
                fmt_rational(&self.total())
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    /// Probability of the 1-based vertex `v`.
    pub fn prob(&self, v: usize) -> &Rational {
        &self.probs[v - 1]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn total(&self) -> Rational {
        self.probs.iter().fold(Rational::zero(), |acc, p| acc + p)
    }

    /// `1 - total`: the probability of selecting nobody.
    pub fn deficit(&self) -> Rational {
        Rational::one() - self.total()
    }

    pub fn is_exact(&self) -> bool {
        self.total().is_one()
    }

    /// `Σ_v w_v · p_v`.
    pub fn expectation(&self, weights: &[usize]) -> Rational {
        self.probs
            .iter()
            .zip(weights)
            .fold(Rational::zero(), |acc, (p, &w)| acc + p * from_int(w as i64))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            probs: self.probs.iter().map(|p| p * c).collect(),
        }
    }
}

impl Add for &SelectionDistribution {
    type Output = SelectionDistribution;

    fn add(self, rhs: Self) -> SelectionDistribution {
        assert_eq!(self.n(), rhs.n());
        SelectionDistribution {
            probs: self.probs.iter().zip(&rhs.probs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul<&Rational> for &SelectionDistribution {
    type Output = SelectionDistribution;

    fn mul(self, c: &Rational) -> SelectionDistribution {
        self.scale(c)
    }
}

impl fmt::Display for SelectionDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&fmt_rational(p))?;
        }
        f.write_str("]")
    }
}

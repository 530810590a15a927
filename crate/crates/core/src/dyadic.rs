//! Exact dyadic rationals `p / 2^j` and the simplicity rule.
//!
//! Every value in this crate is a dyadic rational, so there is no floating
//! point on any computational path. Values are kept normalized (odd numerator
//! or zero exponent) which makes the derived `Eq`/`Hash` structural equality
//! coincide with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest exponent a normalized value may carry.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: i64,
    exponent: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic {
        numerator: 0,
        exponent: 0,
    };
    pub const ONE: Dyadic = Dyadic {
        numerator: 1,
        exponent: 0,
    };

    /// Builds `numerator / 2^exponent` in reduced form.
    ///
    /// Panics if the reduced exponent is above [`MAX_EXPONENT`]; use
    /// [`Dyadic::checked_new`] for untrusted input.
    pub fn new(numerator: i64, exponent: u32) -> Dyadic {
        Self::checked_new(numerator, exponent).expect("dyadic exponent out of range")
    }

    pub fn checked_new(numerator: i64, exponent: u32) -> Result<Dyadic> {
        Self::from_wide(numerator as i128, exponent)
    }

    pub const fn integer(n: i64) -> Dyadic {
        Dyadic {
            numerator: n,
            exponent: 0,
        }
    }

    pub fn numerator(self) -> i64 {
        self.numerator
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn is_integer(self) -> bool {
        self.exponent == 0
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    pub fn signum(self) -> i64 {
        self.numerator.signum()
    }

    /// Lossy conversion, only for display purposes.
    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / 2f64.powi(self.exponent as i32)
    }

    /// Normalizes a wide numerator, failing if the result does not fit.
    fn from_wide(mut numerator: i128, mut exponent: u32) -> Result<Dyadic> {
        if numerator == 0 {
            return Ok(Dyadic::ZERO);
        }
        let twos = numerator.trailing_zeros().min(exponent);
        numerator >>= twos;
        exponent -= twos;
        if exponent > MAX_EXPONENT {
            return Err(Error::Overflow("dyadic exponent"));
        }
        let numerator =
            i64::try_from(numerator).map_err(|_| Error::Overflow("dyadic numerator"))?;
        Ok(Dyadic {
            numerator,
            exponent,
        })
    }

    /// Numerator rescaled to denominator `2^exponent` (which must be >= ours).
    fn scaled(self, exponent: u32) -> i128 {
        debug_assert!(exponent >= self.exponent);
        (self.numerator as i128) << (exponent - self.exponent)
    }

    pub fn checked_add(self, other: Dyadic) -> Result<Dyadic> {
        let exponent = self.exponent.max(other.exponent);
        let sum = self
            .scaled(exponent)
            .checked_add(other.scaled(exponent))
            .ok_or(Error::Overflow("dyadic addition"))?;
        Self::from_wide(sum, exponent)
    }

    pub fn checked_neg(self) -> Result<Dyadic> {
        let numerator = self
            .numerator
            .checked_neg()
            .ok_or(Error::Overflow("dyadic negation"))?;
        Ok(Dyadic { numerator, ..self })
    }

    pub fn checked_sub(self, other: Dyadic) -> Result<Dyadic> {
        self.checked_add(other.checked_neg()?)
    }

    /// Sums an iterator of values, reporting overflow instead of wrapping.
    pub fn checked_sum<I: IntoIterator<Item = Dyadic>>(values: I) -> Result<Dyadic> {
        values
            .into_iter()
            .try_fold(Dyadic::ZERO, |acc, v| acc.checked_add(v))
    }

    /// Largest integer `<= self`.
    fn floor_wide(self) -> i128 {
        (self.numerator as i128) >> self.exponent
    }

    /// Smallest integer `>= self`.
    fn ceil_wide(self) -> i128 {
        -((-(self.numerator as i128)) >> self.exponent)
    }

    /// `floor(self * 2^j)`.
    fn floor_at(self, j: u32) -> i128 {
        if j >= self.exponent {
            (self.numerator as i128) << (j - self.exponent)
        } else {
            (self.numerator as i128) >> (self.exponent - j)
        }
    }
}

/// The simplest number strictly between two optional bounds.
///
/// An absent bound is unbounded on that side. If an integer fits, the one of
/// least absolute value wins; otherwise the unique dyadic of least exponent.
pub fn simplest_between(lo: Option<Dyadic>, hi: Option<Dyadic>) -> Result<Dyadic> {
    // integer candidate first
    let integer = match (lo, hi) {
        (None, None) => Some(0),
        (Some(lo), None) => Some(if lo.numerator < 0 {
            0
        } else {
            lo.floor_wide() + 1
        }),
        (None, Some(hi)) => Some(if hi.numerator > 0 {
            0
        } else {
            hi.ceil_wide() - 1
        }),
        (Some(lo), Some(hi)) => {
            if lo >= hi {
                return Err(Error::BoundsViolation { lo, hi });
            }
            let candidate = if lo.numerator < 0 && hi.numerator > 0 {
                0
            } else if lo.numerator >= 0 {
                lo.floor_wide() + 1
            } else {
                hi.ceil_wide() - 1
            };
            let c = Dyadic::from_wide(candidate, 0)?;
            (lo < c && c < hi).then_some(candidate)
        }
    };
    if let Some(n) = integer {
        return Dyadic::from_wide(n, 0);
    }

    let (lo, hi) = (lo.unwrap(), hi.unwrap());
    let limit = lo.exponent.max(hi.exponent) + 1;
    for j in 1..=limit {
        let candidate = Dyadic::from_wide(lo.floor_at(j) + 1, j)?;
        if candidate < hi {
            return Ok(candidate);
        }
    }
    unreachable!("a dyadic with exponent <= {limit} always separates {lo} and {hi}")
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exponent = self.exponent.max(other.exponent);
        self.scaled(exponent).cmp(&other.scaled(exponent))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        self.checked_neg().expect("dyadic negation overflow")
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::integer(n)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let negative = match bytes.first() {
            Some(b'-') => {
                pos += 1;
                true
            }
            Some(b'+') => {
                pos += 1;
                false
            }
            _ => false,
        };
        let digits = |start: usize| {
            let end = start
                + bytes[start..]
                    .iter()
                    .take_while(|b| b.is_ascii_digit())
                    .count();
            if end == start {
                Err(Error::parse(start, "expected digits"))
            } else {
                Ok(end)
            }
        };

        let end = digits(pos)?;
        let magnitude: i128 = s[pos..end]
            .parse()
            .map_err(|_| Error::parse(pos, "numerator too large"))?;
        pos = end;

        let exponent = if pos == bytes.len() {
            0
        } else if s[pos..].starts_with("/2^") {
            pos += 3;
            let end = digits(pos)?;
            let e: u32 = s[pos..end]
                .parse()
                .map_err(|_| Error::parse(pos, "exponent too large"))?;
            pos = end;
            e
        } else {
            return Err(Error::parse(pos, "expected \"/2^\" or end of input"));
        };
        if pos != bytes.len() {
            return Err(Error::parse(pos, "trailing characters"));
        }

        let numerator = if negative { -magnitude } else { magnitude };
        Dyadic::from_wide(numerator, exponent).map_err(|e| Error::parse(0, e.to_string()))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

//! Extended nonnegative reals for asymptotic indices.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// A nonnegative real or `+∞`. Zero is an ordinary finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// `1/rate`, sending a zero rate to `+∞` and an infinite rate to zero.
    pub fn reciprocal(rate: f64) -> ExtReal {
        if rate.is_infinite() {
            ExtReal::ZERO
        } else if rate <= 0.0 {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(1.0 / rate)
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    /// The value as an `f64`, with `+∞` mapped to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::Infinity => f64::INFINITY,
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Whether `self ≤ other + tol`.
    pub fn le_within(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (_, ExtReal::Infinity) => true,
            (ExtReal::Infinity, ExtReal::Finite(_)) => false,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a <= b + tol,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => Some(Ordering::Equal),
            (ExtReal::Infinity, _) => Some(Ordering::Greater),
            (_, ExtReal::Infinity) => Some(Ordering::Less),
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::Infinity => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_sentinels() {
        assert_eq!(ExtReal::reciprocal(0.0), ExtReal::Infinity);
        assert_eq!(ExtReal::reciprocal(f64::INFINITY), ExtReal::ZERO);
        assert_eq!(ExtReal::reciprocal(4.0), ExtReal::Finite(0.25));
    }

    #[test]
    fn ordering_puts_infinity_last() {
        assert!(ExtReal::Finite(1e300) < ExtReal::Infinity);
        assert!(ExtReal::Infinity.le_within(ExtReal::Infinity, 0.0));
        assert!(!ExtReal::Infinity.le_within(ExtReal::Finite(3.0), 1.0));
        assert_eq!(
            ExtReal::Finite(2.0).max(ExtReal::Infinity),
            ExtReal::Infinity
        );
    }
}

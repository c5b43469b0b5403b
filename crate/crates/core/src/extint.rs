use std::fmt;
use std::ops::{Add, Neg};

use serde::{Serialize, Serializer};

/// An integer extended by `-oo` and `+oo`.
///
/// Valuations of the zero element are `PosInf`; negated valuations such as
/// `m_j = -v(b_j)` become `NegInf` for a zero component and then drop out of
/// every max.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Fin(v)
    }
}

impl Neg for ExtInt {
    type Output = ExtInt;
    fn neg(self) -> ExtInt {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::Fin(v) => ExtInt::Fin(-v),
            ExtInt::PosInf => ExtInt::NegInf,
        }
    }
}

impl Add<i64> for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: i64) -> ExtInt {
        match self {
            ExtInt::Fin(v) => ExtInt::Fin(v + rhs),
            other => other,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-oo"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => write!(f, "+oo"),
        }
    }
}

/// Infinite values serialize as `null`.
impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(v) => s.serialize_i64(*v),
            _ => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_infinities_at_the_ends() {
        let mut v = vec![ExtInt::PosInf, ExtInt::Fin(3), ExtInt::NegInf, ExtInt::Fin(-7)];
        v.sort();
        assert_eq!(v, vec![ExtInt::NegInf, ExtInt::Fin(-7), ExtInt::Fin(3), ExtInt::PosInf]);
        assert_eq!(-ExtInt::PosInf, ExtInt::NegInf);
        assert_eq!(ExtInt::Fin(2) + 3, ExtInt::Fin(5));
        assert_eq!(ExtInt::NegInf + 3, ExtInt::NegInf);
    }

    #[test]
    fn serializes_infinity_as_null() {
        let s = serde_json::to_string(&vec![ExtInt::Fin(4), ExtInt::NegInf]).unwrap();
        assert_eq!(s, "[4,null]");
    }
}

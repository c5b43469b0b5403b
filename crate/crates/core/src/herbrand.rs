//! Exact piecewise-linear maps on `[-1, oo)` (Herbrand functions and inverses).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// JSON form `{"num": n, "den": d}` of a reduced rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(pub Q);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        // keys in sorted order
        map.serialize_entry("den", &big_json(self.0.denom()))?;
        map.serialize_entry("num", &big_json(self.0.numer()))?;
        map.end()
    }
}

fn big_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

/// Continuous, strictly increasing piecewise-linear function with `f(-1) = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    /// Interior breakpoints `(x, f(x))`, strictly increasing in `x`, all `> -1`.
    pub breakpoints: Vec<(Q, Q)>,
    /// `slopes[k]` holds on the segment ending at breakpoint `k`; the last one
    /// extends to infinity.
    pub slopes: Vec<Q>,
}

fn start() -> Q {
    q_int(-1)
}

impl PLFunction {
    pub fn identity() -> Self {
        PLFunction { breakpoints: Vec::new(), slopes: vec![Q::one()] }
    }

    /// `x -> max(x, p x - (p - 1) m)`.
    pub fn as_psi(p: u32, m: i64) -> Result<Self> {
        if m <= 0 || m % p as i64 == 0 {
            return Err(Error::InvalidConductor { m, p });
        }
        Ok(PLFunction { breakpoints: vec![(q_int(m), q_int(m))], slopes: vec![Q::one(), q_int(p as i64)] })
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        if *x < start() {
            return Err(Error::OutsideDomain(format!("{x} < -1")));
        }
        let k = self.breakpoints.partition_point(|(bx, _)| bx <= x);
        let (x0, y0) = if k == 0 { (start(), start()) } else { self.breakpoints[k - 1].clone() };
        Ok(y0 + &self.slopes[k] * (x - x0))
    }

    pub fn invert(&self) -> Self {
        PLFunction {
            breakpoints: self.breakpoints.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            slopes: self.slopes.iter().map(|s| s.recip()).collect(),
        }
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &PLFunction) -> Self {
        let inner_inv = inner.invert();
        let mut xs: Vec<Q> = inner.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        for (bx, _) in &self.breakpoints {
            xs.push(inner_inv.eval(bx).expect("breakpoints lie above -1"));
        }
        xs.sort();
        xs.dedup();
        let pts: Vec<(Q, Q)> = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x).expect("in domain")).expect("in domain");
                (x, y)
            })
            .collect();
        let last = self.slopes.last().unwrap() * inner.slopes.last().unwrap();
        Self::from_points(pts, last)
    }

    fn from_points(pts: Vec<(Q, Q)>, last_slope: Q) -> Self {
        let mut breakpoints: Vec<(Q, Q)> = Vec::new();
        let mut slopes: Vec<Q> = Vec::new();
        let (mut px, mut py) = (start(), start());
        for (x, y) in pts {
            let s = (&y - &py) / (&x - &px);
            if slopes.last() == Some(&s) {
                breakpoints.pop();
                slopes.pop();
            }
            slopes.push(s);
            breakpoints.push((x.clone(), y.clone()));
            px = x;
            py = y;
        }
        if slopes.last() == Some(&last_slope) {
            breakpoints.pop();
            slopes.pop();
        }
        slopes.push(last_slope);
        PLFunction { breakpoints, slopes }
    }

    pub fn is_convex(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_increasing(&self) -> bool {
        self.slopes.iter().all(|s| s.is_positive())
    }

    pub fn fixes_zero(&self) -> bool {
        self.eval(&Q::zero()).map(|y| y.is_zero()).unwrap_or(false)
    }
}

pub fn as_psi(p: u32, m: i64) -> Result<PLFunction> {
    PLFunction::as_psi(p, m)
}

pub fn pl_eval(f: &PLFunction, x: &Q) -> Result<Q> {
    f.eval(x)
}

pub fn pl_compose(f: &PLFunction, g: &PLFunction) -> PLFunction {
    f.compose(g)
}

pub fn pl_invert(f: &PLFunction) -> PLFunction {
    f.invert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn psi_examples() {
        let psi = as_psi(3, 4).unwrap();
        assert_eq!(psi.eval(&q_frac(13, 3)).unwrap(), q_int(5));
        assert_eq!(psi.eval(&q_int(2)).unwrap(), q_int(2));
        assert_eq!(as_psi(2, 1).unwrap().eval(&q_int(3)).unwrap(), q_int(5));
        assert_eq!(psi.invert().eval(&q_int(5)).unwrap(), q_frac(13, 3));
        assert_eq!(as_psi(3, 3), Err(Error::InvalidConductor { m: 3, p: 3 }));
        assert_eq!(as_psi(3, 0), Err(Error::InvalidConductor { m: 0, p: 3 }));
        assert!(matches!(psi.eval(&q_frac(-3, 2)), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn composition_examples() {
        let outer = as_psi(3, 5).unwrap();
        let inner = as_psi(3, 4).unwrap();
        let c = outer.compose(&inner);
        assert_eq!(c.eval(&q_int(6)).unwrap(), q_int(20));
        assert_eq!(inner.compose(&PLFunction::identity()), inner);
        assert_eq!(PLFunction::identity().compose(&inner), inner);
        // break at m_a = 4 and at psi_inner^{-1}(5) = 13/3
        let xs: Vec<Q> = c.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(xs, vec![q_int(4), q_frac(13, 3)]);
    }

    #[test]
    fn breakpoint_below_inner_jump() {
        // outer break at 2 < 4 = inner break
        let c = as_psi(3, 2).unwrap().compose(&as_psi(3, 4).unwrap());
        let xs: Vec<Q> = c.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(xs, vec![q_int(2), q_int(4)]);
        assert!(c.is_convex());
    }

    fn conductor(p: u32) -> impl Strategy<Value = i64> {
        (1i64..40).prop_filter("prime to p", move |m| m % p as i64 != 0)
    }

    proptest! {
        #[test]
        fn inverse_round_trip(m in conductor(3), num in -30i64..400, den in 1i64..12) {
            let f = as_psi(3, m).unwrap();
            let x = q_frac(num, den);
            prop_assume!(x >= q_int(-1));
            let y = f.eval(&x).unwrap();
            prop_assert_eq!(f.invert().eval(&y).unwrap(), x);
        }

        #[test]
        fn composites_are_herbrand_like(p in prop::sample::select(vec![2u32, 3, 5]), m1 in 1i64..30, m2 in 1i64..90, num in -10i64..300, den in 1i64..7) {
            prop_assume!(m1 % p as i64 != 0 && m2 % p as i64 != 0);
            let inner = as_psi(p, m1).unwrap();
            let outer = as_psi(p, m2).unwrap();
            let c = outer.compose(&inner);
            prop_assert!(c.is_convex() && c.is_increasing() && c.fixes_zero());
            let x = q_frac(num, den);
            prop_assume!(x >= q_int(-1));
            prop_assert_eq!(c.eval(&x).unwrap(), outer.eval(&inner.eval(&x).unwrap()).unwrap());
            prop_assert_eq!(c.invert().eval(&c.eval(&x).unwrap()).unwrap(), x);
            let mut expected = vec![q_int(m1), inner.invert().eval(&q_int(m2)).unwrap()];
            expected.sort();
            expected.dedup();
            let xs: Vec<Q> = c.breakpoints.iter().map(|(x, _)| x.clone()).collect();
            prop_assert_eq!(xs, expected);
        }
    }
}

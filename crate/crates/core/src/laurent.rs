//! Sparse truncated Laurent series over `F_{p^d}`, i.e. elements of `K = k((t))`.

use std::collections::BTreeMap;
use std::fmt;

use crate::artin_schreier::ValuedField;
use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::gfq::{FqElem, FqField};
use crate::ring::Ring;

pub const DEFAULT_PRECISION: i64 = 128;

/// A Laurent series `sum c_e t^e`, known modulo `t^prec`.
///
/// `prec == None` marks an exact (finitely supported) element. Every stored
/// exponent is below `prec` and no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    terms: BTreeMap<i64, FqElem>,
    prec: Option<i64>,
    field: FqField,
}

/// A differential `chi = g * t^{-1} dt`, stored through `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialRep {
    pub g: LaurentSeries,
}

impl DifferentialRep {
    /// `-v_K(chi)`, which equals `-v_K(g)` with the `F_n Omega` normalization.
    pub fn neg_valuation(&self) -> Result<ExtInt> {
        Ok(-self.g.valuation()?)
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero()
    }
}

/// Binary and unary operations offered by [`series_arith`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    /// Inverse of the first operand, truncated at the given absolute precision
    /// when the operand is exact.
    Inv(i64),
    Scalar(FqElem),
}

pub fn series_arith(f: &LaurentSeries, h: &LaurentSeries, op: SeriesOp) -> Result<LaurentSeries> {
    if f.field != h.field {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        SeriesOp::Add => f.add(h),
        SeriesOp::Sub => f.sub(h),
        SeriesOp::Mul => f.mul(h),
        SeriesOp::Inv(cap) => f.inv(cap)?,
        SeriesOp::Scalar(c) => f.scale(&c),
    })
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    pub fn zero(field: &FqField) -> Self {
        LaurentSeries { terms: BTreeMap::new(), prec: None, field: field.clone() }
    }

    pub fn one(field: &FqField) -> Self {
        Self::monomial(field.one(), 0)
    }

    pub fn constant(c: FqElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: FqElem, exponent: i64) -> Self {
        let field = c.field().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentSeries { terms, prec: None, field }
    }

    /// `t^exponent`.
    pub fn t_pow(field: &FqField, exponent: i64) -> Self {
        Self::monomial(field.one(), exponent)
    }

    /// Exact series from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, FqElem)>>(field: &FqField, terms: I) -> Self {
        let mut out = Self::zero(field);
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    /// Exact series with prime-field coefficients, e.g. `&[(-4, 1), (-1, 2)]`.
    pub fn from_ints(field: &FqField, terms: &[(i64, i64)]) -> Self {
        Self::from_terms(field, terms.iter().map(|&(e, c)| (e, field.from_int(c))))
    }

    fn add_term(&mut self, e: i64, c: &FqElem) {
        if c.is_zero() || self.prec.is_some_and(|n| e >= n) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(cur) => {
                let s = cur.add(c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// Drops all terms of exponent `>= prec` and records the truncation.
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = min_prec(self.prec, Some(prec));
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| prec.is_none_or(|n| **e < n))
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        LaurentSeries { terms, prec, field: self.field.clone() }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &FqElem)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> FqElem {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// True when no term is stored (an exact zero or `O(t^prec)`).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least exponent with a nonzero coefficient, `+oo` for the exact zero.
    pub fn valuation(&self) -> Result<ExtInt> {
        match (self.terms.keys().next(), self.prec) {
            (Some(&e), _) => Ok(ExtInt::Fin(e)),
            (None, None) => Ok(ExtInt::PosInf),
            (None, Some(n)) => Err(Error::PrecisionExhausted(format!("series is O(t^{n})"))),
        }
    }

    /// Leading `(exponent, coefficient)`, `None` for the exact zero.
    pub fn leading(&self) -> Result<Option<(i64, FqElem)>> {
        match self.terms.iter().next() {
            Some((e, c)) => Ok(Some((*e, c.clone()))),
            None => self.valuation().map(|_| None),
        }
    }

    /// A lower bound for the valuation that never fails.
    fn valuation_floor(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = min_prec(self.prec, other.prec);
        let mut out = self.truncate_to(prec);
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    fn truncate_to(&self, prec: Option<i64>) -> Self {
        match prec {
            Some(n) => self.truncate(n),
            None => self.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
            prec: self.prec,
            field: self.field.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            _ => {
                let from_self = self.prec.zip(other.valuation_floor()).map(|(n, v)| n + v);
                let from_other = other.prec.zip(self.valuation_floor()).map(|(n, v)| n + v);
                // an exact zero factor makes the product exactly zero
                if (self.is_exact() && self.is_zero()) || (other.is_exact() && other.is_zero()) {
                    None
                } else {
                    min_prec(from_self, from_other)
                }
            }
        };
        let mut out = LaurentSeries { terms: BTreeMap::new(), prec, field: self.field.clone() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        if c.is_zero() {
            return LaurentSeries { terms: BTreeMap::new(), prec: self.prec, field: self.field.clone() };
        }
        LaurentSeries {
            terms: self.terms.iter().map(|(e, x)| (*e, x.mul(c))).collect(),
            prec: self.prec,
            field: self.field.clone(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&self.field.from_int(k))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: self.prec.map(|n| n + k),
            field: self.field.clone(),
        }
    }

    /// Multiplicative inverse.
    ///
    /// For `f = c t^v (1 + h)` known modulo `t^N` the inverse is known modulo
    /// `t^(N - 2v)`; an exact `f` is inverted modulo `t^cap`.
    pub fn inv(&self, cap: i64) -> Result<Self> {
        let (v, lead) = match self.leading()? {
            Some(x) => x,
            None => return Err(Error::DivisionByZero),
        };
        let out_prec = match self.prec {
            Some(n) => n - 2 * v,
            None => cap,
        };
        if out_prec <= -v {
            return Err(Error::PrecisionExhausted(format!(
                "inverse of a series of valuation {v} needs precision above {}",
                -v
            )));
        }
        let lead_inv = lead.inv()?;
        // u = f / (lead t^v) = 1 + h, with h supported in exponents >= 1
        let h: Vec<(i64, FqElem)> =
            self.terms.iter().skip(1).map(|(e, c)| (e - v, c.mul(&lead_inv))).collect();
        let rel = (out_prec + v) as usize;
        let mut q: Vec<FqElem> = vec![self.field.zero(); rel];
        q[0] = self.field.one();
        for k in 1..rel {
            let mut acc = self.field.zero();
            for (e, c) in &h {
                let e = *e as usize;
                if e > k {
                    break;
                }
                acc = acc.sub(&c.mul(&q[k - e]));
            }
            q[k] = acc;
        }
        let terms = q.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c.mul(&lead_inv)));
        let mut out = LaurentSeries { terms: BTreeMap::new(), prec: Some(out_prec), field: self.field.clone() };
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        Ok(out)
    }

    /// `t * df/dt`.
    pub fn t_derivative(&self) -> Self {
        let mut out = LaurentSeries { terms: BTreeMap::new(), prec: self.prec, field: self.field.clone() };
        for (e, c) in &self.terms {
            out.add_term(*e, &c.scale_int(*e));
        }
        out
    }

    /// `df = g t^{-1} dt` with `g = t df/dt`.
    pub fn dlog_derivative(&self) -> DifferentialRep {
        DifferentialRep { g: self.t_derivative() }
    }

    /// `f^p`, which maps each term `(c, e)` to `(c^p, p e)`.
    pub fn pth_power(&self) -> Self {
        let p = self.field.p() as i64;
        LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (e * p, c.frobenius())).collect(),
            prec: self.prec.map(|n| n * p),
            field: self.field.clone(),
        }
    }

    /// The p-th root `x^(1/p) t^(e/p)` of the monomial `x t^e`.
    pub fn pth_root_monomial(x: &FqElem, e: i64) -> Result<Self> {
        let p = x.field().p();
        if e.rem_euclid(p as i64) != 0 {
            return Err(Error::ExponentNotDivisible { exponent: e, p });
        }
        Ok(Self::monomial(x.pth_root(), e / p as i64))
    }

    /// `f^p - f`.
    pub fn artin_schreier(&self) -> Self {
        self.pth_power().sub(self)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let coeff = if c.is_one() && *e != 0 { String::new() } else { format!("({c})") };
                match e {
                    0 => coeff,
                    1 => format!("{coeff}t"),
                    _ => format!("{coeff}t^{e}"),
                }
            })
            .collect();
        if let Some(n) = self.prec {
            parts.push(format!("O(t^{n})"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The field `K = k((t))` as a ring context.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentField {
    field: FqField,
    /// Absolute precision used when an exact series has to be inverted.
    pub cap: i64,
}

impl LaurentField {
    pub fn new(field: &FqField) -> Self {
        LaurentField { field: field.clone(), cap: DEFAULT_PRECISION }
    }

    pub fn with_precision(field: &FqField, cap: i64) -> Self {
        LaurentField { field: field.clone(), cap }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn t(&self) -> LaurentSeries {
        LaurentSeries::t_pow(&self.field, 1)
    }
}

impl Ring for LaurentField {
    type Elem = LaurentSeries;

    fn characteristic(&self) -> u32 {
        self.field.p()
    }
    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero(&self.field)
    }
    fn one(&self) -> LaurentSeries {
        LaurentSeries::one(&self.field)
    }
    fn from_int(&self, k: i64) -> LaurentSeries {
        LaurentSeries::constant(self.field.from_int(k))
    }
    fn add(&self, x: &LaurentSeries, y: &LaurentSeries) -> LaurentSeries {
        x.add(y)
    }
    fn neg(&self, x: &LaurentSeries) -> LaurentSeries {
        x.neg()
    }
    fn sub(&self, x: &LaurentSeries, y: &LaurentSeries) -> LaurentSeries {
        x.sub(y)
    }
    fn mul(&self, x: &LaurentSeries, y: &LaurentSeries) -> LaurentSeries {
        x.mul(y)
    }
    fn is_zero(&self, x: &LaurentSeries) -> bool {
        x.is_zero()
    }
}

impl ValuedField for LaurentField {
    fn residue_field(&self) -> &FqField {
        &self.field
    }
    fn valuation(&self, x: &LaurentSeries) -> Result<ExtInt> {
        x.valuation()
    }
    fn monomial(&self, v: i64) -> LaurentSeries {
        LaurentSeries::t_pow(&self.field, v)
    }
    fn leading_coeff(&self, x: &LaurentSeries) -> Result<Option<FqElem>> {
        Ok(x.leading()?.map(|(_, c)| c))
    }
    fn scale(&self, x: &LaurentSeries, c: &FqElem) -> LaurentSeries {
        x.scale(c)
    }
    fn frobenius(&self, x: &LaurentSeries) -> LaurentSeries {
        x.pth_power()
    }
    fn residue(&self, x: &LaurentSeries) -> FqElem {
        x.coeff(0)
    }
    fn t_derivation(&self, x: &LaurentSeries) -> LaurentSeries {
        x.t_derivative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FqField {
        FqField::prime_field(3).unwrap()
    }

    #[test]
    fn characteristic_three_cancellation() {
        let f = f3();
        let x = LaurentSeries::from_ints(&f, &[(-1, 1), (0, 1)]);
        let y = LaurentSeries::from_ints(&f, &[(-1, 2)]);
        assert_eq!(x.add(&y), LaurentSeries::one(&f));
    }

    #[test]
    fn square_by_convolution() {
        let f = f3();
        let x = LaurentSeries::from_ints(&f, &[(-2, 1), (-1, 1)]);
        let expected = LaurentSeries::from_ints(&f, &[(-4, 1), (-3, 2), (-2, 1)]);
        assert_eq!(x.mul(&x), expected);
    }

    #[test]
    fn valuation_examples() {
        let f = f3();
        assert_eq!(LaurentSeries::t_pow(&f, -4).valuation(), Ok(ExtInt::Fin(-4)));
        assert_eq!(LaurentSeries::zero(&f).valuation(), Ok(ExtInt::PosInf));
        let truncated = LaurentSeries::t_pow(&f, 7).truncate(5);
        assert!(matches!(truncated.valuation(), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let f = FqField::standard(3, 2).unwrap();
        let x = LaurentSeries::from_terms(&f, [(-2, f.generator()), (0, f.one()), (3, f.from_int(2))]);
        let inv = x.inv(40).unwrap();
        assert_eq!(inv.prec(), Some(40));
        let prod = x.mul(&inv);
        // x exact with v = -2 and inv known mod t^40: product known mod t^38
        assert_eq!(prod.prec(), Some(38));
        assert_eq!(prod.truncate(38).terms().collect::<Vec<_>>(), vec![(0, &f.one())]);
        assert_eq!(LaurentSeries::zero(&f).inv(10), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_of_truncated_series_tracks_precision() {
        let f = f3();
        let x = LaurentSeries::from_ints(&f, &[(-1, 1), (1, 1)]).truncate(6);
        let inv = x.inv(100).unwrap();
        assert_eq!(inv.prec(), Some(8));
        assert!(matches!(LaurentSeries::zero(&f).truncate(3).inv(5), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn dlog_derivative_examples() {
        let f = f3();
        let g = LaurentSeries::t_pow(&f, -2).dlog_derivative();
        assert_eq!(g.g, LaurentSeries::t_pow(&f, -2));
        assert!(LaurentSeries::constant(f.from_int(2)).dlog_derivative().is_zero());
        assert!(LaurentSeries::t_pow(&f, -3).dlog_derivative().is_zero());
    }

    #[test]
    fn pth_power_and_root() {
        let f2 = FqField::prime_field(2).unwrap();
        let x = LaurentSeries::from_ints(&f2, &[(-1, 1), (0, 1)]);
        assert_eq!(x.pth_power(), LaurentSeries::from_ints(&f2, &[(-2, 1), (0, 1)]));
        assert_eq!(LaurentSeries::pth_root_monomial(&f2.one(), -4).unwrap(), LaurentSeries::t_pow(&f2, -2));
        assert_eq!(
            LaurentSeries::pth_root_monomial(&f2.one(), -3),
            Err(Error::ExponentNotDivisible { exponent: -3, p: 2 })
        );
        let f9 = FqField::standard(3, 2).unwrap();
        let g = f9.generator();
        let root = LaurentSeries::pth_root_monomial(&g, -3).unwrap();
        assert_eq!(root, LaurentSeries::monomial(g.pth_root(), -1));
        assert_eq!(root.pth_power(), LaurentSeries::monomial(g, -3));
    }

    #[test]
    fn series_arith_checks_fields() {
        let a = LaurentSeries::one(&f3());
        let b = LaurentSeries::one(&FqField::prime_field(5).unwrap());
        assert_eq!(series_arith(&a, &b, SeriesOp::Add), Err(Error::FieldMismatch));
        assert_eq!(
            series_arith(&a, &a, SeriesOp::Scalar(f3().from_int(2))).unwrap(),
            LaurentSeries::constant(f3().from_int(2))
        );
    }
}

//! Reduction of Artin-Schreier classes `c mod P(F)`, `P(x) = x^p - x`, to a
//! representative of minimal pole order, over `K` or over any layer above it.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::gfq::{FqElem, FqField};
use crate::ring::Ring;

/// A complete discretely valued field of characteristic `p` with residue field
/// `F_q`, normalized so that `monomial(1)` is a uniformizer.
pub trait ValuedField: Ring {
    fn residue_field(&self) -> &FqField;

    /// Normalized valuation; `+oo` for zero.
    fn valuation(&self, x: &Self::Elem) -> Result<ExtInt>;

    /// A fixed element of valuation `v`. Monomials multiply: the product of the
    /// monomials of valuation `u` and `v` has leading coefficient 1 when
    /// compared with `monomial(u + v)` only for the base field; callers use
    /// [`ValuedField::leading_coeff`] rather than assuming it.
    fn monomial(&self, v: i64) -> Self::Elem;

    /// Image of `x / monomial(v(x))` in the residue field; `None` for zero.
    fn leading_coeff(&self, x: &Self::Elem) -> Result<Option<FqElem>>;

    /// Multiplication by a residue-field constant.
    fn scale(&self, x: &Self::Elem, c: &FqElem) -> Self::Elem;

    /// `x^p`.
    fn frobenius(&self, x: &Self::Elem) -> Self::Elem;

    /// Residue class of an integral element.
    fn residue(&self, x: &Self::Elem) -> FqElem;

    /// The derivation `t d/dt` extended to this field.
    fn t_derivation(&self, x: &Self::Elem) -> Self::Elem;

    fn uniformizer(&self) -> Self::Elem {
        self.monomial(1)
    }

    /// `x^p - x`.
    fn artin_schreier(&self, x: &Self::Elem) -> Self::Elem {
        self.sub(&self.frobenius(x), x)
    }

    fn finite_valuation(&self, x: &Self::Elem) -> Result<i64> {
        match self.valuation(x)? {
            ExtInt::Fin(v) => Ok(v),
            _ => Err(Error::DivisionByZero),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassStatus {
    Ramified,
    Unramified,
    Trivial,
}

/// `c_prime = c - (c_dblprime^p - c_dblprime)` with `c_prime` reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedRep<E> {
    pub c_prime: E,
    pub c_dblprime: E,
    pub m: i64,
    pub status: ClassStatus,
}

/// An element `w` with `v(w) = v(x) / p` and `w^p` having the same leading
/// term as `x`.
pub fn pth_root_of_leading<F: ValuedField>(field: &F, x: &F::Elem) -> Result<F::Elem> {
    let p = field.characteristic() as i64;
    let v = field.finite_valuation(x)?;
    if v.rem_euclid(p) != 0 {
        return Err(Error::ExponentNotDivisible { exponent: v, p: p as u32 });
    }
    let w0 = field.monomial(v / p);
    let q = field.leading_coeff(&field.frobenius(&w0))?.ok_or(Error::DivisionByZero)?;
    let lc = field.leading_coeff(x)?.ok_or(Error::DivisionByZero)?;
    let beta = lc.div(&q)?.pth_root();
    Ok(field.scale(&w0, &beta))
}

/// Removes poles of order divisible by `p` from the leading term until the
/// class is visibly ramified, unramified or trivial.
pub fn reduce<F: ValuedField>(field: &F, c: &F::Elem) -> Result<ReducedRep<F::Elem>> {
    let p = field.characteristic() as i64;
    let mut acc = c.clone();
    let mut witness = field.zero();
    let mut last: Option<i64> = None;
    loop {
        let v = match field.valuation(&acc)? {
            ExtInt::Fin(v) => v,
            _ => {
                return Ok(ReducedRep { c_prime: acc, c_dblprime: witness, m: 0, status: ClassStatus::Trivial });
            }
        };
        if v >= 0 {
            let status = if field.residue(&acc).trace_to_fp() == 0 {
                ClassStatus::Trivial
            } else {
                ClassStatus::Unramified
            };
            return Ok(ReducedRep { c_prime: acc, c_dblprime: witness, m: 0, status });
        }
        if v % p != 0 {
            return Ok(ReducedRep { c_prime: acc, c_dblprime: witness, m: -v, status: ClassStatus::Ramified });
        }
        if let Some(prev) = last {
            assert!(v > prev, "reduction did not descend: {prev} -> {v}");
        }
        last = Some(v);
        let w = pth_root_of_leading(field, &acc)?;
        acc = field.sub(&acc, &field.artin_schreier(&w));
        witness = field.add(&witness, &w);
    }
}

pub fn conductor<F: ValuedField>(field: &F, c: &F::Elem) -> Result<i64> {
    Ok(reduce(field, c)?.m)
}

/// Conductors of all classes `i a + j b1`, `(i, j) != (0, 0)` in `F_p^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sweep {
    /// `((i, j), conductor)` for every nonzero combination.
    pub entries: Vec<((u32, u32), i64)>,
    pub u1: BTreeSet<i64>,
    pub r1: i64,
}

pub fn character_sweep<F: ValuedField>(field: &F, a: &F::Elem, b1: &F::Elem) -> Result<Sweep> {
    let p = field.characteristic();
    let mut entries = Vec::new();
    let mut trivial = Vec::new();
    let mut unramified = Vec::new();
    for i in 0..p {
        for j in 0..p {
            if i == 0 && j == 0 {
                continue;
            }
            let comb = field.add(
                &field.mul(&field.from_int(i as i64), a),
                &field.mul(&field.from_int(j as i64), b1),
            );
            let rep = reduce(field, &comb)?;
            match rep.status {
                ClassStatus::Trivial => trivial.push((i, j)),
                ClassStatus::Unramified => unramified.push((i, j)),
                ClassStatus::Ramified => {}
            }
            entries.push(((i, j), rep.m));
        }
    }
    if let Some((i, j)) = trivial.first() {
        return Err(Error::DegenerateGroup(format!("{i}*a + {j}*b_1 is in P(K)")));
    }
    if let Some((i, j)) = unramified.first() {
        return Err(Error::NotTotallyRamified(format!("{i}*a + {j}*b_1 defines an unramified class")));
    }
    let u1: BTreeSet<i64> = entries.iter().map(|(_, m)| *m).collect();
    let r1 = *u1.iter().next_back().expect("p >= 2 gives at least three combinations");
    Ok(Sweep { entries, u1, r1 })
}

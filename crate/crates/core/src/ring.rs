//! Context-style commutative rings of characteristic `p`.
//!
//! Elements are plain values; the ring object carries whatever structure is
//! needed to combine them (the residue field, the defining equation of a layer).
//! The unipotent group code and the Artin-Schreier reduction are written once
//! against these traits and run over `F_q`, `F_q((t))` and towers above it.

use std::fmt::Debug;

use crate::gfq::{FqElem, FqField};

pub trait Ring: Clone + std::fmt::Debug {
    type Elem: Clone + PartialEq + Debug;

    fn characteristic(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, k: i64) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn pow(&self, x: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

impl Ring for FqField {
    type Elem = FqElem;

    fn characteristic(&self) -> u32 {
        self.p()
    }
    fn zero(&self) -> FqElem {
        FqField::zero(self)
    }
    fn one(&self) -> FqElem {
        FqField::one(self)
    }
    fn from_int(&self, k: i64) -> FqElem {
        FqField::from_int(self, k)
    }
    fn add(&self, x: &FqElem, y: &FqElem) -> FqElem {
        x.add(y)
    }
    fn neg(&self, x: &FqElem) -> FqElem {
        x.neg()
    }
    fn mul(&self, x: &FqElem, y: &FqElem) -> FqElem {
        x.mul(y)
    }
    fn is_zero(&self, x: &FqElem) -> bool {
        x.is_zero()
    }
}

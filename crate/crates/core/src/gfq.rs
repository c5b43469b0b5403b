//! Arithmetic in the finite residue field `k = F_{p^d}`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

pub const MAX_PRIME: u32 = 13;
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, PartialEq, Eq)]
struct FieldData {
    p: u32,
    d: usize,
    /// Ascending coefficients of the monic modulus, length `d + 1`.
    modulus: Vec<u32>,
}

/// Handle to `F_p[g] / (modulus)`. Cloning is cheap.
#[derive(Clone)]
pub struct FqField(Arc<FieldData>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}{:?}", self.0.p, self.0.d, self.0.modulus)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|q| q * q <= p).all(|q| !p.is_multiple_of(q))
}

/// Remainder of `num` modulo the monic `den` over `F_p`; both ascending.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dd;
            for (k, &c) in den[..dd].iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - lead) * c) % p;
            }
        }
    }
    r
}

impl FqField {
    /// Builds `F_{p^d}` from a monic irreducible modulus (ascending coefficients).
    pub fn new(p: u32, d: usize, modulus: &[i64]) -> Result<FqField> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::InvalidField(format!("p = {p} must be a prime <= {MAX_PRIME}")));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(Error::InvalidField(format!("d = {d} must lie in 1..={MAX_DEGREE}")));
        }
        if modulus.len() != d + 1 {
            return Err(Error::InvalidField(format!(
                "modulus has {} coefficients, expected d + 1 = {}",
                modulus.len(),
                d + 1
            )));
        }
        let reduced: Vec<u32> = modulus.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
        if reduced[d] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !Self::is_irreducible(&reduced, p) {
            return Err(Error::InvalidField(format!("modulus {reduced:?} is reducible over F_{p}")));
        }
        Ok(FqField(Arc::new(FieldData { p, d, modulus: reduced })))
    }

    /// The prime field `F_p`, presented with modulus `g`.
    pub fn prime_field(p: u32) -> Result<FqField> {
        Self::new(p, 1, &[0, 1])
    }

    /// A fixed irreducible modulus for the degrees used by the built-in generators
    /// (the Conway polynomial for `d = 2`).
    pub fn standard(p: u32, d: usize) -> Result<FqField> {
        let modulus: Vec<i64> = match (p, d) {
            (_, 1) => vec![0, 1],
            (2, 2) => vec![1, 1, 1],
            (3, 2) => vec![2, 2, 1],
            (5, 2) => vec![2, 4, 1],
            (7, 2) => vec![3, 6, 1],
            (11, 2) => vec![2, 7, 1],
            (13, 2) => vec![2, 12, 1],
            (2, 3) => vec![1, 1, 0, 1],
            (3, 3) => vec![1, 2, 0, 1],
            (5, 3) => vec![3, 3, 0, 1],
            _ => return Err(Error::InvalidField(format!("no built-in modulus for p = {p}, d = {d}"))),
        };
        Self::new(p, d, &modulus)
    }

    fn is_irreducible(modulus: &[u32], p: u32) -> bool {
        let d = modulus.len() - 1;
        // A reducible polynomial has a monic factor of degree <= d / 2.
        for k in 1..=d / 2 {
            let count = (p as u64).pow(k as u32);
            for idx in 0..count {
                let mut cand = Vec::with_capacity(k + 1);
                let mut rest = idx;
                for _ in 0..k {
                    cand.push((rest % p as u64) as u32);
                    rest /= p as u64;
                }
                cand.push(1);
                if poly_rem(modulus, &cand, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn d(&self) -> usize {
        self.0.d
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn order(&self) -> u64 {
        (self.0.p as u64).pow(self.0.d as u32)
    }

    /// Element with the given coordinates in the basis `1, g, ..., g^(d-1)`;
    /// entries are reduced mod `p`, missing entries are zero.
    pub fn elem(&self, coords: &[i64]) -> FqElem {
        assert!(coords.len() <= self.d(), "too many coordinates for F_{}^{}", self.p(), self.d());
        let mut c = [0u8; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coords) {
            *slot = v.rem_euclid(self.p() as i64) as u8;
        }
        FqElem { coords: c, field: self.clone() }
    }

    pub fn zero(&self) -> FqElem {
        FqElem { coords: [0; MAX_DEGREE], field: self.clone() }
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> FqElem {
        self.elem(&[k])
    }

    /// The class of the generator symbol `g`.
    pub fn generator(&self) -> FqElem {
        if self.d() == 1 {
            self.from_int(-(self.0.modulus[0] as i64))
        } else {
            self.elem(&[0, 1])
        }
    }

    /// Element number `index` in the base-`p` enumeration of coordinates.
    pub fn element_by_index(&self, index: u64) -> FqElem {
        let mut c = [0u8; MAX_DEGREE];
        let mut rest = index;
        for slot in c.iter_mut().take(self.d()) {
            *slot = (rest % self.p() as u64) as u8;
            rest /= self.p() as u64;
        }
        FqElem { coords: c, field: self.clone() }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |i| self.element_by_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        self.element_by_index(rng.gen_range(0..self.order()))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        self.element_by_index(rng.gen_range(1..self.order()))
    }

    /// Inverse of `k` in `F_p`; `k` must be prime to `p`.
    pub fn inv_mod_p(&self, k: i64) -> u32 {
        let p = self.p() as i64;
        let k = k.rem_euclid(p);
        assert!(k != 0, "{k} is not invertible mod {p}");
        pow_mod(k as u64, (p - 2) as u64, p as u64) as u32
    }
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Element of `F_{p^d}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    coords: [u8; MAX_DEGREE],
    field: FqField,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for FqElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords_i64().serialize(s)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &c) in self.coords().iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(match (k, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}g"),
                (k, 1) => format!("g^{k}"),
                (k, c) => format!("{c}g^{k}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Binary operations offered by [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn field_arith(x: &FqElem, y: &FqElem, op: FieldOp) -> Result<FqElem> {
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        FieldOp::Add => x.add(y),
        FieldOp::Sub => x.sub(y),
        FieldOp::Mul => x.mul(y),
        FieldOp::Div => x.mul(&y.inv()?),
    })
}

impl FqElem {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords[..self.field.d()]
    }

    pub fn coords_i64(&self) -> Vec<i64> {
        self.coords().iter().map(|&c| c as i64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// `Some(k)` when the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u32> {
        if self.coords[1..].iter().all(|&c| c == 0) {
            Some(self.coords[0] as u32)
        } else {
            None
        }
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        debug_assert!(self.field == other.field);
        let p = self.field.p();
        let mut c = [0u8; MAX_DEGREE];
        for k in 0..self.field.d() {
            c[k] = ((self.coords[k] as u32 + other.coords[k] as u32) % p) as u8;
        }
        FqElem { coords: c, field: self.field.clone() }
    }

    pub fn neg(&self) -> FqElem {
        let p = self.field.p();
        let mut c = [0u8; MAX_DEGREE];
        for k in 0..self.field.d() {
            c[k] = ((p - self.coords[k] as u32) % p) as u8;
        }
        FqElem { coords: c, field: self.field.clone() }
    }

    pub fn sub(&self, other: &FqElem) -> FqElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        debug_assert!(self.field == other.field);
        let p = self.field.p();
        let d = self.field.d();
        if d == 1 {
            let v = (self.coords[0] as u32 * other.coords[0] as u32) % p;
            return FqElem { coords: [v as u8, 0, 0, 0, 0, 0, 0, 0], field: self.field.clone() };
        }
        let mut prod = [0u32; 2 * MAX_DEGREE];
        for i in 0..d {
            let x = self.coords[i] as u32;
            if x == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] += x * other.coords[j] as u32;
            }
        }
        let modulus = self.field.modulus();
        for k in (d..2 * d - 1).rev() {
            let lead = prod[k] % p;
            if lead != 0 {
                for (idx, &m) in modulus[..d].iter().enumerate() {
                    prod[k - d + idx] += (p - lead) * m;
                }
            }
        }
        let mut c = [0u8; MAX_DEGREE];
        for k in 0..d {
            c[k] = (prod[k] % p) as u8;
        }
        FqElem { coords: c, field: self.field.clone() }
    }

    pub fn scale_int(&self, k: i64) -> FqElem {
        self.mul(&self.field.from_int(k))
    }

    pub fn pow(&self, mut e: u64) -> FqElem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `x^(q-2)`.
    pub fn inv(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn div(&self, other: &FqElem) -> Result<FqElem> {
        Ok(self.mul(&other.inv()?))
    }

    /// `x^p`.
    pub fn frobenius(&self) -> FqElem {
        self.pow(self.field.p() as u64)
    }

    /// The unique `y` with `y^p = x`, namely `x^(p^(d-1))`.
    pub fn pth_root(&self) -> FqElem {
        let mut y = self.clone();
        for _ in 1..self.field.d() {
            y = y.frobenius();
        }
        y
    }

    /// Absolute trace `x + x^p + ... + x^(p^(d-1))` as an element of `F_p`.
    /// It vanishes exactly on the image of `y -> y^p - y`.
    pub fn trace_to_fp(&self) -> u32 {
        let mut acc = self.clone();
        let mut cur = self.clone();
        for _ in 1..self.field.d() {
            cur = cur.frobenius();
            acc = acc.add(&cur);
        }
        acc.as_prime().expect("trace lies in the prime field")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FqField {
        FqField::new(3, 2, &[2, 2, 1]).unwrap()
    }

    /// Extended Euclid over F_p[g]; returns the inverse of `x` modulo the modulus.
    fn euclid_inverse(x: &FqElem) -> FqElem {
        let f = x.field().clone();
        let p = f.p() as i64;
        let trim = |v: &mut Vec<i64>| {
            while v.len() > 1 && *v.last().unwrap() == 0 {
                v.pop();
            }
        };
        let inv_p = |a: i64| pow_mod(a.rem_euclid(p) as u64, (p - 2) as u64, p as u64) as i64;
        let mut r0: Vec<i64> = f.modulus().iter().map(|&c| c as i64).collect();
        let mut r1: Vec<i64> = x.coords_i64();
        trim(&mut r1);
        let mut s0: Vec<i64> = vec![0];
        let mut s1: Vec<i64> = vec![1];
        while !(r1.len() == 1 && r1[0] == 0) {
            // polynomial division r0 / r1
            let mut q = vec![0i64; r0.len().saturating_sub(r1.len()) + 1];
            let mut rem = r0.clone();
            let lead_inv = inv_p(*r1.last().unwrap());
            while rem.len() >= r1.len() && !(rem.len() == 1 && rem[0] == 0) {
                let shift = rem.len() - r1.len();
                let coef = (rem.last().unwrap() * lead_inv).rem_euclid(p);
                q[shift] = coef;
                for (k, &c) in r1.iter().enumerate() {
                    rem[shift + k] = (rem[shift + k] - coef * c).rem_euclid(p);
                }
                rem.pop();
                if rem.is_empty() {
                    rem.push(0);
                }
                trim(&mut rem);
            }
            // s2 = s0 - q * s1
            let mut qs = vec![0i64; q.len() + s1.len()];
            for (i, &a) in q.iter().enumerate() {
                for (j, &b) in s1.iter().enumerate() {
                    qs[i + j] = (qs[i + j] + a * b).rem_euclid(p);
                }
            }
            let mut s2 = vec![0i64; qs.len().max(s0.len())];
            for (k, slot) in s2.iter_mut().enumerate() {
                *slot = (s0.get(k).copied().unwrap_or(0) - qs.get(k).copied().unwrap_or(0)).rem_euclid(p);
            }
            trim(&mut s2);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant; inverse = s0 / r0
        let c = inv_p(r0[0]);
        let coords: Vec<i64> = s0.iter().map(|&v| v * c).collect();
        let mut padded = coords;
        padded.resize(f.d(), 0);
        f.elem(&padded)
    }

    #[test]
    fn generator_squared_in_f9() {
        let f = f9();
        let g = f.generator();
        assert_eq!(g.mul(&g), f.elem(&[1, 1]));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(FqField::new(4, 1, &[0, 1]).is_err());
        assert!(FqField::new(3, 2, &[2, 0, 1]).is_err()); // g^2 + 2 = (g+1)(g+2)
        assert!(FqField::new(3, 2, &[1, 0, 2]).is_err()); // not monic
        assert!(FqField::new(3, 2, &[1, 0]).is_err());
        assert!(FqField::new(17, 1, &[0, 1]).is_err());
        assert!(FqField::new(2, 4, &[1, 1, 0, 0, 1]).is_ok());
        assert!(FqField::new(2, 4, &[1, 0, 1, 0, 1]).is_err()); // (g^2+g+1)^2
    }

    #[test]
    fn standard_moduli_are_irreducible() {
        for (p, d) in [(2, 2), (3, 2), (5, 2), (7, 2), (11, 2), (13, 2), (2, 3), (3, 3), (5, 3)] {
            FqField::standard(p, d).unwrap();
        }
    }

    #[test]
    fn identity_and_inverse() {
        for f in [f9(), FqField::standard(5, 2).unwrap(), FqField::standard(2, 3).unwrap()] {
            for x in f.elements() {
                assert_eq!(x.mul(&f.one()), x);
                if !x.is_zero() {
                    let inv = x.inv().unwrap();
                    assert_eq!(inv, euclid_inverse(&x));
                    assert!(x.mul(&inv).is_one());
                }
            }
            assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        }
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = f9().one();
        let b = FqField::standard(5, 2).unwrap().one();
        assert_eq!(field_arith(&a, &b, FieldOp::Add), Err(Error::FieldMismatch));
        assert_eq!(field_arith(&a, &a, FieldOp::Add).unwrap(), f9().from_int(2));
    }

    #[test]
    fn frobenius_matches_repeated_squaring_in_f9() {
        let f = f9();
        let g = f.generator();
        let cube = g.mul(&g).mul(&g);
        assert_eq!(g.frobenius(), cube);
        for k in 0..3 {
            assert_eq!(f.from_int(k).frobenius(), f.from_int(k));
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_exhaustively() {
        for f in [
            f9(),
            FqField::standard(2, 3).unwrap(),
            FqField::new(2, 4, &[1, 1, 0, 0, 1]).unwrap(),
            FqField::new(3, 4, &[2, 0, 0, 2, 1]).unwrap(),
        ] {
            for x in f.elements() {
                assert_eq!(x.frobenius().pth_root(), x);
                assert_eq!(x.pth_root().frobenius(), x);
                for y in f.elements() {
                    assert_eq!(x.add(&y).frobenius(), x.frobenius().add(&y.frobenius()));
                    assert_eq!(x.mul(&y).frobenius(), x.frobenius().mul(&y.frobenius()));
                }
            }
        }
    }

    #[test]
    fn trace_kernel_is_artin_schreier_image() {
        for f in [f9(), FqField::standard(2, 3).unwrap(), FqField::standard(5, 2).unwrap()] {
            let p = f.p();
            let image: std::collections::HashSet<Vec<u8>> =
                f.elements().map(|y| y.frobenius().sub(&y).coords().to_vec()).collect();
            let kernel: std::collections::HashSet<Vec<u8>> =
                f.elements().filter(|x| x.trace_to_fp() == 0).map(|x| x.coords().to_vec()).collect();
            assert_eq!(image, kernel);
            assert_eq!(kernel.len() as u64, f.order() / p as u64);
        }
        let f3 = FqField::prime_field(3).unwrap();
        assert_eq!(f3.one().trace_to_fp(), 1);
        assert_eq!(f3.zero().trace_to_fp(), 0);
    }
}

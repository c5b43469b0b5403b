//! The group `G` of block matrices `[[A(x), y], [0, 1]]` over a ring of
//! characteristic `p`, where `A(x) = sum_i binom(x, i) A^i` and `A` is the
//! nilpotent shift.
//!
//! Vectors are bottom-up: `y[0]` is the last coordinate of the column in the
//! usual top-down display. In that storage `(A(x) y)[j] = sum_{i<=j} binom(x, j-i) y[i]`.

use crate::error::{Error, Result};
use crate::gfq::pow_mod;
use crate::ring::Ring;

fn check_index(i: usize, p: u32) -> Result<()> {
    if i >= p as usize {
        return Err(Error::IndexOutOfRange { i, p });
    }
    Ok(())
}

fn check_order(n: usize, p: u32) -> Result<()> {
    if n < 2 || n > p as usize {
        return Err(Error::InvalidOrder { n, p });
    }
    Ok(())
}

fn inv_mod(k: u64, p: u32) -> i64 {
    pow_mod(k % p as u64, p as u64 - 2, p as u64) as i64
}

/// `x (x - 1) ... (x - i + 1) / i!`, defined for `i < p`.
pub fn binom_poly<R: Ring>(ring: &R, x: &R::Elem, i: usize) -> Result<R::Elem> {
    let p = ring.characteristic();
    check_index(i, p)?;
    Ok(binom_table(ring, x, i + 1).pop().unwrap())
}

/// `[binom(x, 0), ..., binom(x, len - 1)]`, requires `len <= p`.
pub fn binom_table<R: Ring>(ring: &R, x: &R::Elem, len: usize) -> Vec<R::Elem> {
    let p = ring.characteristic();
    assert!(len <= p as usize, "binomial index beyond p - 1");
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(ring.one());
    for k in 1..len {
        let shifted = ring.sub(x, &ring.from_int(k as i64 - 1));
        let next = ring.mul(&ring.mul(&out[k - 1], &shifted), &ring.from_int(inv_mod(k as u64, p)));
        out.push(next);
    }
    out
}

/// Square matrix in top-down (row 0 on top) orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct NilMat<E> {
    pub n: usize,
    pub entries: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> NilMat<E> {
    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
            .collect();
        NilMat { n, entries }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let n = self.n;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let terms: Vec<E> = (0..n).map(|k| ring.mul(&self.entries[i][k], &other.entries[k][j])).collect();
                        ring.sum(terms.iter())
                    })
                    .collect()
            })
            .collect();
        NilMat { n, entries }
    }

    /// Product with a bottom-up column vector.
    pub fn apply<R: Ring<Elem = E>>(&self, ring: &R, y: &[E]) -> Vec<E> {
        let n = self.n;
        assert_eq!(y.len(), n);
        (0..n)
            .map(|j| {
                let row = n - 1 - j;
                let terms: Vec<E> = (0..n).map(|c| ring.mul(&self.entries[row][c], &y[n - 1 - c])).collect();
                ring.sum(terms.iter())
            })
            .collect()
    }

    pub fn is_unit_upper_triangular<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = &self.entries[i][j];
                if i == j {
                    *e == ring.one()
                } else if i > j {
                    ring.is_zero(e)
                } else {
                    true
                }
            })
        })
    }
}

/// The shift matrix `A` with ones on the superdiagonal.
pub fn shift_matrix<R: Ring>(ring: &R, n: usize) -> NilMat<R::Elem> {
    let entries = (0..n)
        .map(|i| (0..n).map(|j| if j == i + 1 { ring.one() } else { ring.zero() }).collect())
        .collect();
    NilMat { n, entries }
}

/// `A(x) = sum_{i < n} binom(x, i) A^i`, so entry `(i, j)` is `binom(x, j - i)`.
pub fn big_a<R: Ring>(ring: &R, x: &R::Elem, n: usize) -> Result<NilMat<R::Elem>> {
    check_order(n, ring.characteristic())?;
    let b = binom_table(ring, x, n);
    let entries = (0..n)
        .map(|i| (0..n).map(|j| if j >= i { b[j - i].clone() } else { ring.zero() }).collect())
        .collect();
    Ok(NilMat { n, entries })
}

/// `A(x) y` for bottom-up `y`, without forming the matrix.
pub fn apply_big_a<R: Ring>(ring: &R, x: &R::Elem, y: &[R::Elem]) -> Vec<R::Elem> {
    let n = y.len();
    let b = binom_table(ring, x, n);
    (0..n)
        .map(|j| {
            let terms: Vec<R::Elem> = (0..=j).map(|i| ring.mul(&b[j - i], &y[i])).collect();
            ring.sum(terms.iter())
        })
        .collect()
}

/// `v(x)` with `v(x)[j] = binom(x, j + 1)` (bottom-up), defined for `n <= p - 1`.
pub fn v_map<R: Ring>(ring: &R, x: &R::Elem, n: usize) -> Result<Vec<R::Elem>> {
    let p = ring.characteristic();
    if n + 1 > p as usize || n == 0 {
        return Err(Error::InvalidOrder { n, p });
    }
    let mut b = binom_table(ring, x, n + 1);
    b.remove(0);
    Ok(b)
}

/// `(x, y)` standing for `[[A(x), y], [0, 1]]`, `y` bottom-up.
#[derive(Clone, Debug, PartialEq)]
pub struct GElem<E> {
    pub x: E,
    pub y: Vec<E>,
}

pub fn g_identity<R: Ring>(ring: &R, n: usize) -> GElem<R::Elem> {
    GElem { x: ring.zero(), y: vec![ring.zero(); n] }
}

pub fn g_mul<R: Ring>(ring: &R, u: &GElem<R::Elem>, w: &GElem<R::Elem>) -> Result<GElem<R::Elem>> {
    let n = u.y.len();
    check_order(n, ring.characteristic())?;
    if w.y.len() != n {
        return Err(Error::InvalidOrder { n: w.y.len(), p: ring.characteristic() });
    }
    let ay = apply_big_a(ring, &u.x, &w.y);
    Ok(GElem { x: ring.add(&u.x, &w.x), y: ay.iter().zip(&u.y).map(|(s, t)| ring.add(s, t)).collect() })
}

pub fn g_inv<R: Ring>(ring: &R, u: &GElem<R::Elem>) -> Result<GElem<R::Elem>> {
    check_order(u.y.len(), ring.characteristic())?;
    let mx = ring.neg(&u.x);
    let y = apply_big_a(ring, &mx, &u.y).iter().map(|e| ring.neg(e)).collect();
    Ok(GElem { x: mx, y })
}

/// Largest `j` with `x = 0` and `y_1 = ... = y_j = 0`.
pub fn lcs_level<R: Ring>(ring: &R, u: &GElem<R::Elem>) -> usize {
    if !ring.is_zero(&u.x) {
        return 0;
    }
    u.y.iter().take_while(|e| ring.is_zero(e)).count()
}

pub fn commutator<R: Ring>(ring: &R, u: &GElem<R::Elem>, w: &GElem<R::Elem>) -> Result<GElem<R::Elem>> {
    let uw = g_mul(ring, u, w)?;
    let wu = g_mul(ring, w, u)?;
    g_mul(ring, &uw, &g_inv(ring, &wu)?)
}

/// Both sides of
/// `sum_{i=1}^{j} (-1)^(i-1) y / ((j-i)! (i-1)! (x + (i-1) y)) = prod_{i=1}^{j} y / (x + (i-1) y)`
/// over `F_q`, or `None` when a denominator vanishes.
pub fn sum_product_sides(
    x: &crate::gfq::FqElem,
    y: &crate::gfq::FqElem,
    j: usize,
) -> Option<(crate::gfq::FqElem, crate::gfq::FqElem)> {
    let f = x.field().clone();
    let p = f.p();
    if j == 0 || j >= p as usize {
        return None;
    }
    let fact = |k: usize| -> i64 { (1..=k as i64).product::<i64>() };
    let mut lhs = f.zero();
    let mut rhs = f.one();
    for i in 1..=j {
        let den = x.add(&y.scale_int(i as i64 - 1));
        if den.is_zero() {
            return None;
        }
        let den_inv = den.inv().ok()?;
        let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
        let c = f.from_int(sign * inv_mod((fact(j - i) * fact(i - 1)) as u64, p));
        lhs = lhs.add(&c.mul(y).mul(&den_inv));
        rhs = rhs.mul(&y.mul(&den_inv));
    }
    Some((lhs, rhs))
}

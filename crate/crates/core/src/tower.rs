//! Artin-Schreier layers `L = B[gamma] / (gamma^p - gamma - c)` over a valued
//! field `B`, kept in the basis `1, gamma, ..., gamma^(p-1)`.
//!
//! With `v_B(c) = -m` and `p` prime to `m` the layer is totally ramified and
//! `v_L(sum f_i gamma^i) = min_i (p v_B(f_i) - i m)`; the minimum is attained
//! once because the `i m` are distinct mod `p`. Layers are again valued fields,
//! so they stack.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::artin_schreier::{character_sweep, pth_root_of_leading, reduce, ClassStatus, ValuedField};
use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::gfq::{FqElem, FqField};
use crate::herbrand::{as_psi, q_frac, q_int, PLFunction, Q};
use crate::laurent::{LaurentField, LaurentSeries};
use crate::normalize::DefiningPair;
use crate::ring::Ring;
use crate::unipotent::binom_table;

/// `sum coords[i] gamma^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredElem<E> {
    pub coords: Vec<E>,
}

#[derive(Clone, Debug)]
pub struct ASLayer<B: ValuedField> {
    base: B,
    c: B::Elem,
    /// `t d/dt` of `gamma`, which is `-t dc/dt`.
    d_gamma: B::Elem,
    m: i64,
    p: u32,
    /// `(gamma + c)^i` for `i < p`, used for Frobenius.
    shifted_powers: Vec<LayeredElem<B::Elem>>,
    psi: PLFunction,
}

/// The layer `gamma^p - gamma = c` over `base`; `c` must already be reduced.
pub fn build_layer<B: ValuedField>(base: &B, c: &B::Elem) -> Result<ASLayer<B>> {
    let rep = reduce(base, c)?;
    if rep.status != ClassStatus::Ramified {
        return Err(Error::NotRamified(format!("class is {:?}", rep.status)));
    }
    if base.valuation(c)? != ExtInt::Fin(-rep.m) {
        return Err(Error::NotReduced(format!(
            "valuation {} but conductor {}",
            base.valuation(c)?,
            rep.m
        )));
    }
    let p = base.characteristic();
    let mut layer = ASLayer {
        base: base.clone(),
        c: c.clone(),
        d_gamma: base.neg(&base.t_derivation(c)),
        m: rep.m,
        p,
        shifted_powers: Vec::new(),
        psi: as_psi(p, rep.m)?,
    };
    let step = layer.add(&layer.gamma(), &layer.embed(c));
    let mut powers = vec![layer.one()];
    for i in 1..p as usize {
        powers.push(layer.mul(&powers[i - 1], &step));
    }
    layer.shifted_powers = powers;
    Ok(layer)
}

impl<B: ValuedField> ASLayer<B> {
    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn c(&self) -> &B::Elem {
        &self.c
    }

    /// The conductor of the layer.
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn e(&self) -> i64 {
        self.p as i64
    }

    /// Valuation of the different, `(m + 1)(p - 1)`.
    pub fn delta(&self) -> i64 {
        (self.m + 1) * (self.p as i64 - 1)
    }

    pub fn psi(&self) -> &PLFunction {
        &self.psi
    }

    pub fn embed(&self, x: &B::Elem) -> LayeredElem<B::Elem> {
        let mut coords = vec![self.base.zero(); self.p as usize];
        coords[0] = x.clone();
        LayeredElem { coords }
    }

    pub fn gamma(&self) -> LayeredElem<B::Elem> {
        let mut coords = vec![self.base.zero(); self.p as usize];
        coords[1 % self.p as usize] = self.base.one();
        LayeredElem { coords }
    }

    pub fn from_coords(&self, coords: Vec<B::Elem>) -> Result<LayeredElem<B::Elem>> {
        if coords.len() != self.p as usize {
            return Err(Error::InvalidIndex { j: coords.len(), n: self.p as usize });
        }
        Ok(LayeredElem { coords })
    }

    fn mul_base(&self, x: &LayeredElem<B::Elem>, f: &B::Elem) -> LayeredElem<B::Elem> {
        LayeredElem { coords: x.coords.iter().map(|c| self.base.mul(c, f)).collect() }
    }

    /// `sum phi(f_i) (gamma + delta)^i`; an automorphism when
    /// `phi(c) = c + delta^p - delta`.
    pub fn substitute(
        &self,
        x: &LayeredElem<B::Elem>,
        phi: &dyn Fn(&B::Elem) -> B::Elem,
        delta: &B::Elem,
    ) -> LayeredElem<B::Elem> {
        let step = self.add(&self.gamma(), &self.embed(delta));
        let mut acc = self.zero();
        for f in x.coords.iter().rev() {
            acc = self.add(&self.mul(&acc, &step), &self.embed(&phi(f)));
        }
        acc
    }

    /// `gamma -> gamma + s` for `s` in `F_p`.
    pub fn shift_by(&self, x: &LayeredElem<B::Elem>, s: u32) -> LayeredElem<B::Elem> {
        self.substitute(x, &|f| f.clone(), &self.base.from_int(s as i64))
    }

    /// The generator `gamma -> gamma + 1` of the Galois group.
    pub fn galois_shift(&self, x: &LayeredElem<B::Elem>) -> LayeredElem<B::Elem> {
        self.shift_by(x, 1)
    }

    /// `gamma^i t^j`-style uniformizer `monomial(1)`.
    pub fn layer_uniformizer(&self) -> LayeredElem<B::Elem> {
        self.monomial(1)
    }

    fn gamma_index(&self, v: i64) -> (usize, i64) {
        let p = self.p as i64;
        let m_inv = crate::gfq::pow_mod(self.m.rem_euclid(p) as u64, p as u64 - 2, p as u64) as i64;
        let i = ((-v).rem_euclid(p) * m_inv).rem_euclid(p);
        (i as usize, (v + i * self.m) / p)
    }

    fn argmin(&self, x: &LayeredElem<B::Elem>) -> Result<Option<(usize, i64)>> {
        let mut best: Option<(usize, i64)> = None;
        for (i, f) in x.coords.iter().enumerate() {
            if let ExtInt::Fin(v) = self.base.valuation(f)? {
                let w = self.p as i64 * v - i as i64 * self.m;
                if best.is_none_or(|(_, b)| w < b) {
                    best = Some((i, w));
                }
            }
        }
        Ok(best)
    }
}

impl<B: ValuedField> Ring for ASLayer<B> {
    type Elem = LayeredElem<B::Elem>;

    fn characteristic(&self) -> u32 {
        self.p
    }
    fn zero(&self) -> Self::Elem {
        LayeredElem { coords: vec![self.base.zero(); self.p as usize] }
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }
    fn from_int(&self, k: i64) -> Self::Elem {
        self.embed(&self.base.from_int(k))
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        LayeredElem { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| self.base.add(a, b)).collect() }
    }
    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        LayeredElem { coords: x.coords.iter().map(|a| self.base.neg(a)).collect() }
    }
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        LayeredElem { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| self.base.sub(a, b)).collect() }
    }
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let p = self.p as usize;
        let mut h = vec![self.base.zero(); 2 * p - 1];
        for (i, a) in x.coords.iter().enumerate() {
            if self.base.is_zero(a) {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if self.base.is_zero(b) {
                    continue;
                }
                h[i + j] = self.base.add(&h[i + j], &self.base.mul(a, b));
            }
        }
        // gamma^k = gamma^(k-p+1) + c gamma^(k-p)
        for k in (p..2 * p - 1).rev() {
            let top = std::mem::replace(&mut h[k], self.base.zero());
            if self.base.is_zero(&top) {
                continue;
            }
            h[k - p + 1] = self.base.add(&h[k - p + 1], &top);
            h[k - p] = self.base.add(&h[k - p], &self.base.mul(&self.c, &top));
        }
        h.truncate(p);
        LayeredElem { coords: h }
    }
    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.coords.iter().all(|a| self.base.is_zero(a))
    }
}

impl<B: ValuedField> ValuedField for ASLayer<B> {
    fn residue_field(&self) -> &FqField {
        self.base.residue_field()
    }
    fn valuation(&self, x: &Self::Elem) -> Result<ExtInt> {
        Ok(self.argmin(x)?.map_or(ExtInt::PosInf, |(_, v)| ExtInt::Fin(v)))
    }
    fn monomial(&self, v: i64) -> Self::Elem {
        let (i, j) = self.gamma_index(v);
        let mut coords = vec![self.base.zero(); self.p as usize];
        coords[i] = self.base.monomial(j);
        LayeredElem { coords }
    }
    fn leading_coeff(&self, x: &Self::Elem) -> Result<Option<FqElem>> {
        match self.argmin(x)? {
            Some((i, _)) => self.base.leading_coeff(&x.coords[i]),
            None => Ok(None),
        }
    }
    fn scale(&self, x: &Self::Elem, c: &FqElem) -> Self::Elem {
        LayeredElem { coords: x.coords.iter().map(|a| self.base.scale(a, c)).collect() }
    }
    fn frobenius(&self, x: &Self::Elem) -> Self::Elem {
        let mut acc = self.zero();
        for (f, power) in x.coords.iter().zip(&self.shifted_powers) {
            if self.base.is_zero(f) {
                continue;
            }
            acc = self.add(&acc, &self.mul_base(power, &self.base.frobenius(f)));
        }
        acc
    }
    fn residue(&self, x: &Self::Elem) -> FqElem {
        self.base.residue(&x.coords[0])
    }
    fn t_derivation(&self, x: &Self::Elem) -> Self::Elem {
        let p = self.p as usize;
        let mut coords: Vec<B::Elem> = x.coords.iter().map(|f| self.base.t_derivation(f)).collect();
        for i in 1..p {
            let term = self.base.mul(&self.base.mul(&self.base.from_int(i as i64), &x.coords[i]), &self.d_gamma);
            coords[i - 1] = self.base.add(&coords[i - 1], &term);
        }
        LayeredElem { coords }
    }
}

/// Exact valuation in a layer.
pub fn layer_valuation<B: ValuedField>(layer: &ASLayer<B>, x: &LayeredElem<B::Elem>) -> Result<ExtInt> {
    layer.valuation(x)
}

/// `v(sigma pi - pi) - 1` for the generator `sigma` and the layer uniformizer.
pub fn lower_jump_check<B: ValuedField>(layer: &ASLayer<B>) -> Result<i64> {
    let pi = layer.layer_uniformizer();
    let d = layer.sub(&layer.galois_shift(&pi), &pi);
    Ok(layer.finite_valuation(&d)? - 1)
}

/// `sum_{sigma != 1} v(sigma pi - pi)`, the valuation of the different.
pub fn different_check<B: ValuedField>(layer: &ASLayer<B>) -> Result<i64> {
    let pi = layer.layer_uniformizer();
    let mut total = 0;
    for s in 1..layer.p {
        total += layer.finite_valuation(&layer.sub(&layer.shift_by(&pi, s), &pi))?;
    }
    Ok(total)
}

/// Leading term of `x / y`: the value `lc(x) / lc(monomial(v(x) - v(y)) y)` and
/// the valuation `v(x) - v(y)`.
pub fn graded_quotient<F: ValuedField>(field: &F, x: &F::Elem, y: &F::Elem) -> Result<(i64, FqElem)> {
    let v = field.finite_valuation(x)? - field.finite_valuation(y)?;
    let lx = field.leading_coeff(x)?.ok_or(Error::DivisionByZero)?;
    let ly = field.leading_coeff(&field.mul(&field.monomial(v), y))?.ok_or(Error::DivisionByZero)?;
    Ok((v, lx.div(&ly)?))
}

/// Leading term of `lambda = (dt/t) / (dpi/pi) = pi / (t dpi/dt)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theta {
    /// `v_L(lambda) = m (p - 1)`: lambda lies in filtration index `e - delta - 1 = -m (p - 1)`.
    pub valuation: i64,
    pub value: FqElem,
}

pub fn theta_with<B: ValuedField>(layer: &ASLayer<B>, pi: &LayeredElem<B::Elem>) -> Result<Theta> {
    if layer.valuation(pi)? != ExtInt::Fin(1) {
        return Err(Error::NotApplicable("not a uniformizer".into()));
    }
    let (valuation, value) = graded_quotient(layer, pi, &layer.t_derivation(pi))?;
    Ok(Theta { valuation, value })
}

pub fn theta<B: ValuedField>(layer: &ASLayer<B>) -> Result<Theta> {
    theta_with(layer, &layer.layer_uniformizer())
}

/// The defining class `c` in degree `p m` lies in the kernel of
/// `x -> x^(1/p) + theta x`: returns `v_L(w + theta c)` with `w^p ~ c`, which
/// must exceed `-m`.
pub fn kernel_defect<B: ValuedField>(layer: &ASLayer<B>) -> Result<ExtInt> {
    let th = theta(layer)?;
    let c = layer.embed(&layer.c);
    let w = pth_root_of_leading(layer, &c)?;
    let theta_el = layer.scale(&layer.monomial(th.valuation), &th.value);
    layer.valuation(&layer.add(&w, &layer.mul(&theta_el, &c)))
}

pub fn kernel_check<B: ValuedField>(layer: &ASLayer<B>) -> Result<bool> {
    Ok(kernel_defect(layer)? > ExtInt::Fin(-layer.m))
}

pub type KLayer = ASLayer<LaurentField>;

/// `c_j = sum_{i <= j} binom(-a - alpha, j - i) b_i` over `L = K(alpha)`.
pub fn c_vector(pair: &DefiningPair, layer: &KLayer) -> Vec<LayeredElem<LaurentSeries>> {
    let x = layer.sub(&layer.neg(&layer.embed(&pair.a)), &layer.gamma());
    let binoms = binom_table(layer, &x, pair.n());
    let b: Vec<LayeredElem<LaurentSeries>> = pair.b.iter().map(|bi| layer.embed(bi)).collect();
    (0..pair.n())
        .map(|j| {
            let terms: Vec<_> = (0..=j).map(|i| layer.mul(&binoms[j - i], &b[i])).collect();
            layer.sum(terms.iter())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub m_a: i64,
    /// conductors `m'_j` of `c_j` over `L`, for `j = 2..n`.
    pub m_prime: Vec<i64>,
    /// `psi_{L/K}^-1(m'_j)`.
    #[serde(skip)]
    pub r: Vec<Q>,
}

pub fn base_layer(pair: &DefiningPair) -> Result<KLayer> {
    build_layer(&pair.base(), &pair.a)
}

/// Jumps `r_2..r_n` read off from conductors over `L`.
pub fn oracle(pair: &DefiningPair) -> Result<OracleReport> {
    let layer = base_layer(pair)?;
    let c = c_vector(pair, &layer);
    let inv = layer.psi().invert();
    let mut m_prime = Vec::new();
    let mut r = Vec::new();
    for (j, cj) in c.iter().enumerate().skip(1) {
        let rep = reduce(&layer, cj)?;
        if rep.status != ClassStatus::Ramified {
            return Err(Error::NotRamified(format!("c_{} is {:?} over L", j + 1, rep.status)));
        }
        r.push(inv.eval(&q_int(rep.m))?);
        m_prime.push(rep.m);
    }
    Ok(OracleReport { m_a: layer.m(), m_prime, r })
}

pub fn oracle_r(pair: &DefiningPair, j: usize) -> Result<Q> {
    if j < 2 || j > pair.n() {
        return Err(Error::InvalidIndex { j, n: pair.n() });
    }
    Ok(oracle(pair)?.r[j - 2].clone())
}

/// Lower jumps of a bi-quadratic-style tower `K(gamma_1, gamma_2)` with
/// `gamma_i^p - gamma_i = c_i`, `c_i` in `K`, measured directly and predicted
/// from the upper jumps through the composed Herbrand function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandCheck {
    pub upper: BTreeSet<i64>,
    pub lower_measured: BTreeSet<i64>,
    pub lower_predicted: BTreeSet<Q>,
}

pub fn abelian_tower_check(c1: &LaurentSeries, c2: &LaurentSeries) -> Result<HerbrandCheck> {
    let k = LaurentField::new(c1.field());
    let p = k.characteristic();
    let l1 = build_layer(&k, c1)?;
    let rep = reduce(&l1, &l1.embed(c2))?;
    if rep.status != ClassStatus::Ramified {
        return Err(Error::DegenerateGroup("second class does not stay ramified over the first layer".into()));
    }
    let w = rep.c_dblprime.clone();
    let top = build_layer(&l1, &rep.c_prime)?;
    let pi = top.layer_uniformizer();
    let mut lower_measured = BTreeSet::new();
    for s1 in 0..p {
        for s2 in 0..p {
            if s1 == 0 && s2 == 0 {
                continue;
            }
            let phi = |x: &LayeredElem<LaurentSeries>| l1.shift_by(x, s1);
            let delta = l1.add(&l1.sub(&w, &phi(&w)), &l1.from_int(s2 as i64));
            debug_assert_eq!(phi(top.c()), l1.add(top.c(), &l1.artin_schreier(&delta)));
            let moved = top.substitute(&pi, &phi, &delta);
            lower_measured.insert(top.finite_valuation(&top.sub(&moved, &pi))? - 1);
        }
    }
    let sweep = character_sweep(&k, c1, c2)?;
    let psi = top.psi().compose(l1.psi());
    let lower_predicted = sweep.u1.iter().map(|u| psi.eval(&q_int(*u))).collect::<Result<_>>()?;
    Ok(HerbrandCheck { upper: sweep.u1, lower_measured, lower_predicted })
}

/// Experimental: upper jumps of the whole degree `p^3` extension for `n = 2`,
/// from lower jumps `i(sigma) - 1` measured on an explicit three-step tower
/// `K < L < L(gamma_1) < L(gamma_1, gamma_2)` and converted with
/// `phi(u) = (1/|G|) sum_sigma min(i(sigma), u + 1) - 1`.
pub fn experimental_upper_jumps(pair: &DefiningPair) -> Result<BTreeSet<Q>> {
    if pair.n() != 2 || pair.p() > 3 {
        return Err(Error::NotApplicable("only n = 2 and p <= 3".into()));
    }
    let p = pair.p();
    let l = base_layer(pair)?;
    let c = c_vector(pair, &l);
    let rep1 = reduce(&l, &c[0])?;
    if rep1.status != ClassStatus::Ramified {
        return Err(Error::NotRamified("c_1 over L".into()));
    }
    let w1 = rep1.c_dblprime.clone();
    let l1 = build_layer(&l, &rep1.c_prime)?;
    let rep2 = reduce(&l1, &l1.embed(&c[1]))?;
    if rep2.status != ClassStatus::Ramified {
        return Err(Error::NotRamified("c_2 over L(gamma_1)".into()));
    }
    let w2 = rep2.c_dblprime.clone();
    let l2 = build_layer(&l1, &rep2.c_prime)?;
    let pi = l2.layer_uniformizer();
    // gamma_1 = gamma_1' + w_1 inside L(gamma_1)
    let gamma1 = l1.add(&l1.gamma(), &l1.embed(&w1));

    let mut lengths: Vec<i64> = Vec::new();
    for x in 0..p {
        for y1 in 0..p {
            for y2 in 0..p {
                if x == 0 && y1 == 0 && y2 == 0 {
                    continue;
                }
                let xs = l.from_int(x as i64);
                // alpha -> alpha + x
                let sigma_l = |f: &LayeredElem<LaurentSeries>| l.shift_by(f, x);
                // gamma_1 -> gamma_1 + y_1
                let delta1 = l.add(&l.sub(&w1, &sigma_l(&w1)), &l.from_int(y1 as i64));
                let sigma_l1 = |f: &LayeredElem<LayeredElem<LaurentSeries>>| l1.substitute(f, &sigma_l, &delta1);
                // gamma_2 -> gamma_2 + y_2 - x (gamma_1 + y_1)
                let shifted_g1 = l1.add(&gamma1, &l1.from_int(y1 as i64));
                let delta2 = l1.sub(
                    &l1.add(&l1.sub(&w2, &sigma_l1(&w2)), &l1.from_int(y2 as i64)),
                    &l1.mul(&l1.embed(&xs), &shifted_g1),
                );
                if sigma_l1(l2.c()) != l1.add(l2.c(), &l1.artin_schreier(&delta2)) {
                    return Err(Error::NotApplicable("group action is not compatible with the tower".into()));
                }
                let moved = l2.substitute(&pi, &sigma_l1, &delta2);
                lengths.push(l2.finite_valuation(&l2.sub(&moved, &pi))?);
            }
        }
    }
    let order = (p as i64).pow(3);
    let mut upper = BTreeSet::new();
    for &i in &lengths {
        let u = i - 1;
        let total: i64 = lengths.iter().map(|&k| k.min(u + 1)).sum::<i64>() + (u + 1);
        upper.insert(q_frac(total, order) - q_int(1));
    }
    Ok(upper)
}

//! Moving a defining pair `(a, b)` inside its class until `a` and every `b_j`
//! are reduced and the leading terms of `a` and `b_1` are untangled.
//!
//! The extension is cut out by `F(Y) = T Y` with `T = (a, b)` and `Y = (x, y)`
//! in `G`, i.e. `x^p - x = a` and `F(y) = A(a) y + b`. Replacing `T` by
//! `F(S) T S^-1` for any `S` in `G(K)` describes the same extension.

use serde::Serialize;

use crate::artin_schreier::{reduce, ClassStatus};
use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::gfq::{FqElem, FqField};
use crate::laurent::{LaurentField, LaurentSeries};
use crate::unipotent::{apply_big_a, binom_table, v_map};

/// `a` and the bottom-up vector `b = (b_1, ..., b_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningPair {
    pub a: LaurentSeries,
    pub b: Vec<LaurentSeries>,
    pub field: FqField,
}

impl DefiningPair {
    pub fn new(a: LaurentSeries, b: Vec<LaurentSeries>) -> Result<Self> {
        let field = a.field().clone();
        if b.iter().any(|x| *x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let p = field.p();
        if b.len() < 2 || b.len() > p as usize {
            return Err(Error::InvalidOrder { n: b.len(), p });
        }
        Ok(DefiningPair { a, b, field })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn base(&self) -> LaurentField {
        LaurentField::new(&self.field)
    }

    /// `m_a = -v(a)`.
    pub fn m_a(&self) -> Result<ExtInt> {
        Ok(-self.a.valuation()?)
    }

    /// `m_j = -v(b_j)` for `j = 1..n`.
    pub fn m(&self) -> Result<Vec<ExtInt>> {
        self.b.iter().map(|x| Ok(-x.valuation()?)).collect()
    }
}

/// Operation (I): `(a + P(s), A(s^p) b)` with `s` minus the reduction witness of `a`.
pub fn op1_fix_a(pair: &DefiningPair) -> Result<DefiningPair> {
    let k = pair.base();
    let rep = reduce(&k, &pair.a)?;
    let s = rep.c_dblprime.neg();
    let b = apply_big_a(&k, &s.pth_power(), &pair.b);
    Ok(DefiningPair { a: rep.c_prime, b, field: pair.field.clone() })
}

/// Operation (II): reduce `b_1, b_2, ...` in turn, where the correction of
/// component `j` depends only on `tau_1..tau_{j-1}`.
pub fn op2_fix_b(pair: &DefiningPair) -> Result<DefiningPair> {
    let k = pair.base();
    let n = pair.n();
    let binoms = binom_table(&k, &pair.a, n);
    let mut tau: Vec<LaurentSeries> = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = pair.b[j].clone();
        for (i, t) in tau.iter().enumerate() {
            acc = acc.sub(&binoms[j - i].mul(t));
        }
        let rep = reduce(&k, &acc)?;
        tau.push(rep.c_dblprime.neg());
        b.push(rep.c_prime);
    }
    Ok(DefiningPair { a: pair.a.clone(), b, field: pair.field.clone() })
}

/// `i` with `lc(b_1) = i lc(a)`, when `a` and `b_1` have the same pole order and
/// `F_p`-dependent leading coefficients.
fn dependent_ratio(pair: &DefiningPair) -> Result<Option<u32>> {
    let (Some((va, la)), Some((vb, lb))) = (pair.a.leading()?, pair.b[0].leading()?) else {
        return Ok(None);
    };
    let p = pair.p() as i64;
    if va != vb || va >= 0 || va % p == 0 {
        return Ok(None);
    }
    Ok(lb.div(&la)?.as_prime())
}

/// Operation (III): `(a, b - i v(a))`.
pub fn op3_untangle(pair: &DefiningPair) -> Result<DefiningPair> {
    let n = pair.n();
    let p = pair.p();
    if n > p as usize - 1 {
        return Err(Error::NotApplicable(format!("n = {n} > p - 1")));
    }
    let Some(i) = dependent_ratio(pair)? else {
        return Err(Error::NotApplicable("leading terms of a and b_1 are already independent".into()));
    };
    let k = pair.base();
    let v = v_map(&k, &pair.a, n)?;
    let i = pair.field.from_int(i as i64);
    let b = pair.b.iter().zip(&v).map(|(bj, vj)| bj.sub(&vj.scale(&i))).collect();
    Ok(DefiningPair { a: pair.a.clone(), b, field: pair.field.clone() })
}

fn require_ramified(k: &LaurentField, x: &LaurentSeries, name: &str) -> Result<()> {
    match reduce(k, x)?.status {
        ClassStatus::Ramified => Ok(()),
        ClassStatus::Trivial => Err(Error::DegenerateGroup(format!("{name} lies in P(K)"))),
        ClassStatus::Unramified => Err(Error::NotTotallyRamified(format!("{name} defines an unramified class"))),
    }
}

fn op2_checked(pair: &DefiningPair) -> Result<DefiningPair> {
    let out = op2_fix_b(pair)?;
    let before = pair.b[0].valuation()?;
    let after = out.b[0].valuation()?;
    assert!(after >= before || before >= ExtInt::Fin(0), "operation (II) increased m_1");
    Ok(out)
}

/// Applies (I), (II) and, when the leading terms of `a` and `b_1` are
/// dependent, (III) followed by (II) once more.
pub fn normalize(pair: &DefiningPair) -> Result<DefiningPair> {
    let k = pair.base();
    let mut cur = op1_fix_a(pair)?;
    require_ramified(&k, &cur.a, "a")?;
    cur = op2_checked(&cur)?;
    require_ramified(&k, &cur.b[0], "b_1")?;
    if cur.n() < cur.p() as usize && dependent_ratio(&cur)?.is_some() {
        cur = op3_untangle(&cur)?;
        cur = op2_checked(&cur)?;
        require_ramified(&k, &cur.b[0], "b_1")?;
    }
    let report = check_conditions(&cur)?;
    if !report.all() {
        return Err(Error::NotNormalized(format!(
            "conditions after normalization: (i) {}, (ii) {}, (iii) {}",
            report.cond_i, report.cond_ii, report.cond_iii
        )));
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub m_a: ExtInt,
    pub m: Vec<ExtInt>,
    /// `m_a` and `m_1` positive and prime to `p`.
    pub cond_i: bool,
    /// every positive `m_j` is prime to `p`.
    pub cond_ii: bool,
    /// for `n <= p - 1` and `m_a = m_1`, the leading coefficients are `F_p`-independent.
    pub cond_iii: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.cond_i && self.cond_ii && self.cond_iii
    }
}

pub fn check_conditions(pair: &DefiningPair) -> Result<ConditionReport> {
    let p = pair.p() as i64;
    let m_a = pair.m_a()?;
    let m = pair.m()?;
    let good = |x: ExtInt| matches!(x, ExtInt::Fin(v) if v > 0 && v % p != 0);
    let cond_i = good(m_a) && good(m[0]);
    let cond_ii = m.iter().all(|x| match x {
        ExtInt::Fin(v) if *v > 0 => v % p != 0,
        _ => true,
    });
    let cond_iii = if (pair.n() as i64) < p && m_a == m[0] && cond_i {
        let la: FqElem = pair.a.leading()?.expect("nonzero").1;
        let lb: FqElem = pair.b[0].leading()?.expect("nonzero").1;
        lb.div(&la)?.as_prime().is_none()
    } else {
        true
    };
    Ok(ConditionReport { m_a, m, cond_i, cond_ii, cond_iii })
}

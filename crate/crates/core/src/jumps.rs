//! Upper ramification jumps from the closed formula in terms of
//! `omega = A(-a) db`.

use serde::{Serialize, Serializer};

use crate::artin_schreier::character_sweep;
use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::herbrand::{as_psi, q_frac, q_int, Rational, Q};
use crate::laurent::{DifferentialRep, LaurentSeries};
use crate::normalize::{check_conditions, DefiningPair};
use crate::unipotent::apply_big_a;

fn ser_q_vec<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    let wrapped: Vec<Rational> = v.iter().cloned().map(Rational).collect();
    wrapped.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpProfile {
    pub n: usize,
    pub m_a: i64,
    /// `-v(b_j)`, `null` for zero components.
    pub m: Vec<ExtInt>,
    /// `-v(omega_i)`, `null` for zero differentials.
    pub omega_val: Vec<ExtInt>,
    /// `r_1 < ... < r_n`.
    #[serde(serialize_with = "ser_q_vec")]
    pub r: Vec<Q>,
    /// The full upper jump set, sorted.
    #[serde(rename = "U", serialize_with = "ser_q_vec")]
    pub u: Vec<Q>,
}

/// `omega = A(-a) db`, componentwise, as `g dt/t` representations.
pub fn omega(pair: &DefiningPair) -> Vec<DifferentialRep> {
    let k = pair.base();
    let db: Vec<LaurentSeries> = pair.b.iter().map(|x| x.dlog_derivative().g).collect();
    apply_big_a(&k, &pair.a.neg(), &db).into_iter().map(|g| DifferentialRep { g }).collect()
}

/// `-v_K(omega_i)` for every component.
pub fn omega_valuations(pair: &DefiningPair) -> Result<Vec<ExtInt>> {
    omega(pair).iter().map(|w| w.neg_valuation()).collect()
}

fn positive(x: ExtInt, what: &str) -> Result<i64> {
    match x {
        ExtInt::Fin(v) if v > 0 => Ok(v),
        _ => Err(Error::NotNormalized(format!("{what} = {x} is not a positive conductor"))),
    }
}

fn check_level(pair: &DefiningPair, j: usize) -> Result<()> {
    if j < 2 || j > pair.n() {
        return Err(Error::InvalidIndex { j, n: pair.n() });
    }
    Ok(())
}

fn formula(p: i64, m_a: i64, m_1: i64, omega_val: &[ExtInt], j: usize) -> Q {
    let j = j as i64;
    let mut best = q_frac((j + p - 2) * m_a + m_1, p);
    for (idx, w) in omega_val.iter().take(j as usize).enumerate() {
        if let ExtInt::Fin(w) = w {
            let i = idx as i64 + 1;
            let term = q_frac((j - i) * m_a, p) + q_int(*w);
            if term > best {
                best = term;
            }
        }
    }
    best
}

/// `r_j = max( max_{i<=j} ((j-i)/p m_a - v(omega_i)), ((j+p-2) m_a + m_1)/p )`.
pub fn r_top(pair: &DefiningPair, j: usize) -> Result<Q> {
    check_level(pair, j)?;
    let m_a = positive(pair.m_a()?, "m_a")?;
    let m_1 = positive(-pair.b[0].valuation()?, "m_1")?;
    Ok(formula(pair.p() as i64, m_a, m_1, &omega_valuations(pair)?, j))
}

/// `r_2 = max(-v(db_2 - a db_1), m_a/p + m_1, m_a + m_1/p)` for `n = 2`.
pub fn r2_special(pair: &DefiningPair) -> Result<Q> {
    if pair.n() != 2 {
        return Err(Error::InvalidIndex { j: 2, n: pair.n() });
    }
    let p = pair.p() as i64;
    let m_a = positive(pair.m_a()?, "m_a")?;
    let m_1 = positive(-pair.b[0].valuation()?, "m_1")?;
    let db1 = pair.b[0].dlog_derivative();
    let db2 = pair.b[1].dlog_derivative();
    let w = DifferentialRep { g: db2.g.sub(&pair.a.mul(&db1.g)) };
    let mut best = std::cmp::max(q_frac(m_a, p) + q_int(m_1), q_int(m_a) + q_frac(m_1, p));
    if let ExtInt::Fin(v) = w.neg_valuation()? {
        best = best.max(q_int(v));
    }
    Ok(best)
}

/// `psi^-1` of `max( max_i ((j-i-p+1) m_a - p v(omega_i)), (j-1) m_a + m_1 )`,
/// an upper bound for the conductor pulled back from the field `K(alpha)`.
pub fn s_diag(pair: &DefiningPair, j: usize) -> Result<Q> {
    check_level(pair, j)?;
    let p = pair.p() as i64;
    let m_a = positive(pair.m_a()?, "m_a")?;
    let m_1 = positive(-pair.b[0].valuation()?, "m_1")?;
    let omega_val = omega_valuations(pair)?;
    let jj = j as i64;
    let mut x = (jj - 1) * m_a + m_1;
    for (idx, w) in omega_val.iter().take(j).enumerate() {
        if let ExtInt::Fin(w) = w {
            let i = idx as i64 + 1;
            x = x.max((jj - i - p + 1) * m_a + p * w);
        }
    }
    as_psi(pair.p(), m_a)?.invert().eval(&q_int(x))
}

/// `U = {conductors of i a + j b_1} u {r_2, ..., r_n}` with `r_1 = max` of the first set.
pub fn jump_set(pair: &DefiningPair) -> Result<JumpProfile> {
    let report = check_conditions(pair)?;
    if !report.all() {
        return Err(Error::NotNormalized(format!(
            "conditions: (i) {}, (ii) {}, (iii) {}",
            report.cond_i, report.cond_ii, report.cond_iii
        )));
    }
    let k = pair.base();
    let sweep = character_sweep(&k, &pair.a, &pair.b[0])?;
    let m_a = positive(report.m_a, "m_a")?;
    let m_1 = positive(report.m[0], "m_1")?;
    let omega_val = omega_valuations(pair)?;
    let p = pair.p() as i64;
    let mut r = vec![q_int(sweep.r1)];
    for j in 2..=pair.n() {
        r.push(formula(p, m_a, m_1, &omega_val, j));
    }
    if let Some(w) = r.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::MonotonicityViolation(format!("{} >= {}", w[0], w[1])));
    }
    let mut u: Vec<Q> = sweep.u1.iter().map(|m| q_int(*m)).chain(r[1..].iter().cloned()).collect();
    u.sort();
    u.dedup();
    Ok(JumpProfile { n: pair.n(), m_a, m: report.m, omega_val, r, u })
}

//! A two-parameter family of defining pairs with known jumps:
//! `a = t^-(eta p + 1)` and `b_j = eps f_j(t)` where
//! `f_j' = -binom(x^-(eta p + 1), j - 1) x^-(eta' p + 2)`.

use crate::error::{Error, Result};
use crate::gfq::{FqElem, FqField};
use crate::herbrand::{q_frac, q_int, Q};
use crate::laurent::LaurentSeries;
use crate::normalize::DefiningPair;

/// Coefficients of `binom(X, i)` as a polynomial in `X` over `F_p`, low degree first.
fn binom_coeffs(field: &FqField, i: usize) -> Vec<FqElem> {
    let mut poly = vec![field.one()];
    for k in 0..i {
        // multiply by (X - k) / (k + 1)
        let c = field.from_int(field.inv_mod_p(k as i64 + 1) as i64);
        let mut next = vec![field.zero(); poly.len() + 1];
        for (e, x) in poly.iter().enumerate() {
            next[e + 1] = next[e + 1].add(&x.mul(&c));
            next[e] = next[e].sub(&x.mul(&c).scale_int(k as i64));
        }
        poly = next;
    }
    poly
}

/// The pair for parameters `(eta, eta')` at order `n <= p - 1`, with `eps` not in `F_p`.
pub fn example_pair(field: &FqField, n: usize, eta: i64, eta_prime: i64, eps: &FqElem) -> Result<DefiningPair> {
    let p = field.p() as i64;
    if n < 2 || n as i64 > p - 1 {
        return Err(Error::InvalidOrder { n, p: field.p() });
    }
    if eps.as_prime().is_some() {
        return Err(Error::NotApplicable("eps must lie outside F_p".into()));
    }
    let m_a = eta * p + 1;
    let a = LaurentSeries::t_pow(field, -m_a);
    let mut b = Vec::with_capacity(n);
    for j in 1..=n {
        let mut terms = Vec::new();
        for (k, c) in binom_coeffs(field, j - 1).into_iter().enumerate() {
            // -c x^-e integrates to c x^-(e-1) / (e-1)
            let e = k as i64 * m_a + eta_prime * p + 2;
            let inv = field.from_int(field.inv_mod_p(e - 1) as i64);
            terms.push((-(e - 1), c.mul(&inv).mul(eps)));
        }
        b.push(LaurentSeries::from_terms(field, terms));
    }
    DefiningPair::new(a, b)
}

/// `r_j = (j - 1)(eta + 1/p) + eta' + 1 + (p - 1) max(eta, eta')`.
pub fn expected_r(p: u32, j: usize, eta: i64, eta_prime: i64) -> Q {
    let p = p as i64;
    let j = j as i64;
    q_int(j - 1) * (q_int(eta) + q_frac(1, p)) + q_int(eta_prime + 1 + (p - 1) * eta.max(eta_prime))
}

/// `{eta p + 1, eta' p + 1}`.
pub fn expected_u1(p: u32, eta: i64, eta_prime: i64) -> Vec<i64> {
    let p = p as i64;
    let mut u = vec![eta * p + 1, eta_prime * p + 1];
    u.sort();
    u.dedup();
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unipotent::{binom_poly, v_map};

    #[test]
    fn binomial_coefficients_match_evaluation() {
        let f = FqField::prime_field(7).unwrap();
        for i in 0..7 {
            let coeffs = binom_coeffs(&f, i);
            for x in f.elements() {
                let val = coeffs.iter().rev().fold(f.zero(), |acc, c| acc.mul(&x).add(c));
                assert_eq!(val, binom_poly(&f, &x, i).unwrap());
            }
        }
    }

    #[test]
    fn first_component_is_a_monomial() {
        let f9 = FqField::standard(3, 2).unwrap();
        let g = f9.generator();
        let pair = example_pair(&f9, 2, 1, 0, &g).unwrap();
        assert_eq!(pair.a, LaurentSeries::t_pow(&f9, -4));
        assert_eq!(pair.b[0], LaurentSeries::monomial(g.clone(), -1));
        assert!(example_pair(&f9, 2, 1, 0, &f9.one()).is_err());
    }

    #[test]
    fn derivative_matches_definition() {
        // t db/dt = -eps A(a) v(1) t^-(eta' p + 1)
        let f25 = FqField::standard(5, 2).unwrap();
        let eps = f25.generator();
        let pair = example_pair(&f25, 4, 1, 2, &eps).unwrap();
        let k = pair.base();
        let v1 = v_map(&f25, &f25.one(), 4).unwrap();
        let scale = LaurentSeries::monomial(eps.neg(), -(2 * 5 + 1));
        let col: Vec<LaurentSeries> = v1.iter().map(|c| scale.scale(c)).collect();
        let expected = crate::unipotent::apply_big_a(&k, &pair.a, &col);
        let got: Vec<LaurentSeries> = pair.b.iter().map(|x| x.dlog_derivative().g).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn expected_values() {
        assert_eq!(expected_r(3, 2, 1, 0), q_frac(13, 3));
        assert_eq!(expected_r(5, 3, 0, 0), q_frac(7, 5));
        assert_eq!(expected_u1(3, 1, 0), vec![1, 4]);
        assert_eq!(expected_u1(3, 2, 2), vec![7]);
    }
}

//! Python bindings: defining pairs, normalization, jump profiles, the
//! conductor oracle and the random self-test.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyList;

use ramify::cli::{selftest as run_selftest, verify_pair, Coeff, ProblemFile};
use ramify::herbrand::{as_psi, Q};
use ramify::jumps::{jump_set, r_top};
use ramify::normalize::{check_conditions, normalize, DefiningPair};
use ramify::tower::{build_layer, different_check, kernel_check, lower_jump_check, oracle};
use ramify::{FqField, LaurentField, LaurentSeries};

create_exception!(ramify_py, RamifyError, PyException);

fn err(e: ramify::Error) -> PyErr {
    RamifyError::new_err(format!("{}: {e}", e.code()))
}

fn fraction<'py>(py: Python<'py>, q: &Q) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format!("{}/{}", q.numer(), q.denom()),))
}

fn fractions<'py>(py: Python<'py>, qs: &[Q]) -> PyResult<Bound<'py, PyList>> {
    let items = qs.iter().map(|q| fraction(py, q)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn from_json<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

fn to_series(raw: Vec<(i64, Vec<i64>)>) -> Vec<(i64, Coeff)> {
    raw.into_iter().map(|(e, c)| (e, Coeff::Vector(c))).collect()
}

/// A defining pair `(a, b_1..b_n)` over `F_{p^d}((t))`; series are lists of
/// `(exponent, [coefficients])`.
#[pyclass(name = "Pair", module = "ramify_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyPair {
    inner: DefiningPair,
}

#[pymethods]
impl PyPair {
    #[new]
    fn new(p: u32, d: usize, modulus: Vec<i64>, a: Vec<(i64, Vec<i64>)>, b: Vec<Vec<(i64, Vec<i64>)>>) -> PyResult<Self> {
        let file = ProblemFile {
            p,
            d,
            modulus,
            n: b.len(),
            a: to_series(a),
            b: b.into_iter().map(to_series).collect(),
            precision: None,
            seed: None,
        };
        Ok(PyPair { inner: file.pair().map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = ProblemFile::from_json(text).map_err(err)?;
        Ok(PyPair { inner: file.pair().map_err(err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&ProblemFile::from_pair(&self.inner, None, None)).expect("serializable")
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn normalize(&self) -> PyResult<Self> {
        Ok(PyPair { inner: normalize(&self.inner).map_err(err)? })
    }

    fn conditions<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = check_conditions(&self.inner).map_err(err)?;
        from_json(py, &serde_json::to_value(report).expect("serializable"))
    }

    /// `(r, U)` as lists of `Fraction`.
    fn jumps<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyList>)> {
        let prof = jump_set(&self.inner).map_err(err)?;
        Ok((fractions(py, &prof.r)?, fractions(py, &prof.u)?))
    }

    fn r_top<'py>(&self, py: Python<'py>, j: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &r_top(&self.inner, j).map_err(err)?)
    }

    /// `(m', r)` from conductors over `K(alpha)`.
    fn oracle<'py>(&self, py: Python<'py>) -> PyResult<(Vec<i64>, Bound<'py, PyList>)> {
        let rep = oracle(&self.inner).map_err(err)?;
        Ok((rep.m_prime.clone(), fractions(py, &rep.r)?))
    }

    fn verify(&self) -> PyResult<bool> {
        Ok(verify_pair(&self.inner).map_err(err)?.all_match)
    }

    fn __repr__(&self) -> String {
        format!("Pair(a={}, b=[{}])", self.inner.a, self.inner.b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
    }
}

/// Family pair with `a = t^-(eta p + 1)` over `F_{p^2}`, `eps` the generator.
#[pyfunction]
fn example_pair(p: u32, n: usize, eta: i64, eta_prime: i64) -> PyResult<PyPair> {
    let field = FqField::standard(p, 2).map_err(err)?;
    let inner = ramify::family::example_pair(&field, n, eta, eta_prime, &field.generator()).map_err(err)?;
    Ok(PyPair { inner })
}

/// `psi(x)` for a degree-`p` extension with conductor `m`.
#[pyfunction]
fn psi<'py>(py: Python<'py>, p: u32, m: i64, num: i64, den: i64) -> PyResult<Bound<'py, PyAny>> {
    let f = as_psi(p, m).map_err(err)?;
    fraction(py, &f.eval(&ramify::herbrand::q_frac(num, den)).map_err(err)?)
}

/// `(lower jump, different, theta kernel holds)` for `gamma^p - gamma = t^-m` over `F_p((t))`.
#[pyfunction]
fn layer_checks(p: u32, m: i64) -> PyResult<(i64, i64, bool)> {
    let field = FqField::prime_field(p).map_err(err)?;
    let k = LaurentField::new(&field);
    let layer = build_layer(&k, &LaurentSeries::t_pow(&field, -m)).map_err(err)?;
    Ok((
        lower_jump_check(&layer).map_err(err)?,
        different_check(&layer).map_err(err)?,
        kernel_check(&layer).map_err(err)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (p, n, count, seed, d = 2))]
fn selftest<'py>(py: Python<'py>, p: u32, n: usize, count: usize, seed: u64, d: usize) -> PyResult<Bound<'py, PyAny>> {
    let s = run_selftest(p, n, d, count, seed).map_err(err)?;
    from_json(py, &serde_json::to_value(s).expect("serializable"))
}

#[pymodule]
fn ramify_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RamifyError", m.py().get_type::<RamifyError>())?;
    m.add_class::<PyPair>()?;
    m.add_function(wrap_pyfunction!(example_pair, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(layer_checks, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_pair_through_python_types() {
        Python::initialize();
        Python::attach(|py| {
            let pair = example_pair(3, 2, 1, 0).unwrap();
            let (r, u) = pair.jumps(py).unwrap();
            assert_eq!(u.len(), 3);
            assert_eq!(r.get_item(1).unwrap().str().unwrap().to_string(), "13/3");
            assert!(pair.verify().unwrap());
            let back = PyPair::from_json(&pair.to_json()).unwrap();
            assert_eq!(back.inner, pair.inner);
        });
    }

    #[test]
    fn errors_carry_codes() {
        let e = PyPair::new(3, 1, vec![0, 1], vec![(-1, vec![1])], vec![vec![(-1, vec![2])], vec![]])
            .unwrap()
            .normalize()
            .err()
            .unwrap();
        Python::initialize();
        Python::attach(|py| assert!(e.value(py).to_string().starts_with("DegenerateGroup")));
    }
}

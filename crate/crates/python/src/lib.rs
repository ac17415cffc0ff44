//! Python bindings: a `Universe` of atoms, conditional events over it, and the
//! coherence, entailment and validity checks. Rationals cross the boundary as
//! `fractions.Fraction`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use condlogic::coherence::{self, Assessment};
use condlogic::compound;
use condlogic::entailment::Reasoner;
use condlogic::logic::{self, ConditionalEvent, Universe};
use condlogic::rational::{self, Rational};
use condlogic::script::{self, RunOptions};
use condlogic::trivalent::{self, ValidityMode};
use condlogic::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational::render(q),))
}

fn fractions<'py>(py: Python<'py>, qs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    qs.iter().map(|q| fraction(py, q)).collect()
}

/// Accepts `Fraction`, `int` or a `"n/d"` string.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    rational::parse(&text).map_err(err)
}

fn to_rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(to_rational).collect()
}

/// Atom names with their truth values at a violating world.
type Witness = Vec<(String, bool)>;

/// A conditional event `E | H` tied to the universe it was built in.
#[pyclass(name = "Cond", module = "condlogic_py", skip_from_py_object)]
#[derive(Clone)]
struct PyCond {
    universe: Universe,
    inner: ConditionalEvent,
}

#[pymethods]
impl PyCond {
    #[getter]
    fn consequent(&self) -> String {
        self.universe.render(self.inner.consequent())
    }

    #[getter]
    fn antecedent(&self) -> String {
        self.universe.render(self.inner.antecedent())
    }

    fn negate(&self) -> PyCond {
        PyCond { universe: self.universe.clone(), inner: self.inner.negate() }
    }

    /// `"T"`, `"F"` or `"V"` at the world with the given index.
    fn value_at(&self, world: usize) -> PyResult<&'static str> {
        if world >= self.universe.world_count() {
            return Err(PyValueError::new_err(format!("world {world} is out of range")));
        }
        Ok(match self.universe.eval_cond(&self.inner, self.universe.world(world)) {
            trivalent::TrivalentValue::True => "T",
            trivalent::TrivalentValue::False => "F",
            trivalent::TrivalentValue::Void => "V",
        })
    }

    fn __eq__(&self, other: &PyCond) -> bool {
        self.universe == other.universe && self.universe.cond_equivalent(&self.inner, &other.inner)
    }

    fn __str__(&self) -> String {
        self.universe.render_cond(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Cond('{}')", self.universe.render_cond(&self.inner))
    }
}

#[pyclass(name = "Universe", module = "condlogic_py")]
struct PyUniverse {
    inner: Universe,
}

impl PyUniverse {
    fn term(&self, obj: &Bound<'_, PyAny>) -> PyResult<ConditionalEvent> {
        if let Ok(c) = obj.extract::<PyRef<'_, PyCond>>() {
            if c.universe != self.inner {
                return Err(PyValueError::new_err("conditional belongs to a different universe"));
            }
            return Ok(c.inner.clone());
        }
        let text: String = obj.extract()?;
        let t = script::parse_term(self.inner.names(), &text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        script::lower_term(&self.inner, &t).map_err(err)
    }

    fn family(&self, objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<ConditionalEvent>> {
        objs.iter().map(|o| self.term(o)).collect()
    }

    fn wrap(&self, c: ConditionalEvent) -> PyCond {
        PyCond { universe: self.inner.clone(), inner: c }
    }
}

#[pymethods]
impl PyUniverse {
    #[new]
    fn new(atoms: Vec<String>) -> PyResult<Self> {
        Ok(PyUniverse { inner: Universe::new(atoms).map_err(err)? })
    }

    #[getter]
    fn atoms(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn world_count(&self) -> usize {
        self.inner.world_count()
    }

    /// Parses `"E given H"` or a bare event.
    fn cond(&self, text: &Bound<'_, PyAny>) -> PyResult<PyCond> {
        Ok(self.wrap(self.term(text)?))
    }

    fn gn_implies(&self, c1: &Bound<'_, PyAny>, c2: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(logic::gn_implies(&self.inner, &self.term(c1)?, &self.term(c2)?))
    }

    fn quasi_conjunction(&self, family: Vec<Bound<'_, PyAny>>) -> PyResult<PyCond> {
        Ok(self.wrap(logic::quasi_conjunction(&self.family(&family)?).map_err(err)?))
    }

    /// `{"coherent": bool, "layers": [[weights...], ...]}`.
    fn coherence<'py>(
        &self,
        py: Python<'py>,
        family: Vec<Bound<'py, PyAny>>,
        values: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let fam = self.family(&family)?;
        let vals = to_rationals(&values)?;
        let v =
            coherence::check_coherence(&self.inner, &Assessment::from_parts(&fam, &vals).map_err(err)?).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("coherent", v.coherent)?;
        let layers = v.layers.iter().map(|l| fractions(py, &l.weights)).collect::<PyResult<Vec<_>>>()?;
        out.set_item("layers", layers)?;
        Ok(out)
    }

    fn is_coherent(&self, family: Vec<Bound<'_, PyAny>>, values: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        let a = Assessment::from_parts(&self.family(&family)?, &to_rationals(&values)?).map_err(err)?;
        Ok(coherence::check_coherence(&self.inner, &a).map_err(err)?.coherent)
    }

    /// Coherent extension `(lo, hi)` of the assessment to `target`.
    fn extension<'py>(
        &self,
        py: Python<'py>,
        family: Vec<Bound<'py, PyAny>>,
        values: Vec<Bound<'py, PyAny>>,
        target: &Bound<'py, PyAny>,
    ) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let a = Assessment::from_parts(&self.family(&family)?, &to_rationals(&values)?).map_err(err)?;
        let i = coherence::extension_interval(&self.inner, &a, &self.term(target)?).map_err(err)?;
        Ok((fraction(py, &i.lo)?, fraction(py, &i.hi)?))
    }

    fn p_consistent(&self, family: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        Reasoner::new(&self.inner).p_consistent(&self.family(&family)?).map_err(err)
    }

    fn p_entails(&self, family: Vec<Bound<'_, PyAny>>, conclusion: &Bound<'_, PyAny>) -> PyResult<bool> {
        let r = Reasoner::new(&self.inner);
        Ok(r.p_entails(&self.family(&family)?, &self.term(conclusion)?).map_err(err)?.entails)
    }

    /// `(valid, witness)` where the witness maps atom names to truth values.
    fn validity(
        &self,
        mode: &str,
        premises: Vec<Bound<'_, PyAny>>,
        conclusion: &Bound<'_, PyAny>,
    ) -> PyResult<(bool, Option<Witness>)> {
        let mode: ValidityMode = mode.parse().map_err(err)?;
        let v = trivalent::check_validity(&self.inner, mode, &self.family(&premises)?, &self.term(conclusion)?)
            .map_err(err)?;
        let witness =
            v.witness.map(|w| (0..self.inner.len()).map(|i| (self.inner.name(i).to_string(), w.value(i))).collect());
        Ok((v.valid, witness))
    }

    fn classify(&self, family: Vec<Bound<'_, PyAny>>, conclusion: &Bound<'_, PyAny>) -> PyResult<&'static str> {
        let r = Reasoner::new(&self.inner);
        Ok(r.classify_case(&self.family(&family)?, &self.term(conclusion)?).map_err(err)?.label())
    }

    fn __repr__(&self) -> String {
        format!("Universe({:?})", self.inner.names())
    }
}

#[pyfunction]
fn frechet_bounds<'py>(
    py: Python<'py>,
    values: Vec<Bound<'py, PyAny>>,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let xs = to_rationals(&values)?;
    for x in &xs {
        rational::check_unit(x).map_err(err)?;
    }
    let i = compound::frechet_bounds(&xs);
    Ok((fraction(py, &i.lo)?, fraction(py, &i.hi)?))
}

/// `(z, mu)` for the biconditional `(A|B) ∧ (B|A)` at `P(A|B) = x`, `P(B|A) = y`.
#[pyfunction]
fn biconditional_values<'py>(
    py: Python<'py>,
    x: &Bound<'py, PyAny>,
    y: &Bound<'py, PyAny>,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let (x, y) = (to_rational(x)?, to_rational(y)?);
    rational::check_unit(&x).map_err(err)?;
    rational::check_unit(&y).map_err(err)?;
    let (z, mu) = compound::biconditional_values(&x, &y);
    Ok((fraction(py, &z)?, fraction(py, &mu)?))
}

/// Runs a script and returns the text or JSON report.
#[pyfunction]
#[pyo3(signature = (source, json = false, cross_oracle = true))]
fn run_script(source: &str, json: bool, cross_oracle: bool) -> PyResult<String> {
    let s = script::parse(source).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = script::run(&s, &RunOptions { cross_oracle, ..RunOptions::default() });
    Ok(if json { report.to_json() } else { report.to_text() })
}

#[pymodule]
fn condlogic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyUniverse>()?;
    m.add_class::<PyCond>()?;
    m.add_function(wrap_pyfunction!(frechet_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(biconditional_values, m)?)?;
    m.add_function(wrap_pyfunction!(run_script, m)?)?;
    m.add("MAX_ATOMS", logic::MAX_ATOMS)?;
    Ok(())
}

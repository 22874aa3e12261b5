//! Python bindings for the protoplate template engine.
//!
//! Usage from Python:
//!
//! ```python
//! import protoplate
//! tpl = protoplate.Template(open("A.java").read())
//! for record in protoplate.parse_records(open("data.txt").read()):
//!     print(tpl.expand(record))
//! ```

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};

use protoplate::{Record, Value};

create_exception!(protoplate, TemplateError, PyValueError);
create_exception!(protoplate, DataError, PyValueError);
create_exception!(protoplate, ExpandError, PyValueError);

fn parse_mode(mode: &str) -> PyResult<protoplate::TokenizerMode> {
    mode.parse().map_err(PyValueError::new_err)
}

fn template_err(e: impl ToString) -> PyErr {
    TemplateError::new_err(e.to_string())
}

fn expand_err(e: protoplate::ExpandError) -> PyErr {
    ExpandError::new_err(e.to_string())
}

/// Values may be `str` or a list/tuple of `str`.
fn record_from_dict(dict: &Bound<'_, PyDict>) -> PyResult<Record> {
    let mut record = Record::new();
    for (key, value) in dict.iter() {
        let key: String = key.extract()?;
        let value = if value.is_instance_of::<PyString>() {
            Value::Scalar(value.extract()?)
        } else {
            Value::List(value.extract::<Vec<String>>().map_err(|_| {
                PyValueError::new_err(format!("value of `{key}` must be a str or a list of str"))
            })?)
        };
        record.insert(key, value);
    }
    Ok(record)
}

fn record_to_dict<'py>(py: Python<'py>, record: &Record) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (key, value) in record.iter() {
        match value {
            Value::Scalar(s) => dict.set_item(key, s)?,
            Value::List(items) => dict.set_item(key, PyList::new(py, items)?)?,
        }
    }
    Ok(dict)
}

#[pyclass(name = "Token", frozen, get_all)]
struct PyToken {
    kind: String,
    leading_trivia: String,
    text: String,
    line: usize,
    column: usize,
}

#[pymethods]
impl PyToken {
    fn __repr__(&self) -> String {
        format!("Token({}, {:?})", self.kind, self.text)
    }
}

/// Split source text into tokens. Returns `(tokens, trailing_trivia)`.
#[pyfunction]
#[pyo3(signature = (source, mode = "space"))]
fn tokenize(source: &str, mode: &str) -> PyResult<(Vec<PyToken>, String)> {
    let stream = protoplate::tokenize(source, parse_mode(mode)?).map_err(template_err)?;
    let tokens = stream
        .tokens
        .into_iter()
        .map(|t| PyToken {
            kind: t.kind.name().to_owned(),
            leading_trivia: t.leading_trivia,
            text: t.text,
            line: t.location.line,
            column: t.location.column,
        })
        .collect();
    Ok((tokens, stream.trailing_trivia))
}

/// A parsed template.
#[pyclass(name = "Template", frozen)]
struct PyTemplate {
    inner: protoplate::Template,
}

#[pymethods]
impl PyTemplate {
    #[new]
    #[pyo3(signature = (source, mode = "space"))]
    fn new(source: &str, mode: &str) -> PyResult<Self> {
        let inner = protoplate::parse_template(source, parse_mode(mode)?).map_err(template_err)?;
        Ok(PyTemplate { inner })
    }

    /// Target token of every hole, in template order.
    #[getter]
    fn hole_targets(&self) -> Vec<String> {
        self.inner.holes().iter().map(|h| h.target.text.clone()).collect()
    }

    #[getter]
    fn block_count(&self) -> usize {
        self.inner.blocks().len()
    }

    /// The template with all directives removed.
    fn erase(&self) -> String {
        self.inner.erase()
    }

    fn expand(&self, record: &Bound<'_, PyDict>) -> PyResult<String> {
        let record = record_from_dict(record)?;
        protoplate::expand(&self.inner, &record).map_err(expand_err)
    }

    /// Returns a list of `(name, content)` pairs, one per record.
    #[pyo3(signature = (records, name_key = "name"))]
    fn expand_all(&self, records: Vec<Bound<'_, PyDict>>, name_key: &str) -> PyResult<Vec<(String, String)>> {
        let records = records.iter().map(record_from_dict).collect::<PyResult<Vec<_>>>()?;
        let units = protoplate::expand_all(&self.inner, &records, name_key).map_err(expand_err)?;
        Ok(units.into_iter().map(|u| (u.name, u.content)).collect())
    }

    #[pyo3(signature = (records, name_key = "name"))]
    fn check(&self, records: Vec<Bound<'_, PyDict>>, name_key: &str) -> PyResult<()> {
        let records = records.iter().map(record_from_dict).collect::<PyResult<Vec<_>>>()?;
        protoplate::check_records(&self.inner, &records, name_key).map_err(expand_err)
    }
}

/// Parse a binding-data file into a list of dicts.
#[pyfunction]
fn parse_records<'py>(py: Python<'py>, data: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let records = protoplate::parse_records(data).map_err(|e| DataError::new_err(e.to_string()))?;
    records.iter().map(|r| record_to_dict(py, r)).collect()
}

/// Inverse of `parse_records`.
#[pyfunction]
fn dump_records(records: Vec<Bound<'_, PyDict>>) -> PyResult<String> {
    let records = records.iter().map(record_from_dict).collect::<PyResult<Vec<_>>>()?;
    Ok(protoplate::dump_records(&records))
}

/// Remove every directive from a template source.
#[pyfunction]
#[pyo3(signature = (source, mode = "space"))]
fn erase(source: &str, mode: &str) -> PyResult<String> {
    PyTemplate::new(source, mode).map(|t| t.inner.erase())
}

#[pymodule]
#[pyo3(name = "protoplate")]
fn protoplate_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("TemplateError", py.get_type::<TemplateError>())?;
    m.add("DataError", py.get_type::<DataError>())?;
    m.add("ExpandError", py.get_type::<ExpandError>())?;
    m.add_class::<PyToken>()?;
    m.add_class::<PyTemplate>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(erase, m)?)?;
    m.add_function(wrap_pyfunction!(parse_records, m)?)?;
    m.add_function(wrap_pyfunction!(dump_records, m)?)?;
    Ok(())
}

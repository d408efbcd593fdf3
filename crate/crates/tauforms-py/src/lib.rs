use pyo3::prelude::*;

#[pymodule]
fn tauforms_py(_m: &Bound<PyModule>) -> PyResult<()> {
    Ok(())
}

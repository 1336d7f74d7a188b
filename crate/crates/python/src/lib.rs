//! Python module `pyabel`. Matrices cross the boundary as `Matrix` objects,
//! built from and converted to nested lists of Python `complex`.

use abel_core::abel::{self as core_abel, AbelParameter};
use abel_core::certify::generate::{
    generate_instance, numerical_range_instance, stable_generator, GeneratorConfig, InstanceKind,
};
use abel_core::certify::{verify_equivalence, Tolerances};
use abel_core::linalg::operator_norm;
use abel_core::oscillator::{self, DiagonalOscillator};
use abel_core::semigroup::{self, GeneratorMatrix, QuadratureSpec};
use abel_core::{ComplexMatrix, C64};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

create_exception!(
    pyabel,
    NumericalError,
    PyArithmeticError,
    "A computation failed for numerical reasons."
);

fn to_py(e: abel_core::Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn alpha(a: f64) -> PyResult<AbelParameter> {
    AbelParameter::new(a).map_err(to_py)
}

/// Dense complex matrix.
#[pyclass(frozen, from_py_object, name = "Matrix", module = "pyabel")]
#[derive(Clone)]
pub struct Matrix(ComplexMatrix);

#[pymethods]
impl Matrix {
    /// From a list of equal-length rows of numbers.
    #[new]
    fn py_new(rows: Vec<Vec<C64>>) -> PyResult<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(PyValueError::new_err(
                "matrix must have at least one row and column",
            ));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(PyValueError::new_err("rows have different lengths"));
        }
        ComplexMatrix::from_row_major(r, c, rows.into_iter().flatten().collect())
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    /// Seeded test operator; `kind` is one of holds, jordan_at_one,
    /// spectrum_escapes, stable_generator, numerical_range.
    #[staticmethod]
    #[pyo3(signature = (seed, kind = "holds", dim = 6))]
    fn generate(seed: u64, kind: &str, dim: usize) -> PyResult<Self> {
        let config = GeneratorConfig::default();
        let m = match kind {
            "stable_generator" => stable_generator(seed, dim, config.max_condition),
            "numerical_range" => numerical_range_instance(seed, dim, 1.0 - 1e-3).map_err(to_py)?,
            other => {
                let kind = InstanceKind::from_tag(other)
                    .ok_or_else(|| PyValueError::new_err(format!("unknown kind {other:?}")))?;
                if dim < 2 {
                    return Err(PyValueError::new_err(
                        "structured instances need dimension at least 2",
                    ));
                }
                generate_instance(seed, kind, dim, &config).matrix
            }
        };
        Ok(Self(m))
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    fn tolist(&self) -> Vec<Vec<C64>> {
        (0..self.0.rows())
            .map(|i| (0..self.0.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// Largest singular value.
    fn norm(&self) -> f64 {
        operator_norm(&self.0)
    }

    fn __matmul__(&self, other: &Matrix) -> PyResult<Self> {
        if self.0.cols() != other.0.rows() {
            return Err(PyValueError::new_err("shapes do not align"));
        }
        Ok(Self(self.0.matmul(&other.0)))
    }

    fn __sub__(&self, other: &Matrix) -> PyResult<Self> {
        if self.shape() != other.shape() {
            return Err(PyValueError::new_err("shapes differ"));
        }
        Ok(Self(&self.0 - &other.0))
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{})", self.0.rows(), self.0.cols())
    }
}

/// Result of iterating `M, M², M⁴, …`.
#[pyclass(frozen, get_all, module = "pyabel")]
pub struct Convergence {
    converged: bool,
    limit: Option<Matrix>,
    steps: u64,
    history: Vec<(u64, f64)>,
    divergence_reason: Option<&'static str>,
}

/// Both sides of the power-convergence equivalence for one operator.
#[pyclass(frozen, get_all, module = "pyabel")]
pub struct Certificate {
    agree: bool,
    condition_i: &'static str,
    condition_ii: Option<&'static str>,
    limit: Option<Matrix>,
    projection: Option<Matrix>,
    witnesses: Vec<&'static str>,
}

#[pyfunction]
fn abel_average(t: &Matrix, alpha_value: f64) -> PyResult<Matrix> {
    core_abel::abel_average(&t.0, alpha(alpha_value)?)
        .map(Matrix)
        .map_err(to_py)
}

#[pyfunction]
fn cesaro_average(t: &Matrix, count: u64) -> PyResult<Matrix> {
    core_abel::cesaro_average(&t.0, count)
        .map(Matrix)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (m, tol = core_abel::DEFAULT_POWER_TOL, max_doublings = core_abel::DEFAULT_MAX_DOUBLINGS))]
fn power_iterate(m: &Matrix, tol: f64, max_doublings: u32) -> PyResult<Convergence> {
    let r = core_abel::power_iterate(&m.0, tol, max_doublings).map_err(to_py)?;
    Ok(Convergence {
        converged: r.converged,
        limit: r.limit.map(Matrix),
        steps: r.steps,
        history: r.history,
        divergence_reason: r.divergence_reason.map(|d| d.tag()),
    })
}

/// Projection onto `Ker(I − T)` along `Im(I − T)`.
#[pyfunction]
#[pyo3(signature = (t, rank_tol = 1e-9))]
fn riesz_projection(t: &Matrix, rank_tol: f64) -> PyResult<Matrix> {
    core_abel::riesz_projection_at_one(&t.0, rank_tol)
        .map(|p| Matrix(p.matrix))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (t, alphas = vec![0.1, 0.5, 0.9], tol = core_abel::DEFAULT_POWER_TOL, rank_tol = None))]
fn certify(t: &Matrix, alphas: Vec<f64>, tol: f64, rank_tol: Option<f64>) -> PyResult<Certificate> {
    let alphas = alphas
        .into_iter()
        .map(alpha)
        .collect::<PyResult<Vec<_>>>()?;
    let tol = Tolerances {
        rank_tol,
        ..Tolerances::with_tol(tol)
    };
    let report = verify_equivalence(&t.0, &alphas, &tol).map_err(to_py)?;
    let cert = report.certificate;
    Ok(Certificate {
        agree: report.agree,
        condition_i: cert.condition_i_verdict().tag(),
        condition_ii: cert.condition_ii_verdict().map(|v| v.tag()),
        witnesses: cert.witnesses().iter().map(|w| w.kind()).collect(),
        limit: cert.condition_i.and_then(|c| c.limit).map(Matrix),
        projection: cert
            .condition_ii
            .and_then(|c| c.projection)
            .map(|p| Matrix(p.matrix)),
    })
}

/// `λ(λI − B)⁻¹`, the continuous Abel average of `exp(tB)`.
#[pyfunction]
fn semigroup_average(b: &Matrix, lambda: f64) -> PyResult<Matrix> {
    let g = GeneratorMatrix::new(b.0.clone()).map_err(to_py)?;
    semigroup::abel_average_closed(&g, lambda)
        .map(Matrix)
        .map_err(to_py)
}

/// The same average by Gauss–Laguerre quadrature of `λ∫e^{−λt}exp(tB)dt`.
#[pyfunction]
#[pyo3(signature = (b, lambda, power = 1, nodes = 64))]
fn semigroup_average_quadrature(
    b: &Matrix,
    lambda: f64,
    power: u32,
    nodes: usize,
) -> PyResult<Matrix> {
    let g = GeneratorMatrix::new(b.0.clone()).map_err(to_py)?;
    let spec = QuadratureSpec::gauss_laguerre(nodes).map_err(to_py)?;
    semigroup::abel_power_quadrature(&g, lambda, power, &spec)
        .map(Matrix)
        .map_err(to_py)
}

/// `C(λ)` for the oscillator model as `(value, uncertainty)`.
#[pyfunction]
#[pyo3(signature = (lambda, truncation = oscillator::DEFAULT_TRUNCATION))]
fn c_constant(lambda: f64, truncation: usize) -> PyResult<(f64, f64)> {
    let model = DiagonalOscillator::new(truncation).map_err(to_py)?;
    let c = oscillator::c_constant(&model, lambda).map_err(to_py)?;
    Ok((c.value, c.uncertainty))
}

/// `(measured gap, closed form, bound or None)` for `‖(λR(λ))^m − E‖`.
#[pyfunction]
#[pyo3(signature = (lambda, m, truncation = oscillator::DEFAULT_TRUNCATION))]
fn power_gap(lambda: f64, m: u32, truncation: usize) -> PyResult<(f64, f64, Option<f64>)> {
    let model = DiagonalOscillator::new(truncation).map_err(to_py)?;
    let g = oscillator::scaled_resolvent_power_gap(&model, lambda, m).map_err(to_py)?;
    Ok((g.gap, g.closed_form, g.bound))
}

/// Normalized Hermite functions `x_0(t), …, x_{count−1}(t)`.
#[pyfunction]
fn hermite_functions(count: usize, t: f64) -> Vec<f64> {
    oscillator::hermite_functions(count, t)
}

#[pyfunction]
#[pyo3(signature = (n, half_width = 12.0, step = 1e-3))]
fn eigen_residual(n: usize, half_width: f64, step: f64) -> PyResult<f64> {
    oscillator::eigen_residual(n, half_width, step).map_err(to_py)
}

#[pymodule]
fn pyabel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<Matrix>()?;
    m.add_class::<Convergence>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(abel_average, m)?)?;
    m.add_function(wrap_pyfunction!(cesaro_average, m)?)?;
    m.add_function(wrap_pyfunction!(power_iterate, m)?)?;
    m.add_function(wrap_pyfunction!(riesz_projection, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_average, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_average_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(c_constant, m)?)?;
    m.add_function(wrap_pyfunction!(power_gap, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_functions, m)?)?;
    m.add_function(wrap_pyfunction!(eigen_residual, m)?)?;
    Ok(())
}

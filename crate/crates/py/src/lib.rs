//! Python bindings: `import dfflab`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dfflab_core::hubbard::{self, HubbardParams, HubbardSweep, QuantumNumbers, ThermoOptions};
use dfflab_core::lmg::{self, Eigensolver, LmgParams, LmgSweep, Parity};
use dfflab_core::{Error, Normalization};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Validation(_) | Error::Configuration(_) | Error::SupportMismatch(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Normalized weights on strictly increasing labels.
#[pyclass(name = "DensityDistribution", frozen, from_py_object)]
#[derive(Clone)]
struct PyDensity(dfflab_core::DensityDistribution);

#[pymethods]
impl PyDensity {
    #[new]
    #[pyo3(signature = (labels, weights, renormalize = false))]
    fn new(labels: Vec<f64>, weights: Vec<f64>, renormalize: bool) -> PyResult<Self> {
        let policy = if renormalize {
            Normalization::Renormalize
        } else {
            Normalization::Strict
        };
        dfflab_core::DensityDistribution::with_normalization(labels, weights, policy)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn labels(&self) -> Vec<f64> {
        self.0.labels().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.0.weights().to_vec()
    }

    fn mean(&self) -> f64 {
        self.0.mean()
    }

    fn peak_label(&self) -> f64 {
        self.0.peak_label()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("DensityDistribution(len={})", self.0.len())
    }
}

#[pyfunction]
fn fidelity(a: &PyDensity, b: &PyDensity) -> PyResult<f64> {
    dfflab_core::fidelity(&a.0, &b.0).map_err(py_err)
}

#[pyfunction]
fn susceptibility_from_fidelity(fidelity: f64, delta: f64) -> PyResult<f64> {
    dfflab_core::susceptibility_from_fidelity(fidelity, delta).map_err(py_err)
}

/// Returns `(chi, singular_terms)`.
#[pyfunction]
fn susceptibility_from_derivative(n: &PyDensity, dn: Vec<f64>) -> PyResult<(f64, usize)> {
    let s = dfflab_core::susceptibility_from_derivative(&n.0, &dn).map_err(py_err)?;
    Ok((s.value, s.singular_terms))
}

/// Returns `(F, chi_fidelity, chi_derivative)` for the pair `(lo, hi)`.
#[pyfunction]
fn pair_susceptibilities(lo: &PyDensity, hi: &PyDensity, delta: f64) -> PyResult<(f64, f64, f64)> {
    let (f, chi5, chi6) =
        dfflab_core::pair_susceptibilities(&lo.0, &hi.0, delta).map_err(py_err)?;
    Ok((f, chi5, chi6.value))
}

/// Sweep result: one record per parameter pair.
#[pyclass(name = "FidelityCurve", frozen)]
struct PyCurve(dfflab_core::FidelityCurve);

#[pymethods]
impl PyCurve {
    #[getter]
    fn parameter(&self) -> Vec<f64> {
        self.0.records().iter().map(|r| r.parameter).collect()
    }

    #[getter]
    fn fidelity(&self) -> Vec<f64> {
        self.0.records().iter().map(|r| r.fidelity).collect()
    }

    #[getter]
    fn chi_eq5(&self) -> Vec<f64> {
        self.0.records().iter().map(|r| r.chi_fidelity).collect()
    }

    /// `None` entries where the derivative route was not computed.
    #[getter]
    fn chi_eq6(&self) -> Vec<Option<f64>> {
        self.0.records().iter().map(|r| r.chi_derivative).collect()
    }

    /// `(parameter, F)` at the smallest fidelity.
    fn min_fidelity(&self) -> Option<(f64, f64)> {
        self.0.min_fidelity().map(|r| (r.parameter, r.fidelity))
    }

    /// `(parameter, chi)` at the largest fidelity-route susceptibility.
    fn max_susceptibility(&self) -> Option<(f64, f64)> {
        self.0
            .max_susceptibility()
            .map(|r| (r.parameter, r.chi_fidelity))
    }

    fn susceptibility_at(&self, x: f64) -> Option<f64> {
        self.0.susceptibility_at(x)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyclass(name = "LmgGroundState", frozen)]
struct PyLmgGroundState(lmg::LmgGroundState);

#[pymethods]
impl PyLmgGroundState {
    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy
    }

    #[getter]
    fn amplitudes(&self) -> Vec<f64> {
        self.0.amplitudes.clone()
    }

    #[getter]
    fn parity(&self) -> &'static str {
        match self.0.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Full => "full",
        }
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.0.residual
    }

    fn density(&self) -> PyResult<PyDensity> {
        lmg::density_distribution(&self.0)
            .map(PyDensity)
            .map_err(py_err)
    }
}

fn solver(dense: bool) -> Eigensolver {
    if dense {
        Eigensolver::DenseBlocks
    } else {
        Eigensolver::Tridiagonal
    }
}

#[pyfunction]
#[pyo3(signature = (spin, gamma, field, coupling = 1.0, dense = false))]
fn lmg_ground_state(
    spin: u32,
    gamma: f64,
    field: f64,
    coupling: f64,
    dense: bool,
) -> PyResult<PyLmgGroundState> {
    let p = LmgParams::with_coupling(spin, gamma, field, coupling).map_err(py_err)?;
    let h = lmg::build_hamiltonian(&p).map_err(py_err)?;
    lmg::ground_state_with(&h, solver(dense))
        .map(PyLmgGroundState)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (spin, gamma, field, coupling = 1.0))]
fn lmg_density(spin: u32, gamma: f64, field: f64, coupling: f64) -> PyResult<PyDensity> {
    let p = LmgParams::with_coupling(spin, gamma, field, coupling).map_err(py_err)?;
    lmg::ground_density(&p, Eigensolver::Tridiagonal)
        .map(PyDensity)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (spin, gamma, h_min, h_max, dh, coupling = 1.0, dense = false))]
fn lmg_dff_sweep(
    spin: u32,
    gamma: f64,
    h_min: f64,
    h_max: f64,
    dh: f64,
    coupling: f64,
    dense: bool,
) -> PyResult<PyCurve> {
    let sweep = LmgSweep {
        coupling,
        solver: solver(dense),
        ..LmgSweep::new(spin, gamma, h_min, h_max, dh)
    };
    lmg::lmg_dff_sweep(&sweep)
        .map(|o| PyCurve(o.curve))
        .map_err(py_err)
}

#[pyclass(name = "BetheRoots", frozen)]
struct PyRoots(hubbard::BetheRoots);

#[pymethods]
impl PyRoots {
    /// Charge rapidities.
    #[getter]
    fn k(&self) -> Vec<f64> {
        self.0.k.clone()
    }

    /// Spin rapidities.
    #[getter]
    fn spin_rapidities(&self) -> Vec<f64> {
        self.0.lambda.clone()
    }

    #[getter]
    fn interaction(&self) -> f64 {
        self.0.interaction()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.0.residual
    }

    fn energy(&self) -> f64 {
        hubbard::energy(&self.0)
    }

    /// `(k_mid, rho)` from the root spacings.
    fn density_of_state(&self) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let d = hubbard::density_of_state(&self.0).map_err(py_err)?;
        Ok((d.k_mid, d.rho))
    }
}

/// Ground-state roots; explicit quantum numbers override the symmetric set.
#[pyfunction]
#[pyo3(signature = (sites, electrons, down_spins, interaction, charge = None, spin = None))]
fn solve_bae(
    sites: usize,
    electrons: usize,
    down_spins: usize,
    interaction: f64,
    charge: Option<Vec<f64>>,
    spin: Option<Vec<f64>>,
) -> PyResult<PyRoots> {
    let params = HubbardParams::new(sites, electrons, down_spins, interaction).map_err(py_err)?;
    let q = match (charge, spin) {
        (Some(c), Some(s)) => QuantumNumbers::new(c, s),
        (None, None) => hubbard::ground_state_quantum_numbers(sites, electrons, down_spins),
        _ => {
            return Err(PyValueError::new_err(
                "give both charge and spin quantum numbers or neither",
            ))
        }
    }
    .map_err(py_err)?;
    hubbard::solve_bae(&params, &q, None)
        .map(PyRoots)
        .map_err(py_err)
}

#[pyfunction]
fn continuation_sweep(
    sites: usize,
    electrons: usize,
    down_spins: usize,
    u_start: f64,
    u_end: f64,
    du: f64,
) -> PyResult<Vec<PyRoots>> {
    hubbard::continuation_sweep(sites, electrons, down_spins, u_start, u_end, du)
        .map(|roots| roots.into_iter().map(PyRoots).collect())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (sites, u_start, u_end, du, bins = 512, eq6 = false))]
fn hubbard_dff_sweep(
    sites: usize,
    u_start: f64,
    u_end: f64,
    du: f64,
    bins: usize,
    eq6: bool,
) -> PyResult<PyCurve> {
    let sweep = HubbardSweep {
        bins,
        with_derivative: eq6,
        ..HubbardSweep::half_filled(sites, u_start, u_end, du)
    };
    hubbard::hubbard_dff_sweep(&sweep)
        .map(|o| PyCurve(o.curve))
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (interaction, k, tol = 1e-8, damping = hubbard::thermo::DAMPING))]
fn thermodynamic_dos(interaction: f64, k: f64, tol: f64, damping: f64) -> PyResult<f64> {
    let opts = ThermoOptions {
        tol,
        damping,
        ..ThermoOptions::default()
    };
    hubbard::thermodynamic_dos_with(interaction, k, &opts).map_err(py_err)
}

#[pyfunction]
fn exact_ground_energy_small(
    sites: usize,
    electrons: usize,
    down_spins: usize,
    interaction: f64,
) -> PyResult<f64> {
    hubbard::exact_ground_energy_small(sites, electrons, down_spins, interaction).map_err(py_err)
}

#[pyfunction]
fn bessel_j0(x: f64) -> f64 {
    hubbard::bessel_j0(x)
}

#[pymodule]
#[pyo3(name = "dfflab")]
fn dfflab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyLmgGroundState>()?;
    m.add_class::<PyRoots>()?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(susceptibility_from_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(susceptibility_from_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(pair_susceptibilities, m)?)?;
    m.add_function(wrap_pyfunction!(lmg_ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(lmg_density, m)?)?;
    m.add_function(wrap_pyfunction!(lmg_dff_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bae, m)?)?;
    m.add_function(wrap_pyfunction!(continuation_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(hubbard_dff_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(thermodynamic_dos, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ground_energy_small, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j0, m)?)?;
    Ok(())
}

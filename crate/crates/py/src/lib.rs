//! Python module `csa`.

use csa_core::engine::{self, CsaConfig, MeshRole};
use csa_core::mesh::{self, DEFAULT_WELD_EPSILON_MM};
use csa_core::{synth, CsaError, CsaReport, Point3, SynthError, TriMesh};
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

create_exception!(csa, InsufficientContact, PyValueError);

fn mesh_err(e: csa_core::MeshError) -> PyErr {
    match e {
        csa_core::MeshError::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn csa_err(e: CsaError) -> PyErr {
    match e {
        CsaError::InsufficientContact { .. } => InsufficientContact::new_err(e.to_string()),
        CsaError::Mesh(m) => mesh_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn synth_err(e: SynthError) -> PyErr {
    match e {
        SynthError::Mesh(m) => mesh_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// An indexed triangle mesh in millimeters.
#[pyclass(name = "Mesh", module = "csa", frozen)]
pub struct PyMesh {
    inner: TriMesh,
}

#[pymethods]
impl PyMesh {
    #[new]
    fn new(vertices: Vec<[f64; 3]>, faces: Vec<[u32; 3]>) -> PyResult<Self> {
        let v = vertices.into_iter().map(|[x, y, z]| Point3::new(x, y, z)).collect();
        TriMesh::from_triangles(v, &faces).map(|inner| PyMesh { inner }).map_err(mesh_err)
    }

    /// Reads an STL file, rescales by `unit_scale` (mm per unit) and welds.
    #[staticmethod]
    #[pyo3(signature = (path, unit_scale = 1.0, weld_epsilon = DEFAULT_WELD_EPSILON_MM))]
    fn from_stl(path: std::path::PathBuf, unit_scale: f64, weld_epsilon: f64) -> PyResult<Self> {
        if !(unit_scale > 0.0 && unit_scale.is_finite() && weld_epsilon >= 0.0 && weld_epsilon.is_finite()) {
            return Err(PyValueError::new_err("unit_scale must be positive and weld_epsilon non-negative"));
        }
        let w = mesh::load_stl(path, unit_scale, weld_epsilon).map_err(mesh_err)?;
        Ok(PyMesh { inner: w.mesh })
    }

    /// Writes binary STL.
    fn to_stl(&self, path: std::path::PathBuf) -> PyResult<()> {
        mesh::write_stl_file(&self.inner, path).map_err(mesh_err)
    }

    #[getter]
    fn face_count(&self) -> usize {
        self.inner.face_count()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn total_area(&self) -> f64 {
        mesh::mesh_total_area(&self.inner)
    }

    /// Enclosed volume, or `None` if the mesh is not watertight.
    #[getter]
    fn volume(&self) -> Option<f64> {
        mesh::mesh_volume(&self.inner).ok()
    }

    fn vertices(&self) -> Vec<[f64; 3]> {
        self.inner.vertices().iter().map(|p| p.to_array()).collect()
    }

    fn faces(&self) -> Vec<[u32; 3]> {
        self.inner.triangle_indices()
    }

    fn face_area(&self, face: usize) -> PyResult<f64> {
        if face >= self.inner.face_count() {
            return Err(PyValueError::new_err(format!("face {face} out of range")));
        }
        Ok(mesh::face_area(&self.inner, face))
    }

    fn translated(&self, dx: f64, dy: f64, dz: f64) -> Self {
        let d = Point3::new(dx, dy, dz);
        PyMesh {
            inner: self.inner.map_vertices(|p| p + d),
        }
    }

    fn __repr__(&self) -> String {
        format!("Mesh(vertices={}, faces={})", self.inner.vertex_count(), self.inner.face_count())
    }
}

/// Outcome of one contact computation.
#[pyclass(name = "CsaResult", module = "csa", frozen, get_all)]
pub struct PyCsaResult {
    csa_area: f64,
    csa_face_ids: Vec<usize>,
    pre_refinement_face_ids: Vec<usize>,
    threshold: Option<f64>,
    split_index: Option<usize>,
    refinement_applied: bool,
    discarded_component_count: usize,
    insufficient_contact: bool,
    /// `"tumor"` or `"organ"`, whichever carries the face IDs.
    measured_mesh: &'static str,
    report: String,
}

#[pymethods]
impl PyCsaResult {
    /// The report as JSON, identical to `csa compute` output.
    fn to_json(&self) -> String {
        self.report.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "CsaResult(csa_area={:.3}, faces={}, threshold={:?})",
            self.csa_area,
            self.csa_face_ids.len(),
            self.threshold
        )
    }
}

/// Contact surface area between `organ` and `tumor`.
#[pyfunction]
#[pyo3(signature = (organ, tumor, cap_mm = engine::DEFAULT_CAP_MM, threshold_override_mm = None, refine = true))]
fn compute_csa(
    py: Python<'_>,
    organ: &PyMesh,
    tumor: &PyMesh,
    cap_mm: f64,
    threshold_override_mm: Option<f64>,
    refine: bool,
) -> PyResult<PyCsaResult> {
    let config = CsaConfig {
        cap_mm,
        threshold_override_mm,
        refine,
    };
    let r = py
        .detach(|| engine::compute_csa(&organ.inner, &tumor.inner, &config))
        .map_err(csa_err)?;
    let report = CsaReport::from_result(&r);
    Ok(PyCsaResult {
        csa_area: r.csa_area,
        csa_face_ids: r.csa_face_ids,
        pre_refinement_face_ids: r.csa_face_ids_pre_refinement,
        threshold: r.tau,
        split_index: report.split_index,
        refinement_applied: r.refinement_applied,
        discarded_component_count: r.discarded_component_count,
        insufficient_contact: r.insufficient_contact,
        measured_mesh: match r.measured {
            MeshRole::Tumor => "tumor",
            MeshRole::Organ => "organ",
        },
        report: serde_json::to_string(&report).expect("report serializes"),
    })
}

/// Per-face centroid distances from the measured mesh (the one with fewer
/// faces, the tumor on ties) to the other.
#[pyfunction]
fn pair_distances(py: Python<'_>, organ: &PyMesh, tumor: &PyMesh) -> Vec<f64> {
    py.detach(|| engine::pair_distances(&organ.inner, &tumor.inner).distances)
}

/// `(tau, split_index)` for a distance vector; raises `InsufficientContact`
/// when fewer than four values fall below the cap.
#[pyfunction]
#[pyo3(signature = (distances, cap_mm = engine::DEFAULT_CAP_MM))]
fn find_threshold(distances: Vec<f64>, cap_mm: f64) -> PyResult<(f64, usize)> {
    let t = engine::find_threshold(&distances, cap_mm).map_err(csa_err)?;
    Ok((t.tau, t.split_index))
}

/// Sphere of radius `r` pressed `h` mm into a box: `(organ, tumor, true_area)`.
#[pyfunction]
#[pyo3(signature = (r, h, subdiv = 4))]
fn generate_sphere_pair(r: f64, h: f64, subdiv: u32) -> PyResult<(PyMesh, PyMesh, f64)> {
    let p = synth::generate_sphere_pair(r, h, subdiv, None).map_err(synth_err)?;
    Ok((PyMesh { inner: p.organ }, PyMesh { inner: p.tumor }, p.ground_truth_csa))
}

/// Ellipsoid with semi-axes `a, b, c` cut at height `z0` from its center.
#[pyfunction]
#[pyo3(signature = (a, b, c, z0, subdiv = 4))]
fn generate_ellipsoid_pair(a: f64, b: f64, c: f64, z0: f64, subdiv: u32) -> PyResult<(PyMesh, PyMesh, f64)> {
    let p = synth::generate_ellipsoid_pair(a, b, c, z0, subdiv, None).map_err(synth_err)?;
    Ok((PyMesh { inner: p.organ }, PyMesh { inner: p.tumor }, p.ground_truth_csa))
}

#[pymodule]
fn csa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMesh>()?;
    m.add_class::<PyCsaResult>()?;
    m.add_function(wrap_pyfunction!(compute_csa, m)?)?;
    m.add_function(wrap_pyfunction!(pair_distances, m)?)?;
    m.add_function(wrap_pyfunction!(find_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sphere_pair, m)?)?;
    m.add_function(wrap_pyfunction!(generate_ellipsoid_pair, m)?)?;
    m.add("InsufficientContact", m.py().get_type::<InsufficientContact>())?;
    Ok(())
}

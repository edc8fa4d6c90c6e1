//! Python bindings. Polynomials cross the boundary as sequences of floats
//! in descending powers; results come back as small read-only classes
//! that can also dump the full certificate as JSON.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use spr_forge::cli::{certify_document, exit_code, CertifyGrid, SCHEMA};
use spr_forge::discrete::{schur_check, synthesize_discrete as core_synthesize_discrete, DiscreteSynthesisResult};
use spr_forge::oracles::grid_min_real_part as core_grid_min_real_part;
use spr_forge::polycore::routh_hurwitz;
use spr_forge::segstab::{segment_hurwitz as core_segment_hurwitz, SegmentFamily};
use spr_forge::sprcheck::{is_spr as core_is_spr, real_part_numerator as core_real_part_numerator};
use spr_forge::synthesis::{synthesize as core_synthesize, SynthesisConfig};
use spr_forge::{Error, Poly};

create_exception!(spr_forge, SprForgeError, PyException, "Base class of every spr_forge error.");
create_exception!(spr_forge, InputError, SprForgeError, "Malformed or out-of-contract input.");
create_exception!(spr_forge, SegmentUnstableError, SprForgeError, "The segment contains a non-Hurwitz member.");
create_exception!(spr_forge, InternalFault, SprForgeError, "Numerical fault or exhausted search.");

fn to_py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::SegmentUnstable { verdict } => SegmentUnstableError::new_err((msg, verdict.witness_lambda)),
        other => match exit_code(&other) {
            3 => InternalFault::new_err(msg),
            _ => InputError::new_err(msg),
        },
    }
}

fn poly(name: &str, coeffs: Vec<f64>, tol: &spr_forge::Tolerances) -> PyResult<Poly> {
    let p = Poly::normalized(&coeffs, tol.strip).map_err(to_py_err)?;
    if p.is_zero() {
        return Err(InputError::new_err(format!("{name} is the zero polynomial")));
    }
    Ok(p)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("certificates always serialise")
}

/// Numerical tolerances; every keyword defaults to the library default.
#[pyclass(name = "Tolerances", module = "spr_forge", from_py_object)]
#[derive(Clone)]
struct PyTolerances {
    #[pyo3(get, set)]
    strip: f64,
    #[pyo3(get, set)]
    pos: f64,
    #[pyo3(get, set)]
    stab: f64,
    #[pyo3(get, set)]
    sign: f64,
    #[pyo3(get, set)]
    res: f64,
    #[pyo3(get, set)]
    lambda_: f64,
    #[pyo3(get, set)]
    tan: f64,
}

impl From<spr_forge::Tolerances> for PyTolerances {
    fn from(t: spr_forge::Tolerances) -> Self {
        PyTolerances { strip: t.strip, pos: t.pos, stab: t.stab, sign: t.sign, res: t.res, lambda_: t.lambda, tan: t.tan }
    }
}

impl From<&PyTolerances> for spr_forge::Tolerances {
    fn from(t: &PyTolerances) -> Self {
        spr_forge::Tolerances {
            strip: t.strip,
            pos: t.pos,
            stab: t.stab,
            sign: t.sign,
            res: t.res,
            lambda: t.lambda_,
            tan: t.tan,
        }
    }
}

#[pymethods]
impl PyTolerances {
    #[new]
    #[pyo3(signature = (*, strip=None, pos=None, stab=None, sign=None, res=None, lambda_=None, tan=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        strip: Option<f64>,
        pos: Option<f64>,
        stab: Option<f64>,
        sign: Option<f64>,
        res: Option<f64>,
        lambda_: Option<f64>,
        tan: Option<f64>,
    ) -> Self {
        let d = PyTolerances::from(spr_forge::Tolerances::default());
        PyTolerances {
            strip: strip.unwrap_or(d.strip),
            pos: pos.unwrap_or(d.pos),
            stab: stab.unwrap_or(d.stab),
            sign: sign.unwrap_or(d.sign),
            res: res.unwrap_or(d.res),
            lambda_: lambda_.unwrap_or(d.lambda_),
            tan: tan.unwrap_or(d.tan),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Tolerances(strip={}, pos={}, stab={}, sign={}, res={}, lambda_={}, tan={})",
            self.strip, self.pos, self.stab, self.sign, self.res, self.lambda_, self.tan
        )
    }
}

fn tolerances(tol: Option<PyTolerances>) -> spr_forge::Tolerances {
    tol.as_ref().map(spr_forge::Tolerances::from).unwrap_or_default()
}

/// Outcome of the segment stability test.
#[pyclass(name = "SegmentVerdict", module = "spr_forge", frozen, skip_from_py_object)]
struct PySegmentVerdict {
    #[pyo3(get)]
    stable: bool,
    #[pyo3(get)]
    witness_lambda: Option<f64>,
    #[pyo3(get)]
    witness_root: Option<Complex64>,
    /// `(lambda, omega, residual)` for every located axis crossing.
    #[pyo3(get)]
    crossings: Vec<(f64, f64, f64)>,
    #[pyo3(get)]
    method_trace: Vec<String>,
    raw: String,
}

#[pymethods]
impl PySegmentVerdict {
    fn to_json(&self) -> String {
        self.raw.clone()
    }

    fn __repr__(&self) -> String {
        format!("SegmentVerdict(stable={}, witness_lambda={:?})", self.stable, self.witness_lambda)
    }
}

/// SPR certificate for one quotient.
#[pyclass(name = "SprCertificate", module = "spr_forge", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySprCertificate {
    #[pyo3(get)]
    spr: bool,
    #[pyo3(get)]
    degree_match: bool,
    #[pyo3(get)]
    denominator_hurwitz: bool,
    #[pyo3(get)]
    real_part_positive: bool,
    #[pyo3(get)]
    alarm: Option<String>,
    raw: String,
}

impl From<&spr_forge::sprcheck::SprCertificate> for PySprCertificate {
    fn from(c: &spr_forge::sprcheck::SprCertificate) -> Self {
        PySprCertificate {
            spr: c.spr,
            degree_match: c.degree_match,
            denominator_hurwitz: c.denominator_hurwitz.hurwitz,
            real_part_positive: c.positivity.verdict,
            alarm: c.alarm.clone(),
            raw: json(c),
        }
    }
}

#[pymethods]
impl PySprCertificate {
    fn to_json(&self) -> String {
        self.raw.clone()
    }

    fn __bool__(&self) -> bool {
        self.spr
    }

    fn __repr__(&self) -> String {
        format!("SprCertificate(spr={})", self.spr)
    }
}

/// Output of the continuous synthesis pipeline.
#[pyclass(name = "SynthesisResult", module = "spr_forge", frozen, skip_from_py_object)]
struct PySynthesisResult {
    /// Monic endpoints actually used.
    #[pyo3(get)]
    a: Vec<f64>,
    #[pyo3(get)]
    b: Vec<f64>,
    /// Common feasible numerator coefficients below the leading one.
    #[pyo3(get)]
    x: Vec<f64>,
    #[pyo3(get)]
    point_source: String,
    #[pyo3(get)]
    epsilon: Option<f64>,
    #[pyo3(get)]
    delta: f64,
    #[pyo3(get)]
    c_intermediate: Vec<f64>,
    /// Monic degree-n numerator certified against both endpoints.
    #[pyo3(get)]
    c_final: Vec<f64>,
    #[pyo3(get)]
    c_raw: Vec<f64>,
    #[pyo3(get)]
    cert_a: PySprCertificate,
    #[pyo3(get)]
    cert_b: PySprCertificate,
    #[pyo3(get)]
    trace: Vec<String>,
    raw: String,
}

#[pymethods]
impl PySynthesisResult {
    fn to_json(&self) -> String {
        self.raw.clone()
    }

    fn __repr__(&self) -> String {
        format!("SynthesisResult(c_final={:?})", self.c_final)
    }
}

/// Output of the discrete-time synthesis.
#[pyclass(name = "DiscreteSynthesisResult", module = "spr_forge", frozen, skip_from_py_object)]
struct PyDiscreteSynthesisResult {
    #[pyo3(get)]
    c_z: Vec<f64>,
    /// Numerator synthesised for the bilinear images of the endpoints.
    #[pyo3(get)]
    c_continuous: Vec<f64>,
    #[pyo3(get)]
    cert_a: PySprCertificate,
    #[pyo3(get)]
    cert_b: PySprCertificate,
    raw: String,
}

#[pymethods]
impl PyDiscreteSynthesisResult {
    fn to_json(&self) -> String {
        self.raw.clone()
    }

    fn __repr__(&self) -> String {
        format!("DiscreteSynthesisResult(c_z={:?})", self.c_z)
    }
}

/// Strict Hurwitz test by the Routh array.
#[pyfunction]
#[pyo3(signature = (p, tol=None))]
fn is_hurwitz(p: Vec<f64>, tol: Option<PyTolerances>) -> PyResult<bool> {
    let tol = tolerances(tol);
    Ok(routh_hurwitz(&poly("p", p, &tol)?, &tol).map_err(to_py_err)?.hurwitz)
}

/// All roots strictly inside the unit disc.
#[pyfunction]
#[pyo3(signature = (p, tol=None))]
fn is_schur(p: Vec<f64>, tol: Option<PyTolerances>) -> PyResult<bool> {
    let tol = tolerances(tol);
    schur_check(&poly("p", p, &tol)?, &tol).map_err(to_py_err)
}

/// Hurwitz test of the whole segment `λb + (1-λ)a`; endpoints are scaled
/// to monic first.
#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn segment_hurwitz(a: Vec<f64>, b: Vec<f64>, tol: Option<PyTolerances>) -> PyResult<PySegmentVerdict> {
    let tol = tolerances(tol);
    let fam = SegmentFamily::normalized(&poly("a", a, &tol)?, &poly("b", b, &tol)?).map_err(to_py_err)?;
    let v = core_segment_hurwitz(&fam, &tol).map_err(to_py_err)?;
    Ok(PySegmentVerdict {
        stable: v.stable,
        witness_lambda: v.witness_lambda,
        witness_root: v.witness_root,
        crossings: v.crossings.iter().map(|c| (c.lambda, c.omega, c.residual)).collect(),
        method_trace: v.method_trace.clone(),
        raw: json(&v),
    })
}

/// SPR certificate for `num / den`.
#[pyfunction]
#[pyo3(signature = (num, den, tol=None))]
fn is_spr(num: Vec<f64>, den: Vec<f64>, tol: Option<PyTolerances>) -> PyResult<PySprCertificate> {
    let tol = tolerances(tol);
    let cert = core_is_spr(&poly("num", num, &tol)?, &poly("den", den, &tol)?, &tol).map_err(to_py_err)?;
    Ok(PySprCertificate::from(&cert))
}

/// `P(t)` with `Re[num(jω)/den(jω)] |den(jω)|^2 = P(ω²)`, descending.
#[pyfunction]
fn real_part_numerator(num: Vec<f64>, den: Vec<f64>) -> PyResult<Vec<f64>> {
    let tol = spr_forge::Tolerances::default();
    let p = core_real_part_numerator(&poly("num", num, &tol)?, &poly("den", den, &tol)?).map_err(to_py_err)?;
    Ok(p.coeffs().to_vec())
}

/// Robust SPR synthesis for the segment between `a` and `b`. Raises
/// `SegmentUnstableError` (args: message, witness λ) when some member is
/// not Hurwitz.
#[pyfunction]
#[pyo3(signature = (a, b, h=None, tol=None))]
fn synthesize(
    py: Python<'_>,
    a: Vec<f64>,
    b: Vec<f64>,
    h: Option<Vec<f64>>,
    tol: Option<PyTolerances>,
) -> PyResult<PySynthesisResult> {
    let tol = tolerances(tol);
    let fam = SegmentFamily::normalized(&poly("a", a, &tol)?, &poly("b", b, &tol)?).map_err(to_py_err)?;
    let h = h.map(|h| poly("h", h, &tol)).transpose()?;
    let config = SynthesisConfig { tol, h, ..Default::default() };
    let r = py.detach(|| core_synthesize(&fam, &config)).map_err(to_py_err)?;
    Ok(PySynthesisResult {
        a: r.family.a().coeffs().to_vec(),
        b: r.family.b().coeffs().to_vec(),
        x: r.x.x.clone(),
        point_source: format!("{:?}", r.x.source),
        epsilon: r.eps.as_ref().map(|e| e.epsilon),
        delta: r.delta.delta,
        c_intermediate: r.c_intermediate.coeffs().to_vec(),
        c_final: r.c_final.coeffs().to_vec(),
        c_raw: r.c_raw.coeffs().to_vec(),
        cert_a: PySprCertificate::from(&r.cert_a),
        cert_b: PySprCertificate::from(&r.cert_b),
        trace: r.trace.clone(),
        raw: json(&r),
    })
}

/// Robust SPR synthesis for a segment of polynomials in `z`.
#[pyfunction]
#[pyo3(signature = (az, bz, tol=None))]
fn synthesize_discrete(
    py: Python<'_>,
    az: Vec<f64>,
    bz: Vec<f64>,
    tol: Option<PyTolerances>,
) -> PyResult<PyDiscreteSynthesisResult> {
    let tol = tolerances(tol);
    let (az, bz) = (poly("az", az, &tol)?, poly("bz", bz, &tol)?);
    let config = SynthesisConfig { tol, ..Default::default() };
    let r: DiscreteSynthesisResult =
        py.detach(|| core_synthesize_discrete(&az, &bz, &config)).map_err(to_py_err)?;
    Ok(PyDiscreteSynthesisResult {
        c_z: r.c_z.coeffs().to_vec(),
        c_continuous: r.continuous.c_final.coeffs().to_vec(),
        cert_a: PySprCertificate::from(&r.cert_a),
        cert_b: PySprCertificate::from(&r.cert_b),
        raw: json(&r),
    })
}

/// Brute-force minimum of `Re[num(jω)/den(jω)]` over a symmetric grid;
/// returns `(minimum, argmin)`.
#[pyfunction]
#[pyo3(signature = (num, den, omega_max=1e6, samples=100_001))]
fn grid_min_real_part(num: Vec<f64>, den: Vec<f64>, omega_max: f64, samples: usize) -> PyResult<(f64, f64)> {
    let tol = spr_forge::Tolerances::default();
    let r = core_grid_min_real_part(&poly("num", num, &tol)?, &poly("den", den, &tol)?, omega_max, samples)
        .map_err(to_py_err)?;
    Ok((r.min_value, r.argmin))
}

/// Oracle-only re-verification of a synthesis result. Accepts either a
/// CLI document or the `to_json()` text of a result object. Returns
/// `(all_passed, [(check, passed), ...])`.
#[pyfunction]
fn certify(py: Python<'_>, document: &str) -> PyResult<(bool, Vec<(String, bool)>)> {
    let mut doc: serde_json::Value =
        serde_json::from_str(document).map_err(|e| InputError::new_err(e.to_string()))?;
    if doc.get("schema").is_none() {
        let command = if doc.get("c_z").is_some() { "synthesize-discrete" } else { "synthesize" };
        doc = serde_json::json!({ "schema": SCHEMA, "command": command, "exit_code": 0, "result": doc });
    }
    let report = py.detach(|| certify_document(&doc, CertifyGrid::default())).map_err(to_py_err)?;
    Ok((report.all_passed, report.checks.into_iter().map(|c| (c.name, c.passed)).collect()))
}

/// Runs the command-line interface in process; returns
/// `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let out = py.detach(|| spr_forge::cli::run(std::iter::once("spr-forge".to_string()).chain(args)));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
#[pyo3(name = "spr_forge")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("SprForgeError", py.get_type::<SprForgeError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("SegmentUnstableError", py.get_type::<SegmentUnstableError>())?;
    m.add("InternalFault", py.get_type::<InternalFault>())?;
    m.add_class::<PyTolerances>()?;
    m.add_class::<PySegmentVerdict>()?;
    m.add_class::<PySprCertificate>()?;
    m.add_class::<PySynthesisResult>()?;
    m.add_class::<PyDiscreteSynthesisResult>()?;
    m.add_function(wrap_pyfunction!(is_hurwitz, m)?)?;
    m.add_function(wrap_pyfunction!(is_schur, m)?)?;
    m.add_function(wrap_pyfunction!(segment_hurwitz, m)?)?;
    m.add_function(wrap_pyfunction!(is_spr, m)?)?;
    m.add_function(wrap_pyfunction!(real_part_numerator, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_discrete, m)?)?;
    m.add_function(wrap_pyfunction!(grid_min_real_part, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

//! Python module `swiss_cheese`.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use swiss_cheese::construction::{self as cons, Caps, CheeseConfig, EmptyWermer, StubWermer, WermerProvider};
use swiss_cheese::files;
use swiss_cheese::geometry;
use swiss_cheese::ratfunc::{self, LevelParams};
use swiss_cheese::verify::{self, CertReport};
use swiss_cheese::CheeseError;

fn py_err(e: CheeseError) -> PyErr {
    match e {
        CheeseError::Pole(_) | CheeseError::PoleOnContour(_) | CheeseError::PoleInX(_) => {
            PyZeroDivisionError::new_err(e.to_string())
        }
        CheeseError::Io(_) => PyIOError::new_err(e.to_string()),
        CheeseError::Parse(_)
        | CheeseError::Precondition(_)
        | CheeseError::Domain(_)
        | CheeseError::Degenerate(_)
        | CheeseError::Format(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

type R<T> = PyResult<T>;

fn lift<T>(r: swiss_cheese::Result<T>) -> R<T> {
    r.map_err(py_err)
}

#[pyclass(frozen, skip_from_py_object, module = "swiss_cheese")]
#[derive(Clone, Copy)]
struct Disc {
    inner: geometry::Disc,
}

#[pymethods]
impl Disc {
    #[new]
    fn new(center: Complex64, radius: f64) -> R<Self> {
        Ok(Disc { inner: lift(geometry::Disc::new(center, radius))? })
    }

    #[getter]
    fn center(&self) -> Complex64 {
        self.inner.center
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius
    }

    fn contains(&self, z: Complex64) -> bool {
        self.inner.contains_open(z)
    }

    /// Distance to the boundary of `[-1, 1]^2`.
    fn boundary_distance(&self) -> f64 {
        geometry::dist_to_square_boundary(&self.inner, &geometry::Square::UNIT)
    }

    /// Distance to the lines `a + R` and `a + iR`.
    fn cross_distance(&self, a: Complex64) -> f64 {
        geometry::dist_to_cross(&self.inner, a)
    }

    fn __repr__(&self) -> String {
        format!("Disc({}, {})", self.inner.center, self.inner.radius)
    }
}

#[pyclass(frozen, skip_from_py_object, module = "swiss_cheese")]
#[derive(Clone, Copy)]
struct Square {
    inner: geometry::Square,
}

#[pymethods]
impl Square {
    #[new]
    #[pyo3(signature = (center = Complex64::new(0.0, 0.0), half_width = 1.0))]
    fn new(center: Complex64, half_width: f64) -> R<Self> {
        Ok(Square { inner: lift(geometry::Square::new(center, half_width))? })
    }

    fn contains(&self, z: Complex64) -> bool {
        self.inner.contains(z)
    }

    fn distance_to_boundary(&self, z: Complex64) -> f64 {
        self.inner.point_distance_to_boundary(z)
    }

    fn corners(&self) -> Vec<Complex64> {
        self.inner.corners().to_vec()
    }
}

/// A rational function with complex coefficients.
#[pyclass(frozen, skip_from_py_object, module = "swiss_cheese")]
#[derive(Clone)]
struct Rational {
    inner: ratfunc::RationalExpr,
}

#[pymethods]
impl Rational {
    /// Coefficients in increasing degree.
    #[new]
    fn new(numerator: Vec<Complex64>, denominator: Vec<Complex64>) -> R<Self> {
        Ok(Rational { inner: lift(ratfunc::RationalExpr::new(numerator, denominator))? })
    }

    /// `numerator(z) / (lead·∏(z - p))`.
    #[staticmethod]
    #[pyo3(signature = (numerator, poles, lead = Complex64::new(1.0, 0.0)))]
    fn from_poles(numerator: Vec<Complex64>, poles: Vec<Complex64>, lead: Complex64) -> R<Self> {
        Ok(Rational { inner: lift(ratfunc::RationalExpr::from_poles(numerator, lead, poles))? })
    }

    #[staticmethod]
    fn identity() -> Self {
        Rational { inner: ratfunc::RationalExpr::identity() }
    }

    #[staticmethod]
    fn simple_pole(p: Complex64) -> Self {
        Rational { inner: ratfunc::RationalExpr::simple_pole(p) }
    }

    fn __call__(&self, z: Complex64) -> R<Complex64> {
        lift(self.inner.eval(z))
    }

    fn derivative(&self) -> Self {
        Rational { inner: self.inner.derivative() }
    }

    fn poles(&self) -> Vec<Complex64> {
        self.inner.poles()
    }

    fn residues(&self) -> Vec<(Complex64, Complex64)> {
        verify::residues(&self.inner)
    }
}

/// A built configuration: the deleted discs and their budget ledger.
#[pyclass(skip_from_py_object, module = "swiss_cheese")]
#[derive(Clone)]
struct Config {
    inner: CheeseConfig,
}

#[pymethods]
impl Config {
    #[staticmethod]
    fn from_json(text: &str) -> R<Self> {
        Ok(Config { inner: lift(files::config_from_str(text))? })
    }

    #[staticmethod]
    fn read(path: &str) -> R<Self> {
        Ok(Config { inner: lift(files::read_config(path.as_ref()))? })
    }

    fn to_json(&self) -> R<String> {
        lift(files::config_to_string(&self.inner))
    }

    fn write(&self, path: &str) -> R<()> {
        lift(files::write_config(path.as_ref(), &self.inner))
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.budget_c
    }

    #[getter]
    fn c0(&self) -> f64 {
        self.inner.budget_c0
    }

    fn __len__(&self) -> usize {
        self.inner.deletions.len()
    }

    /// `(disc, kind, index, level)` with kind `"mckissick"` or `"wermer"`.
    fn deletions(&self) -> Vec<(Disc, &'static str, usize, u64)> {
        self.inner
            .deletions
            .iter()
            .map(|d| match d.provenance {
                cons::Provenance::McKissick { l, level } => (Disc { inner: d.disc }, "mckissick", l, level),
                cons::Provenance::Wermer { n, k } => (Disc { inner: d.disc }, "wermer", k, n as u64),
            })
            .collect()
    }

    fn is_deleted(&self, z: Complex64) -> bool {
        self.inner.is_deleted(z)
    }

    fn validate(&self) -> R<()> {
        lift(self.inner.validate())
    }

    /// Certified boundary sums, as a dict.
    fn ledger<'py>(&self, py: Python<'py>) -> R<Bound<'py, PyDict>> {
        let l = &self.inner.ledger;
        let d = PyDict::new(py);
        d.set_item("regular_retained", l.mckissick_retained)?;
        d.set_item("regular_discarded", l.mckissick_discarded)?;
        d.set_item("regular_boundary_realized", l.mckissick_boundary_realized)?;
        d.set_item("regular_boundary_certified", l.mckissick_boundary_certified)?;
        d.set_item("wermer_boundary_sum", l.wermer_boundary_sum)?;
        d.set_item("combined_boundary_sum", l.combined_boundary_sum)?;
        d.set_item("integral_bound", l.integral_bound)?;
        Ok(d)
    }

    /// SVG picture; `family=(l, level)` zooms into one transplanted cheese.
    #[pyo3(signature = (size = 800, color = true, family = None))]
    fn render_svg(&self, size: u32, color: bool, family: Option<(usize, Option<u64>)>) -> String {
        let zoom = match family {
            Some((l, level)) => files::Zoom::Family { l, level },
            None => files::Zoom::Full,
        };
        files::render_svg(&self.inner, &files::RenderOptions { zoom, color_by_provenance: color, size })
    }
}

/// Builds `X` for the constant `C` from `L` enumerated discs and `levels`
/// scales of placeholder second-layer domains.
#[pyfunction]
#[pyo3(signature = (c, l = 32, n_cap = 6, levels = 0, per_level = 2, seed = 0, disc_cap = cons::DEFAULT_DISC_CAP))]
fn build(py: Python<'_>, c: f64, l: usize, n_cap: u64, levels: u32, per_level: usize, seed: u64, disc_cap: usize) -> R<Config> {
    let stub = StubWermer { per_level, seed };
    let provider: &(dyn WermerProvider + Send) = if levels > 0 { &stub } else { &EmptyWermer };
    let mut cfg = py.detach(|| lift(cons::assemble_cheese(c, l, levels, provider, Caps { n_cap, disc_cap })))?;
    cfg.params.seed = seed;
    Ok(Config { inner: cfg })
}

#[pyfunction]
fn eval_hn(n_roots: u64, z: Complex64) -> R<Complex64> {
    lift(ratfunc::eval_hn(n_roots, z))
}

#[pyfunction]
fn eval_gn(n: u64, z: Complex64) -> R<Complex64> {
    lift(ratfunc::eval_gn(&lift(LevelParams::new(n))?, z))
}

/// `ln |f_n(z)|` for `f_n = (m!)^{-4} ∏_{r=m..=n} g_r`.
#[pyfunction]
fn ln_abs_product(m: u64, n: u64, z: Complex64) -> R<f64> {
    let f = lift(ratfunc::ProductFunction::new(m, n))?;
    Ok(lift(ratfunc::eval_product(&f, z))?.log_magnitude)
}

#[pyfunction]
fn select_start_index(epsilon: f64) -> R<u64> {
    lift(cons::select_start_index(epsilon))
}

/// The first `count` admissible discs as `(disc, class)`.
#[pyfunction]
fn admissible_discs(count: usize) -> Vec<(Disc, String)> {
    geometry::enumerate_admissible_discs(count)
        .into_iter()
        .map(|(d, k)| (Disc { inner: d.to_disc() }, format!("{k:?}").to_lowercase()))
        .collect()
}

/// `∮_{∂Q} f'g dz` as `(value, error_estimate, panels)`.
#[pyfunction]
#[pyo3(signature = (f, g, tol = verify::DEFAULT_TOLERANCE))]
fn contour_integral(f: &Rational, g: &Rational, tol: f64) -> R<(Complex64, f64, usize)> {
    let r = lift(verify::contour_integral_boundary(&f.inner, &g.inner, tol))?;
    Ok((r.value, r.error_estimate, r.panels))
}

#[pyfunction]
fn residue_oracle(f: &Rational, g: &Rational) -> Complex64 {
    verify::residue_oracle(&f.inner, &g.inner)
}

/// Sampled lower estimate of the sup norm on `X` as `(value, argmax)`.
#[pyfunction]
#[pyo3(signature = (e, config, density = 1024))]
fn sup_norm(py: Python<'_>, e: &Rational, config: &Config, density: usize) -> R<(f64, Complex64)> {
    let s = py.detach(|| lift(verify::sup_norm_estimate(&e.inner, &config.inner, density)))?;
    Ok((s.value, s.argmax))
}

fn report_dict<'py>(py: Python<'py>, r: &CertReport) -> R<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("check", &r.check)?;
    d.set_item("measured", r.measured)?;
    d.set_item("bound", r.bound)?;
    d.set_item("margin", r.margin)?;
    d.set_item("samples", r.samples)?;
    d.set_item("verdict", format!("{:?}", r.verdict).to_lowercase())?;
    let params = PyDict::new(py);
    for (k, v) in &r.params {
        params.set_item(k, v)?;
    }
    d.set_item("params", params)?;
    d.set_item("notes", r.notes.clone())?;
    Ok(d)
}

fn reports<'py>(py: Python<'py>, rows: swiss_cheese::Result<Vec<CertReport>>) -> R<Vec<Bound<'py, PyDict>>> {
    lift(rows)?.iter().map(|r| report_dict(py, r)).collect()
}

#[pyfunction]
#[pyo3(signature = (n, samples = verify::DEFAULT_SAMPLES, seed = 0))]
fn check_level_family(py: Python<'_>, n: u64, samples: usize, seed: u64) -> R<Vec<Bound<'_, PyDict>>> {
    let rows = py.detach(|| verify::check_level_family(n, samples, seed));
    reports(py, rows)
}

#[pyfunction]
#[pyo3(signature = (m, n, samples = 1000, seed = 0))]
fn check_convergence(py: Python<'_>, m: u64, n: u64, samples: usize, seed: u64) -> R<Vec<Bound<'_, PyDict>>> {
    let rows = py.detach(|| verify::check_convergence(m, n, samples, seed).map(|r| vec![r]));
    reports(py, rows)
}

#[pyfunction]
#[pyo3(signature = (pairs = 100, seed = 0))]
fn check_residue_oracle(py: Python<'_>, pairs: usize, seed: u64) -> R<Vec<Bound<'_, PyDict>>> {
    let rows = py.detach(|| verify::check_residue_oracle(pairs, seed));
    reports(py, rows)
}

#[pyfunction]
fn check_budget<'py>(py: Python<'py>, config: &Config) -> R<Vec<Bound<'py, PyDict>>> {
    reports(py, verify::check_budget(&config.inner))
}

#[pyfunction]
#[pyo3(signature = (config, max_density = 1 << 14))]
fn check_derivation<'py>(py: Python<'py>, config: &Config, max_density: usize) -> R<Vec<Bound<'py, PyDict>>> {
    let rows = py.detach(|| verify::check_derivation(&config.inner, max_density));
    reports(py, rows)
}

/// Separating function of the regular layer, as a dict.
#[pyfunction]
#[pyo3(signature = (config, z0, b, cap = 100_000, extra = 2))]
fn witness<'py>(py: Python<'py>, config: &Config, z0: Complex64, b: Vec<Complex64>, cap: usize, extra: u64) -> R<Bound<'py, PyDict>> {
    let w = py.detach(|| lift(verify::regularity_witness(z0, &b, &config.inner, cap, extra)))?;
    let d = PyDict::new(py);
    d.set_item("l", w.l)?;
    d.set_item("disc", Disc { inner: w.disc })?;
    d.set_item("class", format!("{:?}", w.class).to_lowercase())?;
    d.set_item("m", w.m)?;
    d.set_item("ln_lower_at_z0", w.ln_lower_at_z0)?;
    d.set_item("ln_upper_at_z0", w.ln_upper_at_z0)?;
    d.set_item("ln_max_on_b", w.ln_max_on_b)?;
    d.set_item("ln_certified_upper_on_b", w.ln_certified_upper_on_b)?;
    d.set_item("separates", w.separates())?;
    d.set_item("within_config", w.within_config)?;
    Ok(d)
}

#[pyfunction]
fn parse_complex(text: &str) -> R<Complex64> {
    lift(files::parse_complex(text))
}

#[pymodule(name = "swiss_cheese")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Disc>()?;
    m.add_class::<Square>()?;
    m.add_class::<Rational>()?;
    m.add_class::<Config>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(eval_hn, m)?)?;
    m.add_function(wrap_pyfunction!(eval_gn, m)?)?;
    m.add_function(wrap_pyfunction!(ln_abs_product, m)?)?;
    m.add_function(wrap_pyfunction!(select_start_index, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_discs, m)?)?;
    m.add_function(wrap_pyfunction!(contour_integral, m)?)?;
    m.add_function(wrap_pyfunction!(residue_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(sup_norm, m)?)?;
    m.add_function(wrap_pyfunction!(check_level_family, m)?)?;
    m.add_function(wrap_pyfunction!(check_convergence, m)?)?;
    m.add_function(wrap_pyfunction!(check_residue_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(check_budget, m)?)?;
    m.add_function(wrap_pyfunction!(check_derivation, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(parse_complex, m)?)?;
    Ok(())
}

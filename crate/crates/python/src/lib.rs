//! Python bindings: the profiler, the sliding window, stream generation
//! and file I/O, degeneracy peeling, and oracle verification.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use sprofile::bench::{self, VerifyOptions};
use sprofile::peel::{self, Graph};
use sprofile::streamgen::{self, Preset, StreamConfig};
use sprofile::{Action, Error, Frequency, LogEvent, ObjectId, Profiler, WindowedProfiler};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyOSError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn object(id: u32) -> PyResult<ObjectId> {
    ObjectId::new(id).map_err(to_py)
}

fn action(symbol: &str) -> PyResult<Action> {
    match symbol {
        "+" | "add" => Ok(Action::Add),
        "-" | "remove" => Ok(Action::Remove),
        other => Err(PyValueError::new_err(format!(
            "action must be '+', '-', 'add' or 'remove', got {other:?}"
        ))),
    }
}

fn event(id: u32, symbol: &str) -> PyResult<LogEvent> {
    Ok(LogEvent::new(object(id)?, action(symbol)?))
}

fn ids(objects: Vec<ObjectId>) -> Vec<u32> {
    objects.into_iter().map(ObjectId::get).collect()
}

/// Block-set profile of `m` objects with ids 1..=m.
#[pyclass(name = "Profiler", module = "sprofile_py")]
struct PyProfiler {
    inner: Profiler,
}

#[pymethods]
impl PyProfiler {
    #[new]
    fn new(m: usize) -> PyResult<Self> {
        Ok(PyProfiler {
            inner: Profiler::new(m).map_err(to_py)?,
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn net_count(&self) -> i64 {
        self.inner.net_count()
    }

    #[getter]
    fn live_blocks(&self) -> usize {
        self.inner.live_blocks()
    }

    fn increment(&mut self, x: u32) -> PyResult<()> {
        self.inner.increment(object(x)?).map_err(to_py)
    }

    fn decrement(&mut self, x: u32) -> PyResult<()> {
        self.inner.decrement(object(x)?).map_err(to_py)
    }

    /// Applies one `(id, action)` event; action is '+', '-', 'add' or 'remove'.
    fn apply(&mut self, x: u32, action: &str) -> PyResult<()> {
        self.inner.apply(event(x, action)?).map_err(to_py)
    }

    fn extend(&mut self, events: Vec<(u32, String)>) -> PyResult<()> {
        for (x, a) in events {
            self.inner.apply(event(x, &a)?).map_err(to_py)?;
        }
        Ok(())
    }

    /// `(frequency, [ids])` for the maximum frequency.
    fn mode(&self) -> (Frequency, Vec<u32>) {
        let r = self.inner.mode();
        (r.frequency, ids(r.objects))
    }

    fn min_objects(&self) -> (Frequency, Vec<u32>) {
        let r = self.inner.min_objects();
        (r.frequency, ids(r.objects))
    }

    fn frequency(&self, x: u32) -> PyResult<Frequency> {
        self.inner.frequency(object(x)?).map_err(to_py)
    }

    fn kth_largest(&self, k: usize) -> PyResult<(Frequency, u32)> {
        let (f, x) = self.inner.kth_largest(k).map_err(to_py)?;
        Ok((f, x.get()))
    }

    fn median(&self) -> (Frequency, u32) {
        let (f, x) = self.inner.median();
        (f, x.get())
    }

    fn top_k(&self, k: usize) -> PyResult<Vec<(u32, Frequency)>> {
        Ok(self
            .inner
            .top_k_objects(k)
            .map_err(to_py)?
            .into_iter()
            .map(|(x, f)| (x.get(), f))
            .collect())
    }

    fn histogram(&self) -> Vec<(Frequency, usize)> {
        self.inner.histogram()
    }

    /// `(l, r, f)` triples, 1-based, lowest frequency first.
    fn blocks(&self) -> Vec<(usize, usize, Frequency)> {
        self.inner.blocks().map(|b| (b.l, b.r, b.f)).collect()
    }

    /// Runs the O(m) invariant audit; raises ValueError on failure.
    fn audit(&self) -> PyResult<()> {
        self.inner
            .audit()
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let (f, ties) = self.inner.mode_summary();
        format!(
            "Profiler(m={}, blocks={}, mode_frequency={f}, mode_ties={ties})",
            self.inner.m(),
            self.inner.live_blocks()
        )
    }
}

/// Profile of only the last `width` events.
#[pyclass(name = "WindowedProfiler", module = "sprofile_py")]
struct PyWindowedProfiler {
    inner: WindowedProfiler,
}

#[pymethods]
impl PyWindowedProfiler {
    #[new]
    fn new(m: usize, width: usize) -> PyResult<Self> {
        Ok(PyWindowedProfiler {
            inner: WindowedProfiler::new(m, width).map_err(to_py)?,
        })
    }

    fn push(&mut self, x: u32, action: &str) -> PyResult<()> {
        self.inner.push(event(x, action)?).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.contents().len()
    }

    fn mode(&self) -> (Frequency, Vec<u32>) {
        let r = self.inner.mode();
        (r.frequency, ids(r.objects))
    }

    fn min_objects(&self) -> (Frequency, Vec<u32>) {
        let r = self.inner.min_objects();
        (r.frequency, ids(r.objects))
    }

    fn median(&self) -> (Frequency, u32) {
        let (f, x) = self.inner.median();
        (f, x.get())
    }

    fn top_k(&self, k: usize) -> PyResult<Vec<(u32, Frequency)>> {
        Ok(self
            .inner
            .top_k_objects(k)
            .map_err(to_py)?
            .into_iter()
            .map(|(x, f)| (x.get(), f))
            .collect())
    }

    fn frequency(&self, x: u32) -> PyResult<Frequency> {
        self.inner.frequency(object(x)?).map_err(to_py)
    }
}

fn stream_config(preset: &str, n: u64, m: u32, seed: u64, p_add: Option<f64>) -> PyResult<StreamConfig> {
    let preset: Preset = preset.parse().map_err(to_py)?;
    let cfg = StreamConfig::preset(preset, n, m, seed).map_err(to_py)?;
    match p_add {
        Some(p) => cfg.with_p_add(p).map_err(to_py),
        None => Ok(cfg),
    }
}

fn to_tuples(events: Vec<LogEvent>) -> Vec<(u32, &'static str)> {
    events
        .into_iter()
        .map(|e| (e.object.get(), if e.action == Action::Add { "+" } else { "-" }))
        .collect()
}

/// Synthetic stream as a list of `(id, '+' | '-')`.
#[pyfunction]
#[pyo3(signature = (preset, n, m, seed = 1, p_add = None))]
fn generate_stream(
    preset: &str,
    n: u64,
    m: u32,
    seed: u64,
    p_add: Option<f64>,
) -> PyResult<Vec<(u32, &'static str)>> {
    let cfg = stream_config(preset, n, m, seed, p_add)?;
    Ok(to_tuples(streamgen::generate(&cfg).map_err(to_py)?))
}

#[pyfunction]
fn write_stream(path: &str, events: Vec<(u32, String)>) -> PyResult<()> {
    let events = events
        .iter()
        .map(|(x, a)| event(*x, a))
        .collect::<PyResult<Vec<_>>>()?;
    streamgen::write_stream(path, &events).map_err(to_py)
}

#[pyfunction]
fn read_stream(path: &str) -> PyResult<Vec<(u32, &'static str)>> {
    Ok(to_tuples(streamgen::read_stream(path).map_err(to_py)?))
}

/// `(degeneracy, core_numbers, removal_order)` of a graph on vertices 1..=v.
#[pyfunction]
fn degeneracy_order(v: usize, edges: Vec<(u32, u32)>) -> PyResult<(u32, Vec<u32>, Vec<u32>)> {
    let g = Graph::new(v, &edges).map_err(to_py)?;
    let r = peel::degeneracy_order(&g);
    Ok((r.degeneracy, r.core, r.order))
}

/// Replays a generated stream against the brute-force oracle. Returns
/// `None` on success or a description of the first mismatch.
#[pyfunction]
#[pyo3(signature = (preset, n, m, seed = 1))]
fn verify(preset: &str, n: u64, m: u32, seed: u64) -> PyResult<Option<String>> {
    let cfg = stream_config(preset, n, m, seed, None)?;
    let report = bench::verify_preset(&cfg, &VerifyOptions::default()).map_err(to_py)?;
    Ok(report.mismatch.map(|m| m.to_string()))
}

#[pymodule]
fn sprofile_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfiler>()?;
    m.add_class::<PyWindowedProfiler>()?;
    m.add_function(wrap_pyfunction!(generate_stream, m)?)?;
    m.add_function(wrap_pyfunction!(write_stream, m)?)?;
    m.add_function(wrap_pyfunction!(read_stream, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy_order, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

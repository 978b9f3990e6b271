//! Python bindings for the wmark library.
//!
//! The module mirrors the Rust API surface: image and watermark I/O,
//! embed/extract, the two attack models, the quality metrics, and the
//! Arnold period helper. Images and watermarks are opaque handles; bit
//! payloads cross the boundary as flat Python lists.

// `?` on an already-converted PyErr trips this lint at every fallible
// binding; the explicit `map_err(to_py)` reads better than the cure.
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use wmark::attacks::{CompressionAttackSpec, CropAttackSpec};
use wmark::plane::{BitMatrix, RgbImage as Image};
use wmark::{imageio, metrics, EmbedParams, SelectionStrategy, WatermarkKey, WmarkError};

fn to_py(e: WmarkError) -> PyErr {
    match e {
        WmarkError::Io(_) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A real-valued RGB image.
#[pyclass(name = "RgbImage")]
#[derive(Clone)]
struct PyRgbImage {
    inner: Image,
}

#[pymethods]
impl PyRgbImage {
    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        imageio::save_rgb(&self.inner, path).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("RgbImage({}x{})", self.inner.width(), self.inner.height())
    }
}

/// A square binary watermark.
#[pyclass(name = "Watermark")]
#[derive(Clone)]
struct PyWatermark {
    inner: BitMatrix,
}

#[pymethods]
impl PyWatermark {
    /// Build from a flat row-major list of 0/1 bits of length side*side.
    #[new]
    fn new(side: usize, bits: Vec<u8>) -> PyResult<Self> {
        if bits.len() != side * side {
            return Err(PyValueError::new_err(format!(
                "expected {} bits for side {side}, got {}",
                side * side,
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(PyValueError::new_err("bits must be 0 or 1"));
        }
        Ok(PyWatermark {
            inner: BitMatrix::from_bits(side, bits),
        })
    }

    #[getter]
    fn side(&self) -> usize {
        self.inner.side()
    }

    /// Flat row-major 0/1 bits.
    fn bits(&self) -> Vec<u8> {
        self.inner.bits().to_vec()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        imageio::save_watermark(&self.inner, path).map_err(to_py)
    }

    fn __eq__(&self, other: &PyWatermark) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Watermark({0}x{0}, {1} ones)",
            self.inner.side(),
            self.inner.count_ones()
        )
    }
}

/// Everything blind extraction needs; serializable to the versioned
/// text key format.
#[pyclass(name = "Key")]
#[derive(Clone)]
struct PyKey {
    inner: WatermarkKey,
}

#[pymethods]
impl PyKey {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyKey {
            inner: WatermarkKey::from_text(text).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn quant_step(&self) -> f64 {
        self.inner.quant_step
    }

    #[getter]
    fn arnold_times(&self) -> u64 {
        self.inner.arnold_times
    }
}

#[pyfunction]
fn load_rgb(path: &str) -> PyResult<PyRgbImage> {
    Ok(PyRgbImage {
        inner: imageio::load_rgb(path).map_err(to_py)?,
    })
}

#[pyfunction]
fn load_watermark(path: &str) -> PyResult<PyWatermark> {
    Ok(PyWatermark {
        inner: imageio::load_watermark(path).map_err(to_py)?,
    })
}

/// Embed `wm` into `host`; returns (marked_image, key).
#[pyfunction]
#[pyo3(signature = (host, wm, delta=1.0, arnold=10, select="rowmajor", seed=0))]
fn embed(
    host: &PyRgbImage,
    wm: &PyWatermark,
    delta: f64,
    arnold: u64,
    select: &str,
    seed: u64,
) -> PyResult<(PyRgbImage, PyKey)> {
    let selection = match select {
        "rowmajor" => SelectionStrategy::RowMajor,
        "random" => SelectionStrategy::Random { seed },
        other => {
            return Err(PyValueError::new_err(format!(
                "select must be 'rowmajor' or 'random', got '{other}'"
            )))
        }
    };
    let params = EmbedParams {
        arnold_times: arnold,
        quant_step: delta,
        selection,
    };
    let (marked, key) = wmark::embed(&host.inner, &wm.inner, &params).map_err(to_py)?;
    Ok((PyRgbImage { inner: marked }, PyKey { inner: key }))
}

/// Blind extraction: needs only the (possibly attacked) image and the key.
#[pyfunction]
fn extract(img: &PyRgbImage, key: &PyKey) -> PyResult<PyWatermark> {
    Ok(PyWatermark {
        inner: wmark::extract(&img.inner, &key.inner).map_err(to_py)?,
    })
}

/// Wavelet-compression attack: hard-threshold detail coefficients.
#[pyfunction]
fn wavelet_compress(img: &PyRgbImage, threshold: f64) -> PyResult<PyRgbImage> {
    if threshold < 0.0 {
        return Err(PyValueError::new_err("threshold must be >= 0"));
    }
    Ok(PyRgbImage {
        inner: wmark::attacks::wavelet_compress(&img.inner, &CompressionAttackSpec::new(threshold))
            .map_err(to_py)?,
    })
}

/// Cropping attack: overwrite the rectangle with a constant gray value.
#[pyfunction]
#[pyo3(signature = (img, x, y, width, height, fill=0))]
fn crop(
    img: &PyRgbImage,
    x: usize,
    y: usize,
    width: usize,
    height: usize,
    fill: u8,
) -> PyResult<PyRgbImage> {
    let mut spec = CropAttackSpec::new(x, y, width, height);
    spec.fill = fill;
    Ok(PyRgbImage {
        inner: wmark::attacks::crop(&img.inner, &spec).map_err(to_py)?,
    })
}

#[pyfunction]
fn psnr(a: &PyRgbImage, b: &PyRgbImage) -> PyResult<f64> {
    metrics::psnr_rgb(&a.inner, &b.inner).map_err(to_py)
}

#[pyfunction]
fn pearson(a: &PyRgbImage, b: &PyRgbImage) -> PyResult<f64> {
    metrics::pearson_rgb(&a.inner, &b.inner).map_err(to_py)
}

#[pyfunction]
fn nc(w: &PyWatermark, w_star: &PyWatermark) -> PyResult<f64> {
    metrics::nc(&w.inner, &w_star.inner).map_err(to_py)
}

#[pyfunction]
fn error_bits_pct(w: &PyWatermark, w_star: &PyWatermark) -> PyResult<f64> {
    metrics::error_bits_pct(&w.inner, &w_star.inner).map_err(to_py)
}

/// Period of the Arnold cat map on an n x n grid.
#[pyfunction]
fn arnold_period(n: usize) -> PyResult<u64> {
    if n < 1 {
        return Err(PyValueError::new_err("n must be >= 1"));
    }
    Ok(wmark::arnold::period(n))
}

#[pymodule]
fn wmark_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRgbImage>()?;
    m.add_class::<PyWatermark>()?;
    m.add_class::<PyKey>()?;
    m.add_function(wrap_pyfunction!(load_rgb, m)?)?;
    m.add_function(wrap_pyfunction!(load_watermark, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(wavelet_compress, m)?)?;
    m.add_function(wrap_pyfunction!(crop, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(nc, m)?)?;
    m.add_function(wrap_pyfunction!(error_bits_pct, m)?)?;
    m.add_function(wrap_pyfunction!(arnold_period, m)?)?;
    Ok(())
}

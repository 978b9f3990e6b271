use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum WmarkError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("matrix is not square: {width}x{height}")]
    NotSquare { width: usize, height: usize },

    #[error("plane too small for {levels}-level transform: {width}x{height} (need at least {min}x{min})")]
    PlaneTooSmall {
        width: usize,
        height: usize,
        levels: usize,
        min: usize,
    },

    #[error("watermark needs {required} coefficients but the target subband holds only {capacity}")]
    CapacityExceeded { required: usize, capacity: usize },

    #[error("quantization step must be positive, got {0}")]
    NonPositiveQuantStep(f64),

    #[error("arnold iteration count {times} must be below the map period {period} for side {side}")]
    ArnoldTimesOutOfRange {
        times: u64,
        period: u64,
        side: usize,
    },

    #[error("coefficient index {index} out of range for subband of {capacity} samples")]
    IndexOutOfRange { index: usize, capacity: usize },

    #[error("selection count {count} exceeds subband capacity {capacity}")]
    SelectionTooLarge { count: usize, capacity: usize },

    #[error("reference watermark has no 1-bits; NC is undefined")]
    AllZeroWatermark,

    #[error("input is constant; correlation is undefined")]
    ConstantInput,

    #[error("crop rectangle {x},{y} {width}x{height} out of bounds for {img_width}x{img_height} image")]
    CropOutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
        img_width: usize,
        img_height: usize,
    },

    #[error("degenerate crop rectangle: width and height must be at least 1")]
    EmptyCropRect,

    #[error("key file: {0}")]
    KeyParse(#[from] KeyParseError),

    #[error("unsupported image: {0}")]
    UnsupportedImage(String),

    #[error("image decode failed: {0}")]
    Decode(#[from] image::ImageError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Key-file parse failures. Each corruption mode gets its own diagnostic.
#[derive(Debug, Error, PartialEq)]
pub enum KeyParseError {
    #[error("missing WMKEY magic on first line")]
    BadMagic,

    #[error("unsupported key version {0} (expected 1)")]
    UnsupportedVersion(String),

    #[error("missing field `{0}`")]
    MissingField(&'static str),

    #[error("duplicate field `{0}`")]
    DuplicateField(String),

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("bad value for `{field}`: {value}")]
    BadValue { field: &'static str, value: String },

    #[error("duplicate coefficient index {0}")]
    DuplicateIndex(usize),

    #[error("expected {expected} indices (wm_side squared) but found {found}")]
    IndexCountMismatch { expected: usize, found: usize },

    #[error("unsupported subband `{0}` (expected LL3)")]
    UnsupportedSubband(String),

    #[error("unsupported level count {0} (expected 3)")]
    UnsupportedLevels(String),
}

pub type Result<T> = std::result::Result<T, WmarkError>;

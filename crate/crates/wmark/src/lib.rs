//! Blind color-image watermarking in the wavelet domain.
//!
//! A square binary watermark is Arnold-scrambled and embedded into the
//! quantized LL3 coefficients of the host's Y channel (YCbCr); extraction
//! needs only the watermarked image and a small key. The crate also ships
//! the attack models (wavelet-compression thresholding, cropping) and the
//! quality metrics (PSNR, NC, Pearson correlation, error-bit percentage)
//! used to evaluate imperceptibility and robustness.
//!
//! All image processing is real-valued; quantization to 8-bit samples
//! happens only when an image is written to disk (or inside an attack
//! that models lossy storage).

pub mod arnold;
pub mod attacks;
pub mod codec;
pub mod colorspace;
pub mod dwt;
pub mod error;
pub mod imageio;
pub mod metrics;
pub mod plane;

pub use error::{KeyParseError, Result, WmarkError};
pub use plane::{BitMatrix, Plane, RgbImage, YcbcrImage};

pub use codec::{embed, extract, EmbedParams, SelectionStrategy, WatermarkKey};

//! Reproducible degradations applied to watermarked images before
//! extraction: wavelet-compression thresholding and rectangular cropping.

use crate::colorspace::{rgb_to_ycbcr, ycbcr_to_rgb};
use crate::dwt::{dwt2_forward, dwt2_inverse};
use crate::error::{Result, WmarkError};
use crate::plane::{Plane, RgbImage, YcbcrImage};

/// Which YCbCr channels the compression attack touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttackChannels {
    /// Luminance only.
    YOnly,
    /// All three channels (default; closer to real lossy coding).
    #[default]
    All,
}

#[derive(Debug, Clone)]
pub struct CompressionAttackSpec {
    /// Detail coefficients with |d| <= threshold are zeroed.
    pub threshold: f64,
    pub levels: usize,
    pub channels: AttackChannels,
}

impl CompressionAttackSpec {
    pub fn new(threshold: f64) -> Self {
        CompressionAttackSpec {
            threshold,
            levels: 3,
            channels: AttackChannels::All,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CropAttackSpec {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
    /// 8-bit gray value written into the rectangle (default 0).
    pub fill: u8,
}

impl CropAttackSpec {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        CropAttackSpec {
            x,
            y,
            width,
            height,
            fill: 0,
        }
    }
}

fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor().clamp(0.0, 255.0)
}

fn hard_threshold_plane(p: &Plane, threshold: f64, levels: usize) -> Result<Plane> {
    let mut pyr = dwt2_forward(p, levels)?;
    for bands in &mut pyr.details {
        for band in [&mut bands.lh, &mut bands.hl, &mut bands.hh] {
            for v in band.samples_mut() {
                if v.abs() <= threshold {
                    *v = 0.0;
                }
            }
        }
    }
    dwt2_inverse(&pyr)
}

/// Lossy wavelet-compression model: hard-threshold every detail
/// coefficient, keep the approximation band, rebuild, clamp and round to
/// 8-bit.
pub fn wavelet_compress(img: &RgbImage, spec: &CompressionAttackSpec) -> Result<RgbImage> {
    assert!(spec.threshold >= 0.0, "threshold must be non-negative");
    let ycc = rgb_to_ycbcr(img);
    let y = hard_threshold_plane(&ycc.y, spec.threshold, spec.levels)?;
    let (cb, cr) = match spec.channels {
        AttackChannels::YOnly => (ycc.cb, ycc.cr),
        AttackChannels::All => (
            hard_threshold_plane(&ycc.cb, spec.threshold, spec.levels)?,
            hard_threshold_plane(&ycc.cr, spec.threshold, spec.levels)?,
        ),
    };
    let rgb = ycbcr_to_rgb(&YcbcrImage { y, cb, cr });
    Ok(RgbImage {
        r: rgb.r.map(round_half_up),
        g: rgb.g.map(round_half_up),
        b: rgb.b.map(round_half_up),
    })
}

/// Replace the rectangle with the fill value in all three channels;
/// every pixel outside stays bit-identical.
pub fn crop(img: &RgbImage, spec: &CropAttackSpec) -> Result<RgbImage> {
    if spec.width == 0 || spec.height == 0 {
        return Err(WmarkError::EmptyCropRect);
    }
    let (iw, ih) = (img.width(), img.height());
    if spec.x + spec.width > iw || spec.y + spec.height > ih {
        return Err(WmarkError::CropOutOfBounds {
            x: spec.x,
            y: spec.y,
            width: spec.width,
            height: spec.height,
            img_width: iw,
            img_height: ih,
        });
    }
    let mut out = img.clone();
    let fill = spec.fill as f64;
    for plane in [&mut out.r, &mut out.g, &mut out.b] {
        for y in spec.y..spec.y + spec.height {
            for x in spec.x..spec.x + spec.width {
                plane.set(x, y, fill);
            }
        }
    }
    Ok(out)
}

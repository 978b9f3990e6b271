//! Quality and robustness measures: MSE, PSNR, normalized correlation,
//! Pearson correlation and error-bit percentage.

use crate::error::{Result, WmarkError};
use crate::plane::{BitMatrix, Plane, RgbImage};

/// Mean squared error over two equally sized planes.
pub fn mse(a: &Plane, b: &Plane) -> Result<f64> {
    a.same_dims(b)?;
    let n = a.samples().len() as f64;
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n)
}

/// MSE over RGB images with all three channels' samples pooled.
pub fn mse_rgb(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (pa, pb) in a.channels().into_iter().zip(b.channels()) {
        pa.same_dims(pb)?;
        sum += pa
            .samples()
            .iter()
            .zip(pb.samples())
            .map(|(&x, &y)| (x - y) * (x - y))
            .sum::<f64>();
        n += pa.samples().len();
    }
    Ok(sum / n as f64)
}

fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    }
}

/// Peak signal-to-noise ratio in dB; identical inputs give infinity.
pub fn psnr(a: &Plane, b: &Plane) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

/// PSNR over RGB images, pooled across channels.
pub fn psnr_rgb(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    Ok(psnr_from_mse(mse_rgb(a, b)?))
}

/// Normalized correlation between a reference watermark and an extracted
/// one: sum(w * w*) / sum(w^2). Not symmetric; for binary inputs this is
/// the fraction of the reference's 1-bits that survive.
pub fn nc(w: &BitMatrix, w_star: &BitMatrix) -> Result<f64> {
    if w.side() != w_star.side() {
        return Err(WmarkError::DimensionMismatch(
            w.side(),
            w.side(),
            w_star.side(),
            w_star.side(),
        ));
    }
    let denom = w.count_ones();
    if denom == 0 {
        return Err(WmarkError::AllZeroWatermark);
    }
    let num: usize = w
        .bits()
        .iter()
        .zip(w_star.bits())
        .map(|(&a, &b)| (a * b) as usize)
        .sum();
    Ok(num as f64 / denom as f64)
}

fn pearson_flat(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(WmarkError::ConstantInput);
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

/// Standard Pearson correlation coefficient between two planes.
pub fn pearson(a: &Plane, b: &Plane) -> Result<f64> {
    a.same_dims(b)?;
    pearson_flat(a.samples(), b.samples())
}

/// Pearson correlation over RGB images, all samples pooled.
pub fn pearson_rgb(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    let mut fa = Vec::new();
    let mut fb = Vec::new();
    for (pa, pb) in a.channels().into_iter().zip(b.channels()) {
        pa.same_dims(pb)?;
        fa.extend_from_slice(pa.samples());
        fb.extend_from_slice(pb.samples());
    }
    pearson_flat(&fa, &fb)
}

/// Percentage of watermark cells that differ.
pub fn error_bits_pct(w: &BitMatrix, w_star: &BitMatrix) -> Result<f64> {
    if w.side() != w_star.side() {
        return Err(WmarkError::DimensionMismatch(
            w.side(),
            w.side(),
            w_star.side(),
            w_star.side(),
        ));
    }
    let mismatches = w
        .bits()
        .iter()
        .zip(w_star.bits())
        .filter(|(a, b)| a != b)
        .count();
    Ok(100.0 * mismatches as f64 / w.bits().len() as f64)
}

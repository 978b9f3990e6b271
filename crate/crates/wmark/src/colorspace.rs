//! RGB <-> YCbCr conversion.
//!
//! Forward matrix (luma (0.29890, 0.58660, 0.11450) weights, JPEG-style
//! chroma rows, no +128 offset on Cb/Cr); the Cr/B entry is -0.08131 so
//! that the chroma rows sum to zero and the pair stays mutually inverse.

use crate::plane::{Plane, RgbImage, YcbcrImage};

pub const RGB_TO_YCBCR: [[f64; 3]; 3] = [
    [0.29890, 0.58660, 0.11450],
    [-0.16874, -0.33126, 0.50000],
    [0.50000, -0.41869, -0.08131],
];

pub const YCBCR_TO_RGB: [[f64; 3]; 3] = [
    [1.0, 0.0, 1.40200],
    [1.0, -0.34414, -0.71414],
    [1.0, 1.7720, 0.0],
];

#[inline]
pub fn rgb_pixel_to_ycbcr(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let m = &RGB_TO_YCBCR;
    (
        m[0][0] * r + m[0][1] * g + m[0][2] * b,
        m[1][0] * r + m[1][1] * g + m[1][2] * b,
        m[2][0] * r + m[2][1] * g + m[2][2] * b,
    )
}

#[inline]
pub fn ycbcr_pixel_to_rgb(y: f64, cb: f64, cr: f64) -> (f64, f64, f64) {
    let m = &YCBCR_TO_RGB;
    let r = m[0][0] * y + m[0][1] * cb + m[0][2] * cr;
    let g = m[1][0] * y + m[1][1] * cb + m[1][2] * cr;
    let b = m[2][0] * y + m[2][1] * cb + m[2][2] * cr;
    (
        r.clamp(0.0, 255.0),
        g.clamp(0.0, 255.0),
        b.clamp(0.0, 255.0),
    )
}

/// Per-pixel matrix product; full real precision, no rounding, no offset.
pub fn rgb_to_ycbcr(img: &RgbImage) -> YcbcrImage {
    let (w, h) = (img.width(), img.height());
    let mut y = Plane::new(w, h);
    let mut cb = Plane::new(w, h);
    let mut cr = Plane::new(w, h);
    for row in 0..h {
        for col in 0..w {
            let (yv, cbv, crv) = rgb_pixel_to_ycbcr(
                img.r.get(col, row),
                img.g.get(col, row),
                img.b.get(col, row),
            );
            y.set(col, row, yv);
            cb.set(col, row, cbv);
            cr.set(col, row, crv);
        }
    }
    YcbcrImage { y, cb, cr }
}

/// Per-pixel matrix product; results clamped to [0, 255]. Rounding to
/// integers happens only at image save time.
pub fn ycbcr_to_rgb(img: &YcbcrImage) -> RgbImage {
    let (w, h) = (img.width(), img.height());
    let mut r = Plane::new(w, h);
    let mut g = Plane::new(w, h);
    let mut b = Plane::new(w, h);
    for row in 0..h {
        for col in 0..w {
            let (rv, gv, bv) = ycbcr_pixel_to_rgb(
                img.y.get(col, row),
                img.cb.get(col, row),
                img.cr.get(col, row),
            );
            r.set(col, row, rv);
            g.set(col, row, gv);
            b.set(col, row, bv);
        }
    }
    RgbImage { r, g, b }
}

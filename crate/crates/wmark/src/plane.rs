//! Core sample containers: real-valued planes, tagged color images and
//! binary watermark matrices.

use crate::error::{Result, WmarkError};

/// A 2-D matrix of real-valued samples, row-major. One image channel or
/// one wavelet subband.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "plane dimensions must be positive");
        Plane {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "sample count mismatch");
        Plane {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Plane {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    pub fn samples(&self) -> &[f64] {
        &self.data
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Apply `f` to every sample.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn same_dims(&self, other: &Plane) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(WmarkError::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// Three RGB channels with identical dimensions. Samples are nominally in
/// [0, 255]; planes stay real-valued until an 8-bit save.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    pub r: Plane,
    pub g: Plane,
    pub b: Plane,
}

impl RgbImage {
    pub fn new(r: Plane, g: Plane, b: Plane) -> Result<Self> {
        r.same_dims(&g)?;
        r.same_dims(&b)?;
        Ok(RgbImage { r, g, b })
    }

    pub fn width(&self) -> usize {
        self.r.width()
    }

    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn channels(&self) -> [&Plane; 3] {
        [&self.r, &self.g, &self.b]
    }
}

/// Luminance plus two chroma-difference channels, real-valued and
/// unclamped. Cb/Cr carry no +128 offset.
#[derive(Debug, Clone, PartialEq)]
pub struct YcbcrImage {
    pub y: Plane,
    pub cb: Plane,
    pub cr: Plane,
}

impl YcbcrImage {
    pub fn new(y: Plane, cb: Plane, cr: Plane) -> Result<Self> {
        y.same_dims(&cb)?;
        y.same_dims(&cr)?;
        Ok(YcbcrImage { y, cb, cr })
    }

    pub fn width(&self) -> usize {
        self.y.width()
    }

    pub fn height(&self) -> usize {
        self.y.height()
    }
}

/// Square binary watermark, entries in {0, 1}, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    side: usize,
    bits: Vec<u8>,
}

impl BitMatrix {
    pub fn new(side: usize) -> Self {
        assert!(side > 0, "watermark side must be positive");
        BitMatrix {
            side,
            bits: vec![0; side * side],
        }
    }

    pub fn from_bits(side: usize, bits: Vec<u8>) -> Self {
        assert_eq!(bits.len(), side * side, "bit count mismatch");
        assert!(bits.iter().all(|&b| b <= 1), "entries must be 0 or 1");
        BitMatrix { side, bits }
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    /// `x` is the column, `y` the row.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.bits[y * self.side + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits[y * self.side + x] = bit;
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

//! Separable 2-D discrete wavelet transform with the CDF 9/7 biorthogonal
//! filter pair, implemented as lifting steps with whole-point symmetric
//! boundary extension.
//!
//! Normalization: the low-pass branch is scaled to DC gain sqrt(2) per
//! 1-D pass, so an L-level 2-D decomposition multiplies a constant input
//! by 2^L in the LL band (8x at three levels). The high-pass branch gets
//! the reciprocal scale.

use crate::error::{Result, WmarkError};
use crate::plane::Plane;

/// Lifting coefficients for the CDF 9/7 analysis ladder.
pub const ALPHA: f64 = -1.586_134_342_059_924;
pub const BETA: f64 = -0.052_980_118_572_961;
pub const GAMMA: f64 = 0.882_911_075_530_934;
pub const DELTA: f64 = 0.443_506_852_043_971;

/// DC gain of the unscaled low-pass ladder: 1 + 2*beta*(1 + 2*alpha).
fn raw_low_dc_gain() -> f64 {
    1.0 + 2.0 * BETA * (1.0 + 2.0 * ALPHA)
}

/// Scale applied to the low-pass branch so its DC gain becomes sqrt(2).
pub fn low_scale() -> f64 {
    std::f64::consts::SQRT_2 / raw_low_dc_gain()
}

/// Scale applied to the high-pass branch (reciprocal of the low scale).
pub fn high_scale() -> f64 {
    1.0 / low_scale()
}

/// An L-level decomposition: one coarsest LL plane plus three detail
/// planes (LH, HL, HH) per level. `details[0]` is the finest level.
#[derive(Debug, Clone)]
pub struct SubbandPyramid {
    pub ll: Plane,
    pub details: Vec<DetailBands>,
    width: usize,
    height: usize,
}

/// Horizontal (LH), vertical (HL) and diagonal (HH) details of one level.
#[derive(Debug, Clone)]
pub struct DetailBands {
    pub lh: Plane,
    pub hl: Plane,
    pub hh: Plane,
}

impl SubbandPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Dimensions of the plane that produced this pyramid.
    pub fn original_dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Reflect an out-of-range index back into [0, n) around the endpoints
/// without repeating them (whole-point symmetry).
#[inline]
fn mirror(i: isize, n: usize) -> usize {
    let n = n as isize;
    debug_assert!(n >= 1);
    if n == 1 {
        return 0;
    }
    let span = 2 * (n - 1);
    let mut i = i.rem_euclid(span);
    if i >= n {
        i = span - i;
    }
    i as usize
}

/// In-place 1-D analysis. On return `x` holds the scaled lifting output
/// still interleaved (even = low, odd = high).
fn lift_forward(x: &mut [f64]) {
    let n = x.len();
    if n < 2 {
        return;
    }
    for (step, coef) in [(1usize, ALPHA), (0, BETA), (1, GAMMA), (0, DELTA)] {
        let mut i = step;
        while i < n {
            let left = x[mirror(i as isize - 1, n)];
            let right = x[mirror(i as isize + 1, n)];
            x[i] += coef * (left + right);
            i += 2;
        }
    }
    let (lo, hi) = (low_scale(), high_scale());
    for (i, v) in x.iter_mut().enumerate() {
        *v *= if i % 2 == 0 { lo } else { hi };
    }
}

/// Exact inverse of `lift_forward`.
fn lift_inverse(x: &mut [f64]) {
    let n = x.len();
    if n < 2 {
        return;
    }
    let (lo, hi) = (low_scale(), high_scale());
    for (i, v) in x.iter_mut().enumerate() {
        *v /= if i % 2 == 0 { lo } else { hi };
    }
    for (step, coef) in [(0usize, DELTA), (1, GAMMA), (0, BETA), (1, ALPHA)] {
        let mut i = step;
        while i < n {
            let left = x[mirror(i as isize - 1, n)];
            let right = x[mirror(i as isize + 1, n)];
            x[i] -= coef * (left + right);
            i += 2;
        }
    }
}

/// Deinterleave a lifted signal into (low, high) halves.
fn split(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let low = x.iter().step_by(2).copied().collect();
    let high = x.iter().skip(1).step_by(2).copied().collect();
    (low, high)
}

/// Interleave (low, high) halves back into one signal.
fn merge(low: &[f64], high: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; low.len() + high.len()];
    for (i, &v) in low.iter().enumerate() {
        out[2 * i] = v;
    }
    for (i, &v) in high.iter().enumerate() {
        out[2 * i + 1] = v;
    }
    out
}

/// One analysis level: rows then columns. Returns (LL, LH, HL, HH).
fn analyze_level(p: &Plane) -> (Plane, Plane, Plane, Plane) {
    let (w, h) = (p.width(), p.height());
    let lw = w.div_ceil(2);
    let lh_w = w - lw;
    let lh_h = h.div_ceil(2);
    let hh_h = h - lh_h;

    // Row pass: left half low, right half high.
    let mut rowed = Plane::new(w, h);
    let mut buf = vec![0.0; w.max(h)];
    for y in 0..h {
        buf[..w].copy_from_slice(p.row(y));
        lift_forward(&mut buf[..w]);
        let (low, high) = split(&buf[..w]);
        for (x, &v) in low.iter().enumerate() {
            rowed.set(x, y, v);
        }
        for (x, &v) in high.iter().enumerate() {
            rowed.set(lw + x, y, v);
        }
    }

    // Column pass on the row-transformed plane.
    let mut full = Plane::new(w, h);
    for x in 0..w {
        for (y, slot) in buf[..h].iter_mut().enumerate() {
            *slot = rowed.get(x, y);
        }
        lift_forward(&mut buf[..h]);
        let (low, high) = split(&buf[..h]);
        for (y, &v) in low.iter().enumerate() {
            full.set(x, y, v);
        }
        for (y, &v) in high.iter().enumerate() {
            full.set(x, lh_h + y, v);
        }
    }

    let sub = |x0: usize, y0: usize, sw: usize, sh: usize| {
        let mut out = Plane::new(sw.max(1), sh.max(1));
        for y in 0..sh {
            for x in 0..sw {
                out.set(x, y, full.get(x0 + x, y0 + y));
            }
        }
        out
    };
    let ll = sub(0, 0, lw, lh_h);
    let hl = sub(lw, 0, lh_w, lh_h);
    let lh = sub(0, lh_h, lw, hh_h);
    let hh = sub(lw, lh_h, lh_w, hh_h);
    (ll, lh, hl, hh)
}

/// One synthesis level from (LL, LH, HL, HH) back to a (w x h) plane.
fn synthesize_level(ll: &Plane, lh: &Plane, hl: &Plane, hh: &Plane, w: usize, h: usize) -> Plane {
    let lw = w.div_ceil(2);
    let lh_h = h.div_ceil(2);

    // Undo the column pass.
    let mut rowed = Plane::new(w, h);
    let mut low = vec![0.0; h.div_ceil(2)];
    let mut high = vec![0.0; h / 2];
    for x in 0..w {
        let (top, bottom): (&Plane, &Plane) = if x < lw { (ll, lh) } else { (hl, hh) };
        let sx = if x < lw { x } else { x - lw };
        for (y, slot) in low[..lh_h].iter_mut().enumerate() {
            *slot = top.get(sx, y);
        }
        for (y, slot) in high[..h - lh_h].iter_mut().enumerate() {
            *slot = bottom.get(sx, y);
        }
        let mut col = merge(&low[..lh_h], &high[..h - lh_h]);
        lift_inverse(&mut col);
        for (y, &v) in col.iter().enumerate() {
            rowed.set(x, y, v);
        }
    }

    // Undo the row pass.
    let mut out = Plane::new(w, h);
    for y in 0..h {
        let row = rowed.row(y);
        let mut full = merge(&row[..lw], &row[lw..]);
        lift_inverse(&mut full);
        for (x, &v) in full.iter().enumerate() {
            out.set(x, y, v);
        }
    }
    out
}

/// Multi-level separable analysis, recursing on LL.
pub fn dwt2_forward(p: &Plane, levels: usize) -> Result<SubbandPyramid> {
    assert!(levels >= 1, "need at least one level");
    let min = 1usize << levels;
    if p.width() < min || p.height() < min {
        return Err(WmarkError::PlaneTooSmall {
            width: p.width(),
            height: p.height(),
            levels,
            min,
        });
    }
    let mut details = Vec::with_capacity(levels);
    let mut cur = p.clone();
    for _ in 0..levels {
        let (ll, lh, hl, hh) = analyze_level(&cur);
        details.push(DetailBands { lh, hl, hh });
        cur = ll;
    }
    Ok(SubbandPyramid {
        ll: cur,
        details,
        width: p.width(),
        height: p.height(),
    })
}

/// Multi-level synthesis; dimensions come from the matching forward call.
pub fn dwt2_inverse(pyr: &SubbandPyramid) -> Result<Plane> {
    let levels = pyr.levels();
    // Per-level target dimensions, coarsest first.
    let mut dims = Vec::with_capacity(levels);
    let (mut w, mut h) = pyr.original_dims();
    for _ in 0..levels {
        dims.push((w, h));
        w = w.div_ceil(2);
        h = h.div_ceil(2);
    }
    let mut cur = pyr.ll.clone();
    for level in (0..levels).rev() {
        let (tw, th) = dims[level];
        let bands = &pyr.details[level];
        let lw = tw.div_ceil(2);
        let lh_h = th.div_ceil(2);
        let check = |p: &Plane, ew: usize, eh: usize| -> Result<()> {
            if p.width() != ew || p.height() != eh {
                return Err(WmarkError::DimensionMismatch(p.width(), p.height(), ew, eh));
            }
            Ok(())
        };
        check(&cur, lw, lh_h)?;
        check(&bands.hl, tw - lw, lh_h)?;
        check(&bands.lh, lw, th - lh_h)?;
        check(&bands.hh, tw - lw, th - lh_h)?;
        cur = synthesize_level(&cur, &bands.lh, &bands.hl, &bands.hh, tw, th);
    }
    Ok(cur)
}

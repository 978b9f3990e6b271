//! Watermark embedding and blind extraction, plus the key data model and
//! its line-oriented file format.
//!
//! Embedding quantizes the magnitudes of selected LL3 coefficients of the
//! Y channel to a step-delta grid and forces the parity of each grid index
//! to one scrambled watermark bit, restoring the recorded sign afterwards.
//! Extraction re-quantizes at the key's indices and reads the parities
//! back; it never sees the original host.

use std::fmt::Write as _;

use crate::arnold;
use crate::colorspace::{rgb_to_ycbcr, ycbcr_to_rgb};
use crate::dwt::{dwt2_forward, dwt2_inverse};
use crate::error::{KeyParseError, Result, WmarkError};
use crate::plane::{BitMatrix, RgbImage, YcbcrImage};

/// Decomposition depth; the coarsest approximation subband LL3 is the
/// embedding target in format version 1.
pub const LEVELS: usize = 3;
pub const SUBBAND_ID: &str = "LL3";
const KEY_MAGIC: &str = "WMKEY";
const KEY_VERSION: u32 = 1;

/// How the embedding coefficients are picked inside LL3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionStrategy {
    /// First `count` indices in row-major order.
    #[default]
    RowMajor,
    /// Prefix of a seeded pseudorandom permutation. The indices themselves
    /// end up in the key, so the seed never needs to be shared.
    Random { seed: u64 },
}

/// Everything blind extraction needs.
#[derive(Debug, Clone, PartialEq)]
pub struct WatermarkKey {
    pub arnold_times: u64,
    pub quant_step: f64,
    pub levels: usize,
    pub subband_id: String,
    pub wm_side: usize,
    /// Row-major linear indices into LL3, one per watermark bit.
    pub indices: Vec<usize>,
}

/// Embedding parameters; the key records the resolved values.
#[derive(Debug, Clone)]
pub struct EmbedParams {
    pub arnold_times: u64,
    pub quant_step: f64,
    pub selection: SelectionStrategy,
}

impl Default for EmbedParams {
    fn default() -> Self {
        EmbedParams {
            arnold_times: 10,
            quant_step: 1.0,
            selection: SelectionStrategy::RowMajor,
        }
    }
}

/// Pick `count` distinct coefficient indices out of a width x height
/// subband.
pub fn select_indices(
    ll_width: usize,
    ll_height: usize,
    count: usize,
    strategy: SelectionStrategy,
) -> Result<Vec<usize>> {
    let capacity = ll_width * ll_height;
    if count > capacity {
        return Err(WmarkError::SelectionTooLarge { count, capacity });
    }
    match strategy {
        SelectionStrategy::RowMajor => Ok((0..count).collect()),
        SelectionStrategy::Random { seed } => {
            // Fisher-Yates over the full index range with a small
            // self-contained LCG so selection is reproducible without
            // pulling an RNG dependency into the library.
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            let mut all: Vec<usize> = (0..capacity).collect();
            for i in (1..capacity).rev() {
                let j = (next() % (i as u64 + 1)) as usize;
                all.swap(i, j);
            }
            all.truncate(count);
            Ok(all)
        }
    }
}

fn quantize_magnitude(c: f64, delta: f64) -> i64 {
    (c.abs() / delta).round() as i64
}

/// Pick the grid index with the requested parity closest to |c|.
/// Ties break upward; a zero index needing bit 1 becomes 1.
fn force_parity(q: i64, bit: u8, c_abs: f64, delta: f64) -> i64 {
    if (q & 1) as u8 == bit {
        return q;
    }
    if q == 0 {
        return 1;
    }
    let down = q - 1;
    let up = q + 1;
    let err_down = (down as f64 * delta - c_abs).abs();
    let err_up = (up as f64 * delta - c_abs).abs();
    if err_down < err_up {
        down
    } else {
        up
    }
}

/// Embed a scrambled binary watermark into the LL3 coefficients of the
/// host's Y channel. Returns the (real-valued) watermarked image and the
/// extraction key.
pub fn embed(
    host: &RgbImage,
    wm: &BitMatrix,
    params: &EmbedParams,
) -> Result<(RgbImage, WatermarkKey)> {
    if params.quant_step <= 0.0 || !params.quant_step.is_finite() {
        return Err(WmarkError::NonPositiveQuantStep(params.quant_step));
    }
    arnold::validate_times(wm.side(), params.arnold_times)?;

    let ycc = rgb_to_ycbcr(host);
    let mut pyr = dwt2_forward(&ycc.y, LEVELS)?;
    let capacity = pyr.ll.width() * pyr.ll.height();
    let required = wm.side() * wm.side();
    if required > capacity {
        return Err(WmarkError::CapacityExceeded { required, capacity });
    }

    let indices = select_indices(pyr.ll.width(), pyr.ll.height(), required, params.selection)?;
    let scrambled = arnold::scramble(wm, params.arnold_times);
    let delta = params.quant_step;

    let ll = pyr.ll.samples_mut();
    for (&idx, &bit) in indices.iter().zip(scrambled.bits()) {
        let c = ll[idx];
        let sign = if c < 0.0 { -1.0 } else { 1.0 };
        let q = quantize_magnitude(c, delta);
        let q_forced = force_parity(q, bit, c.abs(), delta);
        ll[idx] = sign * q_forced as f64 * delta;
    }

    let y_marked = dwt2_inverse(&pyr)?;
    let marked = ycbcr_to_rgb(&YcbcrImage {
        y: y_marked,
        cb: ycc.cb,
        cr: ycc.cr,
    });

    let key = WatermarkKey {
        arnold_times: params.arnold_times,
        quant_step: delta,
        levels: LEVELS,
        subband_id: SUBBAND_ID.to_string(),
        wm_side: wm.side(),
        indices,
    };
    Ok((marked, key))
}

/// Blind extraction: re-quantize the LL3 coefficients at the key's
/// indices, read the parities, unscramble.
pub fn extract(img: &RgbImage, key: &WatermarkKey) -> Result<BitMatrix> {
    key.validate()?;
    let ycc = rgb_to_ycbcr(img);
    let pyr = dwt2_forward(&ycc.y, key.levels)?;
    let capacity = pyr.ll.width() * pyr.ll.height();
    let ll = pyr.ll.samples();

    let side = key.wm_side;
    let mut scrambled = BitMatrix::new(side);
    for (pos, &idx) in key.indices.iter().enumerate() {
        if idx >= capacity {
            return Err(WmarkError::IndexOutOfRange {
                index: idx,
                capacity,
            });
        }
        let q = quantize_magnitude(ll[idx], key.quant_step);
        scrambled.set(pos % side, pos / side, (q & 1) as u8);
    }
    Ok(arnold::unscramble(&scrambled, key.arnold_times))
}

impl WatermarkKey {
    /// Structural checks shared by the parser and `extract`.
    pub fn validate(&self) -> Result<()> {
        if self.quant_step <= 0.0 || !self.quant_step.is_finite() {
            return Err(WmarkError::NonPositiveQuantStep(self.quant_step));
        }
        if self.levels != LEVELS {
            return Err(KeyParseError::UnsupportedLevels(self.levels.to_string()).into());
        }
        if self.subband_id != SUBBAND_ID {
            return Err(KeyParseError::UnsupportedSubband(self.subband_id.clone()).into());
        }
        let expected = self.wm_side * self.wm_side;
        if self.indices.len() != expected {
            return Err(KeyParseError::IndexCountMismatch {
                expected,
                found: self.indices.len(),
            }
            .into());
        }
        let mut seen = vec![false; self.indices.iter().max().map_or(0, |&m| m + 1)];
        for &idx in &self.indices {
            if seen[idx] {
                return Err(KeyParseError::DuplicateIndex(idx).into());
            }
            seen[idx] = true;
        }
        arnold::validate_times(self.wm_side, self.arnold_times)?;
        Ok(())
    }

    /// Serialize to the versioned line-oriented text format (LF endings).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{KEY_MAGIC} {KEY_VERSION}");
        let _ = writeln!(out, "arnold_times {}", self.arnold_times);
        let _ = writeln!(out, "quant_step {}", self.quant_step);
        let _ = writeln!(out, "levels {}", self.levels);
        let _ = writeln!(out, "subband {}", self.subband_id);
        let _ = writeln!(out, "wm_side {}", self.wm_side);
        let mut line = String::from("indices");
        for idx in &self.indices {
            let _ = write!(line, " {idx}");
        }
        out.push_str(&line);
        out.push('\n');
        out
    }

    /// Parse the text format, rejecting unknown versions and missing,
    /// duplicated or malformed fields.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(KeyParseError::BadMagic)?;
        let mut head = header.split_whitespace();
        if head.next() != Some(KEY_MAGIC) {
            return Err(KeyParseError::BadMagic.into());
        }
        let version = head.next().unwrap_or("").to_string();
        if version != KEY_VERSION.to_string() {
            return Err(KeyParseError::UnsupportedVersion(version).into());
        }

        let mut arnold_times: Option<u64> = None;
        let mut quant_step: Option<f64> = None;
        let mut levels: Option<usize> = None;
        let mut subband: Option<String> = None;
        let mut wm_side: Option<usize> = None;
        let mut indices: Option<Vec<usize>> = None;

        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (field, value) = line
                .split_once(' ')
                .ok_or_else(|| KeyParseError::UnknownField(line.to_string()))?;
            macro_rules! store {
                ($slot:ident, $field:literal, $parsed:expr) => {{
                    if $slot.is_some() {
                        return Err(KeyParseError::DuplicateField($field.to_string()).into());
                    }
                    $slot = Some($parsed);
                }};
            }
            match field {
                "arnold_times" => store!(
                    arnold_times,
                    "arnold_times",
                    value.trim().parse().map_err(|_| KeyParseError::BadValue {
                        field: "arnold_times",
                        value: value.to_string(),
                    })?
                ),
                "quant_step" => store!(
                    quant_step,
                    "quant_step",
                    value.trim().parse().map_err(|_| KeyParseError::BadValue {
                        field: "quant_step",
                        value: value.to_string(),
                    })?
                ),
                "levels" => store!(
                    levels,
                    "levels",
                    value.trim().parse().map_err(|_| KeyParseError::BadValue {
                        field: "levels",
                        value: value.to_string(),
                    })?
                ),
                "subband" => store!(subband, "subband", value.trim().to_string()),
                "wm_side" => store!(
                    wm_side,
                    "wm_side",
                    value.trim().parse().map_err(|_| KeyParseError::BadValue {
                        field: "wm_side",
                        value: value.to_string(),
                    })?
                ),
                "indices" => {
                    let parsed: std::result::Result<Vec<usize>, _> = value
                        .split_whitespace()
                        .map(|tok| {
                            tok.parse::<usize>().map_err(|_| KeyParseError::BadValue {
                                field: "indices",
                                value: tok.to_string(),
                            })
                        })
                        .collect();
                    store!(indices, "indices", parsed?)
                }
                other => return Err(KeyParseError::UnknownField(other.to_string()).into()),
            }
        }

        let key = WatermarkKey {
            arnold_times: arnold_times.ok_or(KeyParseError::MissingField("arnold_times"))?,
            quant_step: quant_step.ok_or(KeyParseError::MissingField("quant_step"))?,
            levels: levels.ok_or(KeyParseError::MissingField("levels"))?,
            subband_id: subband.ok_or(KeyParseError::MissingField("subband"))?,
            wm_side: wm_side.ok_or(KeyParseError::MissingField("wm_side"))?,
            indices: indices.ok_or(KeyParseError::MissingField("indices"))?,
        };
        key.validate()?;
        Ok(key)
    }
}

//! File I/O: 8-bit PNG/BMP images in, PNG out. Bridges files to the
//! real-valued `Plane`/`RgbImage`/`BitMatrix` types.

use std::path::Path;

use image::{ColorType, DynamicImage, ImageReader};

use crate::error::{Result, WmarkError};
use crate::plane::{BitMatrix, Plane, RgbImage};

fn round_half_up_u8(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

fn decode(path: &Path) -> Result<DynamicImage> {
    let img = ImageReader::open(path)?.decode()?;
    match img.color() {
        ColorType::L16 | ColorType::La16 | ColorType::Rgb16 | ColorType::Rgba16 => {
            Err(WmarkError::UnsupportedImage(format!(
                "{}: 16-bit samples are not supported; re-encode as 8-bit",
                path.display()
            )))
        }
        _ => Ok(img),
    }
}

/// Load an 8-bit PNG or BMP as real-valued RGB planes. Grayscale inputs
/// are replicated across channels; an alpha channel is stripped with a
/// warning on stderr.
pub fn load_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let img = decode(path)?;
    if img.color().has_alpha() {
        eprintln!(
            "warning: {}: alpha channel stripped before watermarking",
            path.display()
        );
    }
    let rgb = img.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let mut r = Plane::new(w, h);
    let mut g = Plane::new(w, h);
    let mut b = Plane::new(w, h);
    for (x, y, px) in rgb.enumerate_pixels() {
        r.set(x as usize, y as usize, px.0[0] as f64);
        g.set(x as usize, y as usize, px.0[1] as f64);
        b.set(x as usize, y as usize, px.0[2] as f64);
    }
    Ok(RgbImage { r, g, b })
}

/// Load a square image as a binary watermark, thresholding the pixel
/// luminance at 128.
pub fn load_watermark(path: impl AsRef<Path>) -> Result<BitMatrix> {
    let path = path.as_ref();
    let img = decode(path)?;
    let gray = img.to_luma8();
    let (w, h) = (gray.width() as usize, gray.height() as usize);
    if w != h {
        return Err(WmarkError::NotSquare {
            width: w,
            height: h,
        });
    }
    let bits = gray.pixels().map(|p| u8::from(p.0[0] >= 128)).collect();
    Ok(BitMatrix::from_bits(w, bits))
}

/// Save as 8-bit RGB PNG (round half up, clamp).
pub fn save_rgb(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let (w, h) = (img.width(), img.height());
    let mut out = image::RgbImage::new(w as u32, h as u32);
    for y in 0..h {
        for x in 0..w {
            out.put_pixel(
                x as u32,
                y as u32,
                image::Rgb([
                    round_half_up_u8(img.r.get(x, y)),
                    round_half_up_u8(img.g.get(x, y)),
                    round_half_up_u8(img.b.get(x, y)),
                ]),
            );
        }
    }
    out.save(path.as_ref())?;
    Ok(())
}

/// Save a watermark as a 0/255 grayscale PNG.
pub fn save_watermark(bm: &BitMatrix, path: impl AsRef<Path>) -> Result<()> {
    let n = bm.side();
    let mut out = image::GrayImage::new(n as u32, n as u32);
    for y in 0..n {
        for x in 0..n {
            out.put_pixel(
                x as u32,
                y as u32,
                image::Luma([if bm.get(x, y) == 1 { 255 } else { 0 }]),
            );
        }
    }
    out.save(path.as_ref())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rgb_save_load_round_trip() {
        let mut rng = StdRng::seed_from_u64(30);
        let w = 17;
        let h = 11;
        let mk = |rng: &mut StdRng| {
            Plane::from_vec(w, h, (0..w * h).map(|_| rng.gen_range(0..=255) as f64).collect())
        };
        let img = RgbImage {
            r: mk(&mut rng),
            g: mk(&mut rng),
            b: mk(&mut rng),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.png");
        save_rgb(&img, &path).unwrap();
        let back = load_rgb(&path).unwrap();
        assert_eq!(img, back);
        // overwrite succeeds
        save_rgb(&back, &path).unwrap();
    }

    #[test]
    fn watermark_save_load_round_trip() {
        let mut rng = StdRng::seed_from_u64(31);
        let bm = BitMatrix::from_bits(30, (0..900).map(|_| rng.gen_range(0..=1u8)).collect());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("wm.png");
        save_watermark(&bm, &path).unwrap();
        let back = load_watermark(&path).unwrap();
        assert_eq!(bm, back);
    }

    #[test]
    fn tiny_black_png() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.png");
        image::RgbImage::new(1, 1).save(&path).unwrap();
        let img = load_rgb(&path).unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.r.get(0, 0), 0.0);
    }

    #[test]
    fn grayscale_replicates_channels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gray.png");
        let mut gray = image::GrayImage::new(3, 2);
        gray.put_pixel(1, 1, image::Luma([200]));
        gray.save(&path).unwrap();
        let img = load_rgb(&path).unwrap();
        assert_eq!(img.r.get(1, 1), 200.0);
        assert_eq!(img.g.get(1, 1), 200.0);
        assert_eq!(img.b.get(1, 1), 200.0);
    }

    #[test]
    fn non_square_watermark_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("wide.png");
        image::GrayImage::new(4, 2).save(&path).unwrap();
        assert!(matches!(
            load_watermark(&path).unwrap_err(),
            WmarkError::NotSquare { .. }
        ));
    }

    #[test]
    fn sixteen_bit_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("deep.png");
        let img16 = image::ImageBuffer::<image::Rgb<u16>, Vec<u16>>::new(2, 2);
        image::DynamicImage::ImageRgb16(img16).save(&path).unwrap();
        assert!(matches!(
            load_rgb(&path).unwrap_err(),
            WmarkError::UnsupportedImage(_)
        ));
    }

    #[test]
    fn mixed_watermark_threshold_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mix.png");
        let mut rng = StdRng::seed_from_u64(32);
        let mut gray = image::GrayImage::new(8, 8);
        let mut expected = 0;
        for p in gray.pixels_mut() {
            let v: u8 = rng.gen();
            if v >= 128 {
                expected += 1;
            }
            *p = image::Luma([v]);
        }
        gray.save(&path).unwrap();
        let bm = load_watermark(&path).unwrap();
        assert_eq!(bm.count_ones(), expected);
    }
}

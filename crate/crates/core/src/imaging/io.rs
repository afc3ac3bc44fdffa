//! Frame and ROI files.
//!
//! Frames are read from PNG or binary PPM/PGM. ROIs are written as 8-bit
//! PGM with 0 for background and 255 for foreground.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder, ImageFormat, RgbImage};

use super::{BinaryMask, BinaryRoi, RgbFrame};
use crate::error::{Error, Result};

/// File extensions accepted as frame images.
pub const FRAME_EXTENSIONS: [&str; 4] = ["png", "ppm", "pgm", "pnm"];

pub fn is_frame_file(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| FRAME_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

fn image_error(path: &Path, err: image::ImageError) -> Error {
    match err {
        image::ImageError::IoError(source) => Error::io(path, source),
        other => Error::Image {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    }
}

pub fn load_frame(path: &Path) -> Result<RgbFrame> {
    let img = image::open(path)
        .map_err(|e| image_error(path, e))?
        .to_rgb8();
    let (w, h) = img.dimensions();
    let pixels = img.pixels().map(|p| p.0).collect();
    RgbFrame::new(w as usize, h as usize, pixels)
}

/// PNG bytes of a frame.
pub fn encode_frame_png(frame: &RgbFrame) -> Vec<u8> {
    let mut img = RgbImage::new(frame.width() as u32, frame.height() as u32);
    for (dst, src) in img.pixels_mut().zip(frame.pixels()) {
        dst.0 = *src;
    }
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)
        .expect("in-memory PNG encoding");
    out.into_inner()
}

pub fn save_frame_png(frame: &RgbFrame, path: &Path) -> Result<()> {
    fs::write(path, encode_frame_png(frame)).map_err(|e| Error::io(path, e))
}

/// Binary PGM (P5) bytes of a ROI, 0 for background and 255 for foreground.
pub fn encode_roi_pgm(roi: &BinaryRoi) -> Vec<u8> {
    let data: Vec<u8> = roi
        .bits()
        .iter()
        .map(|&b| if b { 255 } else { 0 })
        .collect();
    let mut out = Vec::new();
    PnmEncoder::new(&mut out)
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(
            &data,
            roi.width() as u32,
            roi.height() as u32,
            ExtendedColorType::L8,
        )
        .expect("in-memory PGM encoding");
    out
}

pub fn write_roi_pgm(roi: &BinaryRoi, path: &Path) -> Result<()> {
    fs::write(path, encode_roi_pgm(roi)).map_err(|e| Error::io(path, e))
}

/// Read a binary ROI image; any gray level of 128 or above is foreground.
/// The result is re-cropped and its components recounted.
pub fn read_roi_pgm(path: &Path) -> Result<BinaryRoi> {
    let img = image::open(path)
        .map_err(|e| image_error(path, e))?
        .to_luma8();
    let (w, h) = img.dimensions();
    let bits = img.pixels().map(|p| p.0[0] >= 128).collect();
    let mask = BinaryMask::new(w as usize, h as usize, bits)?;
    BinaryRoi::from_mask(&mask)
}

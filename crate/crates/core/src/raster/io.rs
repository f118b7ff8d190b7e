//! Grayscale image file I/O. Two containers are supported: 8-bit gray TIFF
//! (the usual sensor export) and binary PGM (P5), which keeps test fixtures
//! human-writable. Format is picked by extension, with a magic-byte sniff as
//! fallback for unknown extensions.

use std::fs;
use std::io::Read;
use std::path::Path;

use super::{GrayImage, RasterError};

pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage, RasterError> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(RasterError::MissingFile(path.to_path_buf()));
    }
    match sniff_format(path)? {
        Format::Pgm => load_pgm(path),
        Format::Tiff => load_tiff(path),
        Format::Unknown => Err(RasterError::UnsupportedFormat(format!(
            "unknown container: {}",
            path.display()
        ))),
    }
}

pub fn save_gray(image: &GrayImage, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let path = path.as_ref();
    match extension(path).as_deref() {
        Some("pgm") => save_pgm(image, path),
        Some("tif") | Some("tiff") => save_tiff(image, path),
        other => Err(RasterError::UnsupportedFormat(format!(
            "cannot infer output container from extension {:?}",
            other
        ))),
    }
}

enum Format {
    Pgm,
    Tiff,
    Unknown,
}

fn extension(path: &Path) -> Option<String> {
    path.extension().map(|e| e.to_string_lossy().to_ascii_lowercase())
}

fn sniff_format(path: &Path) -> Result<Format, RasterError> {
    match extension(path).as_deref() {
        Some("pgm") => return Ok(Format::Pgm),
        Some("tif") | Some("tiff") => return Ok(Format::Tiff),
        _ => {}
    }
    let mut magic = [0u8; 4];
    let mut file = fs::File::open(path)?;
    let n = file.read(&mut magic)?;
    if n >= 2 && &magic[..2] == b"P5" {
        Ok(Format::Pgm)
    } else if n >= 4 && (magic == *b"II*\0" || magic == *b"MM\0*") {
        Ok(Format::Tiff)
    } else {
        Ok(Format::Unknown)
    }
}

// --- PGM (P5, maxval <= 255) ---

fn load_pgm(path: &Path) -> Result<GrayImage, RasterError> {
    let bytes = fs::read(path)?;
    let corrupt = |msg: &str| RasterError::CorruptFile(format!("{}: {msg}", path.display()));

    let mut pos = 0usize;
    let magic = pgm_token(&bytes, &mut pos).ok_or_else(|| corrupt("missing magic"))?;
    if magic != b"P5" {
        return Err(RasterError::UnsupportedFormat(format!(
            "{}: PGM subtype {} (only binary P5 is supported)",
            path.display(),
            String::from_utf8_lossy(magic)
        )));
    }
    let width: u32 = pgm_number(&bytes, &mut pos).ok_or_else(|| corrupt("bad width"))?;
    let height: u32 = pgm_number(&bytes, &mut pos).ok_or_else(|| corrupt("bad height"))?;
    let maxval: u32 = pgm_number(&bytes, &mut pos).ok_or_else(|| corrupt("bad maxval"))?;
    if maxval == 0 || maxval > 255 {
        return Err(RasterError::UnsupportedFormat(format!(
            "{}: maxval {maxval} is not 8-bit",
            path.display()
        )));
    }
    // Single whitespace byte separates the header from the raster.
    pos += 1;
    let expected = width as usize * height as usize;
    if width == 0 || height == 0 || bytes.len() < pos + expected {
        return Err(corrupt("truncated raster"));
    }
    GrayImage::new(width, height, bytes[pos..pos + expected].to_vec())
}

/// Next token, skipping whitespace and `#` comment lines.
fn pgm_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if *pos > start {
        Some(&bytes[start..*pos])
    } else {
        None
    }
}

fn pgm_number(bytes: &[u8], pos: &mut usize) -> Option<u32> {
    let tok = pgm_token(bytes, pos)?;
    // Leave `pos` on the whitespace byte after the token so the caller can
    // skip exactly one separator before the raster.
    std::str::from_utf8(tok).ok()?.parse().ok()
}

fn save_pgm(image: &GrayImage, path: &Path) -> Result<(), RasterError> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.data());
    fs::write(path, out)?;
    Ok(())
}

// --- TIFF, via the image crate ---

fn load_tiff(path: &Path) -> Result<GrayImage, RasterError> {
    let dynamic = image::ImageReader::open(path)
        .map_err(RasterError::Io)?
        .decode()
        .map_err(|e| map_image_error(path, e))?;
    match dynamic {
        image::DynamicImage::ImageLuma8(buf) => {
            let (w, h) = (buf.width(), buf.height());
            GrayImage::new(w, h, buf.into_raw())
        }
        other => Err(RasterError::UnsupportedFormat(format!(
            "{}: expected 8-bit grayscale, got {:?}",
            path.display(),
            other.color()
        ))),
    }
}

fn save_tiff(image: &GrayImage, path: &Path) -> Result<(), RasterError> {
    let buf: image::GrayImage =
        image::ImageBuffer::from_raw(image.width(), image.height(), image.data().to_vec())
            .expect("dimensions validated at construction");
    buf.save(path).map_err(|e| map_image_error(path, e))
}

fn map_image_error(path: &Path, err: image::ImageError) -> RasterError {
    match err {
        image::ImageError::Unsupported(e) => {
            RasterError::UnsupportedFormat(format!("{}: {e}", path.display()))
        }
        image::ImageError::IoError(e) => RasterError::Io(e),
        other => RasterError::CorruptFile(format!("{}: {other}", path.display())),
    }
}

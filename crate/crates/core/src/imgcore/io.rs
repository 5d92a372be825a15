use std::io::Cursor;
use std::path::Path;

use image::{ImageFormat, RgbImage};

use super::ImageBuffer;
use crate::error::{Error, Result};

/// Decodes a PNG or JPEG file into an RGB buffer. Alpha is dropped,
/// grayscale sources are expanded to three channels.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let decode_err = |message: String| Error::Decode {
        path: path.to_path_buf(),
        message,
    };
    let format = image::guess_format(&bytes).map_err(|e| decode_err(e.to_string()))?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Jpeg) {
        return Err(decode_err(format!("unsupported format {format:?}")));
    }
    let rgb = image::load_from_memory_with_format(&bytes, format)
        .map_err(|e| decode_err(e.to_string()))?
        .into_rgb8();
    let (w, h) = rgb.dimensions();
    ImageBuffer::from_raw(w, h, rgb.as_raw())
}

/// Encodes `img` as JPEG when the extension is `jpg`/`jpeg`, PNG otherwise.
pub fn save_image(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let format = match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("jpg" | "jpeg") => ImageFormat::Jpeg,
        _ => ImageFormat::Png,
    };
    let rgb = RgbImage::from_raw(img.width(), img.height(), img.to_raw())
        .expect("buffer length matches dimensions");
    let mut out = Cursor::new(Vec::new());
    rgb.write_to(&mut out, format).map_err(|e| Error::Encode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    std::fs::write(path, out.into_inner()).map_err(|e| Error::io(path, e))
}

use crate::error::{Error, Result};

use super::RectRegion;

pub type Rgb = [u8; 3];

/// Owned 8-bit RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, pixels: Vec<Rgb>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be >= 1, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} needs {expected} pixels, got {}",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: u32, height: u32, color: Rgb) -> Result<Self> {
        Self::new(width, height, vec![color; width as usize * height as usize])
    }

    /// Builds a buffer from interleaved `RGBRGB...` bytes.
    pub fn from_raw(width: u32, height: u32, raw: &[u8]) -> Result<Self> {
        if !raw.len().is_multiple_of(3) {
            return Err(Error::InvalidImage(format!(
                "raw length {} is not a multiple of 3",
                raw.len()
            )));
        }
        let pixels = raw.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(width, height, pixels)
    }

    pub fn to_raw(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    #[inline]
    fn offset(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Rgb {
        self.pixels[self.offset(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: Rgb) {
        let i = self.offset(x, y);
        self.pixels[i] = value;
    }

    /// Applies `f` to every pixel inside `region`, leaving the rest untouched.
    pub fn map_region(&mut self, region: RectRegion, mut f: impl FnMut(Rgb) -> Rgb) {
        assert!(region.fits(self.width, self.height), "region out of bounds");
        for y in region.y..region.y + region.h {
            let row = self.offset(region.x, y);
            for px in &mut self.pixels[row..row + region.w as usize] {
                *px = f(*px);
            }
        }
    }

    /// Copies the pixels of `region` from `src` (same dimensions) into `self`.
    pub fn copy_region_from(&mut self, src: &ImageBuffer, region: RectRegion) {
        assert_eq!(self.dimensions(), src.dimensions(), "dimension mismatch");
        assert!(region.fits(self.width, self.height), "region out of bounds");
        for y in region.y..region.y + region.h {
            let row = self.offset(region.x, y);
            let end = row + region.w as usize;
            self.pixels[row..end].copy_from_slice(&src.pixels[row..end]);
        }
    }

    pub fn map_pixels(&self, f: impl Fn(Rgb) -> Rgb) -> ImageBuffer {
        ImageBuffer {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }

    /// True when every pixel has R = G = B.
    pub fn is_gray(&self) -> bool {
        self.pixels.iter().all(|&[r, g, b]| r == g && g == b)
    }
}

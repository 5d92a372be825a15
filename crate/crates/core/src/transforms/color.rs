//! Color-free intermediaries: BT.601 grayscale and an inverted Sobel sketch.

use crate::imgcore::{ImageBuffer, Rgb};

/// BT.601 luma with round-half-up, in exact integer arithmetic.
#[inline]
pub fn luma([r, g, b]: Rgb) -> u8 {
    let scaled = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    // weights sum to 1000, so the result never exceeds 255
    ((scaled + 500) / 1000) as u8
}

#[inline]
pub(crate) fn gray_pixel(px: Rgb) -> Rgb {
    let l = luma(px);
    [l, l, l]
}

/// Replaces every pixel with its luma replicated across all three channels.
pub fn to_grayscale(img: &ImageBuffer) -> ImageBuffer {
    img.map_pixels(gray_pixel)
}

/// Pencil-sketch style rendering: luma, 3x3 Sobel gradient magnitude
/// (replicated borders), normalized so the strongest edge maps to 255, then
/// inverted so edges are dark on white. A flat image becomes all white.
pub fn to_sketch(img: &ImageBuffer) -> ImageBuffer {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let lum: Vec<i32> = img.pixels().iter().map(|&p| luma(p) as i32).collect();
    let at = |x: isize, y: isize| {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        lum[y * w + x]
    };

    let mut mag = vec![0f64; w * h];
    let mut max = 0f64;
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
            let m = ((gx * gx + gy * gy) as f64).sqrt();
            mag[y as usize * w + x as usize] = m;
            max = max.max(m);
        }
    }

    let pixels = mag
        .iter()
        .map(|&m| {
            let v = if max > 0.0 {
                255 - (m / max * 255.0).round() as u8
            } else {
                255
            };
            [v, v, v]
        })
        .collect();
    ImageBuffer::new(img.width(), img.height(), pixels).expect("same dimensions")
}

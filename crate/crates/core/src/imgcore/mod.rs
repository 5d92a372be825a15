//! Image buffers, rectangle geometry, file IO and the seeded randomness
//! shared by every transform.

mod buffer;
mod io;
mod rect;
mod rng;

pub use buffer::{ImageBuffer, Rgb};
pub use io::{load_image, save_image};
pub use rect::RectRegion;
pub use rng::RngStream;

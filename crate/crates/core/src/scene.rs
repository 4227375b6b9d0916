//! A deterministic procedural grayscale scene with the smooth, strongly
//! correlated structure of a natural photograph. Used when no input image
//! is supplied to `xcross reproduce`.

use std::f64::consts::PI;

use crate::image::GrayImage;

pub fn synthetic_scene(rows: usize, cols: usize) -> GrayImage {
    let (h, w) = (rows.max(1) as f64, cols.max(1) as f64);
    GrayImage::from_fn(rows, cols, |r, c| {
        let (y, x) = (r as f64 / h, c as f64 / w);
        // sky gradient, a hill line, a disc and a soft texture
        let mut v = 60.0 + 120.0 * y;
        let ridge = 0.55 + 0.08 * (2.0 * PI * 1.5 * x).sin();
        if y > ridge {
            v = 40.0 + 60.0 * (y - ridge) + 25.0 * (2.0 * PI * 6.0 * x).sin() * (2.0 * PI * 4.0 * y).cos();
        }
        let (dx, dy) = (x - 0.3, y - 0.3);
        if dx * dx + dy * dy < 0.012 {
            v = 235.0 - 150.0 * (dx * dx + dy * dy);
        }
        v += 6.0 * (2.0 * PI * (7.0 * x + 3.0 * y)).sin();
        v.round().clamp(0.0, 255.0) as u8
    })
}

#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xcross::image_io::read_pgm;
use xcross::{GrayImage, KeyMaterial};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// The 256×256 natural grayscale test image.
pub fn camera() -> GrayImage {
    let bytes = std::fs::read(data_path("camera256.pgm")).expect("test image present");
    read_pgm(&bytes).expect("test image parses")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_keys(seed: u64, n: usize) -> Vec<KeyMaterial> {
    let mut rng = rng(seed);
    (0..n).map(|_| KeyMaterial::random(&mut rng)).collect()
}

pub fn random_image<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> GrayImage {
    GrayImage::from_fn(rows, cols, |_, _| rng.random())
}

/// Box-filter downscale by an integer factor.
pub fn downscale(img: &GrayImage, factor: usize) -> GrayImage {
    let area = (factor * factor) as u32;
    GrayImage::from_fn(img.rows() / factor, img.cols() / factor, |r, c| {
        let mut sum = 0u32;
        for dr in 0..factor {
            for dc in 0..factor {
                sum += u32::from(img.get(r * factor + dr, c * factor + dc));
            }
        }
        ((sum + area / 2) / area) as u8
    })
}

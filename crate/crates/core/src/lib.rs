//! Chaos-keyed grayscale image cipher.
//!
//! Encryption runs three stages over an `M x N` image (`M`, `N` multiples
//! of 4):
//!
//! 1. the image is split into four quadrants which are chained through an
//!    XOR cascade, each link passing through the X-Cross pixel permutation
//!    ([`permutation`]);
//! 2. the bits of every quadrant are permuted by a chaotic extraction key
//!    ([`ibt`]);
//! 3. every pixel goes through one of three chaotic S-boxes plus a
//!    post-operation selected per pixel, then is XORed with a chaotic
//!    mask byte ([`substitution`]).
//!
//! All key artifacts come from a [`KeyMaterial`] through [`key_schedule`],
//! which in turn drives the maps in [`chaotic_maps`]. Decryption applies
//! the exact inverse of each stage in reverse order.
//!
//! ```
//! use xcross::{decrypt, encrypt, GrayImage, KeyMaterial};
//!
//! let key = KeyMaterial::reference();
//! let img = GrayImage::from_fn(8, 8, |r, c| (r * 8 + c) as u8);
//! let ct = encrypt(&img, &key).unwrap();
//! assert_eq!(decrypt(&ct, &key).unwrap(), img);
//! ```

pub mod analysis;
pub mod chaotic_maps;
pub mod cli;
pub mod error;
pub mod ibt;
pub mod image;
pub mod image_io;
pub mod key_schedule;
pub mod permutation;
pub mod pipeline;
pub mod scene;
pub mod substitution;
pub mod trig;

pub use error::{Error, Result};
pub use image::GrayImage;
pub use key_schedule::KeyMaterial;
pub use pipeline::{decrypt, derive_context, encrypt, CipherContext, Stages};

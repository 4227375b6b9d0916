//! Dynamic substitution. Each pixel's operation code picks one of three
//! S-boxes and a fixed post-operation applied to the looked-up value:
//!
//! | code | forward                   |
//! |------|---------------------------|
//! | 0    | `S0[p]`                   |
//! | 1    | `!S1[p]`                  |
//! | 2    | `S2[p].rotate_left(1)`    |
//!
//! The stage then XORs the pixel's chaotic mask byte from the
//! [`OperationMatrix`] onto the result. Without the mask the output
//! histogram is a mixture of three relabelings of the input histogram and
//! keeps any bit bias the permutation layers could not remove.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::key_schedule::{OperationMatrix, SBox};

/// Forward and inverse tables for the three S-boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionSuite {
    sboxes: [SBox; 3],
    inverse: [SBox; 3],
}

impl SubstitutionSuite {
    pub fn new(sboxes: [SBox; 3]) -> Self {
        let inverse = [sboxes[0].inverse(), sboxes[1].inverse(), sboxes[2].inverse()];
        SubstitutionSuite { sboxes, inverse }
    }

    pub fn identity() -> Self {
        SubstitutionSuite::new([SBox::identity(), SBox::identity(), SBox::identity()])
    }

    pub fn sboxes(&self) -> &[SBox; 3] {
        &self.sboxes
    }

    pub fn inverse_sboxes(&self) -> &[SBox; 3] {
        &self.inverse
    }
}

#[inline]
pub fn substitute_pixel(p: u8, op: u8, suite: &SubstitutionSuite) -> Result<u8> {
    match op {
        0 => Ok(suite.sboxes[0].apply(p)),
        1 => Ok(!suite.sboxes[1].apply(p)),
        2 => Ok(suite.sboxes[2].apply(p).rotate_left(1)),
        _ => Err(Error::InvalidOpCode(op)),
    }
}

#[inline]
pub fn unsubstitute_pixel(c: u8, op: u8, suite: &SubstitutionSuite) -> Result<u8> {
    match op {
        0 => Ok(suite.inverse[0].apply(c)),
        1 => Ok(suite.inverse[1].apply(!c)),
        2 => Ok(suite.inverse[2].apply(c.rotate_right(1))),
        _ => Err(Error::InvalidOpCode(op)),
    }
}

/// [`substitute_pixel`] followed by XOR with `mask`.
#[inline]
pub fn substitute_masked(p: u8, op: u8, mask: u8, suite: &SubstitutionSuite) -> Result<u8> {
    Ok(substitute_pixel(p, op, suite)? ^ mask)
}

#[inline]
pub fn unsubstitute_masked(c: u8, op: u8, mask: u8, suite: &SubstitutionSuite) -> Result<u8> {
    unsubstitute_pixel(c ^ mask, op, suite)
}

fn map_stage(
    img: &GrayImage,
    ops: &OperationMatrix,
    suite: &SubstitutionSuite,
    f: fn(u8, u8, u8, &SubstitutionSuite) -> Result<u8>,
) -> Result<GrayImage> {
    if (img.rows(), img.cols()) != (ops.rows(), ops.cols()) {
        return Err(Error::dimension(format!(
            "operation matrix {}x{} does not match image {}x{}",
            ops.rows(),
            ops.cols(),
            img.rows(),
            img.cols()
        )));
    }
    let pixels = img
        .pixels()
        .iter()
        .zip(ops.codes().iter().zip(ops.masks()))
        .map(|(&p, (&op, &mask))| f(p, op, mask, suite))
        .collect::<Result<Vec<u8>>>()?;
    GrayImage::new(img.rows(), img.cols(), pixels)
}

pub fn substitution_stage(img: &GrayImage, ops: &OperationMatrix, suite: &SubstitutionSuite) -> Result<GrayImage> {
    map_stage(img, ops, suite, substitute_masked)
}

pub fn substitution_stage_invert(
    img: &GrayImage,
    ops: &OperationMatrix,
    suite: &SubstitutionSuite,
) -> Result<GrayImage> {
    map_stage(img, ops, suite, unsubstitute_masked)
}

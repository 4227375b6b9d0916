//! Inter-Bit Transference: a key-driven permutation of the bits of one
//! quadrant block.

use crate::error::{Error, Result};
use crate::key_schedule::ExtractionKey;
use crate::permutation::{Block, QuadSplit};

/// The bits of a block, row-major, most significant bit of each pixel first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitFusionArray(Vec<bool>);

impl BitFusionArray {
    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl From<Vec<bool>> for BitFusionArray {
    fn from(bits: Vec<bool>) -> Self {
        BitFusionArray(bits)
    }
}

pub fn block_to_bits(blk: &Block) -> BitFusionArray {
    let bits = blk
        .pixels()
        .iter()
        .flat_map(|&p| (0..8).rev().map(move |i| (p >> i) & 1 == 1))
        .collect();
    BitFusionArray(bits)
}

pub fn bits_to_block(bfa: &BitFusionArray, rows: usize, cols: usize) -> Result<Block> {
    if rows.checked_mul(cols).and_then(|n| n.checked_mul(8)) != Some(bfa.len()) {
        return Err(Error::dimension(format!(
            "{} bits cannot fill a {rows}x{cols} block",
            bfa.len()
        )));
    }
    let pixels = bfa
        .0
        .chunks_exact(8)
        .map(|byte| byte.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8))
        .collect();
    Block::new(rows, cols, pixels)
}

fn check_key(blk: &Block, key: &ExtractionKey) -> Result<()> {
    if key.len() != blk.pixels().len() * 8 {
        return Err(Error::dimension(format!(
            "extraction key of length {} does not fit a {}x{} block",
            key.len(),
            blk.rows(),
            blk.cols()
        )));
    }
    Ok(())
}

/// Output bit `j` is input bit `key[j]`.
pub fn ibt_apply(blk: &Block, key: &ExtractionKey) -> Result<Block> {
    check_key(blk, key)?;
    let src = block_to_bits(blk);
    let fused: Vec<bool> = key.perm().iter().map(|&i| src.0[i as usize]).collect();
    bits_to_block(&BitFusionArray(fused), blk.rows(), blk.cols())
}

/// Inverse of [`ibt_apply`] under the same key.
pub fn ibt_invert(blk: &Block, key: &ExtractionKey) -> Result<Block> {
    check_key(blk, key)?;
    let src = block_to_bits(blk);
    let mut restored = vec![false; src.len()];
    for (j, &i) in key.perm().iter().enumerate() {
        restored[i as usize] = src.0[j];
    }
    bits_to_block(&BitFusionArray(restored), blk.rows(), blk.cols())
}

/// Quadrant `a` uses `keys[0]`, `b` uses `keys[1]`, and so on.
pub fn ibt_stage(q: &QuadSplit, keys: &[ExtractionKey; 4]) -> Result<QuadSplit> {
    Ok(QuadSplit {
        a: ibt_apply(&q.a, &keys[0])?,
        b: ibt_apply(&q.b, &keys[1])?,
        c: ibt_apply(&q.c, &keys[2])?,
        d: ibt_apply(&q.d, &keys[3])?,
    })
}

pub fn ibt_stage_invert(q: &QuadSplit, keys: &[ExtractionKey; 4]) -> Result<QuadSplit> {
    Ok(QuadSplit {
        a: ibt_invert(&q.a, &keys[0])?,
        b: ibt_invert(&q.b, &keys[1])?,
        c: ibt_invert(&q.c, &keys[2])?,
        d: ibt_invert(&q.d, &keys[3])?,
    })
}

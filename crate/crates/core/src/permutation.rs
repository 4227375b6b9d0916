//! Pixel-level diffusion: the X-Cross position permutation of a quadrant
//! block and the XOR cascade that chains the four quadrants together.

use crate::error::{Error, Result};
use crate::image::{check_cipher_dims, GrayImage};

/// A rectangular run of pixels, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl Block {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(pixels.len()) {
            return Err(Error::dimension(format!(
                "{rows}x{cols} block given {} pixels",
                pixels.len()
            )));
        }
        Ok(Block { rows, cols, pixels })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Block {
            rows,
            cols,
            pixels: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.cols + col]
    }

    /// Elementwise XOR of two equally sized blocks.
    pub fn xor(&self, other: &Block) -> Result<Block> {
        self.same_shape(other)?;
        let pixels = self.pixels.iter().zip(&other.pixels).map(|(a, b)| a ^ b).collect();
        Ok(Block {
            rows: self.rows,
            cols: self.cols,
            pixels,
        })
    }

    fn same_shape(&self, other: &Block) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dimension(format!(
                "block shapes differ: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// The four quadrants of an image: `a` top-left, `b` top-right,
/// `c` bottom-left, `d` bottom-right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSplit {
    pub a: Block,
    pub b: Block,
    pub c: Block,
    pub d: Block,
}

impl QuadSplit {
    pub fn blocks(&self) -> [&Block; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn from_blocks([a, b, c, d]: [Block; 4]) -> Result<Self> {
        a.same_shape(&b)?;
        a.same_shape(&c)?;
        a.same_shape(&d)?;
        Ok(QuadSplit { a, b, c, d })
    }

    pub fn into_blocks(self) -> [Block; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

pub fn split_quadrants(img: &GrayImage) -> Result<QuadSplit> {
    check_cipher_dims(img.rows(), img.cols())?;
    let (h, w) = (img.rows() / 2, img.cols() / 2);
    let quad = |top: usize, left: usize| {
        let mut px = Vec::with_capacity(h * w);
        for r in top..top + h {
            let start = r * img.cols() + left;
            px.extend_from_slice(&img.pixels()[start..start + w]);
        }
        Block {
            rows: h,
            cols: w,
            pixels: px,
        }
    };
    Ok(QuadSplit {
        a: quad(0, 0),
        b: quad(0, w),
        c: quad(h, 0),
        d: quad(h, w),
    })
}

pub fn merge_quadrants(q: &QuadSplit) -> Result<GrayImage> {
    let (h, w) = (q.a.rows, q.a.cols);
    for blk in q.blocks() {
        q.a.same_shape(blk)?;
    }
    let mut px = Vec::with_capacity(4 * h * w);
    for (left, right) in [(&q.a, &q.b), (&q.c, &q.d)] {
        for r in 0..h {
            px.extend_from_slice(&left.pixels[r * w..(r + 1) * w]);
            px.extend_from_slice(&right.pixels[r * w..(r + 1) * w]);
        }
    }
    GrayImage::new(2 * h, 2 * w, px)
}

/// Visiting order of the column pairs `(p, C-1-p)`: outermost, innermost,
/// second outermost, second innermost, ...
fn column_pair_schedule(pairs: usize) -> impl Iterator<Item = usize> {
    (0..pairs).map(move |k| if k % 2 == 0 { k / 2 } else { pairs - 1 - k / 2 })
}

/// Flat source index of every emitted pixel, in emission order.
///
/// Row pairs are consumed from the outside in; within a row pair each
/// column pair yields (top,right), (bottom,left), (top,left), (bottom,right).
pub fn xcross_source_positions(rows: usize, cols: usize) -> Result<Vec<usize>> {
    if rows == 0 || cols == 0 || !rows.is_multiple_of(2) || !cols.is_multiple_of(2) {
        return Err(Error::dimension(format!(
            "X-Cross needs an even, non-empty block, got {rows}x{cols}"
        )));
    }
    let mut order = Vec::with_capacity(rows * cols);
    for pair in 0..rows / 2 {
        let top = pair * cols;
        let bottom = (rows - 1 - pair) * cols;
        for p in column_pair_schedule(cols / 2) {
            let (left, right) = (p, cols - 1 - p);
            order.extend([top + right, bottom + left, top + left, bottom + right]);
        }
    }
    Ok(order)
}

pub fn xcross_permute(blk: &Block) -> Result<Block> {
    let order = xcross_source_positions(blk.rows, blk.cols)?;
    let pixels = order.iter().map(|&src| blk.pixels[src]).collect();
    Ok(Block {
        rows: blk.rows,
        cols: blk.cols,
        pixels,
    })
}

pub fn xcross_unpermute(blk: &Block) -> Result<Block> {
    let order = xcross_source_positions(blk.rows, blk.cols)?;
    let mut pixels = vec![0u8; blk.pixels.len()];
    for (k, &src) in order.iter().enumerate() {
        pixels[src] = blk.pixels[k];
    }
    Ok(Block {
        rows: blk.rows,
        cols: blk.cols,
        pixels,
    })
}

/// `A' = X(A⊕C)`, `B' = X(B⊕A')`, `C' = X(C⊕B')`, `D' = X(D⊕C')`.
pub fn permute_image(q: &QuadSplit) -> Result<QuadSplit> {
    let a = xcross_permute(&q.a.xor(&q.c)?)?;
    let b = xcross_permute(&q.b.xor(&a)?)?;
    let c = xcross_permute(&q.c.xor(&b)?)?;
    let d = xcross_permute(&q.d.xor(&c)?)?;
    Ok(QuadSplit { a, b, c, d })
}

/// Undoes [`permute_image`], peeling the cascade from `D'` back to `A'`.
pub fn unpermute_image(q: &QuadSplit) -> Result<QuadSplit> {
    let d = xcross_unpermute(&q.d)?.xor(&q.c)?;
    let c = xcross_unpermute(&q.c)?.xor(&q.b)?;
    let b = xcross_unpermute(&q.b)?.xor(&q.a)?;
    let a = xcross_unpermute(&q.a)?.xor(&c)?;
    Ok(QuadSplit { a, b, c, d })
}

//! Binary PGM (P5) reading and writing for 8-bit grayscale images.

use std::fmt::Write as _;

use thiserror::Error;

use crate::image::GrayImage;

/// Largest accepted `width * height`.
pub const MAX_PGM_PIXELS: usize = 1 << 28;

const PAD_NOTE_TAG: &str = "xcross-original-size";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("not a binary PGM: expected magic P5")]
    BadMagic,
    #[error("unsupported maxval {0}: only 8-bit images with maxval 255 are accepted")]
    UnsupportedMaxval(u64),
    #[error("truncated PGM payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("PGM dimensions {width}x{height} exceed the {MAX_PGM_PIXELS}-pixel limit")]
    Oversize { width: u64, height: u64 },
    #[error("malformed PGM header: {0}")]
    Malformed(String),
}

/// Original image size recorded in a padded ciphertext's header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadNote {
    pub width: usize,
    pub height: usize,
}

impl PadNote {
    fn to_comment(self) -> String {
        format!("{PAD_NOTE_TAG} {} {}", self.width, self.height)
    }

    fn parse(comment: &str) -> Option<PadNote> {
        let mut it = comment.split_whitespace();
        if it.next()? != PAD_NOTE_TAG {
            return None;
        }
        let width = it.next()?.parse().ok()?;
        let height = it.next()?.parse().ok()?;
        it.next().is_none().then_some(PadNote { width, height })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmHeader {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Comment text without the leading `#`, in file order.
    pub comments: Vec<String>,
}

impl PgmHeader {
    pub fn pad_note(&self) -> Option<PadNote> {
        self.comments.iter().find_map(|c| PadNote::parse(c))
    }
}

struct HeaderCursor<'a> {
    data: &'a [u8],
    pos: usize,
    comments: Vec<String>,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                let start = self.pos + 1;
                let end = self.data[start..]
                    .iter()
                    .position(|&c| c == b'\n' || c == b'\r')
                    .map_or(self.data.len(), |off| start + off);
                let text = String::from_utf8_lossy(&self.data[start..end]);
                self.comments.push(text.trim().to_string());
                self.pos = end;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64, PgmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError::Malformed(format!("missing {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PgmError::Malformed(format!("{what} is too large")))
    }
}

/// Parses a P5 stream into its header and pixels.
pub fn read_pgm_with_header(data: &[u8]) -> Result<(PgmHeader, GrayImage), PgmError> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(PgmError::BadMagic);
    }
    let mut cur = HeaderCursor {
        data,
        pos: 2,
        comments: Vec::new(),
    };
    if !cur.data.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(PgmError::BadMagic);
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::Malformed(format!("zero dimension {width}x{height}")));
    }
    match width.checked_mul(height) {
        Some(n) if n <= MAX_PGM_PIXELS as u64 => {}
        _ => return Err(PgmError::Oversize { width, height }),
    }
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates the header from the raster
    match cur.data.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(PgmError::Malformed("no whitespace after maxval".into())),
    }
    let (width, height) = (width as usize, height as usize);
    let expected = width * height;
    let payload = &data[cur.pos..];
    if payload.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let img = GrayImage::new(height, width, payload[..expected].to_vec()).expect("payload length matches dimensions");
    let header = PgmHeader {
        width,
        height,
        maxval: 255,
        comments: cur.comments,
    };
    Ok((header, img))
}

pub fn read_pgm(data: &[u8]) -> Result<GrayImage, PgmError> {
    read_pgm_with_header(data).map(|(_, img)| img)
}

/// Canonical `P5\n<w> <h>\n255\n` header, an optional pad-note comment,
/// then the raw raster.
pub fn write_pgm(img: &GrayImage, pad_note: Option<PadNote>) -> Vec<u8> {
    let mut header = String::from("P5\n");
    if let Some(note) = pad_note {
        let _ = writeln!(header, "# {}", note.to_comment());
    }
    let _ = write!(header, "{} {}\n255\n", img.cols(), img.rows());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let img = read_pgm(b"P5 2 2 255 \x01\x02\x03\x04").unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 2));
        assert_eq!(img.pixels(), &[1, 2, 3, 4]);
    }

    #[test]
    fn canonical_header() {
        let img = GrayImage::new(2, 2, vec![9, 8, 7, 6]).unwrap();
        assert_eq!(write_pgm(&img, None), b"P5\n2 2\n255\n\x09\x08\x07\x06");
        let padded = write_pgm(&img, Some(PadNote { width: 1, height: 2 }));
        assert!(padded.starts_with(b"P5\n# xcross-original-size 1 2\n2 2\n255\n"));
        let (hdr, back) = read_pgm_with_header(&padded).unwrap();
        assert_eq!(back, img);
        assert_eq!(hdr.pad_note(), Some(PadNote { width: 1, height: 2 }));
    }

    #[test]
    fn comments_preserved() {
        let data = b"P5\n# made by hand\n3 # inline\n1\n255\n\x00\x01\x02";
        let (hdr, img) = read_pgm_with_header(data).unwrap();
        assert_eq!(hdr.comments, vec!["made by hand", "inline"]);
        assert_eq!(img.cols(), 3);
        assert_eq!(hdr.pad_note(), None);
    }

    #[test]
    fn rejections() {
        assert_eq!(read_pgm(b"P2 2 2 255 abcd"), Err(PgmError::BadMagic));
        assert_eq!(read_pgm(b"P55 2 2 255 abcd"), Err(PgmError::BadMagic));
        assert_eq!(
            read_pgm(b"P5 2 2 65535 abcdefgh"),
            Err(PgmError::UnsupportedMaxval(65535))
        );
        assert_eq!(read_pgm(b"P5 2 2 100 abcd"), Err(PgmError::UnsupportedMaxval(100)));
        assert_eq!(
            read_pgm(b"P5 2 2 255 abc"),
            Err(PgmError::Truncated { expected: 4, found: 3 })
        );
        assert!(matches!(
            read_pgm(b"P5 100000 100000 255 "),
            Err(PgmError::Oversize { .. })
        ));
        assert!(matches!(read_pgm(b"P5 2 x 255 abcd"), Err(PgmError::Malformed(_))));
        assert!(matches!(read_pgm(b"P5 0 2 255 "), Err(PgmError::Malformed(_))));
    }
}

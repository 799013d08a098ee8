//! Text formats for matrices and code bundles.
//!
//! Dense format: a header line `rows cols` followed by one line of `0`/`1`
//! characters per row. Alist is the usual sparse interchange format for
//! parity-check matrices.

mod alist;
mod bundle;
mod dense;

pub use alist::{parse_alist, write_alist};
pub use bundle::{read_bundle, write_bundle, Bundle, Manifest};
pub use dense::{parse_dense, write_dense};

use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Parsers refuse matrices with more entries than this.
pub const MAX_ENTRIES: usize = 1 << 28;

/// Reads a matrix, choosing the format from the `.alist` extension.
pub fn read_matrix(path: &Path) -> Result<BitMatrix> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "alist") {
        parse_alist(&text)
    } else {
        parse_dense(&text)
    }
}

pub(crate) fn toml_error(text: &str, e: toml::de::Error) -> Error {
    let line = e
        .span()
        .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
        .unwrap_or(0);
    Error::parse(line, e.message().to_string())
}

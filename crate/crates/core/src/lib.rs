//! Binary linear block codes with designed generalized automorphisms, and
//! their ensemble belief-propagation decoder.
//!
//! A generalized automorphism of a code `C = Null(H)` is any invertible
//! `T` over GF(2) with `Null(H) = Null(H·T)`, not only a permutation. The
//! crate covers
//!
//! - [`gf2`]: bit-packed matrices, polynomials and the Frobenius normal form,
//! - [`code`]: codes from parity-check matrices, distances, dual-word search
//!   and parity-check optimization,
//! - [`automorphism`]: verification, the characterization matrix and the
//!   joint code/automorphism construction,
//! - [`decoder`]: AWGN channel, box-plus preprocessing, min-sum BP, the
//!   ensemble decoder, redundant-row BP and OSD,
//! - [`io`] and [`sim`]: matrix file formats, bundles and FER sweeps.

pub mod automorphism;
pub mod code;
pub mod decoder;
mod error;
pub mod gf2;
pub mod io;
pub mod sim;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, Gf2Poly};

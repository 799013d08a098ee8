//! Exact dense linear algebra over GF(2).

mod bitvec;
mod echelon;
pub mod factor;
pub mod frobenius;
mod matrix;
mod poly;

pub use bitvec::BitVector;
pub use echelon::Echelon;
pub use frobenius::{frobenius_normal_form, frobenius_normal_form_with, Decomposition, FrobeniusForm};
pub use matrix::BitMatrix;
pub use poly::{companion_matrix, Gf2Poly};

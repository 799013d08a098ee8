use super::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Echelon};

/// Removes positions that are zero in every codeword, restricting `t` to the
/// remaining positions. The result is a code of the same dimension with `t`
/// still an automorphism.
pub fn reduce_zero_columns(code: &LinearCode, t: &BitMatrix) -> Result<(LinearCode, BitMatrix)> {
    let n = code.n();
    if t.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "reduce_zero_columns",
            left: t.shape(),
            right: (n, n),
        });
    }
    let g_cols = code.g().transpose();
    let active: Vec<usize> = (0..n).filter(|&c| g_cols.row_weight(c) > 0).collect();
    if active.len() == n {
        return Ok((code.clone(), t.clone()));
    }
    if active.len() == code.k() {
        return Err(Error::InvalidParameter(
            "every parity check involves only frozen positions".into(),
        ));
    }
    let t_red = t.select_rows(&active).select_cols(&active);
    if t_red.invert().is_err() {
        return Err(Error::ReductionBreaksInvertibility);
    }
    let h_cols = code.h().select_cols(&active);
    let mut basis = Echelon::new(active.len());
    let rows: Vec<BitVector> = h_cols
        .row_vectors()
        .into_iter()
        .filter(|r| basis.insert(r))
        .collect();
    let reduced = LinearCode::from_pcm(BitMatrix::from_rows(active.len(), &rows))?;
    debug_assert_eq!(reduced.k(), code.k());
    // A T that moves codewords onto frozen positions was not an automorphism.
    let image = reduced.g().mul(&t_red.transpose())?;
    if !reduced.h().mul(&image.transpose())?.is_zero() {
        return Err(Error::NotAnAutomorphism);
    }
    Ok((reduced, t_red))
}

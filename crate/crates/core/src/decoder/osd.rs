use super::{DecodeOutcome, FrameDecoder, LlrVector};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Ordered statistics decoding of the given order.
#[derive(Debug, Clone)]
pub struct OsdDecoder {
    code: LinearCode,
    order: usize,
}

impl OsdDecoder {
    pub fn new(code: &LinearCode, order: usize) -> Result<Self> {
        if order > code.k() {
            return Err(Error::InvalidParameter(format!(
                "order {order} exceeds dimension {}",
                code.k()
            )));
        }
        Ok(OsdDecoder {
            code: code.clone(),
            order,
        })
    }

    pub fn run(&self, llr: &LlrVector) -> DecodeOutcome {
        let values = llr.values();
        let n = self.code.n();
        assert_eq!(values.len(), n, "LLR length does not match the code");
        let mut by_reliability: Vec<usize> = (0..n).collect();
        by_reliability.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));

        // Systematic generator on the most reliable independent positions.
        let mut g = self.code.g().clone();
        let k = g.rows();
        let mut pivots = Vec::with_capacity(k);
        for &col in &by_reliability {
            let r = pivots.len();
            if r == k {
                break;
            }
            let Some(p) = (r..k).find(|&i| g.get(i, col)) else {
                continue;
            };
            g.swap_rows(r, p);
            for i in 0..k {
                if i != r && g.get(i, col) {
                    g.add_row(r, i);
                }
            }
            pivots.push(col);
        }
        let rows = g.row_vectors();

        let mut base = BitVector::zeros(n);
        for (r, &p) in pivots.iter().enumerate() {
            if values[p] < 0.0 {
                base.xor_assign(&rows[r]);
            }
        }
        let mut best = (llr.correlation(&base), base.clone());
        let mut flips = Vec::with_capacity(self.order);
        search(&rows, self.order, 0, &mut flips, &mut base, &mut |cand| {
            let c = llr.correlation(cand);
            if c > best.0 {
                best = (c, cand.clone());
            }
        });
        DecodeOutcome {
            is_codeword: true,
            correlation: best.0,
            hard_bits: best.1,
            iterations_used: 0,
            path_index: 0,
        }
    }
}

/// Visits `base ⊕ Σ rows[f]` for every nonempty set of at most `depth` rows.
fn search(
    rows: &[BitVector],
    depth: usize,
    start: usize,
    flips: &mut Vec<usize>,
    cur: &mut BitVector,
    visit: &mut impl FnMut(&BitVector),
) {
    if flips.len() == depth {
        return;
    }
    for i in start..rows.len() {
        cur.xor_assign(&rows[i]);
        flips.push(i);
        visit(cur);
        search(rows, depth, i + 1, flips, cur, visit);
        flips.pop();
        cur.xor_assign(&rows[i]);
    }
}

impl FrameDecoder for OsdDecoder {
    fn decode(&self, llr: &LlrVector) -> DecodeOutcome {
        self.run(llr)
    }

    fn label(&self) -> String {
        format!("OSD-{}", self.order)
    }
}

pub fn osd_decode(code: &LinearCode, llr: &LlrVector, order: usize) -> Result<DecodeOutcome> {
    if llr.len() != code.n() {
        return Err(Error::DimensionMismatch {
            op: "osd_decode",
            left: (code.n(), code.n()),
            right: (llr.len(), 1),
        });
    }
    Ok(OsdDecoder::new(code, order)?.run(llr))
}

use super::MAX_ENTRIES;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as (1-based line number, numbers). When `may_be_empty`
    /// is set, a blank line is accepted as an empty list.
    fn numbers(&mut self, what: &str, may_be_empty: bool) -> Result<(usize, Vec<usize>)> {
        for (i, line) in self.inner.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                if may_be_empty {
                    return Ok((i + 1, Vec::new()));
                }
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(i + 1, format!("{what}: {e}")))?;
            return Ok((i + 1, nums));
        }
        if may_be_empty {
            return Ok((0, Vec::new()));
        }
        Err(Error::parse(
            0,
            format!("unexpected end of input, expected {what}"),
        ))
    }
}

fn exact(line: usize, nums: Vec<usize>, len: usize, what: &str) -> Result<Vec<usize>> {
    if nums.len() != len {
        return Err(Error::parse(
            line,
            format!("{what}: expected {len} values, found {}", nums.len()),
        ));
    }
    Ok(nums)
}

/// Parses an alist file into an `m×n` parity-check matrix. Adjacency lists
/// may or may not be zero-padded to the maximum degree.
pub fn parse_alist(text: &str) -> Result<BitMatrix> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (l, dims) = lines.numbers("dimensions", false)?;
    let [n, m] = exact(l, dims, 2, "dimensions")?[..] else {
        unreachable!()
    };
    if n.checked_mul(m).is_none_or(|e| e > MAX_ENTRIES) {
        return Err(Error::parse(l, format!("{m}x{n} matrix is too large")));
    }
    // Every column and row needs its own line, so this bounds n and m by the
    // input size before anything is allocated.
    if n.saturating_add(m) > text.lines().count() {
        return Err(Error::parse(l, "fewer lines than the header promises"));
    }
    let (l, maxes) = lines.numbers("maximum degrees", false)?;
    let [max_col, max_row] = exact(l, maxes, 2, "maximum degrees")?[..] else {
        unreachable!()
    };
    let (l, col_deg) = lines.numbers("column degrees", n == 0)?;
    let col_deg = exact(l, col_deg, n, "column degrees")?;
    let (l, row_deg) = lines.numbers("row degrees", m == 0)?;
    let row_deg = exact(l, row_deg, m, "row degrees")?;
    if col_deg.iter().any(|&d| d > max_col) || row_deg.iter().any(|&d| d > max_row) {
        return Err(Error::parse(l, "degree exceeds the declared maximum"));
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(Error::parse(l, "column and row degrees count different edges"));
    }

    let mut by_col = BitMatrix::zeros(m, n);
    for (c, &deg) in col_deg.iter().enumerate() {
        let (l, idx) = lines.numbers("column adjacency", deg == 0)?;
        for r in adjacency(l, idx, deg, max_col, m)? {
            if by_col.get(r, c) {
                return Err(Error::parse(l, format!("row {} listed twice", r + 1)));
            }
            by_col.set(r, c, true);
        }
    }
    let mut by_row = BitMatrix::zeros(m, n);
    for (r, &deg) in row_deg.iter().enumerate() {
        let (l, idx) = lines.numbers("row adjacency", deg == 0)?;
        for c in adjacency(l, idx, deg, max_row, n)? {
            if by_row.get(r, c) {
                return Err(Error::parse(l, format!("column {} listed twice", c + 1)));
            }
            by_row.set(r, c, true);
        }
    }
    if by_col != by_row {
        return Err(Error::parse(0, "row and column adjacency lists disagree"));
    }
    Ok(by_col)
}

/// Converts one 1-indexed adjacency line (optionally zero-padded) to 0-indexed.
fn adjacency(line: usize, idx: Vec<usize>, deg: usize, max: usize, bound: usize) -> Result<Vec<usize>> {
    if idx.len() != deg && idx.len() != max {
        return Err(Error::parse(
            line,
            format!("expected {deg} or {max} entries, found {}", idx.len()),
        ));
    }
    let (live, pad) = idx.split_at(deg.min(idx.len()));
    if pad.iter().any(|&x| x != 0) {
        return Err(Error::parse(line, "padding must be zero"));
    }
    live.iter()
        .map(|&x| {
            if x == 0 || x > bound {
                Err(Error::parse(line, format!("index {x} out of range 1..={bound}")))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

/// Writes `h` as an alist with zero padding.
pub fn write_alist(h: &BitMatrix) -> String {
    let (m, n) = h.shape();
    let ht = h.transpose();
    let cols: Vec<Vec<usize>> = (0..n).map(|c| ht.row_support(c)).collect();
    let rows: Vec<Vec<usize>> = (0..m).map(|r| h.row_support(r)).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);

    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("{n} {m}\n{max_col} {max_row}\n");
    out += &join(&mut cols.iter().map(Vec::len));
    out.push('\n');
    out += &join(&mut rows.iter().map(Vec::len));
    out.push('\n');
    for (list, max) in cols
        .iter()
        .map(|c| (c, max_col))
        .chain(rows.iter().map(|r| (r, max_row)))
    {
        let mut padded = list.iter().map(|&x| x + 1).chain(std::iter::repeat(0)).take(max);
        out += &join(&mut padded);
        out.push('\n');
    }
    out
}

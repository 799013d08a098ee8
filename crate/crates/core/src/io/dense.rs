use super::MAX_ENTRIES;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Parses the dense `rows cols` + 0/1 rows format. Blank lines after the
/// last row are ignored.
pub fn parse_dense(text: &str) -> Result<BitMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut dims = header.split_whitespace().map(|t| t.parse::<usize>());
    let (rows, cols) = match (dims.next(), dims.next(), dims.next()) {
        (Some(Ok(r)), Some(Ok(c)), None) => (r, c),
        _ => return Err(Error::parse(hline, "expected header `rows cols`")),
    };
    if rows.checked_mul(cols).is_none_or(|e| e > MAX_ENTRIES) {
        return Err(Error::parse(hline, format!("{rows}x{cols} matrix is too large")));
    }

    let mut body: Vec<(usize, &str)> = Vec::new();
    for (no, line) in lines {
        if body.len() == rows {
            if !line.is_empty() {
                return Err(Error::parse(no, "unexpected data after the last row"));
            }
            continue;
        }
        if line.len() != cols {
            return Err(Error::parse(
                no,
                format!("expected {cols} digits, found {}", line.len()),
            ));
        }
        body.push((no, line));
    }
    if body.len() != rows {
        return Err(Error::parse(
            hline,
            format!("header promises {rows} rows, found {}", body.len()),
        ));
    }

    let mut m = BitMatrix::zeros(rows, cols);
    for (r, (no, line)) in body.into_iter().enumerate() {
        for (c, ch) in line.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => m.set(r, c, true),
                _ => return Err(Error::parse(no, format!("invalid character {:?}", ch as char))),
            }
        }
    }
    Ok(m)
}

pub fn write_dense(m: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        out.extend((0..m.cols()).map(|c| if m.get(r, c) { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = BitMatrix::from_strs(&["1010101", "0110011", "0001111"]);
        let text = write_dense(&m);
        assert_eq!(text, "3 7\n1010101\n0110011\n0001111\n");
        assert_eq!(parse_dense(&text).unwrap(), m);
        assert_eq!(parse_dense("0 4\n").unwrap().shape(), (0, 4));
    }

    #[test]
    fn tolerates_trailing_blank_lines_and_crlf() {
        let m = parse_dense("2 2\r\n10\r\n01\r\n\r\n").unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "2",
            "2 2 2\n10\n01",
            "x 2\n10\n01",
            "2 2\n10",
            "2 2\n10\n012",
            "2 2\n10\n0a",
            "1 2\n10\n11",
            "70000 70000\n",
        ] {
            assert!(parse_dense(bad).is_err(), "{bad:?}");
        }
        match parse_dense("2 3\n101\n11\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}

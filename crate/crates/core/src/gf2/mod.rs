//! Linear algebra over F₂: packed vectors, matrices, codes and their weight
//! distributions.

mod bitvec;
mod code;
mod matrix;
mod weight;

pub use bitvec::BitVector;
pub use code::{cosets, kernel, LinearCode, CODEWORD_CAP, COSET_CAP};
pub use matrix::{BinaryMatrix, Echelon};
pub use weight::{binomial, krawtchouk, WeightDistribution};

use crate::error::{Error, Result};

/// Parses the `"cols rows"` header plus bit rows shared by the code and hash
/// file formats.
pub(crate) fn parse_bit_rows(text: &str) -> Result<BinaryMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Missing("header line"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line: hline,
            msg: format!("bad header {header:?}"),
        })?;
    let [a, b] = nums[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: "header must hold two integers".into(),
        });
    };
    let (cols, rows_expected) = (a, b);
    let mut rows = Vec::with_capacity(rows_expected);
    for (line, l) in lines {
        let v: BitVector = l.parse().map_err(|e: Error| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        if v.len() != cols {
            return Err(Error::Parse {
                line,
                msg: format!("row has {} bits, expected {cols}", v.len()),
            });
        }
        rows.push(v);
    }
    if rows.len() != rows_expected {
        return Err(Error::Parse {
            line: hline,
            msg: format!("expected {rows_expected} rows, found {}", rows.len()),
        });
    }
    BinaryMatrix::from_rows(cols, rows)
}

impl LinearCode {
    /// Reads the `"n k"` + `k` generator rows format. Rows need not be
    /// independent; the result is their span.
    pub fn parse(text: &str) -> Result<Self> {
        let g = parse_bit_rows(text)?;
        if g.ncols() == 0 {
            return Err(Error::Parse {
                line: 1,
                msg: "code length must be positive".into(),
            });
        }
        LinearCode::from_generator(&g)
    }

    /// Writes the canonical basis in the `"n k"` format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.len(), self.dimension());
        for b in self.basis() {
            s.push_str(&b.to_string());
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_file_round_trip() {
        let c = LinearCode::parse("4 2\n1100\n0011\n").unwrap();
        assert_eq!(c.dimension(), 2);
        assert_eq!(LinearCode::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn code_file_errors() {
        assert!(LinearCode::parse("4 2\n1100\n").is_err());
        assert!(LinearCode::parse("4 1\n110\n").is_err());
        assert!(LinearCode::parse("4\n").is_err());
        assert!(LinearCode::parse("").is_err());
        assert!(LinearCode::parse("3 1\n1x0\n").is_err());
    }

    #[test]
    fn dependent_rows_collapse() {
        let c = LinearCode::parse("3 3\n110\n011\n101\n").unwrap();
        assert_eq!(c.dimension(), 2);
    }
}

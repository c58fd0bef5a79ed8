//! Parity-check text format: a header line `n r`, then `r` rows of `n`
//! characters from `{0, 1}`. Whitespace inside rows and blank lines are
//! ignored; rows of the wrong length are rejected.

use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

pub fn parse_parity_check(text: &str) -> Result<Gf2Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing \"n r\" header"))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    if nums.len() != 2 {
        return Err(Error::parse(hline, "header must be \"n r\""));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| Error::parse(hline, format!("bad header value {s:?}: {e}")))
    };
    let (n, r) = (parse(nums[0])?, parse(nums[1])?);
    let mut h = Gf2Matrix::try_zeros(r, n)?;
    let mut row = 0;
    for (lineno, line) in lines {
        if row == r {
            return Err(Error::parse(lineno, format!("more than {r} rows")));
        }
        let mut col = 0;
        for ch in line.chars().filter(|c| !c.is_whitespace()) {
            let bit = match ch {
                '0' => false,
                '1' => true,
                other => return Err(Error::parse(lineno, format!("unexpected character {other:?}"))),
            };
            if col == n {
                return Err(Error::parse(lineno, format!("row longer than {n}")));
            }
            h.set(row, col, bit);
            col += 1;
        }
        if col != n {
            return Err(Error::parse(lineno, format!("row has {col} entries, expected {n}")));
        }
        row += 1;
    }
    if row != r {
        return Err(Error::parse(0, format!("expected {r} rows, found {row}")));
    }
    Ok(h)
}

pub fn read_parity_check(path: &Path) -> Result<Gf2Matrix> {
    let text = std::fs::read_to_string(path)?;
    parse_parity_check(&text)
}

pub fn format_parity_check(h: &Gf2Matrix) -> String {
    let mut out = format!("{} {}\n", h.cols(), h.rows());
    out.push_str(&h.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_whitespace() {
        let h = parse_parity_check("5 4\n1 0 0 0 1\n01001\n\n  00101 \n00011\n").unwrap();
        assert_eq!((h.rows(), h.cols()), (4, 5));
        assert_eq!(parse_parity_check(&format_parity_check(&h)).unwrap(), h);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_parity_check("").is_err());
        assert!(parse_parity_check("3 2\n101\n10\n").is_err());
        assert!(parse_parity_check("3 2\n101\n").is_err());
        assert!(parse_parity_check("3 1\n1x1\n").is_err());
        assert!(parse_parity_check("3 1\n101\n111\n").is_err());
        assert!(parse_parity_check("three 1\n101\n").is_err());
    }
}

use std::fmt::Write as _;
use std::path::Path;

use super::{CostMatrix, Weights};
use crate::error::{Error, Result};
use crate::scalar::{Cost, Weight};

impl<W: Weight> CostMatrix<W> {
    /// Parses the text format: the size on the first line, then one row per
    /// line. `inf` marks a missing arc; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (size_line, size) = lines.next().ok_or(Error::MatrixFormat {
            line: 1,
            message: "empty file".into(),
        })?;
        let n: usize = size.parse().map_err(|_| Error::MatrixFormat {
            line: size_line,
            message: format!("expected the matrix size, found {size:?}"),
        })?;
        if n == 0 {
            return Err(Error::MatrixFormat {
                line: size_line,
                message: "size must be at least 1".into(),
            });
        }

        let mut data = Vec::with_capacity(n * n);
        let mut last_line = size_line;
        for row in 1..=n {
            let (line, body) = lines.next().ok_or(Error::MatrixFormat {
                line: last_line + 1,
                message: format!("expected {n} rows, found {}", row - 1),
            })?;
            last_line = line;
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.len() != n {
                return Err(Error::MatrixFormat {
                    line,
                    message: format!("row {row} has {} entries, expected {n}", tokens.len()),
                });
            }
            for (col, tok) in tokens.iter().enumerate() {
                let c: Cost<W> = tok.parse().map_err(|_| Error::MatrixEntry {
                    row,
                    col: col + 1,
                    message: format!("cannot parse {tok:?}"),
                })?;
                data.push(c);
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::MatrixFormat {
                line,
                message: format!("trailing content after {n} rows"),
            });
        }
        Self::new(n, data)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for i in 1..=self.n() {
            let row: Vec<String> = (1..=self.n()).map(|j| self.at(i, j).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

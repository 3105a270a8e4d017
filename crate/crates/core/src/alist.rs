//! Reading and writing parity-check matrices in the alist text format.
//!
//! Layout (all indices 1-based, lists zero-padded to the maximum weight):
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n lines: checks of each bit>
//! <m lines: bits of each check>
//! ```

use thiserror::Error;

use crate::gf2::BitMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlistError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: degree inconsistency: {message}")]
    Inconsistent { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> AlistError {
    AlistError::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, raw: &str) -> Result<Vec<usize>, AlistError> {
    raw.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line, format!("expected an integer, found {tok:?}")))
        })
        .collect()
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line as numbers, with its 1-based line number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            return Ok((i + 1, numbers(i + 1, raw)?));
        }
        Err(parse_err(
            self.last + 1,
            format!("unexpected end of input, expected {what}"),
        ))
    }

    /// Adjacency line for a declared `weight`. An empty list may be written
    /// as a blank line, so blank lines are only skipped for nonzero weights.
    fn next_list(&mut self, weight: usize, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
        if weight > 0 {
            return self.next_numbers(what);
        }
        match self.inner.next() {
            Some((i, raw)) if raw.trim().is_empty() => {
                self.last = i + 1;
                Ok((i + 1, Vec::new()))
            }
            Some((i, raw)) => {
                self.last = i + 1;
                Ok((i + 1, numbers(i + 1, raw)?))
            }
            None => Err(parse_err(
                self.last + 1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }
}

fn expect_len(line: usize, nums: &[usize], len: usize, what: &str) -> Result<(), AlistError> {
    if nums.len() != len {
        return Err(parse_err(
            line,
            format!("expected {len} values for {what}, found {}", nums.len()),
        ));
    }
    Ok(())
}

/// Reads one adjacency line: nonzero 1-based indices (< `bound`), padding
/// zeros allowed only at the end.
fn adjacency(
    line: usize,
    nums: &[usize],
    max_weight: usize,
    bound: usize,
) -> Result<Vec<usize>, AlistError> {
    let listed: Vec<usize> = nums.iter().copied().take_while(|&v| v != 0).collect();
    if nums[listed.len()..].iter().any(|&v| v != 0) {
        return Err(parse_err(line, "nonzero index after zero padding"));
    }
    if listed.len() > max_weight {
        return Err(parse_err(
            line,
            format!(
                "{} neighbors listed but maximum weight is {max_weight}",
                listed.len()
            ),
        ));
    }
    if nums.len() > max_weight {
        return Err(parse_err(line, format!("more than {max_weight} entries")));
    }
    let mut out = Vec::with_capacity(listed.len());
    for &v in &listed {
        if v > bound {
            return Err(parse_err(line, format!("index {v} exceeds {bound}")));
        }
        if out.contains(&(v - 1)) {
            return Err(parse_err(line, format!("index {v} listed twice")));
        }
        out.push(v - 1);
    }
    Ok(out)
}

/// Parses an alist document into an `m x n` parity-check matrix.
pub fn parse_matrix(text: &str) -> Result<BitMatrix, AlistError> {
    let mut lines = Lines::new(text);
    let (l1, dims) = lines.next_numbers("the header \"n m\"")?;
    expect_len(l1, &dims, 2, "the header")?;
    let (n, m) = (dims[0], dims[1]);
    let (l2, maxes) = lines.next_numbers("maximum weights")?;
    expect_len(l2, &maxes, 2, "maximum weights")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);
    let (l3, col_weights) = lines.next_numbers("column weights")?;
    expect_len(l3, &col_weights, n, "column weights")?;
    let (l4, row_weights) = lines.next_numbers("row weights")?;
    expect_len(l4, &row_weights, m, "row weights")?;
    if let Some(&w) = col_weights.iter().find(|&&w| w > max_col) {
        return Err(parse_err(
            l3,
            format!("column weight {w} exceeds maximum {max_col}"),
        ));
    }
    if let Some(&w) = row_weights.iter().find(|&&w| w > max_row) {
        return Err(parse_err(
            l4,
            format!("row weight {w} exceeds maximum {max_row}"),
        ));
    }

    let mut h = BitMatrix::zeros(m, n);
    for (bit, &weight) in col_weights.iter().enumerate() {
        let (line, nums) = lines.next_list(weight, "a column adjacency line")?;
        let checks = adjacency(line, &nums, max_col, m)?;
        if checks.len() != weight {
            return Err(AlistError::Inconsistent {
                line,
                message: format!(
                    "column {} declares weight {weight} but lists {}",
                    bit + 1,
                    checks.len()
                ),
            });
        }
        for c in checks {
            h.set(c, bit, true);
        }
    }
    for (check, &weight) in row_weights.iter().enumerate() {
        let (line, nums) = lines.next_list(weight, "a row adjacency line")?;
        let bits = adjacency(line, &nums, max_row, n)?;
        if bits.len() != weight {
            return Err(AlistError::Inconsistent {
                line,
                message: format!(
                    "row {} declares weight {weight} but lists {}",
                    check + 1,
                    bits.len()
                ),
            });
        }
        let mut listed: Vec<usize> = h.row_ones(check).collect();
        let mut from_rows = bits.clone();
        listed.sort_unstable();
        from_rows.sort_unstable();
        if listed != from_rows {
            return Err(AlistError::Inconsistent {
                line,
                message: format!("row {} disagrees with the column lists", check + 1),
            });
        }
    }
    for (line, raw) in text.lines().enumerate().skip(lines.last) {
        if !raw.trim().is_empty() {
            return Err(parse_err(line + 1, "trailing content after the last row"));
        }
    }
    Ok(h)
}

/// Serializes a parity-check matrix in alist form, zero-padding every
/// adjacency line to the maximum weight.
pub fn write_matrix(h: &BitMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let cols: Vec<Vec<usize>> = {
        let mut cols = vec![Vec::new(); n];
        for r in 0..m {
            for c in h.row_ones(r) {
                cols[c].push(r);
            }
        }
        cols
    };
    let rows: Vec<Vec<usize>> = (0..m).map(|r| h.row_ones(r).collect()).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);

    let join = |vals: &mut dyn Iterator<Item = usize>| {
        vals.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    };
    let padded = |list: &[usize], width: usize| {
        join(
            &mut list
                .iter()
                .map(|&v| v + 1)
                .chain(std::iter::repeat(0))
                .take(width),
        )
    };

    let mut out = String::new();
    out.push_str(&format!("{n} {m}\n{max_col} {max_row}\n"));
    out.push_str(&join(&mut cols.iter().map(Vec::len)));
    out.push('\n');
    out.push_str(&join(&mut rows.iter().map(Vec::len)));
    out.push('\n');
    for col in &cols {
        out.push_str(&padded(col, max_col));
        out.push('\n');
    }
    for row in &rows {
        out.push_str(&padded(row, max_row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";

    fn small() -> BitMatrix {
        BitMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]).unwrap()
    }

    #[test]
    fn writes_expected_text() {
        assert_eq!(write_matrix(&small()), SMALL);
    }

    #[test]
    fn round_trip() {
        assert_eq!(parse_matrix(&write_matrix(&small())).unwrap(), small());
    }

    #[test]
    fn unpadded_lines_are_accepted() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";
        assert_eq!(parse_matrix(text).unwrap(), small());
    }

    #[test]
    fn too_many_neighbors_is_rejected() {
        // declares max column weight 3 but the first bit lists 4 checks
        let text = "2 4\n3 1\n3 3\n1 1 1 1\n1 2 3 4\n1 2 3 0\n1\n1\n2\n2\n";
        let err = parse_matrix(text).unwrap_err();
        assert!(matches!(err, AlistError::Parse { line: 5, .. }), "{err}");
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(
            parse_matrix(""),
            Err(AlistError::Parse { line: 1, .. })
        ));
        assert!(parse_matrix("\n\n").is_err());
    }

    #[test]
    fn garbage_reports_line() {
        let text = "3 2\n2 x\n";
        assert_eq!(
            parse_matrix(text),
            Err(AlistError::Parse {
                line: 2,
                message: "expected an integer, found \"x\"".into()
            })
        );
    }

    #[test]
    fn column_and_row_lists_must_agree() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 3\n2 3\n";
        assert!(matches!(
            parse_matrix(text),
            Err(AlistError::Inconsistent { line: 8, .. })
        ));
    }

    #[test]
    fn declared_weight_must_match_list() {
        let text = "3 2\n2 2\n2 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        assert!(matches!(
            parse_matrix(text),
            Err(AlistError::Inconsistent { line: 5, .. })
        ));
    }

    #[test]
    fn truncated_input_is_rejected() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n";
        assert!(matches!(parse_matrix(text), Err(AlistError::Parse { .. })));
    }

    #[test]
    fn empty_columns_and_rows_round_trip() {
        let zero = BitMatrix::zeros(2, 3);
        assert_eq!(write_matrix(&zero), "3 2\n0 0\n0 0 0\n0 0\n\n\n\n\n\n");
        assert_eq!(parse_matrix(&write_matrix(&zero)).unwrap(), zero);
        let h = BitMatrix::from_rows(&[[1, 0, 0], [0, 0, 0]]).unwrap();
        assert_eq!(parse_matrix(&write_matrix(&h)).unwrap(), h);
    }
}

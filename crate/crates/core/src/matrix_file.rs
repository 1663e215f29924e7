//! Text serialization of dense operator matrices.
//!
//! ```text
//! # qhamil matrix v1
//! dim 2
//! 0.5 0
//! 0 1.5
//! ```
//!
//! Entries are `re` or `re+imi` / `re-imi`, printed as shortest round-trip
//! decimals. Lines starting with `#` and blank lines are ignored on input.
//! For SUSY Hamiltonians the row index is `2 * boson + fermion`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{CMatrix, OperatorMatrix};

pub const FILE_HEADER: &str = "# qhamil matrix v1";

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse_complex(s: &str) -> Option<Complex64> {
    if let Some(body) = s.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
        let re: f64 = body[..split].parse().ok()?;
        let im: f64 = body[split..].parse().ok()?;
        Some(Complex64::new(re, im))
    } else {
        s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
    }
}

pub fn to_string(m: &OperatorMatrix) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{FILE_HEADER}");
    let _ = writeln!(s, "dim {}", m.dim());
    for row in m.matrix().row_iter() {
        let line: Vec<String> = row.iter().map(|z| format_complex(*z)).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

pub fn parse(text: &str, origin: &Path) -> Result<OperatorMatrix> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (no, first) = lines.next().ok_or_else(|| err(0, "empty matrix file".into()))?;
    let dim = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["dim", n] => n
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| err(no, format!("invalid dimension `{n}`")))?,
        _ => return Err(err(no, format!("expected `dim <n>`, found `{first}`"))),
    };
    let mut m = CMatrix::zeros(dim, dim);
    let mut rows = 0;
    for (no, line) in lines {
        if rows == dim {
            return Err(err(no, format!("more than {dim} rows")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != dim {
            return Err(err(no, format!("expected {dim} entries, found {}", fields.len())));
        }
        for (col, f) in fields.iter().enumerate() {
            m[(rows, col)] = parse_complex(f).ok_or_else(|| err(no, format!("invalid entry `{f}`")))?;
        }
        rows += 1;
    }
    if rows != dim {
        return Err(err(0, format!("expected {dim} rows, found {rows}")));
    }
    OperatorMatrix::new(m)
}

pub fn read(path: &Path) -> Result<OperatorMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

pub fn write(m: &OperatorMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(m)).map_err(|e| Error::io(path, e))
}

//! File formats.
//!
//! Every CSV file starts with `#` comment lines: a title, the schema version,
//! the seed (when the experiment is random) and the complete plan as TOML.
//! The data follow as an ordinary CSV table with a header row. Floats are
//! written in shortest round-trip form, so identical plans give identical
//! bytes.
//!
//! Superoperators and density matrices are dumped as text triplets
//! `row col re im`, one nonzero per line, after a `# rows cols nnz` line.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{config_error, Result};

/// Bumped when a column is added, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Metadata written ahead of a CSV table.
#[derive(Debug, Clone)]
pub struct Header<'a, P: Serialize> {
    pub title: &'a str,
    pub seed: Option<u64>,
    pub plan: &'a P,
}

pub fn write_header<W: Write, P: Serialize>(out: &mut W, header: &Header<'_, P>) -> Result<()> {
    writeln!(out, "# heatchain {}", header.title)?;
    writeln!(out, "# schema_version = {SCHEMA_VERSION}")?;
    if let Some(seed) = header.seed {
        writeln!(out, "# seed = {seed}")?;
    }
    let plan = toml::to_string(header.plan)?;
    for line in plan.lines() {
        if line.is_empty() {
            writeln!(out, "#")?;
        } else {
            writeln!(out, "# {line}")?;
        }
    }
    Ok(())
}

/// Writes header comments followed by one CSV record per row.
pub fn write_csv<W: Write, P: Serialize, R: Serialize>(out: W, header: &Header<'_, P>, rows: &[R]) -> Result<()> {
    let mut out = out;
    write_header(&mut out, header)?;
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string<P: Serialize, R: Serialize>(header: &Header<'_, P>, rows: &[R]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    String::from_utf8(buf).map_err(|_| config_error("CSV output is not valid UTF-8"))
}

/// A CSV table read back with its comment lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut comments = Vec::new();
        let mut body = String::new();
        for line in input.lines() {
            let line = line?;
            match line.strip_prefix('#') {
                Some(c) => comments.push(c.strip_prefix(' ').unwrap_or(c).to_owned()),
                None => {
                    body.push_str(&line);
                    body.push('\n');
                }
            }
        }
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let columns = reader.headers()?.iter().map(str::to_owned).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_owned).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self {
            comments,
            columns,
            rows,
        })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| config_error(format!("no column named `{name}`")))
    }

    /// Value of `seed = ...` in the comments, if recorded.
    pub fn seed(&self) -> Option<u64> {
        self.comments
            .iter()
            .find_map(|c| c.strip_prefix("seed = ").and_then(|s| s.trim().parse().ok()))
    }
}

/// Writes `(row, col, value)` entries of a `rows × cols` matrix.
pub fn write_triplets<W, I>(out: &mut W, rows: usize, cols: usize, entries: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (usize, usize, Complex64)>,
{
    let entries: Vec<_> = entries.into_iter().collect();
    writeln!(out, "# {rows} {cols} {}", entries.len())?;
    for (r, c, v) in entries {
        writeln!(out, "{r} {c} {:.17e} {:.17e}", v.re, v.im)?;
    }
    Ok(())
}

/// Nonzero entries of a dense matrix in row-major order.
pub fn dense_triplets(m: &DMatrix<Complex64>) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)] != Complex64::new(0.0, 0.0) {
                out.push((i, j, m[(i, j)]));
            }
        }
    }
    out
}

/// Matrix stored as triplets: `(rows, cols, entries)`.
pub type Triplets = (usize, usize, Vec<(usize, usize, Complex64)>);

pub fn read_triplets<R: BufRead>(input: R) -> Result<Triplets> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| config_error("empty triplet file"))??;
    let dims: Vec<usize> = first
        .trim_start_matches('#')
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| config_error("malformed triplet header"))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(config_error("triplet header must read `# rows cols nnz`"));
    };
    let mut entries = Vec::with_capacity(nnz);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = || config_error(format!("malformed triplet line `{line}`"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let r: usize = parts[0].parse().map_err(|_| bad())?;
        let c: usize = parts[1].parse().map_err(|_| bad())?;
        let re: f64 = parts[2].parse().map_err(|_| bad())?;
        let im: f64 = parts[3].parse().map_err(|_| bad())?;
        if r >= rows || c >= cols {
            return Err(bad());
        }
        entries.push((r, c, Complex64::new(re, im)));
    }
    if entries.len() != nnz {
        return Err(config_error(format!("expected {nnz} entries, found {}", entries.len())));
    }
    Ok((rows, cols, entries))
}

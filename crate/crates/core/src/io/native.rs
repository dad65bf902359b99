//! SWEMESH, a line-oriented ASCII mesh format:
//!
//! ```text
//! SWEMESH 1
//! <nnodes> <ncells>
//! x y                      (nnodes lines)
//! i j k z_b n_manning      (ncells lines, 0-based node indices)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{fmt_f64, IoError};
use crate::mesh::RawMesh;

pub const MAGIC: &str = "SWEMESH 1";

#[derive(Debug, Clone, PartialEq)]
pub struct NativeMesh {
    pub raw: RawMesh,
    pub bathymetry: Vec<f64>,
    pub manning: Vec<f64>,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_count(tok: &Token<'_>, line: usize, what: &str) -> Result<usize, IoError> {
    tok.text
        .parse::<usize>()
        .map_err(|_| err(line, tok.column, format!("{what}: expected a non-negative integer, found '{}'", tok.text)))
}

fn parse_real(tok: &Token<'_>, line: usize, what: &str) -> Result<f64, IoError> {
    let v: f64 = tok
        .text
        .parse()
        .map_err(|_| err(line, tok.column, format!("{what}: expected a number, found '{}'", tok.text)))?;
    if !v.is_finite() {
        return Err(err(line, tok.column, format!("{what}: non-finite value '{}'", tok.text)));
    }
    Ok(v)
}

/// Strict SWEMESH parser. Errors carry 1-based line and column.
pub fn read_mesh_native(reader: impl BufRead) -> Result<NativeMesh, IoError> {
    let mut lines = reader.lines().enumerate();
    let mut seen = 0;
    let mut next_line = |expecting: &str| -> Result<(usize, String), IoError> {
        match lines.next() {
            Some((i, Ok(text))) => {
                seen = i + 1;
                Ok((i + 1, text))
            }
            Some((i, Err(e))) => Err(err(i + 1, 1, format!("read failed: {e}"))),
            None => Err(IoError::Parse {
                line: seen + 1,
                column: 1,
                message: format!("{END_OF_FILE}, expected {expecting}"),
            }),
        }
    };

    let (ln, header) = next_line("the SWEMESH header")?;
    if header.trim_end() != MAGIC {
        return Err(err(ln, 1, format!("bad magic: expected '{MAGIC}', found '{header}'")));
    }
    let (ln, counts) = next_line("the node/cell counts")?;
    let toks = tokens(&counts);
    if toks.len() != 2 {
        return Err(err(ln, 1, format!("expected '<nnodes> <ncells>', found {} values", toks.len())));
    }
    let nnodes = parse_count(&toks[0], ln, "node count")?;
    let ncells = parse_count(&toks[1], ln, "cell count")?;

    let mut nodes = Vec::with_capacity(nnodes);
    for k in 0..nnodes {
        let (ln, text) = next_line(&format!("node {k} of {nnodes}")).map_err(|e| count_mismatch(e, "node", k, nnodes))?;
        let toks = tokens(&text);
        if toks.len() != 2 {
            return Err(err(
                ln,
                1,
                format!(
                    "count mismatch: header declares {nnodes} nodes, but node line {k} has {} values instead of 2",
                    toks.len()
                ),
            ));
        }
        nodes.push([parse_real(&toks[0], ln, "x")?, parse_real(&toks[1], ln, "y")?]);
    }

    let mut triangles = Vec::with_capacity(ncells);
    let mut bathymetry = Vec::with_capacity(ncells);
    let mut manning = Vec::with_capacity(ncells);
    for k in 0..ncells {
        let (ln, text) = next_line(&format!("cell {k} of {ncells}")).map_err(|e| count_mismatch(e, "cell", k, ncells))?;
        let toks = tokens(&text);
        if toks.len() != 5 {
            return Err(err(
                ln,
                1,
                format!(
                    "count mismatch: header declares {ncells} cells, but cell line {k} has {} values instead of 5",
                    toks.len()
                ),
            ));
        }
        let mut tri = [0usize; 3];
        for (slot, tok) in tri.iter_mut().zip(&toks[..3]) {
            let idx = parse_count(tok, ln, "node index")?;
            if idx >= nnodes {
                return Err(err(
                    ln,
                    tok.column,
                    format!("node index {idx} out of range (mesh has {nnodes} nodes)"),
                ));
            }
            *slot = idx;
        }
        triangles.push(tri);
        bathymetry.push(parse_real(&toks[3], ln, "z_b")?);
        let n = parse_real(&toks[4], ln, "n_manning")?;
        if n < 0.0 {
            return Err(err(ln, toks[4].column, format!("negative Manning coefficient {n}")));
        }
        manning.push(n);
    }

    for (i, rest) in lines {
        let text = rest.map_err(|e| err(i + 1, 1, format!("read failed: {e}")))?;
        if !text.trim().is_empty() {
            return Err(err(
                i + 1,
                1,
                format!("count mismatch: content after the declared {nnodes} nodes and {ncells} cells"),
            ));
        }
    }

    Ok(NativeMesh {
        raw: RawMesh { nodes, triangles },
        bathymetry,
        manning,
    })
}

const END_OF_FILE: &str = "unexpected end of file";

fn count_mismatch(e: IoError, what: &str, k: usize, total: usize) -> IoError {
    match e {
        IoError::Parse { line, message, .. } if message.starts_with(END_OF_FILE) => err(
            line,
            1,
            format!("count mismatch: header declares {total} {what}s, file ends after {k}"),
        ),
        other => other,
    }
}

pub fn write_mesh_native(
    mut w: impl Write,
    raw: &RawMesh,
    bathymetry: &[f64],
    manning: &[f64],
) -> std::io::Result<()> {
    assert_eq!(raw.triangles.len(), bathymetry.len());
    assert_eq!(raw.triangles.len(), manning.len());
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "{} {}", raw.nodes.len(), raw.triangles.len())?;
    for p in &raw.nodes {
        writeln!(w, "{} {}", fmt_f64(p[0]), fmt_f64(p[1]))?;
    }
    for ((t, z), n) in raw.triangles.iter().zip(bathymetry).zip(manning) {
        writeln!(w, "{} {} {} {} {}", t[0], t[1], t[2], fmt_f64(*z), fmt_f64(*n))?;
    }
    Ok(())
}

pub fn read_mesh_file(path: &Path) -> Result<NativeMesh, IoError> {
    let file = File::open(path).map_err(|e| IoError::io(path, e))?;
    read_mesh_native(BufReader::new(file))
}

pub fn write_mesh_file(path: &Path, raw: &RawMesh, bathymetry: &[f64], manning: &[f64]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| IoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_mesh_native(&mut w, raw, bathymetry, manning).map_err(|e| IoError::io(path, e))?;
    w.flush().map_err(|e| IoError::io(path, e))
}

//! CSV formats for curve data.
//!
//! * Curve files: one observation per row, header `coef_0,…,coef_{d−1}`.
//! * Grid samples: header `t,value`, one point per row.
//! * Evaluated curves: header row of grid points `t`, one curve per row.
//!
//! Lines starting with `#` are comments and are skipped on input.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::SampleView;

fn parse_err(line: u64, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn write_comment<W: Write>(w: &mut W, comment: Option<&str>) -> Result<()> {
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    Ok(())
}

/// Non-comment lines with their 1-based line numbers.
fn data_lines<R: Read>(r: R) -> Result<Vec<(u64, String)>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        out.push((i as u64 + 1, line));
    }
    Ok(out)
}

fn parse_row(lineno: u64, line: &str, width: usize) -> Result<Vec<f64>> {
    let row: Vec<f64> = line
        .split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| parse_err(lineno, format!("not a number: {f:?}"))))
        .collect::<Result<_>>()?;
    if row.len() != width {
        return Err(parse_err(lineno, format!("expected {width} fields, found {}", row.len())));
    }
    if let Some(v) = row.iter().find(|v| !v.is_finite()) {
        return Err(parse_err(lineno, format!("non-finite value {v}")));
    }
    Ok(row)
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_curves_to<W: Write>(x: &SampleView, comment: Option<&str>, mut w: W) -> Result<()> {
    write_comment(&mut w, comment)?;
    let header: Vec<String> = (0..x.dim()).map(|j| format!("coef_{j}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for r in x.rows() {
        writeln!(w, "{}", join(r.iter().copied()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curves(x: &SampleView, comment: Option<&str>, path: &Path) -> Result<()> {
    write_curves_to(x, comment, BufWriter::new(File::create(path)?))
}

/// Reads a curve file. The result is not flagged zero-mean.
pub fn read_curves_from<R: Read>(r: R) -> Result<SampleView> {
    let lines = data_lines(r)?;
    let Some((hline, header)) = lines.first() else {
        return Err(parse_err(1, "missing header"));
    };
    let dim = header.split(',').count();
    for (j, name) in header.split(',').enumerate() {
        if name.trim() != format!("coef_{j}") {
            return Err(parse_err(*hline, format!("expected column coef_{j}, found {:?}", name.trim())));
        }
    }
    let mut data = Vec::with_capacity((lines.len() - 1) * dim);
    for (lineno, line) in &lines[1..] {
        data.extend(parse_row(*lineno, line, dim)?);
    }
    if data.is_empty() {
        return Err(Error::EmptySample);
    }
    SampleView::from_flat(lines.len() - 1, dim, data, false)
}

pub fn read_curves(path: &Path) -> Result<SampleView> {
    read_curves_from(File::open(path)?)
}

/// Reads `(t, value)` pairs.
pub fn read_grid_samples_from<R: Read>(r: R) -> Result<Vec<(f64, f64)>> {
    let lines = data_lines(r)?;
    let Some((hline, header)) = lines.first() else {
        return Err(parse_err(1, "missing header"));
    };
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["t", "value"] {
        return Err(parse_err(*hline, format!("expected header t,value, found {header:?}")));
    }
    lines[1..].iter().map(|(lineno, line)| parse_row(*lineno, line, 2).map(|r| (r[0], r[1]))).collect()
}

pub fn read_grid_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    read_grid_samples_from(File::open(path)?)
}

/// Writes curves evaluated on `grid`: header of grid points, one row each.
pub fn write_grid_curves_to<W: Write>(
    grid: &[f64],
    curves: &[Vec<f64>],
    comment: Option<&str>,
    mut w: W,
) -> Result<()> {
    write_comment(&mut w, comment)?;
    writeln!(w, "{}", join(grid.iter().copied()))?;
    for c in curves {
        if c.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: c.len() });
        }
        writeln!(w, "{}", join(c.iter().copied()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_grid_curves(
    grid: &[f64],
    curves: &[Vec<f64>],
    comment: Option<&str>,
    path: &Path,
) -> Result<()> {
    write_grid_curves_to(grid, curves, comment, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_round_trip_exactly() {
        let x = SampleView::from_flat(2, 3, vec![0.1, -2.5e-17, 3.0, 1.0 / 3.0, 7.0, -0.0], false).unwrap();
        let mut buf = Vec::new();
        write_curves_to(&x, Some("generated"), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# generated\ncoef_0,coef_1,coef_2\n"));
        let back = read_curves_from(text.as_bytes()).unwrap();
        assert_eq!(back.as_flat(), x.as_flat());
    }

    #[test]
    fn curve_errors_carry_line_numbers() {
        let text = "# c\ncoef_0,coef_1\n1,2\n3,x\n";
        match read_curves_from(text.as_bytes()) {
            Err(Error::Parse { line: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        let ragged = "coef_0,coef_1\n1,2\n3\n";
        assert!(matches!(read_curves_from(ragged.as_bytes()), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(read_curves_from("coef_0\nNaN\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(read_curves_from("coef_0\n".as_bytes()).is_err());
        assert!(read_curves_from("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn grid_samples() {
        let s = read_grid_samples_from("t,value\n0,1\n0.5,2\n".as_bytes()).unwrap();
        assert_eq!(s, vec![(0.0, 1.0), (0.5, 2.0)]);
        assert!(read_grid_samples_from("t,v\n".as_bytes()).is_err());
    }

    #[test]
    fn grid_curves_shape() {
        let mut buf = Vec::new();
        write_grid_curves_to(&[0.0, 0.5, 1.0], &[vec![1.0, 2.0, 3.0]], None, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0,0.5,1\n1,2,3\n");
        assert!(write_grid_curves_to(&[0.0], &[vec![1.0, 2.0]], None, Vec::new()).is_err());
    }
}

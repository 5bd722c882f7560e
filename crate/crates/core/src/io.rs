//! CSV formats for datasets and experiment artifacts.
//!
//! All writers emit a header row, comma separators and LF line endings.
//! Floats use Rust's shortest round-trip formatting, so every file reads
//! back to the exact values that were written.

use std::io::{Read, Write};

use csv::{ReaderBuilder, StringRecord, Terminator, WriterBuilder};

use crate::classical::ClusterAssignment;
use crate::encoding::HouseholderSum;
use crate::graph::PointSet;
use crate::numerics::DenseMatrix;
use crate::qpea::Trajectory;
use crate::readout::{SimilarityMethod, SimilarityReport};
use crate::{Error, Result};

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(w)
}

fn reader<R: Read>(r: R, has_headers: bool) -> csv::Reader<R> {
    ReaderBuilder::new()
        .has_headers(has_headers)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r)
}

fn line_of(record: &StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn parse_field<T: std::str::FromStr>(record: &StringRecord, i: usize, what: &str) -> Result<T> {
    let raw = record.get(i).ok_or_else(|| Error::Parse {
        line: line_of(record),
        message: format!("missing column {i} ({what})"),
    })?;
    raw.parse().map_err(|_| Error::Parse {
        line: line_of(record),
        message: format!("cannot parse `{raw}` as {what}"),
    })
}

fn check_header(headers: &StringRecord, expected: &[&str]) -> Result<()> {
    let found: Vec<&str> = headers.iter().collect();
    if found.len() < expected.len() || found[..expected.len()] != *expected {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{}`, found `{}`", expected.join(","), found.join(",")),
        });
    }
    Ok(())
}

/// Reads one point per row. A first row that does not parse as numbers is
/// treated as a header.
pub fn read_points<R: Read>(r: R) -> Result<PointSet> {
    let mut rdr = reader(r, false);
    let mut points = Vec::new();
    let mut dim = None;
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if k == 0 => continue,
            Err(_) => {
                let bad = rec.iter().find(|f| f.parse::<f64>().is_err()).unwrap_or_default();
                return Err(Error::Parse { line: line_of(&rec), message: format!("cannot parse `{bad}` as a number") });
            }
        };
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::Parse {
                    line: line_of(&rec),
                    message: format!("expected {d} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        if let Some(bad) = row.iter().find(|x| !x.is_finite()) {
            return Err(Error::Parse { line: line_of(&rec), message: format!("non-finite value {bad}") });
        }
        points.push(row);
    }
    if points.is_empty() {
        return Err(Error::EmptyInput("dataset contains no points"));
    }
    PointSet::new(points)
}

pub fn write_points<W: Write>(w: W, ps: &PointSet) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record((0..ps.dim()).map(|j| format!("x{j}")))?;
    for p in ps.points() {
        wtr.write_record(p.iter().map(f64::to_string))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Real part of a square matrix, columns `col0..`.
pub fn write_matrix<W: Write>(w: W, m: &DenseMatrix) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record((0..m.cols()).map(|j| format!("col{j}")))?;
    for row in m.real_rows() {
        wtr.write_record(row.iter().map(f64::to_string))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_matrix<R: Read>(r: R) -> Result<DenseMatrix> {
    let mut rdr = reader(r, true);
    let cols = rdr.headers()?.len();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push((0..cols).map(|j| parse_field(&rec, j, "a number")).collect::<Result<Vec<f64>>>()?);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("matrix file has no rows"));
    }
    DenseMatrix::from_real_rows(&rows)
}

pub fn write_eigenvalues<W: Write>(w: W, eigenvalues: &[f64]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["index", "eigenvalue"])?;
    for (i, l) in eigenvalues.iter().enumerate() {
        wtr.write_record([i.to_string(), l.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_eigenvalues<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut rdr = reader(r, true);
    check_header(rdr.headers()?, &["index", "eigenvalue"])?;
    rdr.records().map(|rec| parse_field(&rec?, 1, "an eigenvalue")).collect()
}

pub fn write_assignments<W: Write>(w: W, labels: &[usize]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["index", "label"])?;
    for (i, l) in labels.iter().enumerate() {
        wtr.write_record([i.to_string(), l.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_cluster_assignment<W: Write>(w: W, a: &ClusterAssignment) -> Result<()> {
    write_assignments(w, &a.labels)
}

pub fn read_assignments<R: Read>(r: R) -> Result<Vec<usize>> {
    let mut rdr = reader(r, true);
    check_header(rdr.headers()?, &["index", "label"])?;
    let mut labels = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let i: usize = parse_field(&rec, 0, "an index")?;
        if i != labels.len() {
            return Err(Error::Parse { line: line_of(&rec), message: format!("expected index {}, found {i}", labels.len()) });
        }
        labels.push(parse_field(&rec, 1, "a label")?);
    }
    Ok(labels)
}

/// Row of a trajectory file.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub iteration: usize,
    pub success_prob: f64,
    pub fidelity: f64,
    pub qubit0_p0: f64,
}

pub fn write_trajectory<W: Write>(w: W, t: &Trajectory) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["iteration", "success_prob", "fidelity", "qubit0_p0"])?;
    for r in &t.records {
        wtr.write_record([
            r.iteration.to_string(),
            r.success_prob.to_string(),
            r.fidelity.to_string(),
            r.qubit0_p0().to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_trajectory<R: Read>(r: R) -> Result<Vec<TrajectoryRow>> {
    let mut rdr = reader(r, true);
    check_header(rdr.headers()?, &["iteration", "success_prob", "fidelity", "qubit0_p0"])?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(TrajectoryRow {
                iteration: parse_field(&rec, 0, "an iteration")?,
                success_prob: parse_field(&rec, 1, "a probability")?,
                fidelity: parse_field(&rec, 2, "a fidelity")?,
                qubit0_p0: parse_field(&rec, 3, "a probability")?,
            })
        })
        .collect()
}

pub fn write_similarity<W: Write>(w: W, reports: &[SimilarityReport]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["y_id", "method", "similarity", "rank"])?;
    for r in reports {
        wtr.write_record([r.y_id.clone(), r.method.to_string(), r.similarity.to_string(), r.rank.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_similarity<R: Read>(r: R) -> Result<Vec<SimilarityReport>> {
    let mut rdr = reader(r, true);
    check_header(rdr.headers()?, &["y_id", "method", "similarity", "rank"])?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(SimilarityReport {
                y_id: rec.get(0).unwrap_or_default().to_string(),
                method: parse_field::<SimilarityMethod>(&rec, 1, "a method")?,
                similarity: parse_field(&rec, 2, "a similarity")?,
                rank: parse_field(&rec, 3, "a rank")?,
            })
        })
        .collect()
}

/// Columns `index,coefficient,x0..`; reflectors are written as real parts.
pub fn write_decomposition<W: Write>(w: W, hs: &HouseholderSum) -> Result<()> {
    let mut wtr = writer(w);
    let mut header = vec!["index".to_string(), "coefficient".to_string()];
    header.extend((0..hs.dim).map(|j| format!("x{j}")));
    wtr.write_record(&header)?;
    for (i, (x, c)) in hs.reflectors.iter().zip(&hs.coefficients).enumerate() {
        let mut row = vec![i.to_string(), c.to_string()];
        row.extend(x.to_real().iter().map(f64::to_string));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Returns `(coefficient, unit reflector)` pairs.
pub fn read_decomposition<R: Read>(r: R) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut rdr = reader(r, true);
    let width = rdr.headers()?.len();
    check_header(rdr.headers()?, &["index", "coefficient"])?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let c = parse_field(&rec, 1, "a coefficient")?;
            let x = (2..width).map(|j| parse_field(&rec, j, "a number")).collect::<Result<Vec<f64>>>()?;
            Ok((c, x))
        })
        .collect()
}

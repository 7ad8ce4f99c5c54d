//! Text formats.
//!
//! - Edge lists: one `i j value` triple per line, whitespace separated,
//!   `#` comments and blank lines ignored. The point count is one more than
//!   the largest index and symmetric closure is applied.
//! - Dense matrices: CSV, one row per line, with an optional header row of
//!   point labels.
//! - Geographic points: CSV with header `label,lat,lon`.
//! - Partitions: `point_label cluster_id`, tab separated on output.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::experiments::geo::GeoPoint;
use crate::measure::{DataSet, MeasureKind, Partition, SparseSymmetricMeasure};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses an edge list into `(n, triples)`.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(usize, Vec<(usize, usize, f64)>)> {
    let mut triples = Vec::new();
    let mut n = 0;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(lineno + 1, format!("expected 3 fields, found {}", fields.len())));
        }
        let index = |s: &str| s.parse::<usize>().map_err(|e| parse_err(lineno + 1, format!("{s:?}: {e}")));
        let i = index(fields[0])?;
        let j = index(fields[1])?;
        let v: f64 = fields[2].parse().map_err(|e| parse_err(lineno + 1, format!("{:?}: {e}", fields[2])))?;
        if !v.is_finite() {
            return Err(parse_err(lineno + 1, "value is not finite"));
        }
        n = n.max(i + 1).max(j + 1);
        triples.push((i, j, v));
    }
    if triples.is_empty() {
        return Err(parse_err(0, "no entries"));
    }
    Ok((n, triples))
}

pub fn read_edge_list<R: BufRead>(reader: R, kind: MeasureKind) -> Result<SparseSymmetricMeasure<f64>> {
    let (n, triples) = parse_edge_list(reader)?;
    SparseSymmetricMeasure::from_triples(n, kind, &triples)
}

/// Parses a dense CSV matrix; with `header`, the first row holds labels.
pub fn parse_dense_csv<R: Read>(reader: R, header: bool) -> Result<(Option<Vec<String>>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let labels = if header {
        Some(rdr.headers()?.iter().map(str::to_owned).collect::<Vec<_>>())
    } else {
        None
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(line, format!("bad number {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(0, "no rows"));
    }
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::NonSquareInput);
    }
    if let Some(l) = &labels {
        if l.len() != rows.len() {
            return Err(Error::ArityMismatch { expected: rows.len(), got: l.len() });
        }
    }
    Ok((labels, rows))
}

/// Reads `label,lat,lon` records.
pub fn read_geo_csv<R: Read>(reader: R) -> Result<Vec<(String, GeoPoint)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 3 {
            return Err(parse_err(line, format!("expected label,lat,lon, found {} fields", rec.len())));
        }
        let num = |f: &str| f.parse::<f64>().map_err(|e| parse_err(line, format!("{f:?}: {e}")));
        out.push((rec[0].to_owned(), GeoPoint::new(num(&rec[1])?, num(&rec[2])?)?));
    }
    if out.is_empty() {
        return Err(parse_err(0, "no points"));
    }
    Ok(out)
}

/// Writes `label<TAB>cluster` lines with clusters numbered in first-occurrence order.
pub fn write_partition_tsv<W: Write>(mut w: W, data: &DataSet, partition: &Partition) -> Result<()> {
    let canon = partition.canonical();
    for (i, &c) in canon.assign().iter().enumerate() {
        writeln!(w, "{}\t{}", data.label(i), c)?;
    }
    Ok(())
}

/// Reads `label cluster` lines; every point of `data` must appear exactly once.
pub fn parse_partition<R: BufRead>(reader: R, data: &DataSet) -> Result<Partition> {
    let mut cluster: Vec<Option<String>> = vec![None; data.n()];
    let mut count = 0;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(lineno + 1, "expected `label cluster`"));
        }
        let i = data
            .index_of(fields[0])
            .ok_or_else(|| parse_err(lineno + 1, format!("unknown point {:?}", fields[0])))?;
        if cluster[i].replace(fields[1].to_owned()).is_some() {
            return Err(parse_err(lineno + 1, format!("point {:?} listed twice", fields[0])));
        }
        count += 1;
    }
    if count != data.n() {
        return Err(Error::ArityMismatch { expected: data.n(), got: count });
    }
    let labels: Vec<String> = cluster.into_iter().map(|c| c.expect("all points seen")).collect();
    Partition::from_labels(&labels)
}

//! Exhaustive metric-axiom check over a point set.

use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack for the triangle inequality.
pub const TRIANGLE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub points: Vec<usize>,
    pub detail: String,
}

/// Checks non-negativity, identity, symmetry and the triangle inequality
/// over all ordered triples.
pub fn check_metric_axioms<P>(
    points: &[P],
    dist: impl Fn(&P, &P) -> Result<f64>,
) -> Result<Vec<Violation>> {
    let n = points.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = dist(&points[i], &points[j])?;
        }
    }
    let at = |i: usize, j: usize| d[i * n + j];
    let mut out = Vec::new();
    for i in 0..n {
        if at(i, i) != 0.0 {
            out.push(Violation {
                axiom: "identity",
                points: vec![i],
                detail: format!("d(p{i}, p{i}) = {}", at(i, i)),
            });
        }
        for j in 0..n {
            let dij = at(i, j);
            if !(dij >= 0.0) {
                out.push(Violation {
                    axiom: "non_negativity",
                    points: vec![i, j],
                    detail: format!("d(p{i}, p{j}) = {dij}"),
                });
            }
            if j > i && dij != at(j, i) {
                out.push(Violation {
                    axiom: "symmetry",
                    points: vec![i, j],
                    detail: format!("d(p{i}, p{j}) = {dij} but d(p{j}, p{i}) = {}", at(j, i)),
                });
            }
            for k in 0..n {
                let direct = at(i, k);
                let via = dij + at(j, k);
                if direct > via * (1.0 + TRIANGLE_RTOL) {
                    out.push(Violation {
                        axiom: "triangle",
                        points: vec![i, j, k],
                        detail: format!(
                            "d(p{i}, p{k}) = {direct} > {via} = d(p{i}, p{j}) + d(p{j}, p{k})"
                        ),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Reads base coordinates, one point per row. Lines starting with `#` are
/// comments; a non-numeric first row is taken as a header.
pub fn read_points(reader: impl Read, dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut points = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record =
            record.map_err(|e| Error::Configuration(format!("malformed point file: {e}")))?;
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if row == 0 => continue,
            Err(_) => {
                return Err(Error::Configuration(format!(
                    "malformed point file: row {} is not numeric",
                    row + 1
                )))
            }
        };
        if values.len() != dim {
            return Err(Error::Configuration(format!(
                "malformed point file: row {} has {} coordinates, expected {dim}",
                row + 1,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Configuration(format!(
                "malformed point file: row {} has a non-finite coordinate",
                row + 1
            )));
        }
        points.push(values);
    }
    if points.is_empty() {
        return Err(Error::Configuration("point file contains no points".into()));
    }
    Ok(points)
}

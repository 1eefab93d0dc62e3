//! CSV input and atomic file output.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use posthoc::HypothesisSet;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A numeric CSV table with optional header and row labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub values: DMatrix<f64>,
    pub column_labels: Option<Vec<String>>,
    pub row_labels: Option<Vec<String>>,
}

impl Table {
    pub fn transposed(self) -> Table {
        Table { values: self.values.transpose(), column_labels: self.row_labels, row_labels: self.column_labels }
    }
}

fn is_number(cell: &str) -> bool {
    cell.parse::<f64>().is_ok()
}

fn parse_error(path: &Path, line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line, column, message: message.into() }
}

fn read_records(path: &Path) -> CliResult<Vec<(usize, Vec<String>)>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, 1, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let cells: Vec<String> = rec.iter().map(str::to_owned).collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        out.push((line, cells));
    }
    Ok(out)
}

/// Reads a numeric table.
///
/// The first row is a header when its first cell is not a number and it
/// is not a labelled data row (a text cell followed by numbers only). A
/// first column of text cells is taken as row labels.
pub fn read_table(path: &Path) -> CliResult<Table> {
    let records = read_records(path)?;
    let Some((first_line, first)) = records.first() else {
        return Err(parse_error(path, 1, 1, "no data"));
    };
    let labelled_row = |cells: &[String]| cells.len() > 1 && !is_number(&cells[0]) && cells[1..].iter().all(|c| is_number(c));
    let has_header = !is_number(&first[0]) && !labelled_row(first);
    let data = if has_header { &records[1..] } else { &records[..] };
    let Some((_, first_data)) = data.first() else {
        return Err(parse_error(path, first_line + 1, 1, "header without data rows"));
    };
    let has_row_labels = !is_number(&first_data[0]);
    let offset = has_row_labels as usize;
    let width = first_data.len();
    if width <= offset {
        return Err(parse_error(path, data[0].0, 1, "row has no numeric cells"));
    }

    let n_rows = data.len();
    let n_cols = width - offset;
    let mut values = DMatrix::zeros(n_rows, n_cols);
    let mut row_labels = Vec::new();
    for (i, (line, cells)) in data.iter().enumerate() {
        if cells.len() != width {
            return Err(parse_error(
                path,
                *line,
                cells.len().min(width) + 1,
                format!("expected {width} fields, found {}", cells.len()),
            ));
        }
        if has_row_labels {
            row_labels.push(cells[0].clone());
        }
        for (j, cell) in cells[offset..].iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_error(path, *line, j + offset + 1, format!("not a number: {cell:?}")))?;
            if !v.is_finite() {
                return Err(parse_error(path, *line, j + offset + 1, format!("non-finite value {cell:?}")));
            }
            values[(i, j)] = v;
        }
    }

    let column_labels = if has_header {
        let header = &first[..];
        let labels = if header.len() == n_cols + offset {
            header[offset..].to_vec()
        } else if header.len() == n_cols {
            header.to_vec()
        } else {
            return Err(parse_error(
                path,
                *first_line,
                1,
                format!("header has {} fields for {n_cols} data columns", header.len()),
            ));
        };
        Some(labels)
    } else {
        None
    };
    Ok(Table { values, column_labels, row_labels: has_row_labels.then_some(row_labels) })
}

/// Resolves subset files: one set per line, `label,item,item,...`.
///
/// An item is a hypothesis id, a point label (every contrast at that
/// point) or `label@l` for contrast `l` only.
pub fn read_subsets(
    path: &Path,
    n_contrasts: usize,
    n_points: usize,
    point_labels: Option<&[String]>,
) -> CliResult<Vec<HypothesisSet>> {
    let m = n_contrasts * n_points;
    let find_point = |name: &str| point_labels.and_then(|ls| ls.iter().position(|l| l == name));
    let mut sets = Vec::new();
    for (line, cells) in read_records(path)? {
        let label = cells[0].clone();
        let mut ids = Vec::new();
        for (j, item) in cells.iter().enumerate().skip(1) {
            let col = j + 1;
            if item.is_empty() {
                continue;
            }
            if let Ok(id) = item.parse::<usize>() {
                if id >= m {
                    return Err(parse_error(path, line, col, format!("hypothesis id {id} outside 0..{m}")));
                }
                ids.push(id);
                continue;
            }
            let (name, contrast) = match item.rsplit_once('@') {
                Some((name, l)) => {
                    let l: usize = l
                        .parse()
                        .ok()
                        .filter(|&l| l < n_contrasts)
                        .ok_or_else(|| parse_error(path, line, col, format!("bad contrast index in {item:?}")))?;
                    (name, Some(l))
                }
                None => (item.as_str(), None),
            };
            let v = find_point(name).ok_or_else(|| parse_error(path, line, col, format!("unknown point {name:?}")))?;
            match contrast {
                Some(l) => ids.push(l * n_points + v),
                None => ids.extend((0..n_contrasts).map(|l| l * n_points + v)),
            }
        }
        sets.push(HypothesisSet::new(ids, m)?.with_label(label));
    }
    Ok(sets)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// One row of the simulation CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimCsvRow {
    pub method: String,
    pub rep: usize,
    pub violated: u8,
    pub lambda: f64,
    pub power_full: Option<f64>,
    pub power_bh: Option<f64>,
    pub power_p05: Option<f64>,
}

pub fn sim_csv_bytes(rows: &[SimCsvRow]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(posthoc::sim::CSV_HEADER).map_err(csv_error)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| CliError::Usage(e.to_string()))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv output: {e}"))
}

pub fn read_sim_csv(path: &Path) -> CliResult<Vec<SimCsvRow>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let header = reader.headers().map_err(|e| parse_error(path, 1, 1, e.to_string()))?;
    if header.iter().ne(posthoc::sim::CSV_HEADER) {
        return Err(parse_error(path, 1, 1, "unexpected header"));
    }
    reader
        .deserialize()
        .map(|r| {
            r.map_err(|e: csv::Error| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                parse_error(path, line, 1, e.to_string())
            })
        })
        .collect()
}

//! CSV input and output.

use std::path::Path;

use ovb_core::Dataset;

use crate::SenseError;

fn parse_cell(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a header-first, comma-separated file of numbers.
///
/// Rows with an empty, non-numeric or non-finite cell are dropped when
/// `drop_na` is set; otherwise the load fails with [`SenseError::Parse`]
/// naming the first offending cell and listing every offending row.
pub fn load_csv(path: impl AsRef<Path>, drop_na: bool) -> Result<Dataset, SenseError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| SenseError::io(path, e))?;
    read_csv(file, drop_na).map_err(|e| match e {
        SenseError::Csv { source, .. } => SenseError::csv(path, source),
        other => other,
    })
}

/// [`load_csv`] over any reader.
pub fn read_csv(reader: impl std::io::Read, drop_na: bool) -> Result<Dataset, SenseError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| SenseError::csv("<input>", e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    let mut first_bad: Option<(usize, usize)> = None;
    let mut bad_rows = Vec::new();
    let mut row_values = Vec::with_capacity(headers.len());

    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| SenseError::csv("<input>", e))?;
        row_values.clear();
        let mut bad_col = None;
        for (j, cell) in record.iter().enumerate() {
            match parse_cell(cell) {
                Some(v) => row_values.push(v),
                None => {
                    bad_col = Some(j);
                    break;
                }
            }
        }
        if let Some(j) = bad_col {
            first_bad.get_or_insert((row, j));
            bad_rows.push(row);
            continue;
        }
        for (col, v) in columns.iter_mut().zip(&row_values) {
            col.push(*v);
        }
    }

    if let Some((row, j)) = first_bad {
        if !drop_na {
            return Err(SenseError::Parse {
                row,
                column: headers[j].clone(),
                rows: bad_rows,
            });
        }
    }
    if columns.first().map_or(true, Vec::is_empty) {
        return Err(SenseError::EmptyDataset);
    }
    Ok(Dataset::new(headers.into_iter().zip(columns))?)
}

/// Writes a dataset with the shortest decimal representation that reads
/// back to the same `f64`, so `load_csv(write_csv(ds))` reproduces `ds`.
pub fn write_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<(), SenseError> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| SenseError::io(path, e))?;
    write_csv_to(data, file).map_err(|e| match e {
        SenseError::Csv { source, .. } => SenseError::csv(path, source),
        other => other,
    })
}

/// [`write_csv`] to any writer.
pub fn write_csv_to(data: &Dataset, writer: impl std::io::Write) -> Result<(), SenseError> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e| SenseError::csv("<output>", e);
    w.write_record(data.names()).map_err(csv_err)?;
    let cols: Vec<&[f64]> = data.iter().map(|(_, c)| c).collect();
    let mut record = Vec::with_capacity(cols.len());
    for i in 0..data.n_rows() {
        record.clear();
        record.extend(cols.iter().map(|c| c[i].to_string()));
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush().map_err(|e| SenseError::io("<output>", e))?;
    Ok(())
}

/// Expands a column list against a dataset. An entry ending in `*` selects
/// every column with that prefix, in dataset order, and must match at least
/// one column. Other entries are kept as given.
pub fn expand_columns(data: &Dataset, patterns: &[String]) -> Result<Vec<String>, SenseError> {
    let mut out = Vec::new();
    for p in patterns {
        let p = p.trim();
        if p.is_empty() {
            continue;
        }
        match p.strip_suffix('*') {
            Some(prefix) => {
                let before = out.len();
                out.extend(data.names().iter().filter(|n| n.starts_with(prefix)).cloned());
                if out.len() == before {
                    return Err(ovb_core::Error::UnknownColumn(p.to_string()).into());
                }
            }
            None => out.push(p.to_string()),
        }
    }
    Ok(out)
}

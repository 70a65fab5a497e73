use std::path::PathBuf;

/// Everything the command line can fail with.
#[derive(Debug, thiserror::Error)]
pub enum SenseError {
    /// Reading or writing a file failed.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
    /// Malformed CSV structure.
    #[error("{path}: {source}")]
    Csv {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: csv::Error,
    },
    /// A cell could not be read as a finite number. `row` is 1-based,
    /// excluding the header; `rows` lists every offending row.
    #[error("row {row}, column `{column}`: not a finite number (offending rows: {})", fmt_rows(.rows))]
    Parse {
        /// First offending row.
        row: usize,
        /// First offending column in that row.
        column: String,
        /// All offending rows.
        rows: Vec<usize>,
    },
    /// No data rows remain.
    #[error("dataset has no rows")]
    EmptyDataset,
    /// Invalid combination of arguments.
    #[error("{0}")]
    Usage(String),
    /// JSON serialization failed.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// Error from the analysis itself.
    #[error(transparent)]
    Core(#[from] ovb_core::Error),
}

fn fmt_rows(rows: &[usize]) -> String {
    const SHOWN: usize = 20;
    let mut s: Vec<String> = rows.iter().take(SHOWN).map(usize::to_string).collect();
    if rows.len() > SHOWN {
        s.push(format!("... {} more", rows.len() - SHOWN));
    }
    s.join(", ")
}

impl SenseError {
    /// Process exit code: 2 for input problems, 3 for an unresolvable sign
    /// case under `--strict`, 4 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            SenseError::Core(ovb_core::Error::UnresolvableSignCase(_)) => 3,
            SenseError::Core(e) if e.is_numerical() => 4,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SenseError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        SenseError::Csv {
            path: path.into(),
            source,
        }
    }
}

//! In-memory datasets of named numeric columns and regression specifications.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Named numeric columns of equal length.
///
/// Column order is preserved; names are unique and non-empty, and every
/// entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    index: BTreeMap<String, usize>,
    n_rows: usize,
}

impl Dataset {
    /// Builds a dataset from `(name, values)` pairs, validating the invariants.
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = (S, Vec<f64>)>) -> Result<Self> {
        let mut ds = Dataset {
            names: Vec::new(),
            columns: Vec::new(),
            index: BTreeMap::new(),
            n_rows: 0,
        };
        for (name, values) in columns {
            ds.push_column(name, values)?;
        }
        if ds.names.is_empty() {
            return Err(Error::InvalidDataset("no columns".into()));
        }
        Ok(ds)
    }

    /// Appends a column. Its length must match existing columns.
    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidDataset("empty column name".into()));
        }
        if self.index.contains_key(&name) {
            return Err(Error::InvalidDataset(format!("duplicate column `{name}`")));
        }
        if values.is_empty() {
            return Err(Error::InvalidDataset(format!("column `{name}` has no rows")));
        }
        if !self.names.is_empty() && values.len() != self.n_rows {
            return Err(Error::InvalidDataset(format!(
                "column `{name}` has {} rows, expected {}",
                values.len(),
                self.n_rows
            )));
        }
        if let Some(row) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "column `{name}` has a non-finite value at row {}",
                row + 1
            )));
        }
        self.n_rows = values.len();
        self.index.insert(name.clone(), self.names.len());
        self.names.push(name);
        self.columns.push(values);
        Ok(())
    }

    /// Number of rows.
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Column names in insertion order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// True if a column with this name exists.
    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Values of the named column.
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.index
            .get(name)
            .map(|&i| self.columns[i].as_slice())
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Iterates over `(name, values)` in column order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names
            .iter()
            .zip(&self.columns)
            .map(|(n, c)| (n.as_str(), c.as_slice()))
    }

    /// Returns a copy with rows reordered by `order` (a permutation of `0..n_rows`).
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_rows {
            return Err(Error::InvalidInput("permutation length does not match rows".into()));
        }
        let mut seen = alloc::vec![false; self.n_rows];
        for &i in order {
            if i >= self.n_rows || seen[i] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[i] = true;
        }
        Dataset::new(
            self.names
                .iter()
                .zip(&self.columns)
                .map(|(n, c)| (n.clone(), order.iter().map(|&i| c[i]).collect())),
        )
    }
}

/// Structure of the restricted regression `outcome ~ treatment + covariates`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModelSpec {
    /// Outcome column.
    pub outcome: String,
    /// Treatment column.
    pub treatment: String,
    /// Observed covariates, in order.
    pub covariates: Vec<String>,
    /// Include a constant term. On by default.
    pub intercept: bool,
}

impl ModelSpec {
    /// A specification with an intercept.
    pub fn new<S: Into<String>>(
        outcome: impl Into<String>,
        treatment: impl Into<String>,
        covariates: impl IntoIterator<Item = S>,
    ) -> Self {
        ModelSpec {
            outcome: outcome.into(),
            treatment: treatment.into(),
            covariates: covariates.into_iter().map(Into::into).collect(),
            intercept: true,
        }
    }

    /// Checks the role constraints and that every column exists in `data`.
    pub fn validate(&self, data: &Dataset) -> Result<()> {
        if self.outcome == self.treatment {
            return Err(Error::InvalidSpec("outcome and treatment are the same column".into()));
        }
        for (i, c) in self.covariates.iter().enumerate() {
            if *c == self.outcome || *c == self.treatment {
                return Err(Error::InvalidSpec(format!(
                    "`{c}` is both a covariate and the outcome or treatment"
                )));
            }
            if self.covariates[..i].contains(c) {
                return Err(Error::InvalidSpec(format!("covariate `{c}` listed twice")));
            }
        }
        for name in self.regressors().chain(core::iter::once(self.outcome.as_str())) {
            data.column(name)?;
        }
        Ok(())
    }

    /// Treatment followed by covariates: the regressors of the restricted model.
    pub fn regressors(&self) -> impl Iterator<Item = &str> {
        core::iter::once(self.treatment.as_str()).chain(self.covariates.iter().map(String::as_str))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_ragged_columns() {
        let err = Dataset::new([("a", vec![1.0, 2.0]), ("b", vec![1.0])]).unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
    }

    #[test]
    fn rejects_duplicate_and_empty_names() {
        assert!(Dataset::new([("a", vec![1.0]), ("a", vec![2.0])]).is_err());
        assert!(Dataset::new([("", vec![1.0])]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Dataset::new([("a", vec![1.0, f64::NAN])]).is_err());
        assert!(Dataset::new([("a", vec![f64::INFINITY])]).is_err());
    }

    #[test]
    fn spec_validation() {
        let ds = Dataset::new([("y", vec![1.0]), ("d", vec![1.0]), ("x", vec![1.0])]).unwrap();
        assert!(ModelSpec::new("y", "d", ["x"]).validate(&ds).is_ok());
        assert!(ModelSpec::new("y", "y", ["x"]).validate(&ds).is_err());
        assert!(ModelSpec::new("y", "d", ["d"]).validate(&ds).is_err());
        assert_eq!(
            ModelSpec::new("y", "d", ["w"]).validate(&ds),
            Err(Error::UnknownColumn("w".into()))
        );
    }
}

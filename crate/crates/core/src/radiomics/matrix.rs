//! Feature matrices and their CSV interchange format.

use std::path::Path;

use ndarray::{Array2, ArrayView1};

use super::catalog::FeatureCatalog;
use crate::error::{Error, Result};

/// One row of catalog features per image, rows in id order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub ids: Vec<String>,
    /// `(n_images, n_features)`, columns in catalog order.
    pub data: Array2<f64>,
    pub catalog: FeatureCatalog,
}

impl FeatureMatrix {
    pub fn new(ids: Vec<String>, data: Array2<f64>, catalog: FeatureCatalog) -> Result<Self> {
        if data.nrows() != ids.len() || data.ncols() != catalog.len() {
            return Err(Error::DimError {
                expected: catalog.len(),
                got: data.ncols(),
            });
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NumericError(format!(
                "feature matrix contains non-finite value {bad}"
            )));
        }
        Ok(Self { ids, data, catalog })
    }

    pub fn n_images(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.data.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.data.row(i)
    }

    /// Selects a subset of rows (used by subsampling studies).
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        let data = ndarray::stack(
            ndarray::Axis(0),
            &indices.iter().map(|&i| self.data.row(i)).collect::<Vec<_>>(),
        )
        .expect("rows share length");
        Self {
            ids,
            data,
            catalog: self.catalog.clone(),
        }
    }

    pub fn same_catalog(&self, other: &Self) -> Result<()> {
        if self.catalog != other.catalog {
            return Err(Error::CatalogError(
                "feature matrices carry different catalogs".into(),
            ));
        }
        Ok(())
    }

    /// CSV with header `id,<column names...>`; floats carry 17 significant
    /// digits so values round-trip exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str("id");
        for name in self.catalog.column_names() {
            out.push(',');
            out.push_str(&name);
        }
        out.push('\n');
        for (i, id) in self.ids.iter().enumerate() {
            out.push_str(id);
            for v in self.data.row(i) {
                out.push(',');
                out.push_str(&format!("{v:.16e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path.as_ref(), self.to_csv_string()).map_err(|e| Error::FileError {
            path: path.as_ref().to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file_err = |message: String| Error::FileError {
            path: path.to_path_buf(),
            message,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path)
            .map_err(|e| file_err(e.to_string()))?;
        let headers = reader.headers().map_err(|e| file_err(e.to_string()))?.clone();
        if headers.is_empty() || &headers[0] != "id" {
            return Err(file_err("first column must be 'id'".into()));
        }
        let columns: Vec<&str> = headers.iter().skip(1).collect();
        let catalog = FeatureCatalog::from_column_names(&columns)?;

        let mut ids = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| file_err(e.to_string()))?;
            if record.len() != columns.len() + 1 {
                return Err(file_err(format!(
                    "row {} has {} fields, expected {}",
                    ids.len() + 2,
                    record.len(),
                    columns.len() + 1
                )));
            }
            ids.push(record[0].to_string());
            for field in record.iter().skip(1) {
                let v: f64 = field
                    .parse()
                    .map_err(|e| file_err(format!("bad float '{field}': {e}")))?;
                values.push(v);
            }
        }
        if ids.is_empty() {
            return Err(Error::EmptyInput(format!(
                "no feature rows in {}",
                path.display()
            )));
        }
        let data = Array2::from_shape_vec((ids.len(), columns.len()), values)
            .expect("record lengths validated");
        Self::new(ids, data, catalog)
    }
}

//! CSV emission and ingestion.
//!
//! Floats carry 17 significant digits so every value round-trips exactly.
//! Files are assembled in memory, written next to their target under a
//! temporary name and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use dfflab_core::{DensityDistribution, Normalization};

use crate::error::{CliError, Result};

/// `x` in round-trip scientific notation; non-finite values are refused.
pub fn float(x: f64) -> Result<String> {
    if x.is_finite() {
        Ok(format!("{x:.16e}"))
    } else {
        Err(CliError::Core(dfflab_core::Error::Validation(format!(
            "refusing to write non-finite value {x}"
        ))))
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `header` and `rows` to `dir/name` atomically.
pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let target = dir.join(name);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Input {
        path: target.clone(),
        message: e.to_string(),
    };
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input {
        path: target.clone(),
        message: e.to_string(),
    })?;

    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io(&tmp))?;
    f.write_all(&bytes).map_err(io(&tmp))?;
    f.sync_all().map_err(io(&tmp))?;
    drop(f);
    fs::rename(&tmp, &target).map_err(io(&target))?;
    Ok(target)
}

/// Numeric table read back from one of our CSVs.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Reads a CSV with a header row and numeric cells.
pub fn read_table(path: &Path) -> Result<Table> {
    let bad = |message: String| CliError::Input {
        path: path.to_path_buf(),
        message,
    };
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let row = rec
            .iter()
            .map(|cell| {
                cell.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("row {}: `{cell}` is not a number", i + 2)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

/// Distribution from a `(label, weight)` file, or from the rows of a
/// `(parameter, label, weight)` file whose parameter matches `select`.
pub fn read_distribution(
    path: &Path,
    select: Option<f64>,
    policy: Normalization,
) -> Result<DensityDistribution> {
    let bad = |message: String| CliError::Input {
        path: path.to_path_buf(),
        message,
    };
    let table = read_table(path)?;
    let (labels, weights): (Vec<f64>, Vec<f64>) = match (table.header.len(), select) {
        (2, None) => table.rows.iter().map(|r| (r[0], r[1])).unzip(),
        (2, Some(_)) => return Err(bad("two-column file takes no parameter selector".into())),
        (3, Some(p)) => table
            .rows
            .iter()
            .filter(|r| (r[0] - p).abs() <= 1e-9 * p.abs().max(1.0))
            .map(|r| (r[1], r[2]))
            .unzip(),
        (3, None) => {
            return Err(bad(format!(
                "three-column file needs a `{}` value to select",
                table.header[0]
            )))
        }
        (n, _) => return Err(bad(format!("expected 2 or 3 columns, found {n}"))),
    };
    if labels.is_empty() {
        return Err(bad(match select {
            Some(p) => format!("no rows with {} = {p}", table.header[0]),
            None => "no rows".into(),
        }));
    }
    DensityDistribution::with_normalization(labels, weights, policy).map_err(|e| bad(e.to_string()))
}

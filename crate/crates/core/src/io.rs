//! JSON model files and CSV sweep output.
//!
//! A model file is `{n, m, p, A, B, C, D, metadata?}` where every matrix is
//! an array of rows and every entry a `[re, im]` pair.

use crate::error::{Error, Result};
use crate::numkit::{CMatrix, C64};
use crate::sysmodel::{StateSpace, SweepReport};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn rows_of(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn matrix_of(rows: &[Vec<[f64; 2]>], r: usize, c: usize, name: &str) -> Result<CMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::DimensionMismatch(format!("{name} must be {r}x{c}")));
    }
    let mut m = CMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(Error::NonFinite(format!("{name}[{i}][{j}]")));
            }
            m[(i, j)] = C64::new(z[0], z[1]);
        }
    }
    Ok(m)
}

impl ModelFile {
    pub fn from_system(sys: &StateSpace, name: Option<&str>) -> Self {
        ModelFile {
            n: sys.n(),
            m: sys.m(),
            p: sys.p(),
            a: rows_of(sys.a()),
            b: rows_of(sys.b()),
            c: rows_of(sys.c()),
            d: rows_of(sys.d()),
            metadata: Some(Metadata {
                name: name.map(str::to_string),
                real: Some(sys.is_real()),
            }),
        }
    }

    pub fn to_system(&self) -> Result<StateSpace> {
        let (n, m, p) = (self.n, self.m, self.p);
        StateSpace::new(
            matrix_of(&self.a, n, n, "A")?,
            matrix_of(&self.b, n, m, "B")?,
            matrix_of(&self.c, p, n, "C")?,
            matrix_of(&self.d, p, m, "D")?,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameters(format!("model file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }
}

pub fn read_model(path: &Path) -> Result<StateSpace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameters(format!("{}: {e}", path.display())))?;
    ModelFile::parse(&text)?.to_system()
}

pub fn write_model(path: &Path, sys: &StateSpace, name: Option<&str>) -> Result<()> {
    write_text(path, &ModelFile::from_system(sys, name).to_json())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::InvalidParameters(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, text)
        .map_err(|e| Error::InvalidParameters(format!("{}: {e}", path.display())))
}

/// `omega,sigma_max` CSV; poles appear as NaN.
pub fn sweep_csv(rep: &SweepReport) -> String {
    let mut s = String::from("omega,sigma_max\n");
    for (w, v) in rep.grid.points().iter().zip(&rep.sigma_max) {
        if v.is_nan() {
            let _ = writeln!(s, "{w:e},NaN");
        } else {
            let _ = writeln!(s, "{w:e},{v:e}");
        }
    }
    s
}

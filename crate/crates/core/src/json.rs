//! JSON encodings that keep full `f64` precision: numbers are written as
//! decimal strings with 17 significant digits.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::subspace::{CMatrix, C64};

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidMatrix(format!("not a number: {s:?}")))
}

/// `#[serde(with = "f64_string")]` for a single `f64` field.
pub mod f64_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_f64(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        parse_f64(&text).map_err(serde::de::Error::custom)
    }
}

/// Row-major complex matrix with separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<String>>,
    pub im: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn encode(m: &CMatrix) -> Self {
        let part = |f: fn(&C64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| format_f64(f(&m[(i, j)]))).collect())
                .collect()
        };
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    pub fn decode(&self) -> Result<CMatrix> {
        let shape_ok = |p: &Vec<Vec<String>>| p.len() == self.rows && p.iter().all(|r| r.len() == self.cols);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::InvalidMatrix(format!(
                "entries do not match the declared {}x{} shape",
                self.rows, self.cols
            )));
        }
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = C64::new(parse_f64(&self.re[i][j])?, parse_f64(&self.im[i][j])?);
            }
        }
        Ok(m)
    }
}

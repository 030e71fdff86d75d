use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bigjson;
use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<I: IntoIterator<Item = BigInt>>(diag: I) -> Self {
        let diag: Vec<BigInt> = diag.into_iter().collect();
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input;
    /// intended for literals and tests.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), ncols, "ragged matrix literal");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
            entries.extend(r);
        }
        Ok(IntMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * k).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `M + M^T`.
    pub fn symmetrized(&self) -> Self {
        self.add(&self.transpose())
    }

    /// `M - M^T`.
    pub fn antisymmetrized(&self) -> Self {
        self.sub(&self.transpose())
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        let n = self.ensure_square()?;
        Ok(bareiss_det(self.entries.clone(), n))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * k;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * k;
            self.entries[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array(self.row(i).iter().map(bigjson::to_value).collect()))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("matrix JSON must be an object with a \"rows\" array"))?;
        let mut out = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let r = r
                .as_array()
                .ok_or_else(|| Error::invalid(format!("row {i} is not an array")))?;
            let parsed: Option<Vec<BigInt>> = r.iter().map(bigjson::from_value).collect();
            out.push(parsed.ok_or_else(|| Error::invalid(format!("row {i} has a non-integer entry")))?);
        }
        Self::from_big_rows(out)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

pub(crate) fn bareiss_det(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                Some(i) => {
                    for j in 0..n {
                        a.swap(k * n + j, i * n + j);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v.div_floor(&prev);
            }
        }
        prev = pivot;
    }
    sign * &a[n * n - 1]
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        IntMatrix::from_json_value(&v).map_err(serde::de::Error::custom)
    }
}

/// Absolute value helper used by callers comparing determinants to ±1.
pub fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

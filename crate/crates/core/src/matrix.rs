//! Dense square matrices: exact rationals for group-level identities and
//! `f64` for anything carrying continuous parameters.
//!
//! Matrix indices are 0-based `(row, col)`; group positions elsewhere in the
//! crate are 1-based.

use std::fmt;
use std::ops::{Index, Mul};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |e: String| Error::Parse(format!("bad rational {s:?}: {e}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|e| bad(format!("{e}")))?;
            let q: BigInt = q.trim().parse().map_err(|e| bad(format!("{e}")))?;
            if q.is_zero() {
                return Err(bad("zero denominator".into()));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|e| bad(format!("{e}")))?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// `n × n` exact rational matrix, row-major, entries kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegenerateDegree);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(n, entries)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Matrix unit with a single 1 at 1-based `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange { i, j, n });
        }
        let mut m = Self::zeros(n);
        m.entries[(i - 1) * n + (j - 1)] = Rational::one();
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.n + col] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for c in 0..n {
            for r in 0..n {
                entries.push(self[(r, c)].clone());
            }
        }
        Self { n, entries }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = &self.entries[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &other.entries[k * n + c];
                    if !b.is_zero() {
                        out.entries[r * n + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Rational {
        let rows: Vec<Vec<Rational>> = (0..self.n).map(|r| self.row(r).to_vec()).collect();
        let ech = bareiss(rows);
        if ech.rank < self.n {
            return Rational::zero();
        }
        let det = ech.last_pivot;
        if ech.swaps % 2 == 1 {
            -det
        } else {
            det
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(
            &(0..self.n)
                .map(|r| self.row(r).to_vec())
                .collect::<Vec<_>>(),
        )
    }

    pub fn to_float(&self) -> FloatMatrix {
        let n = self.n;
        FloatMatrix(DMatrix::from_fn(n, n, |r, c| {
            self.entries[r * n + c].to_f64().unwrap_or(f64::NAN)
        }))
    }

    /// Exact conversion of a float matrix (every finite `f64` is rational).
    pub fn from_float(m: &FloatMatrix) -> Self {
        let n = m.n();
        let entries = (0..n * n)
            .map(|k| Rational::from_float(m[(k / n, k % n)]).expect("finite by construction"))
            .collect();
        Self { n, entries }
    }

    /// Lowest-terms row-major serialization, used as an exact dedup key.
    pub fn canonical_key(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.n)
            .map(|r| Value::Array(self.row(r).iter().map(rational_to_json).collect()))
            .collect();
        json!({ "n": self.n, "rows": rows })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let rows = json_rows(value)?;
        let rows = rows
            .iter()
            .map(|row| row.iter().map(json_to_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[r * self.n + c]
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (c, v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn rational_to_json(v: &Rational) -> Value {
    if v.is_integer() {
        if let Some(i) = v.to_integer().to_i64() {
            return json!(i);
        }
    }
    Value::String(v.to_string())
}

fn json_to_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(int(i))
            } else {
                let f = num
                    .as_f64()
                    .ok_or_else(|| Error::Parse(format!("bad number {num}")))?;
                Rational::from_float(f).ok_or_else(|| Error::Parse(format!("non-finite {f}")))
            }
        }
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn json_to_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(num) => num
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("bad number {num}"))),
        Value::String(s) => match parse_rational(s) {
            Ok(q) => q
                .to_f64()
                .ok_or_else(|| Error::Parse(format!("rational {s} out of range"))),
            Err(_) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}"))),
        },
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

/// Accepts `{"n": .., "rows": [[..]]}` or a bare `[[..]]`.
fn json_rows(value: &Value) -> Result<Vec<Vec<Value>>> {
    let (declared, rows) = match value {
        Value::Object(map) => {
            let rows = map
                .get("rows")
                .ok_or_else(|| Error::Parse("missing \"rows\"".into()))?;
            let n = match map.get("n") {
                Some(v) => Some(
                    v.as_u64()
                        .ok_or_else(|| Error::Parse("\"n\" must be a positive integer".into()))?
                        as usize,
                ),
                None => None,
            };
            (n, rows)
        }
        rows @ Value::Array(_) => (None, rows),
        _ => return Err(Error::Parse("expected a matrix object or array".into())),
    };
    let rows: Vec<Vec<Value>> = rows
        .as_array()
        .ok_or_else(|| Error::Parse("\"rows\" must be an array".into()))?
        .iter()
        .map(|r| {
            r.as_array()
                .cloned()
                .ok_or_else(|| Error::Parse("each row must be an array".into()))
        })
        .collect::<Result<_>>()?;
    if let Some(n) = declared {
        if n != rows.len() {
            return Err(Error::Parse(format!(
                "declared n = {n} but {} rows given",
                rows.len()
            )));
        }
    }
    Ok(rows)
}

/// `n × n` matrix of finite `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMatrix(DMatrix<f64>);

impl FloatMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::DegenerateDegree);
        }
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if !m[(r, c)].is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        Self::new(DMatrix::from_fn(
            n,
            n,
            |r, c| if r == c { d[r] } else { 0.0 },
        ))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn determinant(&self) -> f64 {
        self.0.clone().determinant()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(&self.0 * k)
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok((&self.0 - &other.0).norm())
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|r| (0..self.n()).map(|c| self.0[(r, c)]).collect())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n(), "rows": self.rows() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let rows = json_rows(value)?
            .iter()
            .map(|row| row.iter().map(json_to_f64).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    /// Headerless CSV, one matrix row per record; `n` is the record count.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let row = record
                .iter()
                .map(|f| json_to_f64(&Value::String(f.to_string())))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

impl Index<(usize, usize)> for FloatMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

pub(crate) struct Echelon {
    pub rank: usize,
    pub swaps: usize,
    pub last_pivot: Rational,
}

/// Fraction-free Gaussian elimination on a row list. Every division is
/// exact, so integer inputs stay integral throughout.
pub(crate) fn bareiss(mut a: Vec<Vec<Rational>>) -> Echelon {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Rational::one();
    let mut rank = 0;
    let mut swaps = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            swaps += 1;
        }
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                row[j] = (&pivot_row[c] * &row[j] - &factor * &pivot_row[j]) / &prev;
            }
            row[c] = Rational::zero();
        }
        prev = pivot_row[c].clone();
        rank += 1;
    }
    Echelon {
        rank,
        swaps,
        last_pivot: prev,
    }
}

pub fn rank_of_rows(rows: &[Vec<Rational>]) -> usize {
    bareiss(rows.to_vec()).rank
}

/// Solves the square system `A x = b` exactly; `None` when `A` is singular.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..m {
        let p = (c..m).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(p, c);
        let inv = aug[c][c].recip();
        for v in aug[c].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r == c || aug[r][c].is_zero() {
                continue;
            }
            let factor = aug[r][c].clone();
            let pivot = aug[c][c..].to_vec();
            for (x, y) in aug[r][c..].iter_mut().zip(&pivot) {
                *x -= &factor * y;
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Sign of a nonzero rational as `±1`, 0 for zero.
pub fn rational_signum(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

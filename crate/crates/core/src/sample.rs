//! Sample matrices and the rank transform onto the unit hypercube.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param_err, Error, Result};

/// An `n × d` table of finite observations, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    n: usize,
    d: usize,
    values: Vec<f64>,
    column_names: Option<Vec<String>>,
}

impl SampleMatrix {
    /// Builds a matrix from row-major values.
    pub fn new(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Shape(alloc::format!(
                "need at least 2 rows, got {n}"
            )));
        }
        if d < 1 {
            return Err(Error::Shape("need at least 1 column".into()));
        }
        if values.len() != n * d {
            return Err(Error::Shape(alloc::format!(
                "expected {} values for {n}x{d}, got {}",
                n * d,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / d,
                column: pos % d,
                value: values[pos],
            });
        }
        Ok(Self {
            n,
            d,
            values,
            column_names: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::Shape(alloc::format!(
                    "row {i} has {} columns, expected {d}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), d, values)
    }

    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let d = columns.len();
        let n = columns.first().map_or(0, |c| c.as_ref().len());
        if let Some(j) = columns.iter().position(|c| c.as_ref().len() != n) {
            return Err(Error::Shape(alloc::format!(
                "column {j} length differs from column 0"
            )));
        }
        let mut values = Vec::with_capacity(n * d);
        for i in 0..n {
            values.extend(columns.iter().map(|c| c.as_ref()[i]));
        }
        Self::new(n, d, values)
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d {
            return Err(Error::Shape(alloc::format!(
                "{} column names for {} columns",
                names.len(),
                self.d
            )));
        }
        self.column_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.values[i * self.d + j]).collect()
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Shape("no columns selected".into()));
        }
        if let Some(&bad) = columns.iter().find(|&&j| j >= self.d) {
            return Err(param_err!(
                "column index {bad} out of range for {} columns",
                self.d
            ));
        }
        let mut values = Vec::with_capacity(self.n * columns.len());
        for i in 0..self.n {
            let row = self.row(i);
            values.extend(columns.iter().map(|&j| row[j]));
        }
        let mut out = Self::new(self.n, columns.len(), values)?;
        if let Some(names) = &self.column_names {
            out.column_names = Some(columns.iter().map(|&j| names[j].clone()).collect());
        }
        Ok(out)
    }

    /// Applies `f` to every entry of column `j`.
    pub fn map_column(&self, j: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values = self.values.clone();
        for i in 0..self.n {
            values[i * self.d + j] = f(values[i * self.d + j]);
        }
        let mut out = Self::new(self.n, self.d, values)?;
        out.column_names = self.column_names.clone();
        Ok(out)
    }
}

/// How tied values are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TiePolicy {
    /// Tied values share the mean of the ranks they span.
    #[default]
    Average,
    /// Distinct values get consecutive ranks `1..=m`, scaled by `1/(m+1)`.
    Dense,
    /// Ties are broken in a seeded random order. Equivalent to adding noise
    /// below the resolution of the data and then ranking.
    Jitter { seed: u64 },
}

/// Rank-transformed samples strictly inside the unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoObservations {
    n: usize,
    d: usize,
    values: Vec<f64>,
    tie_policy: TiePolicy,
}

impl PseudoObservations {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.values[i * self.d + j]).collect()
    }
}

/// Column-wise ranks scaled into (0, 1).
///
/// With the average policy and no ties every column is a permutation of
/// `{1/(n+1), …, n/(n+1)}`. The output depends only on the ordering of each
/// column, so any strictly increasing per-column map leaves it unchanged.
pub fn rank_transform(samples: &SampleMatrix, tie_policy: TiePolicy) -> PseudoObservations {
    let (n, d) = (samples.n, samples.d);
    let mut values = alloc::vec![0.0; n * d];
    let mut rng = match tie_policy {
        TiePolicy::Jitter { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut tiebreak: Vec<u64> = alloc::vec![0; n];
    for j in 0..d {
        let col = |i: usize| samples.values[i * d + j];
        if let Some(rng) = rng.as_mut() {
            for t in tiebreak.iter_mut() {
                *t = rng.random();
            }
        }
        order.clear();
        order.extend(0..n);
        order.sort_by(|&a, &b| {
            col(a)
                .total_cmp(&col(b))
                .then(tiebreak[a].cmp(&tiebreak[b]))
                .then(a.cmp(&b))
        });

        match tie_policy {
            TiePolicy::Average => {
                let scale = 1.0 / (n as f64 + 1.0);
                let mut start = 0;
                while start < n {
                    let mut end = start + 1;
                    while end < n && col(order[end]) == col(order[start]) {
                        end += 1;
                    }
                    // ranks start+1 ..= end, averaged
                    let rank = (start + 1 + end) as f64 / 2.0;
                    for &i in &order[start..end] {
                        values[i * d + j] = rank * scale;
                    }
                    start = end;
                }
            }
            TiePolicy::Dense => {
                let mut dense = alloc::vec![0usize; n];
                let mut level = 0;
                for (pos, &i) in order.iter().enumerate() {
                    if pos == 0 || col(i) != col(order[pos - 1]) {
                        level += 1;
                    }
                    dense[i] = level;
                }
                let scale = 1.0 / (level as f64 + 1.0);
                for i in 0..n {
                    values[i * d + j] = dense[i] as f64 * scale;
                }
            }
            TiePolicy::Jitter { .. } => {
                let scale = 1.0 / (n as f64 + 1.0);
                for (pos, &i) in order.iter().enumerate() {
                    values[i * d + j] = (pos + 1) as f64 * scale;
                }
            }
        }
    }
    PseudoObservations {
        n,
        d,
        values,
        tie_policy,
    }
}

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring of an [`ExactMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Z2,
    Z4,
    Z,
}

impl Ring {
    /// Canonical representative of `v` in the ring (`0..2`, `0..4`, or `v` itself).
    pub fn reduce(self, v: i64) -> i64 {
        match self {
            Ring::Z2 => v.rem_euclid(2),
            Ring::Z4 => v.rem_euclid(4),
            Ring::Z => v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ring::Z2 => "Z2",
            Ring::Z4 => "Z4",
            Ring::Z => "Z",
        }
    }

    pub fn parse(s: &str) -> Option<Ring> {
        match s {
            "Z2" => Some(Ring::Z2),
            "Z4" => Some(Ring::Z4),
            "Z" => Some(Ring::Z),
            _ => None,
        }
    }

    fn valid_value(self, v: i64) -> bool {
        match self {
            Ring::Z2 => v == 1,
            Ring::Z4 => (1..4).contains(&v),
            Ring::Z => v != 0,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sparse matrix over Z2, Z4 or Z.
///
/// Storage is row-major: each row keeps its nonzero `(col, value)` pairs sorted by
/// column, with values in canonical form for the ring. Two matrices are equal iff
/// they have the same ring, shape and entries, so `==` is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ExactMatrix<{}>({}x{}) [",
            self.ring, self.rows, self.cols
        )?;
        for (i, (r, c, v)) in self.entries().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({r},{c})={v}")?;
        }
        f.write_str("]")
    }
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, 1)]).collect();
        ExactMatrix {
            ring,
            rows: n,
            cols: n,
            data,
        }
    }

    /// Strict constructor: rejects out-of-range indices, duplicate positions and
    /// values that are not canonical nonzero elements of the ring.
    pub fn from_entries<I>(ring: Ring, rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut data: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({r}, {c}) out of range for {rows}x{cols}"
                )));
            }
            if !ring.valid_value(v) {
                return Err(Error::InvalidMatrix(format!(
                    "value {v} at ({r}, {c}) is not a nonzero element of {ring}"
                )));
            }
            data[r].push((c, v));
        }
        for (r, row) in data.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(c, _)| c);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate entry at ({r}, {})",
                    w[0].0
                )));
            }
        }
        Ok(ExactMatrix {
            ring,
            rows,
            cols,
            data,
        })
    }

    /// Lenient constructor: duplicate positions are summed, values reduced into the
    /// ring and zeros dropped. Panics on out-of-range indices.
    pub fn accumulate<I>(ring: Ring, rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of range");
            let slot = acc[r].entry(c).or_insert(0);
            *slot = ring.reduce(*slot + v);
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        ExactMatrix {
            ring,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from dense rows. Values are reduced into the ring.
    pub fn from_dense(ring: Ring, dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        Self::accumulate(
            ring,
            rows,
            cols,
            dense.iter().enumerate().flat_map(|(r, row)| {
                assert_eq!(row.len(), cols, "ragged dense matrix");
                row.iter().enumerate().map(move |(c, &v)| (r, c, v))
            }),
        )
    }

    /// Column vector from entries.
    pub fn column_vector(ring: Ring, values: &[i64]) -> Self {
        Self::accumulate(
            ring,
            values.len(),
            1,
            values.iter().enumerate().map(|(r, &v)| (r, 0, v)),
        )
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn density(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.rows as f64 * self.cols as f64)
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let row = &self.data[r];
        row.binary_search_by_key(&c, |&(cc, _)| cc)
            .map_or(0, |i| row[i].1)
    }

    /// Nonzero entries of row `r`, sorted by column.
    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    /// All nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    /// Nonzero entries of column `c`, sorted by row.
    pub fn column(&self, c: usize) -> Vec<(usize, i64)> {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                row.binary_search_by_key(&c, |&(cc, _)| cc)
                    .ok()
                    .map(|i| (r, row[i].1))
            })
            .collect()
    }

    /// All columns at once, each sorted by row.
    pub fn columns(&self) -> Vec<Vec<(usize, i64)>> {
        let mut out = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            out[c].push((r, v));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v));
        }
        ExactMatrix {
            ring: self.ring,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Reinterprets the entries in another ring (values reduced, zeros dropped).
    /// From Z2 this is the naive lift: 1 stays 1.
    pub fn with_ring(&self, ring: Ring) -> Self {
        Self::accumulate(ring, self.rows, self.cols, self.entries())
    }

    fn check_same_ring(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                op,
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    /// Exact product `self · other` in the common ring.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other, "mat_mul")?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let ring = self.ring;
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for row in &self.data {
            acc.clear();
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    let prod = a.checked_mul(b).ok_or(Error::Overflow("mat_mul"))?;
                    let slot = acc.entry(c).or_insert(0);
                    let sum = slot.checked_add(prod).ok_or(Error::Overflow("mat_mul"))?;
                    *slot = ring.reduce(sum);
                }
            }
            data.push(
                acc.iter()
                    .filter(|(_, &v)| v != 0)
                    .map(|(&c, &v)| (c, v))
                    .collect(),
            );
        }
        Ok(ExactMatrix {
            ring,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other, "add")?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Vec::new();
        for (r, c, v) in self.entries().chain(other.entries()) {
            out.push((r, c, v));
        }
        Ok(Self::accumulate(self.ring, self.rows, self.cols, out))
    }

    pub fn neg(&self) -> Self {
        Self::accumulate(
            self.ring,
            self.rows,
            self.cols,
            self.entries().map(|(r, c, v)| (r, c, -v)),
        )
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        let mut out = Vec::with_capacity(self.nnz());
        for (r, c, v) in self.entries() {
            out.push((r, c, v.checked_mul(k).ok_or(Error::Overflow("scale"))?));
        }
        Ok(Self::accumulate(self.ring, self.rows, self.cols, out))
    }

    /// Entrywise reduction of an integer matrix modulo 2 or 4.
    pub fn mod_reduce(&self, q: u32) -> Result<Self> {
        if self.ring != Ring::Z {
            return Err(Error::WrongRing {
                op: "mod_reduce",
                expected: Ring::Z,
                found: self.ring,
            });
        }
        let ring = match q {
            2 => Ring::Z2,
            4 => Ring::Z4,
            _ => return Err(Error::UnsupportedModulus(q)),
        };
        Ok(self.with_ring(ring))
    }

    /// Reduction to Z2 from any ring.
    pub fn to_z2(&self) -> Self {
        self.with_ring(Ring::Z2)
    }

    /// Maps a Z4 matrix with entries in {0, 2} to the Z2 matrix `self / 2`.
    pub fn halve_even(&self) -> Result<Self> {
        if self.ring != Ring::Z4 {
            return Err(Error::WrongRing {
                op: "halve_even",
                expected: Ring::Z4,
                found: self.ring,
            });
        }
        if let Some((row, col, value)) = self.entries().find(|&(_, _, v)| v != 2) {
            return Err(Error::OddEntry { row, col, value });
        }
        Ok(ExactMatrix {
            ring: Ring::Z2,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|&(c, _)| (c, 1)).collect())
                .collect(),
        })
    }

    /// Rows `keep` (in the given order) of the matrix.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        ExactMatrix {
            ring: self.ring,
            rows: keep.len(),
            cols: self.cols,
            data: keep.iter().map(|&r| self.data[r].clone()).collect(),
        }
    }

    /// Columns `keep` (in the given order) of the matrix.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut position: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            position.entry(old).or_default().push(new);
        }
        let entries = self.entries().flat_map(|(r, c, v)| {
            position
                .get(&c)
                .into_iter()
                .flatten()
                .map(move |&n| (r, n, v))
                .collect::<Vec<_>>()
        });
        Self::accumulate(self.ring, self.rows, keep.len(), entries)
    }

    /// Appends a column given by its nonzero `(row, value)` entries.
    pub fn push_column(&mut self, column: &[(usize, i64)]) {
        let c = self.cols;
        self.cols += 1;
        for &(r, v) in column {
            assert!(r < self.rows, "row {r} out of range");
            let v = self.ring.reduce(v);
            if v != 0 {
                self.data[r].push((c, v));
            }
        }
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other, "hstack")?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let shift = self.cols;
        let entries = self
            .entries()
            .chain(other.entries().map(|(r, c, v)| (r, c + shift, v)));
        Ok(Self::accumulate(
            self.ring,
            self.rows,
            self.cols + other.cols,
            entries,
        ))
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        Ok(self.transpose().hstack(&other.transpose())?.transpose())
    }

    /// Count of nonzero entries per row.
    pub fn row_weights(&self) -> Vec<usize> {
        self.data.iter().map(Vec::len).collect()
    }

    /// Count of nonzero entries per column.
    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for (_, c, _) in self.entries() {
            w[c] += 1;
        }
        w
    }

    /// Sum of absolute values per row (integer sparsity measure).
    pub fn row_abs_sums(&self) -> Vec<i64> {
        self.data
            .iter()
            .map(|row| row.iter().map(|&(_, v)| v.abs()).sum())
            .collect()
    }

    /// Sum of absolute values per column.
    pub fn col_abs_sums(&self) -> Vec<i64> {
        let mut w = vec![0; self.cols];
        for (_, c, v) in self.entries() {
            w[c] += v.abs();
        }
        w
    }

    /// Dense copy of the entries (for small matrices and tests).
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    /// Applies a matrix to a column vector given densely.
    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut s: i64 = 0;
            for &(c, a) in row {
                s = s
                    .checked_add(a.checked_mul(v[c]).ok_or(Error::Overflow("apply"))?)
                    .ok_or(Error::Overflow("apply"))?;
            }
            out.push(self.ring.reduce(s));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_product_wraps() {
        let a = ExactMatrix::from_dense(Ring::Z4, &[vec![1, 1]]);
        let b = ExactMatrix::column_vector(Ring::Z4, &[3, 1]);
        let p = a.mat_mul(&b).unwrap();
        assert_eq!(p, ExactMatrix::zeros(Ring::Z4, 1, 1));
    }

    #[test]
    fn z_product_and_identity() {
        let a = ExactMatrix::from_dense(Ring::Z, &[vec![1, 1]]);
        let b = ExactMatrix::column_vector(Ring::Z, &[1, 1]);
        assert_eq!(a.mat_mul(&b).unwrap().to_dense(), vec![vec![2]]);

        let m = ExactMatrix::from_dense(Ring::Z2, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let id = ExactMatrix::identity(Ring::Z2, 2);
        assert_eq!(id.mat_mul(&m).unwrap(), m);
    }

    #[test]
    fn mat_mul_errors() {
        let a = ExactMatrix::zeros(Ring::Z, 2, 3);
        let b = ExactMatrix::zeros(Ring::Z, 2, 3);
        assert!(matches!(
            a.mat_mul(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = ExactMatrix::zeros(Ring::Z2, 3, 1);
        assert!(matches!(a.mat_mul(&c), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn mod_reduce_examples() {
        let a = ExactMatrix::from_dense(Ring::Z, &[vec![3, -1]]);
        assert_eq!(a.mod_reduce(4).unwrap().to_dense(), vec![vec![3, 3]]);
        let two = ExactMatrix::from_dense(Ring::Z, &[vec![2]]);
        let r = two.mod_reduce(2).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.nnz(), 0);
        let m1 = ExactMatrix::from_dense(Ring::Z, &[vec![-1]]);
        assert_eq!(m1.mod_reduce(2).unwrap().to_dense(), vec![vec![1]]);
        assert!(matches!(a.mod_reduce(3), Err(Error::UnsupportedModulus(3))));
        assert!(matches!(r.mod_reduce(2), Err(Error::WrongRing { .. })));
    }

    #[test]
    fn halve_even_examples() {
        let a = ExactMatrix::from_dense(Ring::Z4, &[vec![2, 0], vec![0, 2]]);
        assert_eq!(a.halve_even().unwrap(), ExactMatrix::identity(Ring::Z2, 2));
        let z = ExactMatrix::zeros(Ring::Z4, 2, 3);
        assert_eq!(z.halve_even().unwrap(), ExactMatrix::zeros(Ring::Z2, 2, 3));
        let bad = ExactMatrix::from_dense(Ring::Z4, &[vec![2, 1]]);
        match bad.halve_even() {
            Err(Error::OddEntry { row, col, value }) => assert_eq!((row, col, value), (0, 1, 1)),
            other => panic!("expected odd entry error, got {other:?}"),
        }
    }

    #[test]
    fn strict_constructor_rejects_bad_input() {
        assert!(ExactMatrix::from_entries(Ring::Z2, 2, 2, [(0, 0, 1), (0, 0, 1)]).is_err());
        assert!(ExactMatrix::from_entries(Ring::Z2, 2, 2, [(0, 2, 1)]).is_err());
        assert!(ExactMatrix::from_entries(Ring::Z2, 2, 2, [(0, 0, 3)]).is_err());
        assert!(ExactMatrix::from_entries(Ring::Z4, 2, 2, [(0, 0, 0)]).is_err());
        let m = ExactMatrix::from_entries(Ring::Z, 2, 2, [(1, 0, -5), (0, 1, 7)]).unwrap();
        let e: Vec<_> = m.entries().collect();
        assert_eq!(e, vec![(0, 1, 7), (1, 0, -5)]);
    }

    #[test]
    fn select_and_stack() {
        let m = ExactMatrix::from_dense(Ring::Z, &[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(
            m.select_columns(&[2, 0]).to_dense(),
            vec![vec![3, 1], vec![6, 4]]
        );
        assert_eq!(m.select_rows(&[1]).to_dense(), vec![vec![4, 5, 6]]);
        let h = m.hstack(&m.select_columns(&[0])).unwrap();
        assert_eq!(h.to_dense()[1], vec![4, 5, 6, 4]);
        let v = m.vstack(&m).unwrap();
        assert_eq!(v.rows(), 4);
        assert_eq!(v.to_dense()[3], vec![4, 5, 6]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.col_weights(), vec![2, 2, 2]);
        assert_eq!(m.row_abs_sums(), vec![6, 15]);
    }
}

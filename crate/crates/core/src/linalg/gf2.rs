//! GF(2) linear algebra: bit-packed vectors, row reduction, rank, kernels and
//! affine solves.
//!
//! Elimination runs either on sparse rows (sorted index lists, XOR by merge) or on
//! dense bit-packed rows. [`Backend::Auto`] picks dense once the input density
//! exceeds a threshold (5% by default).

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Ring};

/// Bit-packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vec {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vec[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Gf2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Entries of a dense integer vector reduced mod 2.
    pub fn from_ints(values: &[i64]) -> Self {
        let mut v = Self::zeros(values.len());
        for (i, &x) in values.iter().enumerate() {
            if x.rem_euclid(2) == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        Self::from_support(len, &[i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn dot(&self, other: &Gf2Vec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * 64 + w.trailing_zeros() as usize)
    }

    pub fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Restriction to the coordinates `idx` (in that order).
    pub fn restrict(&self, idx: &[usize]) -> Gf2Vec {
        let mut v = Gf2Vec::zeros(idx.len());
        for (n, &i) in idx.iter().enumerate() {
            if self.get(i) {
                v.set(n, true);
            }
        }
        v
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &Gf2Vec) -> Gf2Vec {
        let mut v = Gf2Vec::zeros(self.len + other.len);
        for i in self.support() {
            v.set(i, true);
        }
        for i in other.support() {
            v.set(self.len + i, true);
        }
        v
    }

    /// Coordinates `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> Gf2Vec {
        let idx: Vec<usize> = (start..start + len).collect();
        self.restrict(&idx)
    }

    pub fn to_ints(&self) -> Vec<i64> {
        (0..self.len).map(|i| i64::from(self.get(i))).collect()
    }
}

/// Row representation used by the elimination routines.
trait Row: Clone {
    fn leading(&self) -> Option<usize>;
    fn contains(&self, c: usize) -> bool;
    fn xor(&mut self, other: &Self);
    fn into_vec(self, len: usize) -> Gf2Vec;
}

impl Row for Gf2Vec {
    fn leading(&self) -> Option<usize> {
        self.first_one()
    }
    fn contains(&self, c: usize) -> bool {
        self.get(c)
    }
    fn xor(&mut self, other: &Self) {
        self.xor_assign(other);
    }
    fn into_vec(self, _len: usize) -> Gf2Vec {
        self
    }
}

#[derive(Clone, Debug)]
struct SparseRow(Vec<usize>);

impl Row for SparseRow {
    fn leading(&self) -> Option<usize> {
        self.0.first().copied()
    }
    fn contains(&self, c: usize) -> bool {
        self.0.binary_search(&c).is_ok()
    }
    fn xor(&mut self, other: &Self) {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        self.0 = out;
    }
    fn into_vec(self, len: usize) -> Gf2Vec {
        Gf2Vec::from_support(len, &self.0)
    }
}

/// Reduced row echelon form over GF(2).
#[derive(Clone, Debug)]
pub struct Rref {
    pub cols: usize,
    /// Nonzero rows, sorted by pivot column.
    pub rows: Vec<Gf2Vec>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Gf2Vec> {
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = Gf2Vec::unit(n, f);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }
}

fn rref_rows<R: Row>(mut rows: Vec<R>, cols: usize) -> Rref {
    // forward pass: each pivot row has a distinct leading column
    let mut pivot_row: Vec<Option<usize>> = vec![None; cols];
    let mut basis: Vec<R> = Vec::new();
    for mut r in rows.drain(..) {
        while let Some(lead) = r.leading() {
            match pivot_row[lead] {
                Some(i) => r.xor(&basis[i]),
                None => {
                    pivot_row[lead] = Some(basis.len());
                    basis.push(r);
                    break;
                }
            }
        }
    }
    // back substitution in decreasing pivot order
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(basis[i].leading().unwrap()));
    for &i in &order {
        let p = basis[i].leading().unwrap();
        let src = basis[i].clone();
        for (j, row) in basis.iter_mut().enumerate() {
            if j != i && row.contains(p) {
                row.xor(&src);
            }
        }
    }
    basis.sort_by_key(|r| r.leading().unwrap());
    let pivots = basis.iter().map(|r| r.leading().unwrap()).collect();
    Rref {
        cols,
        rows: basis.into_iter().map(|r| r.into_vec(cols)).collect(),
        pivots,
    }
}

/// Elimination backend selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    Sparse,
    Dense,
    /// Dense when density exceeds the given fraction, sparse otherwise.
    Auto(f64),
}

pub const DEFAULT_DENSE_THRESHOLD: f64 = 0.05;

impl Default for Backend {
    fn default() -> Self {
        Backend::Auto(DEFAULT_DENSE_THRESHOLD)
    }
}

impl Backend {
    fn use_dense(self, density: f64) -> bool {
        match self {
            Backend::Sparse => false,
            Backend::Dense => true,
            Backend::Auto(t) => density > t,
        }
    }
}

/// RREF of a list of vectors, all of length `cols`.
pub fn rref_vectors(rows: &[Gf2Vec], cols: usize, backend: Backend) -> Rref {
    let nnz: usize = rows.iter().map(Gf2Vec::weight).sum();
    let density = if rows.is_empty() || cols == 0 {
        0.0
    } else {
        nnz as f64 / (rows.len() as f64 * cols as f64)
    };
    if backend.use_dense(density) {
        rref_rows(rows.to_vec(), cols)
    } else {
        rref_rows(rows.iter().map(|r| SparseRow(r.support())).collect(), cols)
    }
}

fn require_z2(a: &ExactMatrix, op: &'static str) -> Result<()> {
    if a.ring() != Ring::Z2 {
        return Err(Error::WrongRing {
            op,
            expected: Ring::Z2,
            found: a.ring(),
        });
    }
    Ok(())
}

fn sparse_rows_of(a: &ExactMatrix, extra: Option<&Gf2Vec>) -> Vec<SparseRow> {
    (0..a.rows())
        .map(|r| {
            let mut s: Vec<usize> = a.row(r).iter().map(|&(c, _)| c).collect();
            if let Some(b) = extra {
                if b.get(r) {
                    s.push(a.cols());
                }
            }
            SparseRow(s)
        })
        .collect()
}

fn dense_rows_of(a: &ExactMatrix, extra: Option<&Gf2Vec>) -> Vec<Gf2Vec> {
    let width = a.cols() + usize::from(extra.is_some());
    (0..a.rows())
        .map(|r| {
            let mut v = Gf2Vec::zeros(width);
            for &(c, _) in a.row(r) {
                v.set(c, true);
            }
            if let Some(b) = extra {
                if b.get(r) {
                    v.set(a.cols(), true);
                }
            }
            v
        })
        .collect()
}

fn rref_matrix(a: &ExactMatrix, extra: Option<&Gf2Vec>, backend: Backend) -> Rref {
    let width = a.cols() + usize::from(extra.is_some());
    if backend.use_dense(a.density()) {
        rref_rows(dense_rows_of(a, extra), width)
    } else {
        rref_rows(sparse_rows_of(a, extra), width)
    }
}

/// RREF of a Z2 matrix.
pub fn rref_z2(a: &ExactMatrix, backend: Backend) -> Result<Rref> {
    require_z2(a, "rref_z2")?;
    Ok(rref_matrix(a, None, backend))
}

/// Rank of a Z2 matrix.
pub fn rank_z2(a: &ExactMatrix) -> Result<usize> {
    Ok(rref_z2(a, Backend::default())?.rank())
}

/// Basis of `{x : Ax = 0}` for a Z2 matrix.
pub fn nullspace_z2(a: &ExactMatrix) -> Result<Vec<Gf2Vec>> {
    Ok(rref_z2(a, Backend::default())?.kernel_basis())
}

/// Outcome of [`solve_affine_z2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Consistent {
        particular: Gf2Vec,
        nullspace: Vec<Gf2Vec>,
    },
    Inconsistent,
}

impl AffineSolution {
    pub fn particular(&self) -> Option<&Gf2Vec> {
        match self {
            AffineSolution::Consistent { particular, .. } => Some(particular),
            AffineSolution::Inconsistent => None,
        }
    }
}

/// Solves `Ax = b` over GF(2), returning a particular solution and a kernel basis.
pub fn solve_affine_z2(a: &ExactMatrix, b: &Gf2Vec) -> Result<AffineSolution> {
    solve_affine_z2_with(a, b, Backend::default())
}

pub fn solve_affine_z2_with(
    a: &ExactMatrix,
    b: &Gf2Vec,
    backend: Backend,
) -> Result<AffineSolution> {
    require_z2(a, "solve_affine_z2")?;
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve_affine_z2",
            left: a.shape(),
            right: (b.len(), 1),
        });
    }
    let n = a.cols();
    let aug = rref_matrix(a, Some(b), backend);
    if aug.pivots.last() == Some(&n) {
        return Ok(AffineSolution::Inconsistent);
    }
    let mut particular = Gf2Vec::zeros(n);
    for (row, &p) in aug.rows.iter().zip(&aug.pivots) {
        if row.get(n) {
            particular.set(p, true);
        }
    }
    // kernel of A from the same elimination, ignoring the augmented column
    let reduced = Rref {
        cols: n,
        rows: aug.rows.iter().map(|r| r.slice(0, n)).collect(),
        pivots: aug.pivots.clone(),
    };
    Ok(AffineSolution::Consistent {
        particular,
        nullspace: reduced.kernel_basis(),
    })
}

/// Multiplies a Z2 matrix by a bit vector.
pub fn mul_vec(a: &ExactMatrix, x: &Gf2Vec) -> Gf2Vec {
    assert_eq!(a.cols(), x.len(), "mul_vec dimension mismatch");
    let mut out = Gf2Vec::zeros(a.rows());
    for r in 0..a.rows() {
        let parity = a
            .row(r)
            .iter()
            .filter(|&&(c, v)| v % 2 != 0 && x.get(c))
            .count()
            % 2;
        if parity == 1 {
            out.set(r, true);
        }
    }
    out
}

/// Incrementally built echelon basis of a subspace, with membership tests.
///
/// Each stored vector has a distinct pivot, its first set bit.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<Gf2Vec>,
    pivot_of: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            pivot_of: vec![None; len],
        }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a Gf2Vec>>(len: usize, vs: I) -> Self {
        let mut e = Self::new(len);
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Gf2Vec] {
        &self.rows
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    /// No set bit of the result sits at a stored pivot.
    pub fn reduce(&self, mut v: Gf2Vec) -> Gf2Vec {
        for p in 0..self.len {
            if v.get(p) {
                if let Some(i) = self.pivot_of[p] {
                    v.xor_assign(&self.rows[i]);
                }
            }
        }
        v
    }

    /// Pivot columns of the stored vectors, in insertion order.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.first_one().unwrap()).collect()
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce_leading(v.clone()).is_zero()
    }

    fn reduce_leading(&self, mut v: Gf2Vec) -> Gf2Vec {
        while let Some(lead) = v.first_one() {
            match self.pivot_of[lead] {
                Some(i) => v.xor_assign(&self.rows[i]),
                None => return v,
            }
        }
        v
    }

    /// Inserts `v`; returns true when the rank increased.
    pub fn insert(&mut self, v: Gf2Vec) -> bool {
        assert_eq!(v.len(), self.len, "length mismatch");
        let r = self.reduce_leading(v);
        match r.first_one() {
            Some(lead) => {
                self.pivot_of[lead] = Some(self.rows.len());
                self.rows.push(r);
                true
            }
            None => false,
        }
    }
}

/// Basis of the intersection of two subspaces of GF(2)^n (Zassenhaus).
pub fn intersect_spans(a: &[Gf2Vec], b: &[Gf2Vec], n: usize) -> Vec<Gf2Vec> {
    let zero = Gf2Vec::zeros(n);
    let rows: Vec<Gf2Vec> = a
        .iter()
        .map(|v| v.concat(v))
        .chain(b.iter().map(|v| v.concat(&zero)))
        .collect();
    let r = rref_vectors(&rows, 2 * n, Backend::Dense);
    r.rows
        .iter()
        .zip(&r.pivots)
        .filter(|(_, &p)| p >= n)
        .map(|(row, _)| row.slice(n, n))
        .collect()
}

/// Dense square GF(2) matrix helpers (row-major, row `i` is a bit vector).
pub mod square {
    use super::Gf2Vec;

    pub fn identity(n: usize) -> Vec<Gf2Vec> {
        (0..n).map(|i| Gf2Vec::unit(n, i)).collect()
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Gf2Vec], n: usize) -> Vec<Gf2Vec> {
        let mut m = vec![Gf2Vec::zeros(cols.len()); n];
        for (j, c) in cols.iter().enumerate() {
            for i in c.support() {
                m[i].set(j, true);
            }
        }
        m
    }

    pub fn mul_vec(m: &[Gf2Vec], v: &Gf2Vec) -> Gf2Vec {
        let mut out = Gf2Vec::zeros(m.len());
        for (i, row) in m.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &Gf2Vec, m: &[Gf2Vec]) -> Gf2Vec {
        let width = m.first().map_or(0, Gf2Vec::len);
        let mut out = Gf2Vec::zeros(width);
        for i in v.support() {
            out.xor_assign(&m[i]);
        }
        out
    }

    pub fn mul(a: &[Gf2Vec], b: &[Gf2Vec]) -> Vec<Gf2Vec> {
        a.iter().map(|row| vec_mul(row, b)).collect()
    }

    /// Inverse by Gauss-Jordan, or `None` when singular.
    pub fn inverse(m: &[Gf2Vec]) -> Option<Vec<Gf2Vec>> {
        let n = m.len();
        let mut a: Vec<Gf2Vec> = m.to_vec();
        let mut inv = identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| a[r].get(c))?;
            a.swap(c, p);
            inv.swap(c, p);
            for r in 0..n {
                if r != c && a[r].get(c) {
                    let (ac, ic) = (a[c].clone(), inv[c].clone());
                    a[r].xor_assign(&ac);
                    inv[r].xor_assign(&ic);
                }
            }
        }
        Some(inv)
    }

    pub fn transpose(m: &[Gf2Vec]) -> Vec<Gf2Vec> {
        let n = m.first().map_or(0, Gf2Vec::len);
        let mut t = vec![Gf2Vec::zeros(m.len()); n];
        for (i, row) in m.iter().enumerate() {
            for j in row.support() {
                t[j].set(i, true);
            }
        }
        t
    }

    pub fn is_identity(m: &[Gf2Vec]) -> bool {
        m.iter()
            .enumerate()
            .all(|(i, row)| row.weight() == 1 && row.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_dense(Ring::Z2, rows)
    }

    /// Enumerates every x in GF(2)^n.
    fn all_vectors(n: usize) -> impl Iterator<Item = Gf2Vec> {
        (0u64..1 << n).map(move |m| {
            let bits: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            Gf2Vec::from_bools(&bits)
        })
    }

    #[test]
    fn affine_single_equation_matches_enumeration() {
        let a = z2(&[vec![1, 1]]);
        let b = Gf2Vec::from_bools(&[true]);
        let sols: Vec<Gf2Vec> = all_vectors(2).filter(|x| mul_vec(&a, x) == b).collect();
        assert_eq!(sols.len(), 2);
        match solve_affine_z2(&a, &b).unwrap() {
            AffineSolution::Consistent {
                particular,
                nullspace,
            } => {
                assert_eq!(particular, Gf2Vec::from_bools(&[true, false]));
                assert_eq!(nullspace, vec![Gf2Vec::from_bools(&[true, true])]);
            }
            AffineSolution::Inconsistent => panic!("consistent system"),
        }
    }

    #[test]
    fn affine_zero_and_identity() {
        let zero = ExactMatrix::zeros(Ring::Z2, 2, 3);
        match solve_affine_z2(&zero, &Gf2Vec::zeros(2)).unwrap() {
            AffineSolution::Consistent {
                particular,
                nullspace,
            } => {
                assert!(particular.is_zero());
                assert_eq!(nullspace.len(), 3);
            }
            _ => panic!(),
        }
        assert_eq!(
            solve_affine_z2(&zero, &Gf2Vec::from_bools(&[true, false])).unwrap(),
            AffineSolution::Inconsistent
        );
        let id = ExactMatrix::identity(Ring::Z2, 2);
        let b = Gf2Vec::from_bools(&[true, false]);
        match solve_affine_z2(&id, &b).unwrap() {
            AffineSolution::Consistent {
                particular,
                nullspace,
            } => {
                assert_eq!(particular, b);
                assert!(nullspace.is_empty());
            }
            _ => panic!(),
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_z2(&z2(&[vec![1, 1], vec![1, 1]])).unwrap(), 1);
        let id = ExactMatrix::identity(Ring::Z2, 5);
        assert_eq!(rank_z2(&id).unwrap(), 5);
        assert!(nullspace_z2(&id).unwrap().is_empty());
        // multiplication by 2 reduced mod 2
        let two = ExactMatrix::from_dense(Ring::Z, &[vec![2]])
            .mod_reduce(2)
            .unwrap();
        assert_eq!(rank_z2(&two).unwrap(), 0);
        assert!(rank_z2(&ExactMatrix::zeros(Ring::Z, 1, 1)).is_err());
    }

    #[test]
    fn echelon_membership_and_intersection() {
        let a = vec![
            Gf2Vec::from_bools(&[true, true, false, false]),
            Gf2Vec::from_bools(&[false, false, true, true]),
        ];
        let b = vec![
            Gf2Vec::from_bools(&[true, true, true, true]),
            Gf2Vec::from_bools(&[true, false, false, false]),
        ];
        let e = Echelon::from_vectors(4, &a);
        assert!(e.contains(&Gf2Vec::from_bools(&[true, true, true, true])));
        assert!(!e.contains(&Gf2Vec::from_bools(&[true, false, false, false])));
        let i = intersect_spans(&a, &b, 4);
        assert_eq!(i, vec![Gf2Vec::from_bools(&[true, true, true, true])]);
    }

    #[test]
    fn square_inverse() {
        let m = vec![
            Gf2Vec::from_bools(&[true, true]),
            Gf2Vec::from_bools(&[false, true]),
        ];
        let inv = square::inverse(&m).unwrap();
        assert_eq!(inv, m);
        assert!(square::is_identity(&square::mul(&m, &inv)));
        let sing = vec![
            Gf2Vec::from_bools(&[true, true]),
            Gf2Vec::from_bools(&[true, true]),
        ];
        assert!(square::inverse(&sing).is_none());
    }

    #[test]
    fn reduce_is_zero_iff_member() {
        let a = vec![Gf2Vec::from_bools(&[false, true, true])];
        let e = Echelon::from_vectors(3, &a);
        assert!(e.reduce(Gf2Vec::from_bools(&[false, true, true])).is_zero());
        assert!(!e.reduce(Gf2Vec::from_bools(&[true, true, true])).is_zero());
    }
}

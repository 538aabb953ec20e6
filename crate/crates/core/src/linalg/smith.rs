//! Smith normal form over the integers.
//!
//! Pivoting picks the entry of minimum absolute value and alternates row and column
//! reduction until the pivot divides everything in its row, column and trailing
//! block. Arithmetic is attempted in checked `i128` first and redone with `BigInt`
//! on overflow, so results are always exact.
//!
//! Without transforms, unit pivots are first eliminated on sparse rows; only the
//! remaining core is densified.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Ring};

/// Invariant factors of an integer matrix, with optional unimodular transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    /// `U` with `U · A · V = D`.
    pub left_transform: Option<ExactMatrix>,
    pub right_transform: Option<ExactMatrix>,
}

impl SmithForm {
    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect()
    }

    pub fn is_unimodular_rank(&self) -> bool {
        self.invariant_factors.iter().all(One::is_one)
    }

    /// Number of even invariant factors.
    pub fn even_count(&self) -> usize {
        self.invariant_factors
            .iter()
            .filter(|f| f.is_even())
            .count()
    }

    /// Diagonal form `D` as a Z matrix.
    pub fn diagonal(&self) -> Result<ExactMatrix> {
        let entries = self
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.to_i64()
                    .map(|v| (i, i, v))
                    .ok_or(Error::Overflow("smith diagonal"))
            })
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::from_entries(Ring::Z, self.rows, self.cols, entries)
    }

    /// Torsion factors rendered as `u64` where they fit.
    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion()
            .iter()
            .map(|f| f.to_u64().unwrap_or(u64::MAX))
            .collect()
    }
}

/// Integer arithmetic used by the dense reduction; `None` signals overflow.
trait SnfInt: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i128(v: i128) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// Truncating quotient and whether the remainder vanishes.
    fn div_trunc(&self, b: &Self) -> (Self, bool);
    /// `self - q * b`.
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl SnfInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i128(v: i128) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_trunc(&self, b: &Self) -> (Self, bool) {
        (self / b, self % b == 0)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i128(v: i128) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_trunc(&self, b: &Self) -> (Self, bool) {
        let (q, r) = self.div_rem(b);
        let exact = Zero::is_zero(&r);
        (q, exact)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

struct Dense<T> {
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
}

fn identity<T: SnfInt>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

impl<T: SnfInt> Dense<T> {
    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Option<()> {
        fn apply<T: SnfInt>(m: &mut [Vec<T>], i: usize, t: usize, q: &T) -> Option<()> {
            let src = m[t].clone();
            for (x, s) in m[i].iter_mut().zip(&src) {
                if !s.is_zero() {
                    *x = x.sub_mul(q, s)?;
                }
            }
            Some(())
        }
        apply(&mut self.a, i, t, q)?;
        if let Some(u) = self.u.as_mut() {
            apply(u, i, t, q)?;
        }
        Some(())
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Option<()> {
        fn apply<T: SnfInt>(m: &mut [Vec<T>], j: usize, t: usize, q: &T) -> Option<()> {
            for row in m.iter_mut() {
                if !row[t].is_zero() {
                    row[j] = row[j].sub_mul(q, &row[t])?;
                }
            }
            Some(())
        }
        apply(&mut self.a, j, t, q)?;
        if let Some(v) = self.v.as_mut() {
            apply(v, j, t, q)?;
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.neg()?;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = x.neg()?;
            }
        }
        Some(())
    }

    fn min_abs_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows() {
            for j in t..self.cols() {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !x.abs_lt(&self.a[bi][bj]) => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Runs the reduction in place and returns the diagonal.
    fn reduce(&mut self) -> Option<Vec<T>> {
        let (m, n) = (self.rows(), self.cols());
        let mut diag = Vec::new();
        for t in 0..m.min(n) {
            let Some((pi, pj)) = self.min_abs_in(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let (q, exact) = self.a[i][t].div_trunc(&self.a[t][t]);
                    self.row_sub(i, t, &q)?;
                    clean &= exact;
                }
                for j in t + 1..n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let (q, exact) = self.a[t][j].div_trunc(&self.a[t][t]);
                    self.col_sub(j, t, &q)?;
                    clean &= exact;
                }
                if !clean {
                    // a smaller remainder survived in row or column t
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs_lt(&self.a[best.0][best.1]) {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs_lt(&self.a[best.0][best.1]) {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                // divisibility of the trailing block
                let bad = (t + 1..m)
                    .find(|&i| (t + 1..n).any(|j| !self.a[i][j].div_trunc(&self.a[t][t]).1));
                match bad {
                    Some(i) => {
                        let minus_one = T::one().neg()?;
                        self.row_sub(t, i, &minus_one)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
            diag.push(self.a[t][t].clone());
        }
        Some(diag)
    }
}

fn to_exact<T: SnfInt>(m: &[Vec<T>]) -> Result<ExactMatrix> {
    let n = m.len();
    let mut entries = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                let v = x
                    .to_bigint()
                    .to_i64()
                    .ok_or(Error::Overflow("smith transform"))?;
                entries.push((i, j, v));
            }
        }
    }
    ExactMatrix::from_entries(Ring::Z, n, m.first().map_or(n, Vec::len), entries)
}

fn dense_from_rows<T: SnfInt>(rows: &[Vec<(usize, i128)>], cols: usize) -> Vec<Vec<T>> {
    rows.iter()
        .map(|r| {
            let mut d = vec![T::zero(); cols];
            for &(c, v) in r {
                d[c] = T::from_i128(v);
            }
            d
        })
        .collect()
}

fn dense_snf<T: SnfInt>(
    rows: &[Vec<(usize, i128)>],
    nrows: usize,
    ncols: usize,
    transforms: bool,
) -> Option<(Vec<BigInt>, Option<(Vec<Vec<T>>, Vec<Vec<T>>)>)> {
    let mut d = Dense {
        a: dense_from_rows::<T>(rows, ncols),
        u: transforms.then(|| identity(nrows)),
        v: transforms.then(|| identity(ncols)),
    };
    let diag = d.reduce()?;
    let factors = diag.iter().map(SnfInt::to_bigint).collect();
    let tr = match (d.u, d.v) {
        (Some(u), Some(v)) => Some((u, v)),
        _ => None,
    };
    Some((factors, tr))
}

fn sparse_rows(a: &ExactMatrix) -> Vec<Vec<(usize, i128)>> {
    (0..a.rows())
        .map(|r| a.row(r).iter().map(|&(c, v)| (c, i128::from(v))).collect())
        .collect()
}

/// `row_i - f * row_p` on sorted sparse rows.
fn sparse_axpy(a: &[(usize, i128)], f: i128, b: &[(usize, i128)]) -> Option<Vec<(usize, i128)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |x| x.0);
        let cb = b.get(j).map_or(usize::MAX, |x| x.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else if cb < ca {
            out.push((cb, 0i128.checked_sub(f.checked_mul(b[j].1)?)?));
            j += 1;
        } else {
            let v = a[i].1.checked_sub(f.checked_mul(b[j].1)?)?;
            if v != 0 {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Eliminates unit pivots on sparse rows. Returns the number of unit pivots and the
/// remaining rows (restricted to surviving columns, reindexed), or `None` on overflow.
fn eliminate_units(
    mut rows: Vec<Vec<(usize, i128)>>,
    ncols: usize,
) -> Option<(usize, Vec<Vec<(usize, i128)>>, usize)> {
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].insert(r);
        }
    }
    let mut alive_row = vec![true; rows.len()];
    let mut alive_col = vec![true; ncols];
    let mut units = 0;
    let mut progress = true;
    while progress {
        progress = false;
        for c in 0..ncols {
            if !alive_col[c] {
                continue;
            }
            let pivot = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| {
                    let v = rows[r]
                        .binary_search_by_key(&c, |e| e.0)
                        .map(|k| rows[r][k].1);
                    matches!(v, Ok(1) | Ok(-1))
                })
                .min_by_key(|&r| rows[r].len());
            let Some(p) = pivot else { continue };
            let pv = rows[p][rows[p].binary_search_by_key(&c, |e| e.0).unwrap()].1;
            let prow = rows[p].clone();
            let others: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != p).collect();
            for r in others {
                let k = rows[r].binary_search_by_key(&c, |e| e.0).unwrap();
                let f = rows[r][k].1.checked_mul(pv)?;
                let new = sparse_axpy(&rows[r], f, &prow)?;
                for &(cc, _) in &rows[r] {
                    col_rows[cc].remove(&r);
                }
                for &(cc, _) in &new {
                    col_rows[cc].insert(r);
                }
                rows[r] = new;
            }
            // the pivot row is cleared by column operations
            for &(cc, _) in &prow {
                col_rows[cc].remove(&p);
            }
            rows[p].clear();
            alive_row[p] = false;
            alive_col[c] = false;
            units += 1;
            progress = true;
        }
    }
    let mut new_index = vec![usize::MAX; ncols];
    let mut kept_cols = 0;
    for c in 0..ncols {
        if alive_col[c] {
            new_index[c] = kept_cols;
            kept_cols += 1;
        }
    }
    let rest = rows
        .into_iter()
        .zip(&alive_row)
        .filter(|(_, &alive)| alive)
        .map(|(row, _)| row.into_iter().map(|(c, v)| (new_index[c], v)).collect())
        .collect();
    Some((units, rest, kept_cols))
}

fn require_z(a: &ExactMatrix) -> Result<()> {
    if a.ring() != Ring::Z {
        return Err(Error::WrongRing {
            op: "smith_normal_form",
            expected: Ring::Z,
            found: a.ring(),
        });
    }
    Ok(())
}

/// Invariant factors only.
pub fn smith_normal_form(a: &ExactMatrix) -> Result<SmithForm> {
    require_z(a)?;
    let rows = sparse_rows(a);
    let (units, core, core_cols) = match eliminate_units(rows.clone(), a.cols()) {
        Some(x) => x,
        None => (0, rows, a.cols()),
    };
    let core_rows = core.len();
    let factors = match dense_snf::<i128>(&core, core_rows, core_cols, false) {
        Some((f, _)) => f,
        None => {
            dense_snf::<BigInt>(&core, core_rows, core_cols, false)
                .expect("bigint arithmetic does not overflow")
                .0
        }
    };
    let mut invariant_factors = vec![<BigInt as One>::one(); units];
    invariant_factors.extend(factors);
    Ok(SmithForm {
        rows: a.rows(),
        cols: a.cols(),
        rank: invariant_factors.len(),
        invariant_factors,
        left_transform: None,
        right_transform: None,
    })
}

/// Invariant factors with unimodular `U`, `V` such that `U · A · V = D`.
pub fn smith_normal_form_with_transforms(a: &ExactMatrix) -> Result<SmithForm> {
    require_z(a)?;
    let rows = sparse_rows(a);
    let (m, n) = a.shape();
    let (factors, u, v) = match dense_snf::<i128>(&rows, m, n, true) {
        Some((f, Some((u, v)))) => (f, to_exact(&u)?, to_exact(&v)?),
        _ => {
            let (f, t) = dense_snf::<BigInt>(&rows, m, n, true).expect("bigint arithmetic");
            let (u, v) = t.expect("transforms requested");
            (f, to_exact(&u)?, to_exact(&v)?)
        }
    };
    Ok(SmithForm {
        rows: m,
        cols: n,
        rank: factors.len(),
        invariant_factors: factors,
        left_transform: Some(u),
        right_transform: Some(v),
    })
}

/// Basis of the integer kernel `{x ∈ Z^n : A x = 0}`, read from the right transform.
pub fn integer_kernel(a: &ExactMatrix) -> Result<Vec<Vec<i64>>> {
    let s = smith_normal_form_with_transforms(a)?;
    let v = s.right_transform.expect("transforms requested");
    Ok((s.rank..a.cols())
        .map(|j| {
            let col = v.column(j);
            let mut x = vec![0; a.cols()];
            for (i, val) in col {
                x[i] = val;
            }
            x
        })
        .collect())
}

/// True when the columns span a saturated sublattice (the quotient is torsion-free).
pub fn is_saturated(a: &ExactMatrix) -> Result<bool> {
    Ok(smith_normal_form(a)?.is_unimodular_rank())
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve_integer(a: &ExactMatrix, b: &[i64]) -> Result<Option<Vec<i64>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve_integer",
            left: a.shape(),
            right: (b.len(), 1),
        });
    }
    let s = smith_normal_form_with_transforms(a)?;
    let u = s.left_transform.as_ref().expect("transforms requested");
    let v = s.right_transform.as_ref().expect("transforms requested");
    let c = u.apply(b)?;
    let mut z = vec![0i64; a.cols()];
    for (i, ci) in c.iter().enumerate() {
        match s.invariant_factors.get(i) {
            Some(f) => {
                let f = f.to_i64().ok_or(Error::Overflow("solve_integer"))?;
                if ci % f != 0 {
                    return Ok(None);
                }
                z[i] = ci / f;
            }
            None if *ci != 0 => return Ok(None),
            None => {}
        }
    }
    Ok(Some(v.apply(&z)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_dense(Ring::Z, rows)
    }

    fn factors(a: &ExactMatrix) -> Vec<i64> {
        smith_normal_form(a)
            .unwrap()
            .invariant_factors
            .iter()
            .map(|f| f.to_i64().unwrap())
            .collect()
    }

    fn check_reconstruction(a: &ExactMatrix) {
        let s = smith_normal_form_with_transforms(a).unwrap();
        let u = s.left_transform.clone().unwrap();
        let v = s.right_transform.clone().unwrap();
        let d = u.mat_mul(a).unwrap().mat_mul(&v).unwrap();
        assert_eq!(d, s.diagonal().unwrap());
        assert_eq!(
            s.invariant_factors,
            smith_normal_form(a).unwrap().invariant_factors
        );
    }

    #[test]
    fn spec_examples() {
        assert_eq!(factors(&z(&[vec![2]])), vec![2]);
        let s = smith_normal_form(&z(&[vec![1, 1], vec![1, 1]])).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.torsion(), Vec::<BigInt>::new());
        assert!(smith_normal_form(&ExactMatrix::zeros(Ring::Z2, 1, 1)).is_err());
    }

    #[test]
    fn divisibility_chain_is_enforced() {
        // diag(2, 3) has invariant factors (1, 6)
        let a = z(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(factors(&a), vec![1, 6]);
        check_reconstruction(&a);
        let b = z(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]);
        assert_eq!(factors(&b), vec![2, 2, 60]);
        check_reconstruction(&b);
    }

    #[test]
    fn reconstruction_on_mixed_matrix() {
        let a = z(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(factors(&a), vec![2, 6, 12]);
        check_reconstruction(&a);
    }

    #[test]
    fn empty_shapes() {
        let a = ExactMatrix::zeros(Ring::Z, 0, 3);
        assert_eq!(smith_normal_form(&a).unwrap().rank, 0);
        check_reconstruction(&a);
        let b = ExactMatrix::zeros(Ring::Z, 2, 0);
        check_reconstruction(&b);
    }

    #[test]
    fn bigint_fallback_on_overflow() {
        let big = i64::MAX;
        let a = z(&[vec![big, big - 1], vec![big - 1, big - 2]]);
        // det = big*(big-2) - (big-1)^2 = -1
        assert_eq!(factors(&a), vec![1, 1]);
    }

    #[test]
    fn kernel_and_saturation() {
        let a = z(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = integer_kernel(&a).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(a.apply(&k[0]).unwrap(), vec![0, 0]);
        assert!(is_saturated(&a.transpose()).unwrap());
        // columns (1,1,0), (0,1,1), (1,0,1) span an index-2 sublattice
        let c = z(&[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]);
        assert!(!is_saturated(&c).unwrap());
    }
}

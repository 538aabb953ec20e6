//! CSS codes read off three consecutive degrees of a chain complex.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chain::{reduce_complex_mod2, ChainComplex, SliceTag};
use crate::error::{Error, Result};
use crate::linalg::gf2::{self, Gf2Vec};
use crate::linalg::{rank_z2, ExactMatrix, Ring};
use crate::topo::{build_product, build_telescope, ResolutionProfile};

/// Integer boundaries the code was extracted from.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeOrigin {
    /// Qubit degree `d`.
    pub degree: i32,
    /// `∂_{d+1}` over Z, before any added columns.
    pub dz: ExactMatrix,
    /// `∂_d` over Z.
    pub dq: ExactMatrix,
    /// `∂_{d−1}` over Z.
    pub dx: ExactMatrix,
}

/// `Z2^{n_Z} --dz--> Z2^{n_Q} --dq--> Z2^{n_X}` with `dq · dz = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CssCode {
    pub dz: ExactMatrix,
    pub dq: ExactMatrix,
    pub origin: Option<CodeOrigin>,
    /// Columns of `dz` appended after extraction.
    pub added_columns: Vec<usize>,
    pub slice_of_qubit: Option<Vec<SliceTag>>,
    pub provenance: Option<serde_json::Value>,
}

impl CssCode {
    pub fn new(dz: ExactMatrix, dq: ExactMatrix) -> Result<Self> {
        let code = CssCode {
            dz,
            dq,
            origin: None,
            added_columns: Vec::new(),
            slice_of_qubit: None,
            provenance: None,
        };
        code.check()?;
        Ok(code)
    }

    /// Shape, ring and orthogonality checks.
    pub fn check(&self) -> Result<()> {
        if self.dz.ring() != Ring::Z2 || self.dq.ring() != Ring::Z2 {
            return Err(Error::InvalidCode("dz and dq must be over Z2".into()));
        }
        if self.dq.cols() != self.dz.rows() {
            return Err(Error::DimensionMismatch {
                op: "css code",
                left: self.dq.shape(),
                right: self.dz.shape(),
            });
        }
        let p = self.dq.mat_mul(&self.dz)?;
        if let Some((x, z, _)) = p.entries().next() {
            return Err(Error::InvalidCode(format!(
                "X-stabilizer {x} anticommutes with Z-stabilizer {z}"
            )));
        }
        if let Some(&c) = self.added_columns.iter().find(|&&c| c >= self.n_z()) {
            return Err(Error::InvalidCode(format!("added column {c} out of range")));
        }
        if let Some(s) = &self.slice_of_qubit {
            if s.len() != self.n_q() {
                return Err(Error::InvalidCode(format!(
                    "{} slice tags for {} qubits",
                    s.len(),
                    self.n_q()
                )));
            }
        }
        if let Some(o) = &self.origin {
            if o.dq.to_z2() != self.dq {
                return Err(Error::InvalidCode("origin dq differs mod 2".into()));
            }
            let base: Vec<usize> = self.base_columns();
            if o.dz.to_z2() != self.dz.select_columns(&base) {
                return Err(Error::InvalidCode("origin dz differs mod 2".into()));
            }
        }
        Ok(())
    }

    pub fn n_z(&self) -> usize {
        self.dz.cols()
    }

    pub fn n_q(&self) -> usize {
        self.dz.rows()
    }

    pub fn n_x(&self) -> usize {
        self.dq.rows()
    }

    /// Columns of `dz` that are not added stabilizers.
    pub fn base_columns(&self) -> Vec<usize> {
        (0..self.n_z())
            .filter(|c| !self.added_columns.contains(c))
            .collect()
    }

    /// `dz` without the added columns.
    pub fn base_dz(&self) -> ExactMatrix {
        self.dz.select_columns(&self.base_columns())
    }

    pub fn added_chain(&self, i: usize) -> Gf2Vec {
        let col = self.dz.column(self.added_columns[i]);
        Gf2Vec::from_support(self.n_q(), &col.iter().map(|&(r, _)| r).collect::<Vec<_>>())
    }

    pub fn slice_cells(&self, m: usize) -> Result<Vec<usize>> {
        let tags = self
            .slice_of_qubit
            .as_ref()
            .ok_or_else(|| Error::Missing("slice metadata".into()))?;
        let count = tags
            .iter()
            .filter(|t| !t.connector)
            .map(|t| t.m + 1)
            .max()
            .unwrap_or(0);
        if m >= count {
            return Err(Error::InvalidParameters(format!(
                "slice {m} out of range (code has {count} slices)"
            )));
        }
        let mut cells: Vec<(usize, usize)> = tags
            .iter()
            .enumerate()
            .filter(|(_, t)| t.m == m && !t.connector)
            .map(|(i, t)| (t.local, i))
            .collect();
        cells.sort_unstable();
        Ok(cells.into_iter().map(|(_, i)| i).collect())
    }
}

/// Z-stabilizers on `(d+1)`-cells, qubits on `d`-cells, X-stabilizers on `(d−1)`-cells.
/// Missing neighbouring degrees give empty stabilizer sets.
pub fn from_complex(c: &ChainComplex, d: i32) -> Result<CssCode> {
    if !c.contains_degree(d) {
        return Err(Error::Missing(format!(
            "degree {d} in {} (degrees {:?})",
            c.name,
            c.degrees()
        )));
    }
    let z2 = reduce_complex_mod2(c)?;
    let origin = (c.ring() == Ring::Z).then(|| CodeOrigin {
        degree: d,
        dz: c.boundary(d + 1).into_owned(),
        dq: c.boundary(d).into_owned(),
        dx: c.boundary(d - 1).into_owned(),
    });
    let code = CssCode {
        dz: z2.boundary(d + 1).into_owned(),
        dq: z2.boundary(d).into_owned(),
        origin,
        added_columns: Vec::new(),
        slice_of_qubit: c.slices.get(&d).cloned(),
        provenance: Some(json!({
            "complex": c.name,
            "degree": d,
            "source": c.provenance.clone().unwrap_or(serde_json::Value::Null),
        })),
    };
    code.check()?;
    Ok(code)
}

/// `n_Q − rank dz − rank dq`.
pub fn logical_count(code: &CssCode) -> Result<usize> {
    Ok(code.n_q() - rank_z2(&code.dz)? - rank_z2(&code.dq)?)
}

/// Appends the Z-stabilizer `chain`, which must commute with every X-stabilizer.
pub fn add_stabilizer(code: &CssCode, chain: &Gf2Vec) -> Result<CssCode> {
    if chain.len() != code.n_q() {
        return Err(Error::DimensionMismatch {
            op: "add_stabilizer",
            left: code.dz.shape(),
            right: (chain.len(), 1),
        });
    }
    let syndrome = gf2::mul_vec(&code.dq, chain);
    if let Some(x) = syndrome.first_one() {
        return Err(Error::InvalidCode(format!(
            "added stabilizer anticommutes with X-stabilizer {x}"
        )));
    }
    let mut out = code.clone();
    let col: Vec<(usize, i64)> = chain.support().into_iter().map(|q| (q, 1)).collect();
    out.dz.push_column(&col);
    out.added_columns.push(out.dz.cols() - 1);
    Ok(out)
}

/// Which complex the codes are built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `RP³(k) ⊗ I(N)`.
    Product { k: usize, n: usize },
    /// Telescope of collapse maps along a resolution profile.
    Telescope(ResolutionProfile),
}

impl Family {
    pub fn complex(&self) -> Result<ChainComplex> {
        match self {
            Family::Product { k, n } => build_product(*k, *n),
            Family::Telescope(p) => build_telescope(p),
        }
    }

    pub fn describe(&self) -> serde_json::Value {
        match self {
            Family::Product { k, n } => json!({"family": "product", "params": {"k": k, "N": n}}),
            Family::Telescope(p) => {
                json!({"family": "telescope", "params": {"profile": p.k_per_slice}})
            }
        }
    }
}

/// Code B: the qubit degree 2 of the 4-dimensional complex.
pub fn build_code_b(family: &Family) -> Result<CssCode> {
    let c = family.complex()?;
    let mut code = from_complex(&c, 2)?;
    code.provenance = Some(json!({"code": "B", "instance": family.describe()}));
    Ok(code)
}

/// Code C: code B plus the RP² representative of the coarse slice as a Z-stabilizer.
pub fn build_code_c(family: &Family) -> Result<CssCode> {
    let c = family.complex()?;
    let b = from_complex(&c, 2)?;
    let rp2 = c.distinguished_chain("rp2_cycle")?;
    let mut code = add_stabilizer(&b, &rp2.to_vec(b.n_q()))?;
    code.provenance = Some(json!({"code": "C", "instance": family.describe()}));
    Ok(code)
}

/// Row and column weight statistics of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityStats {
    pub max_row_weight: usize,
    pub max_col_weight: usize,
    pub total_weight: usize,
    /// weight ↦ number of rows with that weight
    pub row_histogram: BTreeMap<usize, usize>,
    pub col_histogram: BTreeMap<usize, usize>,
    /// Largest sum of absolute values in a row or column (for integer matrices).
    pub max_row_abs_sum: i64,
    pub max_col_abs_sum: i64,
}

fn histogram(ws: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &w in ws {
        *h.entry(w).or_insert(0) += 1;
    }
    h
}

pub fn sparsity_stats(m: &ExactMatrix) -> SparsityStats {
    let (rw, cw) = (m.row_weights(), m.col_weights());
    SparsityStats {
        max_row_weight: rw.iter().copied().max().unwrap_or(0),
        max_col_weight: cw.iter().copied().max().unwrap_or(0),
        total_weight: m.nnz(),
        row_histogram: histogram(&rw),
        col_histogram: histogram(&cw),
        max_row_abs_sum: m.row_abs_sums().into_iter().max().unwrap_or(0),
        max_col_abs_sum: m.col_abs_sums().into_iter().max().unwrap_or(0),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSparsity {
    pub dz: SparsityStats,
    pub dq: SparsityStats,
}

pub fn code_sparsity(code: &CssCode) -> CodeSparsity {
    CodeSparsity {
        dz: sparsity_stats(&code.dz),
        dq: sparsity_stats(&code.dq),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topo::build_interval;

    #[test]
    fn interval_code_has_no_logicals() {
        let code = from_complex(&build_interval(3), 1).unwrap();
        assert_eq!((code.n_z(), code.n_q(), code.n_x()), (0, 3, 4));
        assert_eq!(logical_count(&code).unwrap(), 0);
        assert!(from_complex(&build_interval(3), 4).is_err());
    }

    #[test]
    fn non_commuting_stabilizer_rejected() {
        let dz = ExactMatrix::zeros(Ring::Z2, 2, 0);
        let dq = ExactMatrix::from_dense(Ring::Z2, &[vec![1, 1]]);
        let code = CssCode::new(dz, dq).unwrap();
        let err = add_stabilizer(&code, &Gf2Vec::from_bools(&[true, false])).unwrap_err();
        assert!(err.to_string().contains("X-stabilizer 0"));
        let ok = add_stabilizer(&code, &Gf2Vec::from_bools(&[true, true])).unwrap();
        assert_eq!(ok.added_columns, vec![0]);
        assert_eq!(logical_count(&ok).unwrap(), 0);
    }

    #[test]
    fn identity_sparsity() {
        let s = sparsity_stats(&ExactMatrix::identity(Ring::Z2, 4));
        assert_eq!((s.max_row_weight, s.max_col_weight), (1, 1));
        let z = sparsity_stats(&ExactMatrix::zeros(Ring::Z2, 3, 2));
        assert_eq!(
            (z.max_row_weight, z.max_col_weight, z.total_weight),
            (0, 0, 0)
        );
    }
}

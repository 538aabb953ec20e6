//! Exact comparison of the homogeneous solution space
//! `{κ : every column of κ·dz lies in im dq}` with the span of `dq·M + M′·dq`.

use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::linalg::gf2::{rref_vectors, Backend, Echelon, Gf2Vec};
use crate::linalg::nullspace_z2;

pub const DEFAULT_ANSATZ_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzReport {
    /// `n_X · n_Q`, the number of entries of `κ`.
    pub unknowns: usize,
    pub dim_solutions: usize,
    pub dim_ansatz: usize,
    /// Every ansatz generator satisfies the constraints.
    pub contained: bool,
    pub equal: bool,
}

/// Unknowns are `vec(κ)` with entry `(x, q)` at `x · n_Q + q`.
pub fn ansatz_span_check(code: &CssCode, cap: usize) -> Result<AnsatzReport> {
    let (nx, nq, nz) = (code.n_x(), code.n_q(), code.n_z());
    let unknowns = nx * nq;
    if unknowns > cap {
        return Err(Error::CapExceeded {
            needed: unknowns,
            cap,
        });
    }
    let idx = |x: usize, q: usize| x * nq + q;
    // rows of Y span the left kernel of dq: yᵀ dq = 0
    let ys = nullspace_z2(&code.dq.transpose())?;
    let dz_cols = code.dz.columns();
    let mut constraints = Vec::with_capacity(ys.len() * nz);
    for y in &ys {
        let ysup = y.support();
        for col in &dz_cols {
            // yᵀ κ dz[:, z] = Σ y_x κ_{xq} dz_{qz}
            let mut v = Gf2Vec::zeros(unknowns);
            for &x in &ysup {
                for &(q, _) in col {
                    v.flip(idx(x, q));
                }
            }
            if !v.is_zero() {
                constraints.push(v);
            }
        }
    }
    let rank_c = rref_vectors(&constraints, unknowns, Backend::Dense).rank();
    let dim_solutions = unknowns - rank_c;

    let mut span = Echelon::new(unknowns);
    let dq_cols = code.dq.columns();
    // dq · E_ij: column j of κ equals column i of dq
    for col in &dq_cols {
        if col.is_empty() {
            continue;
        }
        for j in 0..nq {
            let mut v = Gf2Vec::zeros(unknowns);
            for &(x, _) in col {
                v.set(idx(x, j), true);
            }
            span.insert(v);
        }
    }
    // E_ab · dq: row a of κ equals row b of dq
    for b in 0..nx {
        let row = code.dq.row(b);
        if row.is_empty() {
            continue;
        }
        for a in 0..nx {
            let mut v = Gf2Vec::zeros(unknowns);
            for &(q, _) in row {
                v.set(idx(a, q), true);
            }
            span.insert(v);
        }
    }
    let dim_ansatz = span.rank();
    let contained = span
        .basis()
        .iter()
        .all(|g| constraints.iter().all(|c| !c.dot(g)));
    Ok(AnsatzReport {
        unknowns,
        dim_solutions,
        dim_ansatz,
        contained,
        equal: contained && dim_solutions == dim_ansatz,
    })
}

//! Lifts of CSS codes to Z4, the error matrix and the correction equation
//! `E + dq·δ_Z + δ_Q·dz = 0`.

pub mod ansatz;
pub mod minweight;
pub mod search;

use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::linalg::gf2::{self, AffineSolution, Gf2Vec};
use crate::linalg::{ExactMatrix, Ring};

pub use ansatz::{ansatz_span_check, AnsatzReport, DEFAULT_ANSATZ_CAP};
pub use minweight::{min_weight_cocycle, min_weight_cycle, ClassConstraint, MinWeight};
pub use search::{sparse_search, LiftReport, Objective, SearchConfig, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMode {
    Naive,
    Cellular,
    /// Cellular on the extracted columns, naive on the added ones.
    CellularWithArbitraryAdded,
}

impl LiftMode {
    pub fn name(self) -> &'static str {
        match self {
            LiftMode::Naive => "naive",
            LiftMode::Cellular => "cellular",
            LiftMode::CellularWithArbitraryAdded => "cellular_with_arbitrary_added",
        }
    }
}

/// Z4 matrices `(L_Z, L_Q)` reducing mod 2 to `(dz, dq)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftPair {
    pub lz: ExactMatrix,
    pub lq: ExactMatrix,
    pub mode: LiftMode,
}

/// Z2 corrections `(δ_Z, δ_Q)`, shaped like `(dz, dq)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionPair {
    pub delta_z: ExactMatrix,
    pub delta_q: ExactMatrix,
}

impl CorrectionPair {
    pub fn zero(code: &CssCode) -> Self {
        CorrectionPair {
            delta_z: ExactMatrix::zeros(Ring::Z2, code.n_q(), code.n_z()),
            delta_q: ExactMatrix::zeros(Ring::Z2, code.n_x(), code.n_q()),
        }
    }

    fn check(&self, code: &CssCode) -> Result<()> {
        if self.delta_z.shape() != code.dz.shape() || self.delta_q.shape() != code.dq.shape() {
            return Err(Error::DimensionMismatch {
                op: "correction",
                left: self.delta_z.shape(),
                right: code.dz.shape(),
            });
        }
        if self.delta_z.ring() != Ring::Z2 || self.delta_q.ring() != Ring::Z2 {
            return Err(Error::InvalidParameters(
                "corrections must be over Z2".into(),
            ));
        }
        Ok(())
    }

    /// Entrywise sum over Z2.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(CorrectionPair {
            delta_z: self.delta_z.add(&other.delta_z)?,
            delta_q: self.delta_q.add(&other.delta_q)?,
        })
    }
}

/// Lifts 0 to 0 and 1 to 1.
pub fn naive_lift(code: &CssCode) -> LiftPair {
    LiftPair {
        lz: code.dz.with_ring(Ring::Z4),
        lq: code.dq.with_ring(Ring::Z4),
        mode: LiftMode::Naive,
    }
}

/// Integer boundaries mod 4; added columns lifted naively.
pub fn cellular_lift(code: &CssCode) -> Result<LiftPair> {
    let origin = code
        .origin
        .as_ref()
        .ok_or_else(|| Error::Missing("integer origin for a cellular lift".into()))?;
    let base = origin.dz.mod_reduce(4)?;
    let mut lz = ExactMatrix::zeros(Ring::Z4, code.n_q(), 0);
    let mut next_base = 0;
    for c in 0..code.n_z() {
        if code.added_columns.contains(&c) {
            lz.push_column(&code.dz.column(c));
        } else {
            lz.push_column(&base.column(next_base));
            next_base += 1;
        }
    }
    let mode = if code.added_columns.is_empty() {
        LiftMode::Cellular
    } else {
        LiftMode::CellularWithArbitraryAdded
    };
    Ok(LiftPair {
        lz,
        lq: origin.dq.mod_reduce(4)?,
        mode,
    })
}

pub fn lift(code: &CssCode, mode: LiftMode) -> Result<LiftPair> {
    match mode {
        LiftMode::Naive => Ok(naive_lift(code)),
        _ => cellular_lift(code),
    }
}

pub fn agrees_mod2(lift: &LiftPair, code: &CssCode) -> bool {
    lift.lz.to_z2() == code.dz && lift.lq.to_z2() == code.dq
}

/// `E = (L_Q · L_Z) / 2`.
pub fn error_matrix(lift: &LiftPair) -> Result<ExactMatrix> {
    lift.lq.mat_mul(&lift.lz)?.halve_even()
}

/// `E + dq·δ_Z + δ_Q·dz` over Z2.
pub fn residual(e: &ExactMatrix, code: &CssCode, corr: &CorrectionPair) -> Result<ExactMatrix> {
    corr.check(code)?;
    e.add(&code.dq.mat_mul(&corr.delta_z)?)?
        .add(&corr.delta_q.mat_mul(&code.dz)?)
}

/// `L′ = L + 2·η` where `η` is the naive lift of `δ`.
pub fn apply_correction(lift: &LiftPair, corr: &CorrectionPair) -> Result<LiftPair> {
    let double = |m: &ExactMatrix| m.with_ring(Ring::Z4).scale(2);
    Ok(LiftPair {
        lz: lift.lz.add(&double(&corr.delta_z)?)?,
        lq: lift.lq.add(&double(&corr.delta_q)?)?,
        mode: lift.mode,
    })
}

/// `L_Q · L_Z = 0` over Z4 and mod-2 agreement with the code.
pub fn verify_lift(lift: &LiftPair, code: &CssCode) -> bool {
    agrees_mod2(lift, code)
        && lift
            .lq
            .mat_mul(&lift.lz)
            .map(|p| p.is_zero())
            .unwrap_or(false)
}

/// A cocycle `v` with `vᵀ·dz_base = 0` and `v·added[j] = [j == which]`.
pub fn find_dual_cocycle(dz_base: &ExactMatrix, added: &[Gf2Vec], which: usize) -> Result<Gf2Vec> {
    let n = dz_base.rows();
    let mut rows = dz_base.transpose();
    for a in added {
        if a.len() != n {
            return Err(Error::DimensionMismatch {
                op: "find_dual_cocycle",
                left: dz_base.shape(),
                right: (a.len(), 1),
            });
        }
        let r = ExactMatrix::accumulate(Ring::Z2, 1, n, a.support().into_iter().map(|q| (0, q, 1)));
        rows = rows.vstack(&r)?;
    }
    let mut rhs = Gf2Vec::zeros(rows.rows());
    rhs.set(dz_base.cols() + which, true);
    match gf2::solve_affine_z2(&rows, &rhs)? {
        AffineSolution::Consistent { particular, .. } => Ok(particular),
        AffineSolution::Inconsistent => Err(Error::Inconsistent(
            "added chain is homologous to zero modulo the other stabilizers".into(),
        )),
    }
}

/// `δ_Z = 0`, `δ_Q = Σ_a u_a v_aᵀ` where `u_a` is the column of `E` on added stabilizer `a`
/// and `v_a` the dual cocycle of that stabilizer.
pub fn explicit_solution(code: &CssCode, e: &ExactMatrix) -> Result<CorrectionPair> {
    if e.shape() != (code.n_x(), code.n_z()) {
        return Err(Error::DimensionMismatch {
            op: "explicit_solution",
            left: e.shape(),
            right: (code.n_x(), code.n_z()),
        });
    }
    if let Some((r, c, _)) = e
        .entries()
        .find(|(_, c, _)| !code.added_columns.contains(c))
    {
        return Err(Error::Precondition(format!(
            "E has entry ({r}, {c}) outside the added columns"
        )));
    }
    let base = code.base_dz();
    let added: Vec<Gf2Vec> = (0..code.added_columns.len())
        .map(|i| code.added_chain(i))
        .collect();
    let mut entries = Vec::new();
    for (i, &col) in code.added_columns.iter().enumerate() {
        let u = e.column(col);
        if u.is_empty() {
            continue;
        }
        if let Some(o) = &code.origin {
            let uv =
                Gf2Vec::from_support(code.n_x(), &u.iter().map(|&(r, _)| r).collect::<Vec<_>>());
            if !gf2::mul_vec(&o.dx.to_z2(), &uv).is_zero() {
                return Err(Error::Precondition(format!(
                    "column {col} of E is not a cycle"
                )));
            }
        }
        let v = find_dual_cocycle(&base, &added, i)?;
        for &(x, _) in &u {
            for q in v.support() {
                entries.push((x, q, 1));
            }
        }
    }
    Ok(CorrectionPair {
        delta_z: ExactMatrix::zeros(Ring::Z2, code.n_q(), code.n_z()),
        delta_q: ExactMatrix::accumulate(Ring::Z2, code.n_x(), code.n_q(), entries),
    })
}

/// Columns of `delta_q` on the qubits of slice `m` (connector qubits excluded).
pub fn restrict_to_slice(delta_q: &ExactMatrix, code: &CssCode, m: usize) -> Result<ExactMatrix> {
    if delta_q.cols() != code.n_q() {
        return Err(Error::DimensionMismatch {
            op: "restrict_to_slice",
            left: delta_q.shape(),
            right: code.dq.shape(),
        });
    }
    Ok(delta_q.select_columns(&code.slice_cells(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toy() -> CssCode {
        CssCode::new(
            ExactMatrix::from_dense(Ring::Z2, &[vec![1], vec![1]]),
            ExactMatrix::from_dense(Ring::Z2, &[vec![1, 1]]),
        )
        .unwrap()
    }

    #[test]
    fn toy_naive_lift_and_correction() {
        let code = toy();
        let l = naive_lift(&code);
        assert_eq!(l.lq.mat_mul(&l.lz).unwrap().to_dense(), vec![vec![2]]);
        let e = error_matrix(&l).unwrap();
        assert_eq!(e.to_dense(), vec![vec![1]]);
        assert!(!verify_lift(&l, &code));
        let corr = CorrectionPair {
            delta_z: ExactMatrix::from_dense(Ring::Z2, &[vec![1], vec![0]]),
            delta_q: ExactMatrix::zeros(Ring::Z2, 1, 2),
        };
        assert!(residual(&e, &code, &corr).unwrap().is_zero());
        let fixed = apply_correction(&l, &corr).unwrap();
        assert_eq!(fixed.lz.to_dense(), vec![vec![3], vec![1]]);
        assert!(verify_lift(&fixed, &code));
        assert_eq!(apply_correction(&fixed, &corr).unwrap(), l);
        assert_eq!(
            residual(&e, &code, &CorrectionPair::zero(&code)).unwrap(),
            e
        );
    }

    #[test]
    fn cellular_needs_origin() {
        assert!(cellular_lift(&toy()).is_err());
    }
}

//! Codes whose stabilizers live on pairs of neighbouring sites, the two-round
//! disentangling circuit, and local integer lifts.

mod circuit;
mod disentangle;
mod lift;
mod random;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::linalg::Gf2Vec;

pub use circuit::{apply_circuit, transvections, validate_circuit, Cnot, LocalCircuit, Move};
pub use disentangle::{disentangle, mixed_qubits};
pub use lift::{integer_lift_local, saturated_lift, verify_local_lift, LocalLift, LocalLiftReport};
pub use random::random_sited_instance;

/// A CSS code with an integer site per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct SitedCssCode {
    pub code: CssCode,
    pub site_of_qubit: Vec<i64>,
}

/// Sites `lo..=hi` touched by a stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    /// `Some(lo)` when the window spans two sites.
    pub fn pair(self) -> Option<i64> {
        (self.hi == self.lo + 1).then_some(self.lo)
    }

    pub fn contains(self, site: i64) -> bool {
        (self.lo..=self.hi).contains(&site)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerKind {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteViolation {
    pub kind: StabilizerKind,
    pub index: usize,
    pub sites: Vec<i64>,
}

impl SitedCssCode {
    pub fn new(code: CssCode, site_of_qubit: Vec<i64>) -> Result<Self> {
        if site_of_qubit.len() != code.n_q() {
            return Err(Error::InvalidCode(format!(
                "{} sites for {} qubits",
                site_of_qubit.len(),
                code.n_q()
            )));
        }
        Ok(SitedCssCode {
            code,
            site_of_qubit,
        })
    }

    pub fn sites(&self) -> Vec<i64> {
        let s: BTreeSet<i64> = self.site_of_qubit.iter().copied().collect();
        s.into_iter().collect()
    }

    pub fn qubits_at(&self, site: i64) -> Vec<usize> {
        (0..self.site_of_qubit.len())
            .filter(|&q| self.site_of_qubit[q] == site)
            .collect()
    }

    pub fn z_support(&self, i: usize) -> Vec<usize> {
        self.code.dz.column(i).into_iter().map(|(q, _)| q).collect()
    }

    pub fn x_support(&self, a: usize) -> Vec<usize> {
        self.code.dq.row(a).iter().map(|&(q, _)| q).collect()
    }

    /// Sites of a qubit set, ascending and deduplicated.
    pub fn sites_of(&self, qubits: &[usize]) -> Vec<i64> {
        let s: BTreeSet<i64> = qubits.iter().map(|&q| self.site_of_qubit[q]).collect();
        s.into_iter().collect()
    }

    /// Window of a support, `None` when it is empty or not within two neighbouring sites.
    pub fn window_of(&self, qubits: &[usize]) -> Option<Window> {
        let s = self.sites_of(qubits);
        match (s.first(), s.last()) {
            (Some(&lo), Some(&hi)) if hi - lo <= 1 => Some(Window { lo, hi }),
            _ => None,
        }
    }

    pub fn z_window(&self, i: usize) -> Option<Window> {
        self.window_of(&self.z_support(i))
    }

    pub fn x_window(&self, a: usize) -> Option<Window> {
        self.window_of(&self.x_support(a))
    }

    pub(crate) fn z_columns(&self) -> Vec<Gf2Vec> {
        let n = self.code.n_q();
        self.code
            .dz
            .columns()
            .into_iter()
            .map(|c| Gf2Vec::from_support(n, &c.iter().map(|&(q, _)| q).collect::<Vec<_>>()))
            .collect()
    }

    pub(crate) fn x_rows(&self) -> Vec<Gf2Vec> {
        let n = self.code.n_q();
        (0..self.code.n_x())
            .map(|a| Gf2Vec::from_support(n, &self.x_support(a)))
            .collect()
    }
}

/// Stabilizers that are not supported on a pair of neighbouring sites.
pub fn validate_sited(s: &SitedCssCode) -> Vec<SiteViolation> {
    let mut out = Vec::new();
    for i in 0..s.code.n_z() {
        let sup = s.z_support(i);
        if !sup.is_empty() && s.window_of(&sup).is_none() {
            out.push(SiteViolation {
                kind: StabilizerKind::Z,
                index: i,
                sites: s.sites_of(&sup),
            });
        }
    }
    for a in 0..s.code.n_x() {
        let sup = s.x_support(a);
        if !sup.is_empty() && s.window_of(&sup).is_none() {
            out.push(SiteViolation {
                kind: StabilizerKind::X,
                index: a,
                sites: s.sites_of(&sup),
            });
        }
    }
    out
}

pub(crate) fn ensure_sited(s: &SitedCssCode) -> Result<()> {
    s.code.check()?;
    match validate_sited(s).first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidCode(format!(
            "{:?}-stabilizer {} touches sites {:?}",
            v.kind, v.index, v.sites
        ))),
    }
}

/// Qubits in the support of some Z-stabilizer and of some X-stabilizer.
pub fn overlap_qubits(code: &CssCode) -> Vec<usize> {
    let z: BTreeSet<usize> = code.dz.entries().map(|(q, _, _)| q).collect();
    let x: BTreeSet<usize> = code.dq.entries().map(|(_, q, _)| q).collect();
    z.intersection(&x).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ExactMatrix, Ring};

    pub(crate) fn two_qubit() -> SitedCssCode {
        let code = CssCode::new(
            ExactMatrix::from_dense(Ring::Z2, &[vec![1], vec![1]]),
            ExactMatrix::from_dense(Ring::Z2, &[vec![1, 1]]),
        )
        .unwrap();
        SitedCssCode::new(code, vec![0, 0]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(validate_sited(&two_qubit()).is_empty());
        let code = CssCode::new(
            ExactMatrix::from_dense(Ring::Z2, &[vec![1], vec![0], vec![1]]),
            ExactMatrix::zeros(Ring::Z2, 0, 3),
        )
        .unwrap();
        let s = SitedCssCode::new(code, vec![0, 1, 2]).unwrap();
        assert_eq!(
            validate_sited(&s),
            vec![SiteViolation {
                kind: StabilizerKind::Z,
                index: 0,
                sites: vec![0, 2]
            }]
        );
        let empty = CssCode::new(
            ExactMatrix::zeros(Ring::Z2, 0, 0),
            ExactMatrix::zeros(Ring::Z2, 0, 0),
        )
        .unwrap();
        assert!(validate_sited(&SitedCssCode::new(empty, vec![]).unwrap()).is_empty());
    }
}

//! Invertible GF(2) basis changes on qubit subsets, grouped in two rounds.
//!
//! A move with matrix `M` on qubits `Q` sends Z-supports `z|_Q ↦ M·z|_Q` and
//! X-supports `x|_Q ↦ x|_Q·M⁻¹`, which preserves every Z/X overlap parity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::linalg::gf2::square;
use crate::linalg::{ExactMatrix, Gf2Vec, Ring};

use super::SitedCssCode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub sites: Vec<i64>,
    pub qubits: Vec<usize>,
    /// Row-major square matrix over GF(2), indexed like `qubits`.
    pub matrix: Vec<Gf2Vec>,
}

impl Move {
    pub fn is_identity(&self) -> bool {
        square::is_identity(&self.matrix)
    }

    pub fn inverse(&self) -> Result<Move> {
        let inv = square::inverse(&self.matrix).ok_or_else(|| {
            Error::LocalLift(format!("move on sites {:?} is not invertible", self.sites))
        })?;
        Ok(Move {
            sites: self.sites.clone(),
            qubits: self.qubits.clone(),
            matrix: inv,
        })
    }
}

/// Round 0 holds single-site moves, round 1 moves on neighbouring site pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalCircuit {
    pub rounds: [Vec<Move>; 2],
}

/// `dz` row `target` += row `control`, i.e. left multiplication by `I + E_{target,control}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnot {
    pub round: usize,
    pub control: usize,
    pub target: usize,
}

impl LocalCircuit {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.rounds.iter().flatten().all(Move::is_identity)
    }

    pub fn moves(&self) -> impl Iterator<Item = &Move> {
        self.rounds.iter().flatten()
    }

    /// The inverse action: round order swapped and every matrix inverted.
    /// The result undoes `self` but is not itself a two-round local circuit in general.
    pub fn inverse(&self) -> Result<LocalCircuit> {
        let inv = |r: &Vec<Move>| r.iter().map(Move::inverse).collect::<Result<Vec<_>>>();
        Ok(LocalCircuit {
            rounds: [inv(&self.rounds[1])?, inv(&self.rounds[0])?],
        })
    }

    /// Gate list in application order: round by round, each move's factors right to left.
    pub fn cnots(&self) -> Result<Vec<Cnot>> {
        let mut out = Vec::new();
        for (round, moves) in self.rounds.iter().enumerate() {
            for m in moves {
                for (a, b) in transvections(&m.matrix)?.into_iter().rev() {
                    out.push(Cnot {
                        round,
                        control: m.qubits[b],
                        target: m.qubits[a],
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Factors `m = T(a₁,b₁)·T(a₂,b₂)···` with `T(a,b) = I + E_ab`.
pub fn transvections(m: &[Gf2Vec]) -> Result<Vec<(usize, usize)>> {
    let n = m.len();
    let mut w = m.to_vec();
    // ops applied to `w` on the left; m = ops[0]·ops[1]··· since each T is an involution
    let mut ops = Vec::new();
    for c in 0..n {
        if !w[c].get(c) {
            let r = (c + 1..n)
                .find(|&r| w[r].get(c))
                .ok_or_else(|| Error::LocalLift("singular move matrix".into()))?;
            let row = w[r].clone();
            w[c].xor_assign(&row);
            ops.push((c, r));
        }
        for r in 0..n {
            if r != c && w[r].get(c) {
                let row = w[c].clone();
                w[r].xor_assign(&row);
                ops.push((r, c));
            }
        }
    }
    Ok(ops)
}

/// Structural checks: invertibility, round-0 moves on one site, round-1 moves on
/// `{j, j+1}` with pairwise disjoint qubit sets.
pub fn validate_circuit(s: &SitedCssCode, circ: &LocalCircuit) -> Vec<String> {
    let mut out = Vec::new();
    for (round, moves) in circ.rounds.iter().enumerate() {
        let mut used = BTreeSet::new();
        for (i, m) in moves.iter().enumerate() {
            let tag = format!("round {round} move {i}");
            if m.matrix.len() != m.qubits.len()
                || m.matrix.iter().any(|r| r.len() != m.qubits.len())
            {
                out.push(format!(
                    "{tag}: matrix shape does not match {} qubits",
                    m.qubits.len()
                ));
                continue;
            }
            if square::inverse(&m.matrix).is_none() {
                out.push(format!("{tag}: matrix is not invertible"));
            }
            if m.qubits.iter().any(|&q| q >= s.site_of_qubit.len()) {
                out.push(format!("{tag}: qubit out of range"));
                continue;
            }
            let sites = s.sites_of(&m.qubits);
            let ok = match round {
                0 => m.sites.len() == 1 && sites.iter().all(|x| *x == m.sites[0]),
                _ => {
                    m.sites.len() == 2
                        && m.sites[1] == m.sites[0] + 1
                        && sites.iter().all(|x| m.sites.contains(x))
                }
            };
            if !ok {
                out.push(format!(
                    "{tag}: qubits on sites {sites:?} do not fit tag {:?}",
                    m.sites
                ));
            }
            for &q in &m.qubits {
                if !used.insert(q) {
                    out.push(format!("{tag}: qubit {q} already used in this round"));
                }
            }
        }
    }
    out
}

pub(crate) fn apply_moves(code: &CssCode, moves: &[&Move]) -> Result<CssCode> {
    let (nq, nz, nx) = (code.n_q(), code.n_z(), code.n_x());
    let mut cols: Vec<Gf2Vec> = code
        .dz
        .columns()
        .into_iter()
        .map(|c| Gf2Vec::from_support(nq, &c.iter().map(|&(q, _)| q).collect::<Vec<_>>()))
        .collect();
    let mut rows: Vec<Gf2Vec> = (0..nx)
        .map(|a| {
            Gf2Vec::from_support(
                nq,
                &code.dq.row(a).iter().map(|&(q, _)| q).collect::<Vec<_>>(),
            )
        })
        .collect();
    for m in moves {
        if m.qubits.iter().any(|&q| q >= nq) {
            return Err(Error::InvalidParameters("move qubit out of range".into()));
        }
        let inv = square::inverse(&m.matrix).ok_or_else(|| {
            Error::LocalLift(format!("move on sites {:?} is not invertible", m.sites))
        })?;
        let write = |v: &mut Gf2Vec, w: &Gf2Vec| {
            for (i, &q) in m.qubits.iter().enumerate() {
                v.set(q, w.get(i));
            }
        };
        for c in cols.iter_mut() {
            let r = c.restrict(&m.qubits);
            if !r.is_zero() {
                write(c, &square::mul_vec(&m.matrix, &r));
            }
        }
        for x in rows.iter_mut() {
            let r = x.restrict(&m.qubits);
            if !r.is_zero() {
                write(x, &square::vec_mul(&r, &inv));
            }
        }
    }
    let dz = ExactMatrix::accumulate(
        Ring::Z2,
        nq,
        nz,
        cols.iter()
            .enumerate()
            .flat_map(|(i, c)| c.support().into_iter().map(move |q| (q, i, 1))),
    );
    let dq = ExactMatrix::accumulate(
        Ring::Z2,
        nx,
        nq,
        rows.iter()
            .enumerate()
            .flat_map(|(a, r)| r.support().into_iter().map(move |q| (a, q, 1))),
    );
    Ok(CssCode {
        dz,
        dq,
        ..code.clone()
    })
}

/// Applies round 0, then round 1.
pub fn apply_circuit(s: &SitedCssCode, circ: &LocalCircuit) -> Result<SitedCssCode> {
    let moves: Vec<&Move> = circ.moves().collect();
    Ok(SitedCssCode {
        code: apply_moves(&s.code, &moves)?,
        site_of_qubit: s.site_of_qubit.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::tests::two_qubit;

    fn rows(d: &[&[u8]]) -> Vec<Gf2Vec> {
        d.iter()
            .map(|r| Gf2Vec::from_bools(&r.iter().map(|&b| b == 1).collect::<Vec<_>>()))
            .collect()
    }

    #[test]
    fn worked_move() {
        let s = two_qubit();
        let circ = LocalCircuit {
            rounds: [
                vec![Move {
                    sites: vec![0],
                    qubits: vec![0, 1],
                    matrix: rows(&[&[1, 1], &[0, 1]]),
                }],
                vec![],
            ],
        };
        assert!(validate_circuit(&s, &circ).is_empty());
        let t = apply_circuit(&s, &circ).unwrap();
        assert_eq!(t.code.dz.to_dense(), vec![vec![0], vec![1]]);
        assert_eq!(t.code.dq.to_dense(), vec![vec![1, 0]]);
        assert_eq!(apply_circuit(&s, &LocalCircuit::identity()).unwrap(), s);
        assert_eq!(apply_circuit(&t, &circ.inverse().unwrap()).unwrap(), s);
        assert_eq!(
            circ.cnots().unwrap(),
            vec![Cnot {
                round: 0,
                control: 1,
                target: 0
            }]
        );
    }

    #[test]
    fn transvection_products_reconstruct() {
        let cases = [
            rows(&[&[0, 1], &[1, 0]]),
            rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 1, 1]]),
            square::identity(4),
        ];
        for m in cases {
            let n = m.len();
            let mut p = square::identity(n);
            for (a, b) in transvections(&m).unwrap() {
                let mut t = square::identity(n);
                t[a].flip(b);
                p = square::mul(&p, &t);
            }
            assert_eq!(p, m);
        }
        assert!(transvections(&rows(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn rejects_singular_and_overlapping_moves() {
        let s = two_qubit();
        let bad = Move {
            sites: vec![0],
            qubits: vec![0, 1],
            matrix: rows(&[&[1, 1], &[1, 1]]),
        };
        let circ = LocalCircuit {
            rounds: [vec![bad.clone(), bad], vec![]],
        };
        let v = validate_circuit(&s, &circ);
        assert!(v.iter().any(|m| m.contains("not invertible")));
        assert!(v.iter().any(|m| m.contains("already used")));
        assert!(apply_circuit(&s, &circ).is_err());
    }
}

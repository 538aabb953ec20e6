//! Two-round disentangling.
//!
//! Round 0, at site `j`: let `ZL`, `ZR` be the restrictions to site `j` of the
//! Z-stabilizers on `{j−1, j}` and `{j, j+1}` (single-site ones count for both).
//! With a basis `b₁` of `ZL ∩ ZR`, extended by `b₂` to `ZL` and by `b₃` to `ZR`,
//! both families sit on the coordinates of `b₁ ∪ b₂ ∪ b₃`. Since `XL ⟂ ZR` and
//! `XR ⟂ ZL` hold on site `j`, `XL` then avoids the `b₁, b₃` coordinates and
//! `XR` the `b₁, b₂` coordinates.
//!
//! Round 1: every qubit still touched by both types is touched only by stabilizers
//! of one site pair. On each pair's block the Z-restrictions are moved onto
//! leading coordinates, which pushes the X-restrictions off them.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::gf2::{square, Echelon};
use crate::linalg::Gf2Vec;

use super::circuit::{apply_moves, Move};
use super::{ensure_sited, overlap_qubits, LocalCircuit, SitedCssCode, Window};

fn reversed(v: &Gf2Vec) -> Gf2Vec {
    let n = v.len();
    Gf2Vec::from_support(
        n,
        &v.support()
            .into_iter()
            .map(|i| n - 1 - i)
            .collect::<Vec<_>>(),
    )
}

/// Mod-2 change of basis placing `vectors` (independent) on coordinates given by the
/// highest-index echelon pivots of their span, and unit vectors elsewhere.
/// The returned matrix `A` maps old coordinates to new ones.
fn placement(vectors: &[Gf2Vec], n: usize) -> Result<Vec<Gf2Vec>> {
    let mut e = Echelon::new(n);
    for v in vectors {
        if !e.insert(reversed(v)) {
            return Err(Error::LocalLift("placement vectors are dependent".into()));
        }
    }
    let mut pivots: Vec<usize> = e.pivots().into_iter().map(|p| n - 1 - p).collect();
    pivots.sort_unstable();
    let mut cols: Vec<Option<Gf2Vec>> = vec![None; n];
    // a vector whose top bit is a free pivot goes there; the rest fill remaining pivots in order
    let mut pending = Vec::new();
    for v in vectors {
        let top = v.last_one().expect("nonzero");
        if pivots.contains(&top) && cols[top].is_none() {
            cols[top] = Some(v.clone());
        } else {
            pending.push(v.clone());
        }
    }
    let mut pending = pending.into_iter();
    for &p in &pivots {
        if cols[p].is_none() {
            cols[p] = pending.next();
        }
    }
    let cols: Vec<Gf2Vec> = cols
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.unwrap_or_else(|| Gf2Vec::unit(n, i)))
        .collect();
    let b = square::from_columns(&cols, n);
    square::inverse(&b).ok_or_else(|| Error::LocalLift("placement basis is singular".into()))
}

fn span_basis(vs: &[Gf2Vec], n: usize) -> Vec<Gf2Vec> {
    let mut e = Echelon::new(n);
    let mut out = Vec::new();
    for v in vs {
        if e.insert(v.clone()) {
            out.push(v.clone());
        }
    }
    out
}

fn support_union(vs: &[Gf2Vec], n: usize) -> Gf2Vec {
    let mut u = Gf2Vec::zeros(n);
    for v in vs {
        for i in v.support() {
            u.set(i, true);
        }
    }
    u
}

struct Families {
    zl: Vec<Gf2Vec>,
    zr: Vec<Gf2Vec>,
    xl: Vec<Gf2Vec>,
    xr: Vec<Gf2Vec>,
}

fn families(s: &SitedCssCode, site: i64, qubits: &[usize], z: &[Gf2Vec], x: &[Gf2Vec]) -> Families {
    let mut f = Families {
        zl: Vec::new(),
        zr: Vec::new(),
        xl: Vec::new(),
        xr: Vec::new(),
    };
    let sort = |v: &Gf2Vec, left: &mut Vec<Gf2Vec>, right: &mut Vec<Gf2Vec>| {
        let r = v.restrict(qubits);
        if r.is_zero() {
            return;
        }
        let w = s.window_of(&v.support()).expect("validated");
        if w.hi == site {
            left.push(r.clone());
        }
        if w.lo == site {
            right.push(r);
        }
    };
    for v in z {
        sort(v, &mut f.zl, &mut f.zr);
    }
    for v in x {
        sort(v, &mut f.xl, &mut f.xr);
    }
    f
}

fn round0_move(s: &SitedCssCode, site: i64, z: &[Gf2Vec], x: &[Gf2Vec]) -> Result<Option<Move>> {
    let qubits = s.qubits_at(site);
    let n = qubits.len();
    let f = families(s, site, &qubits, z, x);
    let clash = |a: &[Gf2Vec], b: &[Gf2Vec]| {
        let ub = support_union(b, n);
        support_union(a, n).support().iter().any(|&i| ub.get(i))
    };
    if !clash(&f.zr, &f.xl) && !clash(&f.zl, &f.xr) {
        return Ok(None);
    }
    for (zs, xs, side) in [
        (&f.zl, &f.xr, "left Z / right X"),
        (&f.zr, &f.xl, "right Z / left X"),
    ] {
        if zs.iter().any(|a| xs.iter().any(|b| a.dot(b))) {
            return Err(Error::Disentangle {
                site,
                reason: format!("{side} restrictions are not orthogonal"),
            });
        }
    }
    let zl = span_basis(&f.zl, n);
    let zr = span_basis(&f.zr, n);
    let b1 = gf2_intersection(&zl, &zr, n);
    let mut e = Echelon::from_vectors(n, &b1);
    let mut basis = b1.clone();
    for v in zl.iter() {
        if e.insert(v.clone()) {
            basis.push(v.clone());
        }
    }
    // a vector of ZR dependent on b₁ ∪ b₂ ∪ (earlier b₃) already lies in span(b₁ ∪ b₃)
    for v in zr.iter() {
        if e.insert(v.clone()) {
            basis.push(v.clone());
        }
    }
    let matrix = placement(&basis, n)?;
    Ok(Some(Move {
        sites: vec![site],
        qubits,
        matrix,
    }))
}

fn gf2_intersection(a: &[Gf2Vec], b: &[Gf2Vec], n: usize) -> Vec<Gf2Vec> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    crate::linalg::gf2::intersect_spans(a, b, n)
}

/// Qubits touched by both types, grouped by the site pair of the stabilizers touching them.
pub fn mixed_qubits(s: &SitedCssCode) -> Result<BTreeMap<i64, Vec<usize>>> {
    let mut touching: Vec<Vec<Option<Window>>> = vec![Vec::new(); s.code.n_q()];
    for i in 0..s.code.n_z() {
        let sup = s.z_support(i);
        let w = s.window_of(&sup);
        for q in sup {
            touching[q].push(w);
        }
    }
    for a in 0..s.code.n_x() {
        let sup = s.x_support(a);
        let w = s.window_of(&sup);
        for q in sup {
            touching[q].push(w);
        }
    }
    let mut blocks: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for q in overlap_qubits(&s.code) {
        let pairs: Vec<Option<i64>> = touching[q]
            .iter()
            .map(|w| w.and_then(Window::pair))
            .collect();
        match pairs.first() {
            Some(Some(lo)) if pairs.iter().all(|p| *p == Some(*lo)) => {
                blocks.entry(*lo).or_default().push(q)
            }
            _ => {
                return Err(Error::Disentangle {
                    site: s.site_of_qubit[q],
                    reason: format!("qubit {q} is shared by stabilizers of different site pairs"),
                })
            }
        }
    }
    Ok(blocks)
}

fn round1_move(lo: i64, qubits: Vec<usize>, z: &[Gf2Vec], x: &[Gf2Vec]) -> Result<Option<Move>> {
    let n = qubits.len();
    let zr: Vec<Gf2Vec> = z
        .iter()
        .map(|v| v.restrict(&qubits))
        .filter(|v| !v.is_zero())
        .collect();
    let xr: Vec<Gf2Vec> = x
        .iter()
        .map(|v| v.restrict(&qubits))
        .filter(|v| !v.is_zero())
        .collect();
    if zr.iter().any(|a| xr.iter().any(|b| a.dot(b))) {
        return Err(Error::Disentangle {
            site: lo,
            reason: "block restrictions are not orthogonal".into(),
        });
    }
    let matrix = placement(&span_basis(&zr, n), n)?;
    let m = Move {
        sites: vec![lo, lo + 1],
        qubits,
        matrix,
    };
    Ok((!m.is_identity()).then_some(m))
}

/// A two-round circuit after which no qubit is touched by both a Z- and an X-stabilizer.
pub fn disentangle(s: &SitedCssCode) -> Result<LocalCircuit> {
    ensure_sited(s)?;
    let z = s.z_columns();
    let x = s.x_rows();
    let round0: Vec<Move> = s
        .sites()
        .par_iter()
        .map(|&site| round0_move(s, site, &z, &x))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .filter(|m| !m.is_identity())
        .collect();
    let mid = SitedCssCode {
        code: apply_moves(&s.code, &round0.iter().collect::<Vec<_>>())?,
        site_of_qubit: s.site_of_qubit.clone(),
    };
    let (z1, x1) = (mid.z_columns(), mid.x_rows());
    let round1: Vec<Move> = mixed_qubits(&mid)?
        .into_iter()
        .map(|(lo, qubits)| round1_move(lo, qubits, &z1, &x1))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let circ = LocalCircuit {
        rounds: [round0, round1],
    };
    let out = super::apply_circuit(s, &circ)?;
    if let Some(&q) = overlap_qubits(&out.code).first() {
        return Err(Error::Disentangle {
            site: s.site_of_qubit[q],
            reason: format!("qubit {q} still touched by both types"),
        });
    }
    Ok(circ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::tests::two_qubit;
    use crate::local::{apply_circuit, validate_circuit};

    #[test]
    fn worked_example_single_move() {
        let s = two_qubit();
        let c = disentangle(&s).unwrap();
        assert_eq!(c.rounds[0].len(), 1);
        assert!(c.rounds[1].is_empty());
        assert_eq!(
            c.rounds[0][0].matrix,
            vec![
                Gf2Vec::from_support(2, &[0, 1]),
                Gf2Vec::from_support(2, &[1])
            ]
        );
        assert!(validate_circuit(&s, &c).is_empty());
        let t = apply_circuit(&s, &c).unwrap();
        assert!(overlap_qubits(&t.code).is_empty());
    }

    #[test]
    fn disjoint_code_gives_identity() {
        let s = two_qubit();
        let t = apply_circuit(&s, &disentangle(&s).unwrap()).unwrap();
        let c = disentangle(&t).unwrap();
        assert!(c.rounds.iter().all(Vec::is_empty));
    }
}

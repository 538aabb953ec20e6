//! Local integer lifts through the disentangling circuit.
//!
//! After disentangling, `D_Q · D_Z = 0` holds for any integer lift whose supports stay
//! on the Z-only and X-only qubits respectively. For each move we lift its
//! transvection factors naively, which yields block unimodular `R̃₀`, `R̃₁`, and set
//! `dz̃ = R̃₀⁻¹ R̃₁⁻¹ D̃_Z`, `dq̃ = D̃_Q R̃₁ R̃₀`.
//!
//! The naive lift of a disentangled code can carry torsion when the Z2 matrix is
//! not "regular" over the integers: `J − I` on four qubits is invertible mod 2 and
//! has determinant −3. In that case `D̃_Z` (and `D̃_Q`) are rebuilt column by column so
//! that the columns span a saturated lattice of rank equal to the Z2 rank, with each
//! column confined to qubits that keep the result local.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::{homology, ChainComplex};
use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::linalg::gf2::{self, AffineSolution};
use crate::linalg::smith::{is_saturated, smith_normal_form, solve_integer};
use crate::linalg::{rank_z2, ExactMatrix, Gf2Vec, Ring};

use super::circuit::transvections;
use super::{apply_circuit, disentangle, ensure_sited, LocalCircuit, Move, SitedCssCode, Window};

#[derive(Clone, Debug, PartialEq)]
pub struct LocalLift {
    pub dz: ExactMatrix,
    pub dq: ExactMatrix,
    pub circuit: LocalCircuit,
    /// Stabilizers whose lift differs from the naive lift of the disentangled code.
    pub completed_z: Vec<usize>,
    pub completed_x: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalLiftReport {
    pub product_zero: bool,
    pub agrees_mod2: bool,
    pub local: bool,
    pub betti_match: bool,
    pub torsion_free: bool,
    pub rank_match: bool,
    pub betti_z2: Vec<usize>,
    pub betti_z: Vec<usize>,
    pub homology_torsion: Vec<Vec<u64>>,
    pub cohomology_torsion: Vec<Vec<u64>>,
    pub failures: Vec<String>,
}

impl LocalLiftReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Integer `I + E_ab` factors of a move, as a full `n × n` matrix and its inverse.
fn lift_moves(moves: &[Move], n: usize) -> Result<(ExactMatrix, ExactMatrix)> {
    let mut fwd = ExactMatrix::identity(Ring::Z, n);
    let mut inv = ExactMatrix::identity(Ring::Z, n);
    for m in moves {
        for (a, b) in transvections(&m.matrix)? {
            let (qa, qb) = (m.qubits[a], m.qubits[b]);
            let t = ExactMatrix::identity(Ring::Z, n).add(&ExactMatrix::accumulate(
                Ring::Z,
                n,
                n,
                [(qa, qb, 1)],
            ))?;
            let ti = ExactMatrix::identity(Ring::Z, n).add(&ExactMatrix::accumulate(
                Ring::Z,
                n,
                n,
                [(qa, qb, -1)],
            ))?;
            // moves in one round act on disjoint qubits, so their factors commute
            fwd = fwd.mat_mul(&t)?;
            inv = ti.mat_mul(&inv)?;
        }
    }
    Ok((fwd, inv))
}

fn column_vec(m: &ExactMatrix, c: usize) -> Vec<i64> {
    let mut v = vec![0; m.rows()];
    for (r, x) in m.column(c) {
        v[r] = x;
    }
    v
}

fn from_columns(cols: &[Vec<i64>], rows: usize) -> ExactMatrix {
    ExactMatrix::accumulate(
        Ring::Z,
        rows,
        cols.len(),
        cols.iter().enumerate().flat_map(|(c, v)| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(move |(r, &x)| (r, c, x))
        }),
    )
}

const SIGN_TRIES: u64 = 1 << 12;
const RESTARTS: usize = 1024;

/// Integer lift of a Z2 matrix whose columns span a saturated lattice of rank
/// `rank_z2(d)`, with column `c` supported inside `allowed[c]` (which must contain
/// its Z2 support). Returns the lift and the columns that differ from the naive lift.
pub fn saturated_lift(d: &ExactMatrix, allowed: &[Vec<bool>]) -> Result<(ExactMatrix, Vec<usize>)> {
    let naive = d.with_ring(Ring::Z);
    let sf = smith_normal_form(&naive)?;
    if sf.is_unimodular_rank() && sf.rank == rank_z2(d)? {
        return Ok((naive, Vec::new()));
    }
    // the first saturated signing of a basis column can block a later dependent one,
    // so the greedy pass restarts with scrambled sign orders
    let mut rng = Lcg(0x9e37_79b9_7f4a_7c15);
    let mut last = None;
    for attempt in 0..RESTARTS {
        let salt = if attempt == 0 { 0 } else { rng.next() };
        match greedy_lift(d, allowed, salt)? {
            Ok(x) => return Ok(x),
            Err(c) => last = Some(c),
        }
    }
    Err(Error::LocalLift(format!(
        "no saturated local lift for column {}",
        last.unwrap_or_default()
    )))
}

fn z2_column(d: &ExactMatrix, c: usize) -> Gf2Vec {
    Gf2Vec::from_support(
        d.rows(),
        &d.column(c).iter().map(|&(r, _)| r).collect::<Vec<_>>(),
    )
}

/// Sign pattern scrambler for column `c`; salt 0 keeps the plain order.
fn column_salt(salt: u64, c: usize) -> u64 {
    if salt == 0 {
        return 0;
    }
    let mut z = salt.wrapping_add((c as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Small deterministic generator for the sign schedule.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }
}

/// Column-by-column completion: new independent columns are re-signed until the
/// lattice stays saturated, dependent columns are solved for inside the lattice.
/// The inner `Err` names the first column that could not be placed.
fn greedy_lift(
    d: &ExactMatrix,
    allowed: &[Vec<bool>],
    salt: u64,
) -> Result<std::result::Result<(ExactMatrix, Vec<usize>), usize>> {
    let naive = d.with_ring(Ring::Z);
    let n = d.rows();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut changed = Vec::new();
    for c in 0..d.cols() {
        let z2 = z2_column(d, c);
        let naive_c = column_vec(&naive, c);
        let bmod2 = from_columns(&basis, n).to_z2();
        let coeffs = match gf2::solve_affine_z2(&bmod2, &z2)? {
            AffineSolution::Consistent { particular, .. } => Some(particular),
            AffineSolution::Inconsistent => None,
        };
        let independent = coeffs.is_none();
        let lifted = match coeffs {
            Some(a0) => in_lattice(&basis, &a0, &naive_c, &allowed[c], n)?,
            None => extend_lattice(&basis, &naive_c, &allowed[c], n, column_salt(salt, c))?,
        };
        let Some(lifted) = lifted else {
            return Ok(Err(c));
        };
        if lifted != naive_c {
            changed.push(c);
        }
        if independent {
            basis.push(lifted.clone());
        }
        out.push(lifted);
    }
    Ok(Ok((from_columns(&out, n), changed)))
}

/// A lattice vector congruent to `naive` mod 2 and zero outside `allowed`.
fn in_lattice(
    basis: &[Vec<i64>],
    a0: &Gf2Vec,
    naive: &[i64],
    allowed: &[bool],
    n: usize,
) -> Result<Option<Vec<i64>>> {
    let b = from_columns(basis, n);
    let with = b.hstack(&from_columns(&[naive.to_vec()], n))?;
    if smith_normal_form(&with)?.rank == basis.len() {
        return Ok(Some(naive.to_vec()));
    }
    let a0: Vec<i64> = a0.to_ints();
    let base = b.apply(&a0)?;
    let outside: Vec<usize> = (0..n).filter(|&r| !allowed[r]).collect();
    // B (a0 + 2y) vanishes outside `allowed`: B_out y = −(B_out a0)/2
    let rhs: Vec<i64> = outside.iter().map(|&r| -base[r] / 2).collect();
    let y = match solve_integer(&b.select_rows(&outside), &rhs)? {
        Some(y) => y,
        None => return Ok(None),
    };
    let coeff: Vec<i64> = a0.iter().zip(&y).map(|(a, y)| a + 2 * y).collect();
    Ok(Some(b.apply(&coeff)?))
}

/// `naive` up to signs (and even entries on allowed zeros) keeping the lattice saturated.
fn extend_lattice(
    basis: &[Vec<i64>],
    naive: &[i64],
    allowed: &[bool],
    n: usize,
    salt: u64,
) -> Result<Option<Vec<i64>>> {
    let b = from_columns(basis, n);
    let test =
        |v: &[i64]| -> Result<bool> { is_saturated(&b.hstack(&from_columns(&[v.to_vec()], n))?) };
    let support: Vec<usize> = (0..n).filter(|&r| naive[r] != 0).collect();
    let masks = (1u64 << support.len().min(62)).min(SIGN_TRIES);
    let signed = |mask: u64| {
        let mask = mask ^ salt;
        let mut v = naive.to_vec();
        for (i, &r) in support.iter().enumerate() {
            if i < 64 && mask >> i & 1 == 1 {
                v[r] = -v[r];
            }
        }
        v
    };
    for mask in 0..masks {
        let v = signed(mask);
        if test(&v)? {
            return Ok(Some(v));
        }
    }
    let zeros: Vec<usize> = (0..n).filter(|&r| allowed[r] && naive[r] == 0).collect();
    for &p in &zeros {
        for t in [2, -2] {
            for mask in 0..masks.min(64) {
                let mut v = signed(mask);
                v[p] = t;
                if test(&v)? {
                    return Ok(Some(v));
                }
            }
        }
    }
    Ok(None)
}

/// Disentangle, lift, undo. Every postcondition is left to [`verify_local_lift`].
pub fn integer_lift_local(s: &SitedCssCode) -> Result<LocalLift> {
    ensure_sited(s)?;
    let circuit = disentangle(s)?;
    let d = apply_circuit(s, &circuit)?;
    let nq = s.code.n_q();
    let mut block_of: Vec<Option<i64>> = vec![None; nq];
    for m in &circuit.rounds[1] {
        for &q in &m.qubits {
            block_of[q] = Some(m.sites[0]);
        }
    }
    let z_touched = touched(d.code.dz.entries().map(|(q, _, _)| q), nq);
    let x_touched = touched(d.code.dq.entries().map(|(_, q, _)| q), nq);
    let sites = s.sites();
    // a single-site stabilizer may spread onto one neighbouring site
    let pair_of = |w: Window| {
        w.pair().or_else(|| {
            if sites.contains(&(w.lo + 1)) {
                Some(w.lo)
            } else if sites.contains(&(w.lo - 1)) {
                Some(w.lo - 1)
            } else {
                None
            }
        })
    };
    let allowed = |support: Vec<usize>, other: &[bool]| -> Vec<bool> {
        let w = s.window_of(&support);
        (0..nq)
            .map(|q| match w.map(|w| (w, pair_of(w))) {
                None => false,
                Some((w, None)) => w.contains(s.site_of_qubit[q]) && !other[q],
                Some((_, Some(p))) => {
                    (p..=p + 1).contains(&s.site_of_qubit[q])
                        && !other[q]
                        && block_of[q].is_none_or(|b| b == p)
                }
            })
            .collect()
    };
    // windows come from the input code; the circuit keeps every stabilizer in its window
    let z_allowed: Vec<Vec<bool>> = (0..s.code.n_z())
        .map(|i| allowed(s.z_support(i), &x_touched))
        .collect();
    let x_allowed: Vec<Vec<bool>> = (0..s.code.n_x())
        .map(|a| allowed(s.x_support(a), &z_touched))
        .collect();
    let (dz_l, completed_z) = saturated_lift(&d.code.dz, &z_allowed)?;
    let (dqt_l, completed_x) = saturated_lift(&d.code.dq.transpose(), &x_allowed)?;
    let dq_l = dqt_l.transpose();

    let (r0, r0_inv) = lift_moves(&circuit.rounds[0], nq)?;
    let (r1, r1_inv) = lift_moves(&circuit.rounds[1], nq)?;
    let dz = r0_inv.mat_mul(&r1_inv)?.mat_mul(&dz_l)?;
    let dq = dq_l.mat_mul(&r1)?.mat_mul(&r0)?;
    Ok(LocalLift {
        dz,
        dq,
        circuit,
        completed_z,
        completed_x,
    })
}

fn touched(it: impl Iterator<Item = usize>, n: usize) -> Vec<bool> {
    let mut t = vec![false; n];
    for q in it {
        t[q] = true;
    }
    t
}

fn three_term(name: &str, ring: Ring, dq: &ExactMatrix, dz: &ExactMatrix) -> Result<ChainComplex> {
    ChainComplex::new(
        name,
        ring,
        0,
        vec![dq.rows(), dq.cols(), dz.cols()],
        vec![dq.clone(), dz.clone()],
    )
}

fn local_lines(s: &SitedCssCode, lines: BTreeMap<usize, Vec<usize>>) -> Option<usize> {
    lines
        .into_iter()
        .find(|(_, sup)| !sup.is_empty() && s.window_of(sup).is_none())
        .map(|(i, _)| i)
}

/// Checks `dq̃·dz̃ = 0`, mod-2 agreement, locality, integer Betti numbers against the
/// Z2 ones, absence of torsion in homology and cohomology, and `rank dz̃ = rank_Z2 dz`.
pub fn verify_local_lift(s: &SitedCssCode, dz: &ExactMatrix, dq: &ExactMatrix) -> LocalLiftReport {
    let mut r = LocalLiftReport::default();
    if let Err(e) = check_into(s, dz, dq, &mut r) {
        r.failures.push(format!("could not evaluate: {e}"));
    }
    r
}

fn check_into(
    s: &SitedCssCode,
    dz: &ExactMatrix,
    dq: &ExactMatrix,
    r: &mut LocalLiftReport,
) -> Result<()> {
    let code: &CssCode = &s.code;
    if dz.shape() != code.dz.shape()
        || dq.shape() != code.dq.shape()
        || dz.ring() != Ring::Z
        || dq.ring() != Ring::Z
    {
        return Err(Error::InvalidParameters(
            "lift must be over Z with the code's shapes".into(),
        ));
    }
    r.product_zero = dq.mat_mul(dz)?.is_zero();
    if !r.product_zero {
        r.failures.push("dq·dz is not zero over Z".into());
    }
    r.agrees_mod2 = dz.to_z2() == code.dz && dq.to_z2() == code.dq;
    if !r.agrees_mod2 {
        r.failures
            .push("lift does not reduce to the code mod 2".into());
    }
    let zcols: BTreeMap<usize, Vec<usize>> = (0..dz.cols())
        .map(|c| (c, dz.column(c).into_iter().map(|(q, _)| q).collect()))
        .collect();
    let xrows: BTreeMap<usize, Vec<usize>> = (0..dq.rows())
        .map(|a| (a, dq.row(a).iter().map(|&(q, _)| q).collect()))
        .collect();
    let bad_z = local_lines(s, zcols);
    let bad_x = local_lines(s, xrows);
    r.local = bad_z.is_none() && bad_x.is_none();
    if let Some(c) = bad_z {
        r.failures
            .push(format!("column {c} of dz is not on neighbouring sites"));
    }
    if let Some(a) = bad_x {
        r.failures
            .push(format!("row {a} of dq is not on neighbouring sites"));
    }
    let hz2 = homology(&three_term("input", Ring::Z2, &code.dq, &code.dz)?)?;
    r.betti_z2 = hz2.betti_z2();
    if !r.product_zero {
        return Ok(());
    }
    let hz = homology(&three_term("lift", Ring::Z, dq, dz)?)?;
    let co = homology(&three_term(
        "colift",
        Ring::Z,
        &dz.transpose(),
        &dq.transpose(),
    )?)?;
    r.betti_z = hz.betti_z().unwrap_or_default();
    r.homology_torsion = hz.torsion().unwrap_or_default();
    r.cohomology_torsion = co.torsion().unwrap_or_default();
    r.betti_match = r.betti_z == r.betti_z2;
    if !r.betti_match {
        r.failures.push(format!(
            "integer Betti {:?} differ from Z2 Betti {:?}",
            r.betti_z, r.betti_z2
        ));
    }
    r.torsion_free = hz.is_torsion_free() && co.is_torsion_free();
    if !r.torsion_free {
        r.failures
            .push("integer homology or cohomology has torsion".into());
    }
    r.rank_match = smith_normal_form(dz)?.rank == rank_z2(&code.dz)?;
    if !r.rank_match {
        r.failures
            .push("rank of dz over Z exceeds its Z2 rank".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::tests::two_qubit;

    #[test]
    fn worked_example() {
        let s = two_qubit();
        let l = integer_lift_local(&s).unwrap();
        assert_eq!(l.dz.to_dense(), vec![vec![-1], vec![1]]);
        assert_eq!(l.dq.to_dense(), vec![vec![1, 1]]);
        assert!(l.completed_z.is_empty() && l.completed_x.is_empty());
        let rep = verify_local_lift(&s, &l.dz, &l.dq);
        assert!(rep.passed(), "{:?}", rep.failures);
        let naive = verify_local_lift(
            &s,
            &s.code.dz.with_ring(Ring::Z),
            &s.code.dq.with_ring(Ring::Z),
        );
        assert!(!naive.product_zero && !naive.passed());
    }

    #[test]
    fn moved_entry_breaks_locality() {
        let code = CssCode::new(
            ExactMatrix::from_dense(Ring::Z2, &[vec![1], vec![1], vec![0]]),
            ExactMatrix::zeros(Ring::Z2, 0, 3),
        )
        .unwrap();
        let s = SitedCssCode::new(code, vec![0, 1, 2]).unwrap();
        let good = ExactMatrix::from_dense(Ring::Z, &[vec![1], vec![1], vec![0]]);
        assert!(verify_local_lift(&s, &good, &ExactMatrix::zeros(Ring::Z, 0, 3)).passed());
        let moved = ExactMatrix::from_dense(Ring::Z, &[vec![1], vec![1], vec![2]]);
        let rep = verify_local_lift(&s, &moved, &ExactMatrix::zeros(Ring::Z, 0, 3));
        assert!(!rep.local && rep.agrees_mod2);
    }

    #[test]
    fn torsion_in_naive_disjoint_lift_is_completed() {
        // J − I on four qubits of one site: invertible mod 2, determinant −3 over Z
        let j_minus_i: Vec<Vec<i64>> = (0..4)
            .map(|r| (0..4).map(|c| i64::from(r != c)).collect())
            .collect();
        let code = CssCode::new(
            ExactMatrix::from_dense(Ring::Z2, &j_minus_i),
            ExactMatrix::zeros(Ring::Z2, 0, 4),
        )
        .unwrap();
        let s = SitedCssCode::new(code, vec![0; 4]).unwrap();
        let naive = verify_local_lift(
            &s,
            &s.code.dz.with_ring(Ring::Z),
            &ExactMatrix::zeros(Ring::Z, 0, 4),
        );
        assert!(!naive.torsion_free);
        let l = integer_lift_local(&s).unwrap();
        assert!(!l.completed_z.is_empty());
        let rep = verify_local_lift(&s, &l.dz, &l.dq);
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn triangle_dependency_is_lifted_with_signs() {
        let code = CssCode::new(
            ExactMatrix::from_dense(Ring::Z2, &[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]),
            ExactMatrix::zeros(Ring::Z2, 0, 3),
        )
        .unwrap();
        let s = SitedCssCode::new(code, vec![0, 0, 1]).unwrap();
        let l = integer_lift_local(&s).unwrap();
        let rep = verify_local_lift(&s, &l.dz, &l.dq);
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.betti_z, vec![0, 1, 1]);
    }
}

//! Independent oracles shared by the integration tests. Everything here works on
//! dense `Vec<Vec<u8>>` / `Vec<Vec<i64>>` arrays and avoids the crate's own solvers.

#![allow(dead_code)]

use liftlab::chain::ChainComplex;
use liftlab::css::CssCode;
use liftlab::linalg::{ExactMatrix, Ring};
use liftlab::local::SitedCssCode;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn dense01(m: &ExactMatrix) -> Vec<Vec<u8>> {
    m.to_z2()
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as u8).collect())
        .collect()
}

/// Rank over GF(2) by plain Gaussian elimination.
pub fn rank2(rows: &[Vec<u8>]) -> usize {
    let mut a: Vec<Vec<u8>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] == 1) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] == 1 {
                let pivot = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

/// The minimal CW model of RP³: one cell per degree, boundaries 0, ×2, 0.
pub fn minimal_rp3() -> ChainComplex {
    let one = |v: i64| ExactMatrix::from_dense(Ring::Z, &[vec![v]]);
    ChainComplex::new(
        "RP3 minimal",
        Ring::Z,
        0,
        vec![1, 1, 1, 1],
        vec![
            ExactMatrix::zeros(Ring::Z, 1, 1),
            one(2),
            ExactMatrix::zeros(Ring::Z, 1, 1),
        ],
    )
    .unwrap()
}

pub fn two_qubit_sited() -> SitedCssCode {
    let code = CssCode::new(
        ExactMatrix::from_dense(Ring::Z2, &[vec![1], vec![1]]),
        ExactMatrix::from_dense(Ring::Z2, &[vec![1, 1]]),
    )
    .unwrap();
    SitedCssCode::new(code, vec![0, 0]).unwrap()
}

/// Lexicographic `(max line weight, total weight)` over all rows and columns of both matrices.
pub fn objective(dz: &[Vec<u8>], dq: &[Vec<u8>]) -> (usize, usize) {
    let mut max = 0;
    let mut total = 0;
    for m in [dz, dq] {
        let cols = m.first().map_or(0, Vec::len);
        for r in m {
            let w = r.iter().filter(|&&x| x == 1).count();
            max = max.max(w);
            total += w;
        }
        for c in 0..cols {
            max = max.max(m.iter().filter(|r| r[c] == 1).count());
        }
    }
    (max, total)
}

fn mul2(a: &[Vec<u8>], b: &[Vec<u8>], rows: usize, inner: usize, cols: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![0u8; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k] == 1 {
                for j in 0..cols {
                    out[i][j] ^= b[k][j];
                }
            }
        }
    }
    out
}

/// Minimum objective over every correction with zero residual, by enumerating all
/// `2^(n_Q·n_Z + n_X·n_Q)` pairs. `None` when the correction equation has no solution.
pub fn brute_force_optimum(code: &CssCode, e: &ExactMatrix) -> Option<(usize, usize)> {
    let (nq, nz, nx) = (code.n_q(), code.n_z(), code.n_x());
    let u = nq * nz + nx * nq;
    assert!(u <= 22, "brute force over {u} bits");
    let dz = dense01(&code.dz);
    let dq = dense01(&code.dq);
    let e = dense01(e);
    let mut best: Option<(usize, usize)> = None;
    for mask in 0u64..(1 << u) {
        let bit = |i: usize| (mask >> i & 1) as u8;
        let d_z: Vec<Vec<u8>> = (0..nq)
            .map(|q| (0..nz).map(|z| bit(q * nz + z)).collect())
            .collect();
        let d_q: Vec<Vec<u8>> = (0..nx)
            .map(|x| (0..nq).map(|q| bit(nq * nz + x * nq + q)).collect())
            .collect();
        let a = mul2(&dq, &d_z, nx, nq, nz);
        let b = mul2(&d_q, &dz, nx, nq, nz);
        let zero = (0..nx).all(|x| (0..nz).all(|z| e[x][z] ^ a[x][z] ^ b[x][z] == 0));
        if zero {
            let o = objective(&d_z, &d_q);
            if best.is_none_or(|b| o < b) {
                best = Some(o);
            }
        }
    }
    best
}

/// A random CSS code: random Z columns, X rows sampled from their orthogonal complement.
pub fn random_code(rng: &mut ChaCha8Rng, nq: usize, nz: usize, nx: usize) -> CssCode {
    let cols: Vec<Vec<u8>> = (0..nz)
        .map(|_| (0..nq).map(|_| rng.gen_range(0..2)).collect())
        .collect();
    let mut rows = Vec::new();
    while rows.len() < nx {
        let r: Vec<u8> = (0..nq).map(|_| rng.gen_range(0..2)).collect();
        if cols
            .iter()
            .all(|c| c.iter().zip(&r).map(|(a, b)| a & b).sum::<u8>() % 2 == 0)
        {
            rows.push(r);
        }
    }
    let dz: Vec<Vec<i64>> = (0..nq)
        .map(|q| cols.iter().map(|c| c[q] as i64).collect())
        .collect();
    let dq: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    let dz = if nz == 0 {
        ExactMatrix::zeros(Ring::Z2, nq, 0)
    } else {
        ExactMatrix::from_dense(Ring::Z2, &dz)
    };
    let dq = if nx == 0 {
        ExactMatrix::zeros(Ring::Z2, 0, nq)
    } else {
        ExactMatrix::from_dense(Ring::Z2, &dq)
    };
    CssCode::new(dz, dq).unwrap()
}

/// Cell bijection and signs between two complexes with the same slice tags, found by
/// matching tags and propagating signs along nonzero boundary entries.
/// Returns true when `∂_b = S_{d−1} P ∂_a Pᵀ S_d` holds in every degree.
pub fn signed_isomorphic_by_tags(a: &ChainComplex, b: &ChainComplex) -> bool {
    if a.dims() != b.dims() || a.d_min() != b.d_min() {
        return false;
    }
    // perm[d][i]: cell of b matching cell i of a
    let mut perm = std::collections::BTreeMap::new();
    for d in a.degrees() {
        let (ta, tb) = (&a.slices[&d], &b.slices[&d]);
        let mut p = vec![usize::MAX; ta.len()];
        for (i, t) in ta.iter().enumerate() {
            match tb.iter().position(|u| u == t) {
                Some(j) => p[i] = j,
                None => return false,
            }
        }
        perm.insert(d, p);
    }
    // sign(row)·sign(col) = sign(w·v) for every entry; 2-colour each component by BFS
    let idx = |d: i32, i: usize| -> usize { (a.d_min()..d).map(|e| a.dim(e)).sum::<usize>() + i };
    let total: usize = a.dims().iter().sum();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); total];
    for d in a.d_min() + 1..=a.d_max() {
        let bb = b.boundary(d);
        for (r, c, v) in a.boundary(d).entries() {
            let w = bb.get(perm[&(d - 1)][r], perm[&d][c]);
            if w.abs() != v.abs() {
                return false;
            }
            let s = w.signum() * v.signum();
            adj[idx(d, c)].push((idx(d - 1, r), s));
            adj[idx(d - 1, r)].push((idx(d, c), s));
        }
    }
    let mut flat = vec![0i64; total];
    for start in 0..total {
        if flat[start] != 0 {
            continue;
        }
        flat[start] = 1;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, s) in &adj[u] {
                if flat[v] == 0 {
                    flat[v] = flat[u] * s;
                    queue.push_back(v);
                }
            }
        }
    }
    let sign: std::collections::BTreeMap<i32, Vec<i64>> = a
        .degrees()
        .map(|d| (d, (0..a.dim(d)).map(|i| flat[idx(d, i)]).collect()))
        .collect();
    for d in a.d_min() + 1..=a.d_max() {
        let ba = a.boundary(d);
        let bb = b.boundary(d);
        if ba.nnz() != bb.nnz() {
            return false;
        }
        for (r, c, v) in ba.entries() {
            let w = bb.get(perm[&(d - 1)][r], perm[&d][c]);
            if w != sign[&(d - 1)][r] * sign[&d][c] * v {
                return false;
            }
        }
    }
    true
}

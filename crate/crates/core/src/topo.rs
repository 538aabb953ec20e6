//! Builders for the spaces used by the codes: intervals, polygons, joins of polygons
//! (3-spheres), their antipodal quotients (RP³), collapse maps, products and
//! variable-resolution telescopes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chain::{
    ensure_chain_map, ensure_valid, ops::tensor_index, telescope, tensor_product, Chain,
    ChainComplex, ChainMap, SliceTag,
};
use crate::error::{Error, Result};
use crate::linalg::gf2::{self, AffineSolution};
use crate::linalg::{ExactMatrix, Ring};

/// Cellular involution: per degree, cell `i ↦ sign · image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    pub action: BTreeMap<i32, Vec<(usize, i64)>>,
}

impl Involution {
    pub fn image(&self, d: i32, cell: usize) -> (usize, i64) {
        self.action[&d][cell]
    }

    /// Fixed-point-free and squares to the identity.
    pub fn is_free(&self) -> bool {
        self.action.values().all(|cells| {
            cells
                .iter()
                .enumerate()
                .all(|(i, &(j, s))| j != i && cells[j].0 == i && cells[j].1 * s == 1)
        })
    }

    fn check_commutes(&self, c: &ChainComplex) -> Result<()> {
        for d in c.d_min() + 1..=c.d_max() {
            let b = c.boundary(d);
            for (r, col, v) in b.entries() {
                let (ic, sc) = self.image(d, col);
                let (ir, sr) = self.image(d - 1, r);
                if b.get(ir, ic) != sc * sr * v {
                    return Err(Error::InvalidComplex(format!(
                        "involution does not commute with the boundary at degree {d}, cell {col}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Complex together with a cellular involution.
#[derive(Clone, Debug)]
pub struct SymmetricComplex {
    pub complex: ChainComplex,
    pub involution: Involution,
}

/// Path with `n + 1` vertices and `n` edges, `∂e_i = v_{i+1} − v_i`.
///
/// Vertex `m` is tagged as slice `m`, edge `m` as the connector from `m` to `m + 1`.
pub fn build_interval(n: usize) -> ChainComplex {
    let mut c = if n == 0 {
        ChainComplex::new("I(0)", Ring::Z, 0, vec![1], vec![]).expect("point")
    } else {
        let d = ExactMatrix::accumulate(
            Ring::Z,
            n + 1,
            n,
            (0..n).flat_map(|i| [(i, i, -1), (i + 1, i, 1)]),
        );
        ChainComplex::new(format!("I({n})"), Ring::Z, 0, vec![n + 1, n], vec![d]).expect("interval")
    };
    c.slices.insert(
        0,
        (0..=n)
            .map(|m| SliceTag {
                m,
                connector: false,
                local: 0,
            })
            .collect(),
    );
    if n > 0 {
        c.slices.insert(
            1,
            (0..n)
                .map(|m| SliceTag {
                    m,
                    connector: true,
                    local: 0,
                })
                .collect(),
        );
    }
    c.labels
        .insert(0, (0..=n).map(|i| format!("v{i}")).collect());
    if n > 0 {
        c.labels
            .insert(1, (0..n).map(|i| format!("e{i}")).collect());
    }
    c.provenance = Some(json!({"family": "interval", "params": {"N": n}}));
    c
}

/// Cycle graph `C_{size}` with the antipodal rotation by `size / 2`.
pub fn build_polygon(size: usize) -> Result<SymmetricComplex> {
    if !size.is_multiple_of(2) || size < 4 {
        return Err(Error::InvalidParameters(format!(
            "polygon size must be even and at least 4, got {size}"
        )));
    }
    let k = size / 2;
    let d = ExactMatrix::accumulate(
        Ring::Z,
        size,
        size,
        (0..size).flat_map(|i| [(i, i, -1), ((i + 1) % size, i, 1)]),
    );
    let mut c = ChainComplex::new(format!("C{size}"), Ring::Z, 0, vec![size, size], vec![d])?;
    c.labels
        .insert(0, (0..size).map(|i| format!("v{i}")).collect());
    c.labels
        .insert(1, (0..size).map(|i| format!("e{i}")).collect());
    let rot: Vec<(usize, i64)> = (0..size).map(|i| ((i + k) % size, 1)).collect();
    let involution = Involution {
        action: [(0, rot.clone()), (1, rot)].into_iter().collect(),
    };
    Ok(SymmetricComplex {
        complex: c,
        involution,
    })
}

/// Cells of one degree of a join: `(p, q, offset)` with `p` descending, where
/// `p, q ∈ {−1, 0, 1}` are the factor degrees (−1 is the empty simplex).
fn join_layout(np: &[usize; 3], nq: &[usize; 3]) -> BTreeMap<i32, Vec<(i32, i32, usize)>> {
    let dim = |arr: &[usize; 3], p: i32| arr[(p + 1) as usize];
    let mut out = BTreeMap::new();
    for n in 0..=3 {
        let mut off = 0;
        let mut v = Vec::new();
        for p in (-1..=1).rev() {
            let q = n - 1 - p;
            if !(-1..=1).contains(&q) {
                continue;
            }
            v.push((p, q, off));
            off += dim(np, p) * dim(nq, q);
        }
        out.insert(n, v);
    }
    out
}

/// Augmented boundary of a 1-dimensional complex: `∂_0` maps every vertex to the empty cell.
fn augmented_boundary(c: &ChainComplex, p: i32) -> ExactMatrix {
    match p {
        0 => ExactMatrix::accumulate(Ring::Z, 1, c.dim(0), (0..c.dim(0)).map(|i| (0, i, 1))),
        1 => c.boundary(1).into_owned(),
        _ => ExactMatrix::zeros(Ring::Z, 0, 0),
    }
}

fn aug_dims(c: &ChainComplex) -> [usize; 3] {
    [1, c.dim(0), c.dim(1)]
}

/// `v3`, `e1` for the first factor, `w0`, `f2` for the second, joined by `*`.
fn join_label(a: i32, i: usize, b: i32, j: usize) -> String {
    let first = match a {
        0 => Some(format!("v{i}")),
        1 => Some(format!("e{i}")),
        _ => None,
    };
    let second = match b {
        0 => Some(format!("w{j}")),
        1 => Some(format!("f{j}")),
        _ => None,
    };
    match (first, second) {
        (Some(x), Some(y)) => format!("{x}*{y}"),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("empty join is dropped"),
    }
}

/// Simplicial join of two centrally symmetric polygons, with the product involution.
///
/// `∂(σ*τ) = ∂σ*τ + (−1)^{dim σ + 1} σ*∂τ` on augmented chains; the empty join is dropped.
pub fn join_spheres(p: &SymmetricComplex, q: &SymmetricComplex) -> Result<SymmetricComplex> {
    for f in [p, q] {
        if !f.involution.is_free() || f.complex.d_min() != 0 || f.complex.d_max() != 1 {
            return Err(Error::InvalidParameters(format!(
                "{} is not a centrally symmetric 1-dimensional complex",
                f.complex.name
            )));
        }
        f.involution.check_commutes(&f.complex)?;
    }
    let (pc, qc) = (&p.complex, &q.complex);
    let (np, nq) = (aug_dims(pc), aug_dims(qc));
    let lay = join_layout(&np, &nq);
    let fd = |arr: &[usize; 3], d: i32| arr[(d + 1) as usize];
    let offset = |n: i32, a: i32, b: i32| {
        lay.get(&n)
            .and_then(|v| v.iter().find(|&&(x, y, _)| x == a && y == b))
            .map(|&(_, _, o)| o)
    };
    let dims: Vec<usize> = (0..=3)
        .map(|n| {
            lay[&n]
                .iter()
                .map(|&(a, b, _)| fd(&np, a) * fd(&nq, b))
                .sum()
        })
        .collect();
    let mut boundaries = Vec::new();
    for n in 1..=3 {
        let mut e = Vec::new();
        for &(a, b, col_off) in &lay[&n] {
            let (wq, da, db) = (
                fd(&nq, b),
                augmented_boundary(pc, a),
                augmented_boundary(qc, b),
            );
            if let Some(row_off) = offset(n - 1, a - 1, b) {
                for (ra, ca, v) in da.entries() {
                    for j in 0..wq {
                        e.push((row_off + ra * wq + j, col_off + ca * wq + j, v));
                    }
                }
            }
            if let Some(row_off) = offset(n - 1, a, b - 1) {
                let sign = if a.rem_euclid(2) == 0 { -1 } else { 1 };
                let wq_row = fd(&nq, b - 1);
                for i in 0..fd(&np, a) {
                    for (rb, cb, v) in db.entries() {
                        e.push((row_off + i * wq_row + rb, col_off + i * wq + cb, sign * v));
                    }
                }
            }
        }
        let rows = dims[(n - 1) as usize];
        boundaries.push(ExactMatrix::accumulate(Ring::Z, rows, dims[n as usize], e));
    }
    let mut c = ChainComplex::new(
        format!("{} * {}", pc.name, qc.name),
        Ring::Z,
        0,
        dims.clone(),
        boundaries,
    )?;
    let mut action = BTreeMap::new();
    for n in 0..=3 {
        let mut acts = Vec::with_capacity(dims[n as usize]);
        let mut labels = Vec::with_capacity(dims[n as usize]);
        for &(a, b, _) in &lay[&n] {
            for i in 0..fd(&np, a) {
                for j in 0..fd(&nq, b) {
                    let (ii, si) = if a >= 0 {
                        p.involution.image(a, i)
                    } else {
                        (0, 1)
                    };
                    let (jj, sj) = if b >= 0 {
                        q.involution.image(b, j)
                    } else {
                        (0, 1)
                    };
                    let off = offset(n, a, b).expect("layout");
                    acts.push((off + ii * fd(&nq, b) + jj, si * sj));
                    labels.push(join_label(a, i, b, j));
                }
            }
        }
        action.insert(n, acts);
        c.labels.insert(n, labels);
    }
    let involution = Involution { action };
    ensure_valid(&c)?;
    involution.check_commutes(&c)?;
    Ok(SymmetricComplex {
        complex: c,
        involution,
    })
}

/// Orbit bookkeeping of a quotient: cell ↦ (orbit index, sign relative to its representative).
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: ChainComplex,
    pub orbit_of: BTreeMap<i32, Vec<(usize, i64)>>,
    /// Representative (least index) of each orbit.
    pub representatives: BTreeMap<i32, Vec<usize>>,
}

/// One cell per orbit of a free involution.
pub fn antipodal_quotient(s: &SymmetricComplex) -> Result<Quotient> {
    let c = &s.complex;
    if !s.involution.is_free() {
        return Err(Error::InvalidComplex(format!(
            "involution on {} has a fixed cell",
            c.name
        )));
    }
    let mut orbit_of = BTreeMap::new();
    let mut reps = BTreeMap::new();
    for d in c.degrees() {
        let mut of = vec![(usize::MAX, 0i64); c.dim(d)];
        let mut r = Vec::new();
        for i in 0..c.dim(d) {
            if of[i].0 != usize::MAX {
                continue;
            }
            let (j, sign) = s.involution.image(d, i);
            of[i] = (r.len(), 1);
            of[j] = (r.len(), sign);
            r.push(i);
        }
        orbit_of.insert(d, of);
        reps.insert(d, r);
    }
    let dims: Vec<usize> = c.degrees().map(|d| reps[&d].len()).collect();
    let mut boundaries = Vec::new();
    for d in c.d_min() + 1..=c.d_max() {
        let b = c.boundary(d);
        let cols: Vec<Vec<(usize, i64)>> = b.columns();
        let mut e = Vec::new();
        for (k, &rep) in reps[&d].iter().enumerate() {
            for &(row, v) in &cols[rep] {
                let (o, sign) = orbit_of[&(d - 1)][row];
                e.push((o, k, v * sign));
            }
        }
        boundaries.push(ExactMatrix::accumulate(
            Ring::Z,
            reps[&(d - 1)].len(),
            reps[&d].len(),
            e,
        ));
    }
    let mut q = ChainComplex::new(
        format!("{}/Z2", c.name),
        Ring::Z,
        c.d_min(),
        dims,
        boundaries,
    )?;
    for (d, labels) in &c.labels {
        q.labels.insert(
            *d,
            reps[d]
                .iter()
                .map(|&i| format!("[{}]", labels[i]))
                .collect(),
        );
    }
    // descent failures are bugs in the input or the signs, reported as such
    ensure_valid(&q)?;
    Ok(Quotient {
        complex: q,
        orbit_of,
        representatives: reps,
    })
}

/// Antipodal quotient of `C_{2k} * C_{2k}` with its distinguished chains.
///
/// * `rp1_cycle`: the orbits of the first polygon's edges `e_0 … e_{k−1}`.
/// * `rp2_cycle`: the orbits of `e_i * w_0`, `i < 2k` (the suspension of the first
///   polygon over an antipodal pair of the second).
/// * `dual_2cocycle`: a Z2 2-cocycle pairing to one with `rp2_cycle`.
pub fn build_rp3(k: usize) -> Result<ChainComplex> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!(
            "RP3 family needs k >= 2, got {k}"
        )));
    }
    let poly = build_polygon(2 * k)?;
    let sphere = join_spheres(&poly, &poly)?;
    let quot = antipodal_quotient(&sphere)?;
    let mut c = quot.complex;
    c.name = format!("RP3(k={k})");
    // degree 1 layout: [P edges, v*w, Q edges]; degree 2: [e*w (e-major), v*f]
    let rp1: Vec<usize> = (0..k).map(|i| quot.orbit_of[&1][i].0).collect();
    let n = 2 * k;
    let rp2: Vec<usize> = (0..n).map(|i| quot.orbit_of[&2][i * n].0).collect();
    c.distinguished
        .insert("rp1_cycle".into(), Chain::new(1, rp1));
    let rp2 = Chain::new(2, rp2);
    let cocycle = dual_cocycle(&c, &rp2)?;
    c.distinguished.insert("rp2_cycle".into(), rp2);
    c.distinguished.insert("dual_2cocycle".into(), cocycle);
    c.provenance = Some(json!({"family": "rp3_join_quotient", "params": {"k": k}}));
    ensure_valid(&c)?;
    Ok(c)
}

/// A Z2 cocycle `v` in the degree of `cycle` with `δv = 0` and `⟨v, cycle⟩ = 1`.
pub fn dual_cocycle(c: &ChainComplex, cycle: &Chain) -> Result<Chain> {
    let d = cycle.degree;
    let n = c.dim(d);
    let cob = c.boundary(d + 1).to_z2().transpose();
    let mut a = cob;
    let row = ExactMatrix::accumulate(Ring::Z2, 1, n, cycle.support.iter().map(|&i| (0, i, 1)));
    a = a.vstack(&row)?;
    let mut rhs = gf2::Gf2Vec::zeros(a.rows());
    rhs.set(a.rows() - 1, true);
    match gf2::solve_affine_z2(&a, &rhs)? {
        AffineSolution::Consistent { particular, .. } => Ok(Chain::new(d, particular.support())),
        AffineSolution::Inconsistent => Err(Error::Inconsistent(format!(
            "no cocycle dual to the degree-{d} cycle in {}",
            c.name
        ))),
    }
}

/// Minimal CW model of RP³: one cell per degree, boundaries `0, ×2, 0`.
pub fn rp3_minimal() -> ChainComplex {
    let z = |v: i64| ExactMatrix::from_dense(Ring::Z, &[vec![v]]);
    let mut c = ChainComplex::new(
        "RP3-minimal",
        Ring::Z,
        0,
        vec![1, 1, 1, 1],
        vec![z(0), z(2), z(0)],
    )
    .expect("minimal model");
    c.provenance = Some(json!({"family": "rp3_minimal", "params": {}}));
    c
}

/// Equivariant collapse `C_{2k} → C_{2k−2}` on cells of degree 0 and 1 (`None` = degenerate).
fn polygon_collapse(k: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = 2 * k;
    let vert: Vec<usize> = (0..n)
        .map(|i| match i {
            _ if i < k => i,
            _ if i < n - 1 => i - 1,
            _ => 0,
        })
        .collect();
    let edges = (0..n)
        .map(|i| {
            if i == k - 1 || i == n - 1 {
                None
            } else if i < k {
                Some(i)
            } else {
                Some(i - 1)
            }
        })
        .collect();
    (vert, edges)
}

/// Chain map `RP³(k_from) → RP³(k_to)` induced by collapsing one antipodal pair of
/// edges on each polygon factor. `k_from == k_to` gives the identity.
pub fn build_collapse_map(k_from: usize, k_to: usize) -> Result<ChainMap> {
    if k_from == k_to {
        return Ok(ChainMap::identity(&build_rp3(k_from)?));
    }
    if k_from != k_to + 1 || k_to < 2 {
        return Err(Error::InvalidParameters(format!(
            "collapse maps go from k to k-1 with k-1 >= 2, got {k_from} -> {k_to}"
        )));
    }
    let (src_poly, dst_poly) = (build_polygon(2 * k_from)?, build_polygon(2 * k_to)?);
    let src_sphere = join_spheres(&src_poly, &src_poly)?;
    let dst_sphere = join_spheres(&dst_poly, &dst_poly)?;
    let src_q = antipodal_quotient(&src_sphere)?;
    let dst_q = antipodal_quotient(&dst_sphere)?;
    let (vert, edge) = polygon_collapse(k_from);
    // factor map on augmented cells: degree p, index -> image index
    let fmap = |p: i32, i: usize| -> Option<usize> {
        match p {
            -1 => Some(0),
            0 => Some(vert[i]),
            _ => edge[i],
        }
    };
    let aug_src = aug_dims(&src_poly.complex);
    let aug_dst = aug_dims(&dst_poly.complex);
    let lay_src = join_layout(&aug_src, &aug_src);
    let lay_dst = join_layout(&aug_dst, &aug_dst);
    let mut components = BTreeMap::new();
    for n in 0..=3 {
        let wd = |arr: &[usize; 3], b: i32| arr[(b + 1) as usize];
        let mut e = Vec::new();
        for (k, &rep) in src_q.representatives[&n].iter().enumerate() {
            let &(a, b, off) = lay_src[&n]
                .iter()
                .rev()
                .find(|&&(_, _, o)| o <= rep)
                .expect("layout");
            let local = rep - off;
            let (i, j) = (local / wd(&aug_src, b), local % wd(&aug_src, b));
            if let (Some(ii), Some(jj)) = (fmap(a, i), fmap(b, j)) {
                let doff = lay_dst[&n]
                    .iter()
                    .find(|&&(x, y, _)| x == a && y == b)
                    .expect("layout")
                    .2;
                let cell = doff + ii * wd(&aug_dst, b) + jj;
                let (o, sign) = dst_q.orbit_of[&n][cell];
                e.push((o, k, sign));
            }
        }
        components.insert(
            n,
            ExactMatrix::accumulate(
                Ring::Z,
                dst_q.representatives[&n].len(),
                src_q.representatives[&n].len(),
                e,
            ),
        );
    }
    let f = ChainMap::new(build_rp3(k_from)?, build_rp3(k_to)?, components)?;
    ensure_chain_map(&f)?;
    Ok(f)
}

/// Polygon half-sizes along the interval: slice `m` is `RP³(k_per_slice[m])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionProfile {
    pub k_per_slice: Vec<usize>,
}

impl ResolutionProfile {
    pub fn new(k_per_slice: Vec<usize>) -> Result<Self> {
        let p = ResolutionProfile { k_per_slice };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(k: usize, n: usize) -> Result<Self> {
        Self::new(vec![k; n + 1])
    }

    /// `k0, k0 + 1, …, k`, or `k0, k0` when `k == k0`.
    pub fn ramp(k0: usize, k: usize) -> Result<Self> {
        if k < k0 {
            return Err(Error::InvalidParameters(format!(
                "fine end {k} is below the coarse end {k0}"
            )));
        }
        let mut ks: Vec<usize> = (k0..=k).collect();
        if ks.len() == 1 {
            ks.push(k0);
        }
        Self::new(ks)
    }

    /// Number of interval segments.
    pub fn segments(&self) -> usize {
        self.k_per_slice.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        let ks = &self.k_per_slice;
        if ks.len() < 2 {
            return Err(Error::InvalidParameters(
                "profile needs at least two slices".into(),
            ));
        }
        if ks[0] < 2 {
            return Err(Error::InvalidParameters(format!(
                "profile starts at k={} < 2",
                ks[0]
            )));
        }
        if let Some(w) = ks.windows(2).find(|w| w[1] < w[0] || w[1] > w[0] + 1) {
            return Err(Error::InvalidParameters(format!(
                "profile step {} -> {} must be 0 or +1",
                w[0], w[1]
            )));
        }
        Ok(())
    }

    /// Parses `"2,2,3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let ks = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameters(format!("bad profile entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ks)
    }
}

fn copy_distinguished_to_slice0(
    out: &mut ChainComplex,
    slice: &ChainComplex,
    place: impl Fn(i32, usize) -> usize,
) {
    for name in ["rp1_cycle", "rp2_cycle", "dual_2cocycle"] {
        if let Some(ch) = slice.distinguished.get(name) {
            let support = ch.support.iter().map(|&i| place(ch.degree, i)).collect();
            out.distinguished
                .insert(name.into(), Chain::new(ch.degree, support));
        }
    }
}

/// `RP³(k) ⊗ I(N)`; distinguished chains are placed in the `m = 0` slice.
pub fn build_product(k: usize, n: usize) -> Result<ChainComplex> {
    if n == 0 {
        return Err(Error::InvalidParameters("product needs N >= 1".into()));
    }
    let rp = build_rp3(k)?;
    let interval = build_interval(n);
    let mut c = tensor_product(&rp, &interval)?;
    c.name = format!("RP3(k={k}) x I(N={n})");
    copy_distinguished_to_slice0(&mut c, &rp, |d, i| {
        tensor_index(&rp, &interval, d, i, 0, 0).expect("slice-0 cell")
    });
    c.provenance = Some(json!({"family": "product", "params": {"k": k, "N": n}}));
    Ok(c)
}

/// Iterated mapping cylinders of collapse maps, fine slice `m + 1` onto coarse slice `m`,
/// so the coarse end is slice 0. Distinguished chains are those of the slice-0 copy.
pub fn build_telescope(profile: &ResolutionProfile) -> Result<ChainComplex> {
    profile.validate()?;
    let ks = &profile.k_per_slice;
    let maps = ks
        .windows(2)
        .map(|w| build_collapse_map(w[1], w[0]))
        .collect::<Result<Vec<_>>>()?;
    let mut c = telescope(&maps)?;
    let label: Vec<String> = ks.iter().map(ToString::to_string).collect();
    c.name = format!("telescope(k={})", label.join(","));
    let coarse = &maps[0].target;
    // slice 0 occupies the first block of every degree
    copy_distinguished_to_slice0(&mut c, coarse, |_, i| i);
    c.provenance = Some(json!({"family": "telescope", "params": {"profile": ks}}));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{homology, validate_chain_map, validate_complex};

    #[test]
    fn interval_basics() {
        let i1 = build_interval(1);
        assert_eq!(i1.dims(), &[2, 1]);
        assert_eq!(i1.boundary(1).to_dense(), vec![vec![-1], vec![1]]);
        assert_eq!(build_interval(0).dims(), &[1]);
    }

    #[test]
    fn polygon_involution_is_free() {
        let p = build_polygon(6).unwrap();
        assert!(p.involution.is_free());
        assert!(build_polygon(5).is_err());
        assert_eq!(homology(&p.complex).unwrap().betti_z(), Some(vec![1, 1]));
    }

    #[test]
    fn join_dims() {
        let p = build_polygon(4).unwrap();
        let s = join_spheres(&p, &p).unwrap();
        assert_eq!(s.complex.dims(), &[8, 24, 32, 16]);
        assert!(s.involution.is_free());
    }

    #[test]
    fn rp3_dims_and_distinguished() {
        let c = build_rp3(2).unwrap();
        assert_eq!(c.dims(), &[4, 12, 16, 8]);
        assert_eq!(c.distinguished["rp1_cycle"].weight(), 2);
        assert_eq!(c.distinguished["rp2_cycle"].weight(), 4);
    }

    #[test]
    fn collapse_validates() {
        let f = build_collapse_map(3, 2).unwrap();
        assert!(validate_chain_map(&f).is_empty());
        assert!(build_collapse_map(4, 2).is_err());
    }

    #[test]
    fn telescope_profile_checks() {
        assert!(ResolutionProfile::new(vec![2, 4]).is_err());
        assert!(ResolutionProfile::new(vec![3, 2]).is_err());
        assert!(ResolutionProfile::new(vec![1, 1]).is_err());
        assert_eq!(
            ResolutionProfile::ramp(2, 2).unwrap().k_per_slice,
            vec![2, 2]
        );
        assert_eq!(
            ResolutionProfile::ramp(2, 4).unwrap().k_per_slice,
            vec![2, 3, 4]
        );
        assert!(ResolutionProfile::ramp(3, 2).is_err());
        let t = build_telescope(&ResolutionProfile::new(vec![2, 3]).unwrap()).unwrap();
        assert!(validate_complex(&t).is_empty());
    }

    #[test]
    fn rp3_homology_matches_minimal_model() {
        for k in 2..=4 {
            let h = homology(&build_rp3(k).unwrap()).unwrap();
            let m = homology(&rp3_minimal()).unwrap();
            assert_eq!(h, m, "k={k}");
            assert_eq!(h.betti_z2(), vec![1, 1, 1, 1]);
            assert_eq!(h.torsion().unwrap(), vec![vec![], vec![2], vec![], vec![]]);
        }
    }

    #[test]
    fn telescope_and_product_homology() {
        let t = build_telescope(&ResolutionProfile::new(vec![2, 3, 3]).unwrap()).unwrap();
        assert_eq!(homology(&t).unwrap().betti_z2(), vec![1, 1, 1, 1, 0]);
        let p = build_product(2, 2).unwrap();
        assert_eq!(homology(&p).unwrap().betti_z2(), vec![1, 1, 1, 1, 0]);
    }
}

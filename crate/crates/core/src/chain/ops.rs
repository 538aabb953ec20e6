//! Constructions on complexes: tensor products, mapping cylinders and telescopes.

use std::collections::BTreeMap;

use crate::chain::complex::{ChainComplex, SliceTag};
use crate::chain::map::{ensure_chain_map, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Ring};

/// Triplet accumulator for block matrices.
struct Blocks {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl Blocks {
    fn new(ring: Ring, rows: usize, cols: usize) -> Self {
        Blocks {
            ring,
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    fn put(&mut self, r0: usize, c0: usize, m: &ExactMatrix, sign: i64) {
        self.entries
            .extend(m.entries().map(|(r, c, v)| (r0 + r, c0 + c, sign * v)));
    }

    fn minus_identity(&mut self, r0: usize, c0: usize, n: usize) {
        self.entries.extend((0..n).map(|i| (r0 + i, c0 + i, -1)));
    }

    fn finish(self) -> ExactMatrix {
        ExactMatrix::accumulate(self.ring, self.rows, self.cols, self.entries)
    }
}

/// Layout of `(A ⊗ B)_n`: blocks `(p, q)` with `p` descending, `a`-major inside a block.
struct TensorLayout {
    blocks: BTreeMap<i32, Vec<(i32, i32, usize)>>,
    dims: BTreeMap<i32, usize>,
}

impl TensorLayout {
    fn new(a: &ChainComplex, b: &ChainComplex) -> Self {
        let mut blocks = BTreeMap::new();
        let mut dims = BTreeMap::new();
        for n in a.d_min() + b.d_min()..=a.d_max() + b.d_max() {
            let mut off = 0;
            let mut list = Vec::new();
            for p in a.degrees().rev() {
                let q = n - p;
                if !b.contains_degree(q) {
                    continue;
                }
                list.push((p, q, off));
                off += a.dim(p) * b.dim(q);
            }
            blocks.insert(n, list);
            dims.insert(n, off);
        }
        TensorLayout { blocks, dims }
    }

    fn offset(&self, p: i32, q: i32) -> Option<usize> {
        self.blocks
            .get(&(p + q))?
            .iter()
            .find(|&&(bp, bq, _)| bp == p && bq == q)
            .map(|&(_, _, off)| off)
    }
}

/// Tensor product with `∂(a⊗b) = ∂a⊗b + (−1)^p a⊗∂b`.
///
/// Slice tags of `b` are carried over, with `local` set to the index of `a`.
pub fn tensor_product(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch {
            op: "tensor_product",
            left: a.ring(),
            right: b.ring(),
        });
    }
    let ring = a.ring();
    let lay = TensorLayout::new(a, b);
    let d_min = a.d_min() + b.d_min();
    let d_max = a.d_max() + b.d_max();
    let dims: Vec<usize> = (d_min..=d_max).map(|n| lay.dims[&n]).collect();
    let mut boundaries = Vec::new();
    for n in d_min + 1..=d_max {
        let mut m = Blocks::new(ring, lay.dims[&(n - 1)], lay.dims[&n]);
        for &(p, q, col_off) in &lay.blocks[&n] {
            let (nb, da, db) = (b.dim(q), a.boundary(p), b.boundary(q));
            // ∂a ⊗ b
            if let Some(row_off) = lay.offset(p - 1, q) {
                for (ra, ca, v) in da.entries() {
                    for j in 0..nb {
                        m.entries
                            .push((row_off + ra * nb + j, col_off + ca * nb + j, v));
                    }
                }
            }
            // (−1)^p a ⊗ ∂b
            if let Some(row_off) = lay.offset(p, q - 1) {
                let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                let nb_row = b.dim(q - 1);
                for i in 0..a.dim(p) {
                    for (rb, cb, v) in db.entries() {
                        m.entries.push((
                            row_off + i * nb_row + rb,
                            col_off + i * nb + cb,
                            sign * v,
                        ));
                    }
                }
            }
        }
        boundaries.push(m.finish());
    }
    let mut out = ChainComplex::new(
        format!("{} x {}", a.name, b.name),
        ring,
        d_min,
        dims,
        boundaries,
    )?;
    if !b.slices.is_empty() {
        for (&n, list) in &lay.blocks {
            let mut tags = Vec::with_capacity(lay.dims[&n]);
            for &(p, q, _) in list {
                for i in 0..a.dim(p) {
                    for j in 0..b.dim(q) {
                        let t = b.slice_of(q, j).ok_or_else(|| {
                            Error::InvalidComplex(format!(
                                "missing slice tag for cell {j} in degree {q}"
                            ))
                        })?;
                        tags.push(SliceTag { local: i, ..t });
                    }
                }
            }
            out.slices.insert(n, tags);
        }
    }
    Ok(out)
}

/// Index of the cell `a ⊗ b` in the tensor product.
pub fn tensor_index(
    a: &ChainComplex,
    b: &ChainComplex,
    p: i32,
    ia: usize,
    q: i32,
    ib: usize,
) -> Option<usize> {
    let lay = TensorLayout::new(a, b);
    Some(lay.offset(p, q)? + ia * b.dim(q) + ib)
}

/// Mapping cylinder and the inclusions of its ends.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: ChainComplex,
    pub source_inclusion: ChainMap,
    pub target_inclusion: ChainMap,
}

/// `Cyl_n = S_n ⊕ S_{n−1} ⊕ T_n` with `∂(c, c′, t) = (∂c − c′, −∂c′, f(c′) + ∂t)`.
pub fn mapping_cylinder(f: &ChainMap) -> Result<Cylinder> {
    ensure_chain_map(f)?;
    let (s, t) = (&f.source, &f.target);
    let ring = s.ring();
    let d_min = s.d_min().min(t.d_min());
    let d_max = (s.d_max() + 1).max(t.d_max());
    let dim = |n: i32| s.dim(n) + s.dim(n - 1) + t.dim(n);
    let dims: Vec<usize> = (d_min..=d_max).map(dim).collect();
    let mut boundaries = Vec::new();
    for n in d_min + 1..=d_max {
        let mut m = Blocks::new(ring, dim(n - 1), dim(n));
        let (rs1, rs2) = (0, s.dim(n - 1));
        let rt = s.dim(n - 1) + s.dim(n - 2);
        let (cs, cs1, ct) = (0, s.dim(n), s.dim(n) + s.dim(n - 1));
        m.put(rs1, cs, &s.boundary(n), 1);
        m.minus_identity(rs1, cs1, s.dim(n - 1));
        m.put(rs2, cs1, &s.boundary(n - 1), -1);
        m.put(rt, cs1, &f.component(n - 1), 1);
        m.put(rt, ct, &t.boundary(n), 1);
        boundaries.push(m.finish());
    }
    let complex = ChainComplex::new(
        format!("cyl({} -> {})", s.name, t.name),
        ring,
        d_min,
        dims,
        boundaries,
    )?;
    let mut inc_s = BTreeMap::new();
    let mut inc_t = BTreeMap::new();
    for n in d_min..=d_max {
        let rows = dim(n);
        inc_s.insert(
            n,
            ExactMatrix::accumulate(ring, rows, s.dim(n), (0..s.dim(n)).map(|i| (i, i, 1))),
        );
        let off = s.dim(n) + s.dim(n - 1);
        inc_t.insert(
            n,
            ExactMatrix::accumulate(ring, rows, t.dim(n), (0..t.dim(n)).map(|i| (off + i, i, 1))),
        );
    }
    Ok(Cylinder {
        source_inclusion: ChainMap::new(s.clone(), complex.clone(), inc_s)?,
        target_inclusion: ChainMap::new(t.clone(), complex.clone(), inc_t)?,
        complex,
    })
}

/// Telescope of maps `f_m : X_{m+1} → X_m`, gluing consecutive cylinders along the
/// shared slices.
///
/// Degree-`n` cells are ordered `[X_0, …, X_N, conn_0, …, conn_{N−1}]` where
/// `conn_m` holds a copy of `X_{m+1}` in degree `n − 1`. A connector `c′` has
/// boundary `−c′ (slice m+1) − conn_m(∂c′) + f_m(c′) (slice m)`.
pub fn telescope(maps: &[ChainMap]) -> Result<ChainComplex> {
    if maps.is_empty() {
        return Err(Error::InvalidParameters(
            "telescope needs at least one map".into(),
        ));
    }
    for f in maps {
        ensure_chain_map(f)?;
    }
    let mut slices: Vec<&ChainComplex> = vec![&maps[0].target];
    for (m, f) in maps.iter().enumerate() {
        if m > 0 {
            let prev = &maps[m - 1].source;
            if prev.dims() != f.target.dims() || prev.boundaries() != f.target.boundaries() {
                return Err(Error::InvalidChainMap(format!(
                    "map {m} target differs from map {} source",
                    m - 1
                )));
            }
        }
        slices.push(&f.source);
    }
    let ring = slices[0].ring();
    let d_min = slices.iter().map(|x| x.d_min()).min().unwrap();
    let d_max = slices.iter().map(|x| x.d_max() + 1).max().unwrap();
    // offsets[n][i]: start of block i, slices first then connectors
    let offsets = |n: i32| -> (Vec<usize>, Vec<usize>, usize) {
        let mut off = 0;
        let mut so = Vec::new();
        for x in &slices {
            so.push(off);
            off += x.dim(n);
        }
        let mut co = Vec::new();
        for x in &slices[1..] {
            co.push(off);
            off += x.dim(n - 1);
        }
        (so, co, off)
    };
    let mut dims = Vec::new();
    let mut boundaries = Vec::new();
    let mut tags = BTreeMap::new();
    for n in d_min..=d_max {
        let (so, co, total) = offsets(n);
        dims.push(total);
        let mut t = Vec::with_capacity(total);
        for (m, x) in slices.iter().enumerate() {
            t.extend((0..x.dim(n)).map(|local| SliceTag {
                m,
                connector: false,
                local,
            }));
        }
        for (m, x) in slices[1..].iter().enumerate() {
            t.extend((0..x.dim(n - 1)).map(|local| SliceTag {
                m,
                connector: true,
                local,
            }));
        }
        tags.insert(n, t);
        if n == d_min {
            continue;
        }
        let (rso, rco, rtotal) = offsets(n - 1);
        let mut b = Blocks::new(ring, rtotal, total);
        for (m, x) in slices.iter().enumerate() {
            b.put(rso[m], so[m], &x.boundary(n), 1);
        }
        for (m, f) in maps.iter().enumerate() {
            let x = slices[m + 1];
            b.minus_identity(rso[m + 1], co[m], x.dim(n - 1));
            b.put(rco[m], co[m], &x.boundary(n - 1), -1);
            b.put(rso[m], co[m], &f.component(n - 1), 1);
        }
        boundaries.push(b.finish());
    }
    let name = format!(
        "telescope({})",
        slices
            .iter()
            .map(|x| x.name.as_str())
            .collect::<Vec<_>>()
            .join(" <- ")
    );
    let mut out = ChainComplex::new(name, ring, d_min, dims, boundaries)?;
    out.slices = tags;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::complex::validate_complex;
    use crate::chain::homology::homology;

    fn interval(n: usize) -> ChainComplex {
        let d = ExactMatrix::accumulate(
            Ring::Z,
            n + 1,
            n,
            (0..n).flat_map(|i| [(i, i, -1), (i + 1, i, 1)]),
        );
        ChainComplex::new("I", Ring::Z, 0, vec![n + 1, n], vec![d]).unwrap()
    }

    #[test]
    fn square_is_contractible() {
        let sq = tensor_product(&interval(1), &interval(1)).unwrap();
        assert_eq!(sq.dims(), &[4, 4, 1]);
        assert!(validate_complex(&sq).is_empty());
        let h = homology(&sq).unwrap();
        assert_eq!(h.betti_z2(), vec![1, 0, 0]);
        assert_eq!(h.betti_z(), Some(vec![1, 0, 0]));
    }

    #[test]
    fn identity_cylinder_of_interval() {
        let i1 = interval(1);
        let cyl = mapping_cylinder(&ChainMap::identity(&i1)).unwrap();
        assert!(validate_complex(&cyl.complex).is_empty());
        assert_eq!(
            homology(&cyl.complex).unwrap().betti_z(),
            Some(vec![1, 0, 0])
        );
    }

    #[test]
    fn telescope_of_identities_is_valid() {
        let i1 = interval(1);
        let id = ChainMap::identity(&i1);
        let t = telescope(&[id.clone(), id]).unwrap();
        assert!(validate_complex(&t).is_empty());
        assert_eq!(t.dim(0), 6);
        assert_eq!(homology(&t).unwrap().betti_z(), Some(vec![1, 0, 0]));
        assert_eq!(t.slice_cells(0, 2), vec![4, 5]);
    }
}

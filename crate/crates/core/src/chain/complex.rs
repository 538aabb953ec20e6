use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::gf2::{self, AffineSolution, Gf2Vec};
use crate::linalg::{ExactMatrix, Ring};

/// Position of a cell along an interval direction.
///
/// Slice cells (`connector == false`) are copies of a cross-section at position `m`;
/// connector cells join slice `m` to slice `m + 1`. `local` is the index of the
/// underlying cross-section cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SliceTag {
    pub m: usize,
    pub connector: bool,
    pub local: usize,
}

/// A named Z2 chain: a set of cells in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub degree: i32,
    pub support: Vec<usize>,
}

impl Chain {
    pub fn new(degree: i32, mut support: Vec<usize>) -> Self {
        support.sort_unstable();
        support.dedup();
        Chain { degree, support }
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn to_vec(&self, len: usize) -> Gf2Vec {
        Gf2Vec::from_support(len, &self.support)
    }
}

/// One failed invariant found by validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: i32,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {}: {}", self.degree, self.message)
    }
}

/// Graded chain complex with boundaries `∂_d : C_d → C_{d−1}` for `d_min < d ≤ d_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    pub name: String,
    ring: Ring,
    d_min: i32,
    dims: Vec<usize>,
    boundaries: Vec<ExactMatrix>,
    pub labels: BTreeMap<i32, Vec<String>>,
    pub distinguished: BTreeMap<String, Chain>,
    pub slices: BTreeMap<i32, Vec<SliceTag>>,
    pub provenance: Option<serde_json::Value>,
}

impl ChainComplex {
    /// `boundaries[i]` is `∂_{d_min + 1 + i}`. Shapes and rings are checked here;
    /// `∂² = 0` is left to [`validate_complex`].
    pub fn new(
        name: impl Into<String>,
        ring: Ring,
        d_min: i32,
        dims: Vec<usize>,
        boundaries: Vec<ExactMatrix>,
    ) -> Result<Self> {
        if !matches!(ring, Ring::Z2 | Ring::Z) {
            return Err(Error::InvalidComplex(format!("unsupported ring {ring}")));
        }
        if dims.is_empty() {
            return Err(Error::InvalidComplex("no degrees".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex(format!(
                "{} degrees need {} boundaries, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            let d = d_min + 1 + i as i32;
            if b.ring() != ring {
                return Err(Error::InvalidComplex(format!(
                    "boundary {d} over {} in a complex over {ring}",
                    b.ring()
                )));
            }
            if b.shape() != (dims[i], dims[i + 1]) {
                return Err(Error::InvalidComplex(format!(
                    "boundary {d} has shape {:?}, expected {:?}",
                    b.shape(),
                    (dims[i], dims[i + 1])
                )));
            }
        }
        Ok(ChainComplex {
            name: name.into(),
            ring,
            d_min,
            dims,
            boundaries,
            labels: BTreeMap::new(),
            distinguished: BTreeMap::new(),
            slices: BTreeMap::new(),
            provenance: None,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn d_min(&self) -> i32 {
        self.d_min
    }

    pub fn d_max(&self) -> i32 {
        self.d_min + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.d_min..=self.d_max()
    }

    pub fn contains_degree(&self, d: i32) -> bool {
        self.degrees().contains(&d)
    }

    /// Cell count in degree `d`; zero outside the range.
    pub fn dim(&self, d: i32) -> usize {
        if self.contains_degree(d) {
            self.dims[(d - self.d_min) as usize]
        } else {
            0
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `∂_d`, or a zero matrix of the right shape outside the stored range.
    pub fn boundary(&self, d: i32) -> Cow<'_, ExactMatrix> {
        if d > self.d_min && d <= self.d_max() {
            Cow::Borrowed(&self.boundaries[(d - self.d_min - 1) as usize])
        } else {
            Cow::Owned(ExactMatrix::zeros(self.ring, self.dim(d - 1), self.dim(d)))
        }
    }

    pub fn boundaries(&self) -> &[ExactMatrix] {
        &self.boundaries
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(d) as i64)
            .sum()
    }

    pub fn with_distinguished(mut self, name: impl Into<String>, chain: Chain) -> Self {
        self.distinguished.insert(name.into(), chain);
        self
    }

    pub fn distinguished_chain(&self, name: &str) -> Result<&Chain> {
        self.distinguished
            .get(name)
            .ok_or_else(|| Error::Missing(format!("distinguished chain {name:?} in {}", self.name)))
    }

    /// Slice tag of a cell, if slice metadata is present.
    pub fn slice_of(&self, d: i32, cell: usize) -> Option<SliceTag> {
        self.slices.get(&d).and_then(|v| v.get(cell)).copied()
    }

    /// Cells of degree `d` in slice `m` (not connectors), ordered by local index.
    pub fn slice_cells(&self, d: i32, m: usize) -> Vec<usize> {
        let Some(tags) = self.slices.get(&d) else {
            return Vec::new();
        };
        let mut cells: Vec<(usize, usize)> = tags
            .iter()
            .enumerate()
            .filter(|(_, t)| t.m == m && !t.connector)
            .map(|(i, t)| (t.local, i))
            .collect();
        cells.sort_unstable();
        cells.into_iter().map(|(_, i)| i).collect()
    }

    /// Number of slice positions recorded in the metadata.
    pub fn slice_count(&self) -> usize {
        self.slices
            .values()
            .flatten()
            .filter(|t| !t.connector)
            .map(|t| t.m + 1)
            .max()
            .unwrap_or(0)
    }

    /// Returns a copy with every boundary replaced.
    pub(crate) fn map_boundaries(
        &self,
        ring: Ring,
        f: impl Fn(&ExactMatrix) -> ExactMatrix,
    ) -> Result<ChainComplex> {
        let mut out = ChainComplex::new(
            self.name.clone(),
            ring,
            self.d_min,
            self.dims.clone(),
            self.boundaries.iter().map(f).collect(),
        )?;
        out.labels = self.labels.clone();
        out.distinguished = self.distinguished.clone();
        out.slices = self.slices.clone();
        out.provenance = self.provenance.clone();
        Ok(out)
    }
}

/// Checks `∂_{d−1} ∂_d = 0`, metadata lengths and distinguished supports.
pub fn validate_complex(c: &ChainComplex) -> Vec<Violation> {
    let mut out = Vec::new();
    for d in c.d_min() + 2..=c.d_max() {
        match c.boundary(d - 1).mat_mul(&c.boundary(d)) {
            Ok(p) => {
                if let Some((r, col, v)) = p.entries().next() {
                    out.push(Violation {
                        degree: d,
                        message: format!(
                            "boundary squared nonzero: entry ({r}, {col}) = {v} ({} nonzero)",
                            p.nnz()
                        ),
                    });
                }
            }
            Err(e) => out.push(Violation {
                degree: d,
                message: e.to_string(),
            }),
        }
    }
    for (name, chain) in &c.distinguished {
        let n = c.dim(chain.degree);
        if !c.contains_degree(chain.degree) {
            out.push(Violation {
                degree: chain.degree,
                message: format!("distinguished {name:?} in a missing degree"),
            });
        } else if let Some(&i) = chain.support.iter().find(|&&i| i >= n) {
            out.push(Violation {
                degree: chain.degree,
                message: format!("distinguished {name:?} has cell {i} out of range {n}"),
            });
        }
    }
    for (&d, labels) in &c.labels {
        if labels.len() != c.dim(d) {
            out.push(Violation {
                degree: d,
                message: format!("{} labels for {} cells", labels.len(), c.dim(d)),
            });
        }
    }
    for (&d, tags) in &c.slices {
        if tags.len() != c.dim(d) {
            out.push(Violation {
                degree: d,
                message: format!("{} slice tags for {} cells", tags.len(), c.dim(d)),
            });
        }
    }
    out
}

/// Like [`validate_complex`], and additionally checks that every boundary agrees
/// mod 2 with the boundary of `reference`.
pub fn validate_against(c: &ChainComplex, reference: &ChainComplex) -> Vec<Violation> {
    let mut out = validate_complex(c);
    if c.degrees() != reference.degrees() {
        out.push(Violation {
            degree: c.d_min(),
            message: format!(
                "degree range {:?} differs from reference {:?}",
                c.degrees(),
                reference.degrees()
            ),
        });
        return out;
    }
    for d in c.d_min() + 1..=c.d_max() {
        let (a, b) = (c.boundary(d).to_z2(), reference.boundary(d).to_z2());
        if a != b {
            out.push(Violation {
                degree: d,
                message: "boundary differs mod 2 from the reference".into(),
            });
        }
    }
    out
}

/// Plain error form of [`validate_complex`].
pub fn ensure_valid(c: &ChainComplex) -> Result<()> {
    let v = validate_complex(c);
    if v.is_empty() {
        Ok(())
    } else {
        let msg: Vec<String> = v.iter().map(ToString::to_string).collect();
        Err(Error::InvalidComplex(format!(
            "{}: {}",
            c.name,
            msg.join("; ")
        )))
    }
}

/// Entrywise reduction of an integer complex to Z2.
pub fn reduce_complex_mod2(c: &ChainComplex) -> Result<ChainComplex> {
    if c.ring() == Ring::Z2 {
        return Ok(c.clone());
    }
    c.map_boundaries(Ring::Z2, ExactMatrix::to_z2)
}

fn check_chain(c: &ChainComplex, chain: &Chain) -> Result<()> {
    if !c.contains_degree(chain.degree) {
        return Err(Error::InvalidParameters(format!(
            "degree {} outside {:?}",
            chain.degree,
            c.degrees()
        )));
    }
    if let Some(&i) = chain.support.iter().find(|&&i| i >= c.dim(chain.degree)) {
        return Err(Error::InvalidParameters(format!(
            "cell {i} out of range in degree {}",
            chain.degree
        )));
    }
    Ok(())
}

/// Z2 boundary of a chain, as a support vector in degree `degree − 1`.
pub fn boundary_of(c: &ChainComplex, chain: &Chain) -> Result<Gf2Vec> {
    check_chain(c, chain)?;
    let b = c.boundary(chain.degree).to_z2();
    Ok(gf2::mul_vec(&b, &chain.to_vec(c.dim(chain.degree))))
}

/// True when the chain has zero boundary over Z2.
pub fn is_cycle(c: &ChainComplex, chain: &Chain) -> Result<bool> {
    Ok(boundary_of(c, chain)?.is_zero())
}

/// Over Z2: `Some(witness)` with `∂ witness = chain` when the chain is a boundary.
pub fn is_boundary(c: &ChainComplex, chain: &Chain) -> Result<Option<Gf2Vec>> {
    check_chain(c, chain)?;
    let d = chain.degree;
    let b = c.boundary(d + 1).to_z2();
    match gf2::solve_affine_z2(&b, &chain.to_vec(c.dim(d)))? {
        AffineSolution::Consistent { particular, .. } => Ok(Some(particular)),
        AffineSolution::Inconsistent => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn shape_errors() {
        let b = ExactMatrix::zeros(Ring::Z, 2, 2);
        assert!(ChainComplex::new("x", Ring::Z, 0, vec![1, 2], vec![b.clone()]).is_err());
        assert!(ChainComplex::new("x", Ring::Z, 0, vec![2, 2], vec![]).is_err());
        assert!(
            ChainComplex::new("x", Ring::Z4, 0, vec![2, 2], vec![b.with_ring(Ring::Z4)]).is_err()
        );
    }

    #[test]
    fn injected_mismatch_reported_at_degree_two() {
        let d1 = ExactMatrix::from_dense(Ring::Z, &[vec![-1, -1], vec![1, 1]]);
        let d2 = ExactMatrix::from_dense(Ring::Z, &[vec![1], vec![1]]);
        let c = ChainComplex::new("bad", Ring::Z, 0, vec![2, 2, 1], vec![d1, d2]).unwrap();
        let v = validate_complex(&c);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].degree, 2);
        assert!(validate_complex(&interval(3)).is_empty());
    }

    #[test]
    fn cycles_and_boundaries() {
        let c = interval(2);
        let endpoint_pair = Chain::new(0, vec![0, 2]);
        assert!(is_cycle(&c, &endpoint_pair).unwrap());
        let w = is_boundary(&c, &endpoint_pair).unwrap().unwrap();
        assert_eq!(w.support(), vec![0, 1]);
        let point = Chain::new(0, vec![1]);
        assert!(is_boundary(&c, &point).unwrap().is_none());
        let zero = Chain::new(1, vec![]);
        assert!(is_cycle(&c, &zero).unwrap());
        assert!(is_boundary(&c, &zero).unwrap().is_some());
        assert!(is_cycle(&c, &Chain::new(5, vec![])).is_err());
    }

    #[test]
    fn mod2_reduction_keeps_support() {
        let c = interval(3);
        let r = reduce_complex_mod2(&c).unwrap();
        assert_eq!(r.ring(), Ring::Z2);
        assert_eq!(r.boundary(1).nnz(), c.boundary(1).nnz());
        assert!(validate_complex(&r).is_empty());
    }
}

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::chain::complex::{ChainComplex, Violation};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

/// Chain map `f : source → target` with one component per degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    components: BTreeMap<i32, ExactMatrix>,
}

impl ChainMap {
    /// Components outside the map are taken as zero. Shapes and rings are checked.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: BTreeMap<i32, ExactMatrix>,
    ) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::InvalidChainMap(format!(
                "source over {} but target over {}",
                source.ring(),
                target.ring()
            )));
        }
        for (&d, m) in &components {
            if m.ring() != source.ring() {
                return Err(Error::InvalidChainMap(format!(
                    "component {d} over {}",
                    m.ring()
                )));
            }
            if m.shape() != (target.dim(d), source.dim(d)) {
                return Err(Error::InvalidChainMap(format!(
                    "component {d} has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.dim(d), source.dim(d))
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = c
            .degrees()
            .map(|d| (d, ExactMatrix::identity(c.ring(), c.dim(d))))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components,
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Result<Self> {
        Self::new(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn component(&self, d: i32) -> Cow<'_, ExactMatrix> {
        match self.components.get(&d) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(ExactMatrix::zeros(
                self.source.ring(),
                self.target.dim(d),
                self.source.dim(d),
            )),
        }
    }

    /// Degrees where either complex has cells.
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        let lo = self.source.d_min().min(self.target.d_min());
        let hi = self.source.d_max().max(self.target.d_max());
        lo..=hi
    }
}

/// Checks `∂^T_d f_d = f_{d−1} ∂^S_d` in every degree.
pub fn validate_chain_map(f: &ChainMap) -> Vec<Violation> {
    let mut out = Vec::new();
    for d in f.degrees() {
        let lhs = f.target.boundary(d).mat_mul(&f.component(d));
        let rhs = f.component(d - 1).mat_mul(&f.source.boundary(d));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                if l != r {
                    let diff = l.add(&r.neg()).expect("same shape");
                    let (row, col, v) = diff.entries().next().expect("nonzero difference");
                    out.push(Violation {
                        degree: d,
                        message: format!(
                            "map does not commute with the boundary: entry ({row}, {col}) differs by {v}"
                        ),
                    });
                }
            }
            (Err(e), _) | (_, Err(e)) => out.push(Violation {
                degree: d,
                message: e.to_string(),
            }),
        }
    }
    out
}

pub fn ensure_chain_map(f: &ChainMap) -> Result<()> {
    let v = validate_chain_map(f);
    if v.is_empty() {
        Ok(())
    } else {
        let msg: Vec<String> = v.iter().map(ToString::to_string).collect();
        Err(Error::InvalidChainMap(msg.join("; ")))
    }
}

/// Composite `g ∘ f`.
pub fn compose(g: &ChainMap, f: &ChainMap) -> Result<ChainMap> {
    if g.source.dims() != f.target.dims() || g.source.d_min() != f.target.d_min() {
        return Err(Error::InvalidChainMap(
            "composition of non-adjacent maps".into(),
        ));
    }
    let components = f
        .degrees()
        .map(|d| Ok((d, g.component(d).mat_mul(&f.component(d))?)))
        .collect::<Result<_>>()?;
    ChainMap::new(f.source.clone(), g.target.clone(), components)
}

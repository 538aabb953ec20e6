//! Minimum-weight representatives of homology and cohomology classes over Z2.
//!
//! The boundary space is put in reduced echelon form; a coset `r + B` is then
//! enumerated by subsets `S` of echelon rows in order of size. Each such element
//! has weight at least `|S|` on the pivot coordinates, so sizes at or above the
//! best weight found are never visited.

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::gf2::{self, rref_vectors, Backend, Echelon, Gf2Vec, Rref};
use crate::linalg::{nullspace_z2, ExactMatrix};

/// Which classes to minimize over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassConstraint {
    /// All nonzero classes.
    Nontrivial,
    /// The class of the given cycle.
    Coset(Gf2Vec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeight {
    pub chain: Gf2Vec,
    pub weight: usize,
    /// False when the budget ran out before the search was exhaustive.
    pub complete: bool,
    pub evaluated: u64,
}

pub const DEFAULT_MIN_WEIGHT_BUDGET: u64 = 1 << 24;

/// Largest number of independent classes enumerated under `Nontrivial`.
const MAX_CLASS_BITS: usize = 16;

struct Search<'a> {
    rref: &'a Rref,
    budget: u64,
    evaluated: u64,
    best: Option<Gf2Vec>,
    best_weight: usize,
    exhausted: bool,
}

impl Search<'_> {
    fn offer(&mut self, v: &Gf2Vec) {
        let w = v.weight();
        if w < self.best_weight {
            self.best_weight = w;
            self.best = Some(v.clone());
        }
    }

    fn coset(&mut self, r: &Gf2Vec) {
        let mut base = r.clone();
        for (row, &p) in self.rref.rows.iter().zip(&self.rref.pivots) {
            if base.get(p) {
                base.xor_assign(row);
            }
        }
        self.offer(&base);
        let s = self.rref.rows.len();
        let mut t = 1;
        while t < self.best_weight && t <= s && !self.exhausted {
            let mut cur = base.clone();
            self.subsets(0, t, &mut cur);
            t += 1;
        }
    }

    fn subsets(&mut self, start: usize, left: usize, cur: &mut Gf2Vec) {
        let s = self.rref.rows.len();
        for i in start..=s - left {
            if self.exhausted {
                return;
            }
            cur.xor_assign(&self.rref.rows[i]);
            if left == 1 {
                self.evaluated += 1;
                self.offer(cur);
                if self.evaluated >= self.budget {
                    self.exhausted = true;
                }
            } else {
                self.subsets(i + 1, left - 1, cur);
            }
            cur.xor_assign(&self.rref.rows[i]);
        }
    }
}

/// Core search: minimize over `ker d_out` minus `im d_in` (or a coset of `im d_in`).
fn minimize(
    d_out: &ExactMatrix,
    d_in: &ExactMatrix,
    constraint: &ClassConstraint,
    budget: u64,
) -> Result<MinWeight> {
    let n = d_in.rows();
    let columns: Vec<Gf2Vec> = d_in
        .columns()
        .into_iter()
        .map(|c| Gf2Vec::from_support(n, &c.iter().map(|&(r, _)| r).collect::<Vec<_>>()))
        .collect();
    let rref = rref_vectors(&columns, n, Backend::Dense);
    let boundaries = Echelon::from_vectors(n, &rref.rows);
    let reps: Vec<Gf2Vec> = match constraint {
        ClassConstraint::Coset(r) => {
            if r.len() != n {
                return Err(Error::InvalidParameters(format!(
                    "chain of length {} in a space of dimension {n}",
                    r.len()
                )));
            }
            if !gf2::mul_vec(d_out, r).is_zero() {
                return Err(Error::InvalidParameters(
                    "coset representative is not a cycle".into(),
                ));
            }
            if boundaries.contains(r) {
                return Err(Error::InvalidParameters(
                    "requested class is trivial".into(),
                ));
            }
            vec![r.clone()]
        }
        ClassConstraint::Nontrivial => {
            let mut span = boundaries.clone();
            let classes: Vec<Gf2Vec> = nullspace_z2(d_out)?
                .into_iter()
                .filter(|z| span.insert(z.clone()))
                .collect();
            if classes.is_empty() {
                return Err(Error::InvalidParameters(
                    "homology is trivial in this degree".into(),
                ));
            }
            if classes.len() > MAX_CLASS_BITS {
                return Err(Error::CapExceeded {
                    needed: classes.len(),
                    cap: MAX_CLASS_BITS,
                });
            }
            (1u32..1 << classes.len())
                .map(|mask| {
                    let mut v = Gf2Vec::zeros(n);
                    for (i, c) in classes.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            v.xor_assign(c);
                        }
                    }
                    v
                })
                .collect()
        }
    };
    let mut s = Search {
        rref: &rref,
        budget,
        evaluated: 0,
        best: None,
        best_weight: usize::MAX,
        exhausted: false,
    };
    for r in &reps {
        s.coset(r);
        if s.exhausted {
            break;
        }
    }
    let chain = s.best.expect("at least one coset visited");
    Ok(MinWeight {
        weight: chain.weight(),
        chain,
        complete: !s.exhausted,
        evaluated: s.evaluated,
    })
}

/// Minimum-weight Z2 cycle in degree `d` subject to `constraint`.
pub fn min_weight_cycle(
    c: &ChainComplex,
    d: i32,
    constraint: &ClassConstraint,
    budget: u64,
) -> Result<MinWeight> {
    if !c.contains_degree(d) {
        return Err(Error::InvalidParameters(format!(
            "degree {d} outside {:?}",
            c.degrees()
        )));
    }
    minimize(
        &c.boundary(d).to_z2(),
        &c.boundary(d + 1).to_z2(),
        constraint,
        budget,
    )
}

/// Minimum-weight Z2 cocycle in degree `d`: `δ = ∂ᵀ`.
pub fn min_weight_cocycle(
    c: &ChainComplex,
    d: i32,
    constraint: &ClassConstraint,
    budget: u64,
) -> Result<MinWeight> {
    if !c.contains_degree(d) {
        return Err(Error::InvalidParameters(format!(
            "degree {d} outside {:?}",
            c.degrees()
        )));
    }
    let out = c.boundary(d + 1).to_z2().transpose();
    let inc = c.boundary(d).to_z2().transpose();
    minimize(&out, &inc, constraint, budget)
}

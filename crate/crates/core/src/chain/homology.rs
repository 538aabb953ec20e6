use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::complex::ChainComplex;
use crate::error::Result;
use crate::linalg::{rank_z2, smith_normal_form, Ring};

/// Homology of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub degree: i32,
    pub betti_z2: usize,
    /// Free rank over Z; absent for complexes over Z2.
    pub betti_z: Option<usize>,
    /// Invariant factors greater than one; absent for complexes over Z2.
    pub torsion: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyReport {
    pub fn betti_z2(&self) -> Vec<usize> {
        self.degrees.iter().map(|h| h.betti_z2).collect()
    }

    pub fn betti_z(&self) -> Option<Vec<usize>> {
        self.degrees.iter().map(|h| h.betti_z).collect()
    }

    pub fn torsion(&self) -> Option<Vec<Vec<u64>>> {
        self.degrees.iter().map(|h| h.torsion.clone()).collect()
    }

    pub fn get(&self, d: i32) -> Option<&DegreeHomology> {
        self.degrees.iter().find(|h| h.degree == d)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees
            .iter()
            .all(|h| h.torsion.as_ref().is_none_or(Vec::is_empty))
    }

    /// Universal coefficients: `b₂(d) = b(d) + #even torsion in H_d + #even torsion in H_{d−1}`.
    /// Vacuously true for Z2 complexes.
    pub fn universal_coefficients_hold(&self) -> bool {
        let even = |h: &DegreeHomology| {
            h.torsion
                .as_ref()
                .map_or(0, |t| t.iter().filter(|&&f| f % 2 == 0).count())
        };
        self.degrees
            .iter()
            .enumerate()
            .all(|(i, h)| match h.betti_z {
                None => true,
                Some(b) => {
                    let below = if i > 0 { even(&self.degrees[i - 1]) } else { 0 };
                    h.betti_z2 == b + even(h) + below
                }
            })
    }

    pub fn euler_characteristic_z2(&self) -> i64 {
        alternating(self.degrees.iter().map(|h| (h.degree, h.betti_z2)))
    }

    pub fn euler_characteristic_z(&self) -> Option<i64> {
        let b = self.betti_z()?;
        Some(alternating(self.degrees.iter().map(|h| h.degree).zip(b)))
    }
}

fn alternating(it: impl Iterator<Item = (i32, usize)>) -> i64 {
    it.map(|(d, b)| {
        if d.rem_euclid(2) == 0 {
            b as i64
        } else {
            -(b as i64)
        }
    })
    .sum()
}

struct BoundaryData {
    rank_z2: usize,
    rank_z: Option<usize>,
    torsion: Option<Vec<u64>>,
}

/// Betti numbers over Z2 and, for integer complexes, Betti numbers and torsion over Z.
pub fn homology(c: &ChainComplex) -> Result<HomologyReport> {
    let ds: Vec<i32> = (c.d_min()..=c.d_max() + 1).collect();
    let data: Vec<BoundaryData> = ds
        .par_iter()
        .map(|&d| {
            let b = c.boundary(d);
            let rank2 = rank_z2(&b.to_z2())?;
            if c.ring() == Ring::Z {
                let s = smith_normal_form(&b)?;
                Ok(BoundaryData {
                    rank_z2: rank2,
                    rank_z: Some(s.rank),
                    torsion: Some(s.torsion_u64()),
                })
            } else {
                Ok(BoundaryData {
                    rank_z2: rank2,
                    rank_z: None,
                    torsion: None,
                })
            }
        })
        .collect::<Result<_>>()?;
    // data[i] describes ∂_{d_min + i}
    let degrees = c
        .degrees()
        .enumerate()
        .map(|(i, d)| {
            let (down, up) = (&data[i], &data[i + 1]);
            let n = c.dim(d);
            DegreeHomology {
                degree: d,
                betti_z2: n - down.rank_z2 - up.rank_z2,
                betti_z: down.rank_z.zip(up.rank_z).map(|(a, b)| n - a - b),
                torsion: up.torsion.clone(),
            }
        })
        .collect();
    Ok(HomologyReport { degrees })
}

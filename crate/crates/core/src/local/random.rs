//! Seeded random sited codes: a support-disjoint code scrambled by a random
//! local circuit, so a disentangling is known to exist.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::linalg::gf2::square;
use crate::linalg::{ExactMatrix, Gf2Vec, Ring};

use super::circuit::apply_moves;
use super::{Move, SitedCssCode};

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Vec<Gf2Vec> {
    loop {
        let m: Vec<Gf2Vec> = (0..n)
            .map(|_| Gf2Vec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>()))
            .collect();
        if square::inverse(&m).is_some() {
            return m;
        }
    }
}

fn random_subset(pool: &[usize], n: usize, rng: &mut ChaCha8Rng) -> Gf2Vec {
    loop {
        let sup: Vec<usize> = pool.iter().copied().filter(|_| rng.gen()).collect();
        if !sup.is_empty() {
            return Gf2Vec::from_support(n, &sup);
        }
    }
}

/// `sites · qubits_per_site` qubits, qubit `q` on site `q / qubits_per_site`.
/// Each window `{j, j+1}` receives `round(density · n)` stabilizers of each type,
/// where `n` counts the window's qubits of that type.
pub fn random_sited_instance(
    sites: usize,
    qubits_per_site: usize,
    density: f64,
    seed: u64,
) -> Result<SitedCssCode> {
    if sites == 0 || qubits_per_site == 0 {
        return Err(Error::InvalidParameters(
            "sites and qubits per site must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameters(format!(
            "density {density} asks for more stabilizers than qubits in a window"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nq = sites * qubits_per_site;
    let site_of = |q: usize| (q / qubits_per_site) as i64;
    let is_z: Vec<bool> = (0..nq).map(|_| rng.gen()).collect();
    let windows: Vec<usize> = (0..sites.saturating_sub(1).max(1)).collect();
    let (mut zs, mut xs) = (Vec::new(), Vec::new());
    for &lo in &windows {
        let in_window = |q: &usize| (lo..=lo + 1).contains(&(q / qubits_per_site));
        for (want_z, out) in [(true, &mut zs), (false, &mut xs)] {
            let pool: Vec<usize> = (0..nq)
                .filter(|q| in_window(q) && is_z[*q] == want_z)
                .collect();
            let count = (density * pool.len() as f64).round() as usize;
            for _ in 0..count {
                out.push(random_subset(&pool, nq, &mut rng));
            }
        }
    }
    let dz = ExactMatrix::accumulate(
        Ring::Z2,
        nq,
        zs.len(),
        zs.iter()
            .enumerate()
            .flat_map(|(i, v)| v.support().into_iter().map(move |q| (q, i, 1))),
    );
    let dq = ExactMatrix::accumulate(
        Ring::Z2,
        xs.len(),
        nq,
        xs.iter()
            .enumerate()
            .flat_map(|(a, v)| v.support().into_iter().map(move |q| (a, q, 1))),
    );
    let mut code = CssCode::new(dz, dq)?;

    // pair moves only on qubits no other pair's stabilizers touch
    let mut pairs_touching: Vec<Vec<usize>> = vec![Vec::new(); nq];
    for v in zs.iter().chain(&xs) {
        let sup = v.support();
        let lo = sup.iter().map(|&q| q / qubits_per_site).min().unwrap();
        let hi = sup.iter().map(|&q| q / qubits_per_site).max().unwrap();
        // a single-site stabilizer may join either neighbouring pair, but only one
        let pair = if hi == lo + 1 {
            Some(lo)
        } else {
            [lo.checked_sub(1), (lo + 1 < sites).then_some(lo)]
                .into_iter()
                .flatten()
                .collect::<Vec<_>>()
                .choose(&mut rng)
                .copied()
        };
        if let Some(p) = pair {
            for q in sup {
                pairs_touching[q].push(p);
            }
        }
    }
    let mut block: Vec<Option<usize>> = vec![None; nq];
    for q in 0..nq {
        let s = q / qubits_per_site;
        let mut options: Vec<usize> = [s.checked_sub(1), (s + 1 < sites).then_some(s)]
            .into_iter()
            .flatten()
            .filter(|lo| pairs_touching[q].iter().all(|p| p == lo))
            .collect();
        options.dedup();
        block[q] = options.choose(&mut rng).copied();
    }
    let mut pair_moves = Vec::new();
    for lo in 0..sites.saturating_sub(1) {
        let qubits: Vec<usize> = (0..nq).filter(|&q| block[q] == Some(lo)).collect();
        if qubits.len() > 1 {
            pair_moves.push(Move {
                sites: vec![lo as i64, lo as i64 + 1],
                matrix: random_invertible(qubits.len(), &mut rng),
                qubits,
            });
        }
    }
    let site_moves: Vec<Move> = (0..sites)
        .map(|s| Move {
            sites: vec![s as i64],
            qubits: (s * qubits_per_site..(s + 1) * qubits_per_site).collect(),
            matrix: random_invertible(qubits_per_site, &mut rng),
        })
        .collect();
    code = apply_moves(&code, &pair_moves.iter().collect::<Vec<_>>())?;
    code = apply_moves(&code, &site_moves.iter().collect::<Vec<_>>())?;
    code.provenance = Some(json!({
        "family": "random_sited",
        "params": {
            "sites": sites,
            "qubits_per_site": qubits_per_site,
            "density": density,
            "seed": seed,
        }
    }));
    SitedCssCode::new(code, (0..nq).map(site_of).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::{integer_lift_local, validate_sited, verify_local_lift};

    #[test]
    fn deterministic_valid_and_liftable() {
        for seed in 0..40 {
            let a = random_sited_instance(4, 3, 0.5, seed).unwrap();
            assert_eq!(a, random_sited_instance(4, 3, 0.5, seed).unwrap());
            assert!(validate_sited(&a).is_empty());
            let l = integer_lift_local(&a).unwrap();
            let rep = verify_local_lift(&a, &l.dz, &l.dq);
            assert!(rep.passed(), "seed {seed}: {:?}", rep.failures);
        }
    }

    #[test]
    fn density_zero_is_empty() {
        let s = random_sited_instance(3, 2, 0.0, 1).unwrap();
        assert_eq!((s.code.n_z(), s.code.n_x(), s.code.n_q()), (0, 0, 6));
        assert!(random_sited_instance(3, 2, 1.5, 1).is_err());
        assert!(random_sited_instance(0, 2, 0.5, 1).is_err());
    }
}

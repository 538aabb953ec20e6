//! Independent checks of derived values: closed forms, brute force and hand-built models.

mod common;

use liftlab::chain::homology;
use liftlab::lift::minweight::{min_weight_cycle, ClassConstraint};
use liftlab::lift::{
    ansatz_span_check, apply_correction, naive_lift, residual, verify_lift, CorrectionPair,
    LiftPair,
};
use liftlab::linalg::{ExactMatrix, Ring};
use liftlab::topo::{build_product, build_rp3, build_telescope, ResolutionProfile};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{dense01, minimal_rp3, random_code, rank2, signed_isomorphic_by_tags};

fn transpose(m: &[Vec<u8>], cols: usize) -> Vec<Vec<u8>> {
    (0..cols)
        .map(|c| m.iter().map(|r| r[c]).collect())
        .collect()
}

fn random_z2(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ExactMatrix {
    let entries: Vec<_> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .filter(|_| rng.gen_bool(0.4))
        .map(|(r, c)| (r, c, 1))
        .collect();
    ExactMatrix::accumulate(Ring::Z2, rows, cols, entries)
}

fn random_pair(rng: &mut ChaCha8Rng, nq: usize, nz: usize, nx: usize) -> CorrectionPair {
    CorrectionPair {
        delta_z: random_z2(rng, nq, nz),
        delta_q: random_z2(rng, nx, nq),
    }
}

#[test]
fn constant_telescope_is_product_up_to_signed_permutation() {
    for (k, n) in [(2, 1), (2, 2), (3, 1)] {
        let t = build_telescope(&ResolutionProfile::constant(k, n).unwrap()).unwrap();
        let p = build_product(k, n).unwrap();
        assert!(signed_isomorphic_by_tags(&t, &p), "k={k} N={n}");
    }
}

#[test]
fn rp3_homology_matches_minimal_model() {
    let reference = homology(&minimal_rp3()).unwrap();
    for k in 2..=5 {
        let h = homology(&build_rp3(k).unwrap()).unwrap();
        assert_eq!(h.betti_z2(), reference.betti_z2(), "k={k}");
        assert_eq!(h.betti_z(), reference.betti_z(), "k={k}");
        assert_eq!(h.torsion(), reference.torsion(), "k={k}");
    }
}

#[test]
fn rp3_one_systole_is_two() {
    for k in 2..=4 {
        let c = build_rp3(k).unwrap();
        let m = min_weight_cycle(&c, 1, &ClassConstraint::Nontrivial, 1 << 20).unwrap();
        assert!(m.complete, "k={k}");
        assert_eq!(m.weight, 2, "k={k}");
    }
}

// the distinguished representatives grow with k even though the 1-systole does not
#[test]
fn rp3_representatives_grow_with_k() {
    for k in 2..=5 {
        let c = build_rp3(k).unwrap();
        assert_eq!(c.distinguished["rp1_cycle"].weight(), k);
        assert_eq!(c.distinguished["rp2_cycle"].weight(), 2 * k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // dim solutions = n_X·n_Q − (n_X − r_Q)·r_Z, dim ansatz = r_Q·n_Q + n_X·r_Q − r_Q²
    #[test]
    fn ansatz_dimensions_match_closed_form(seed in any::<u64>(), nq in 1usize..9, nz in 0usize..5, nx in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_code(&mut rng, nq, nz, nx);
        let rz = rank2(&transpose(&dense01(&code.dz), nz));
        let rq = rank2(&dense01(&code.dq));
        let r = ansatz_span_check(&code, 1 << 12).unwrap();
        prop_assert_eq!(r.unknowns, nx * nq);
        prop_assert_eq!(r.dim_solutions, nx * nq - (nx - rq) * rz);
        prop_assert_eq!(r.dim_ansatz, rq * nq + nx * rq - rq * rq);
        prop_assert!(r.contained);
        prop_assert_eq!(r.equal, r.dim_solutions == r.dim_ansatz);
    }

    #[test]
    fn residual_is_affine(seed in any::<u64>(), nq in 1usize..8, nz in 1usize..5, nx in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_code(&mut rng, nq, nz, nx);
        let e = random_z2(&mut rng, nx, nz);
        let zero = ExactMatrix::zeros(Ring::Z2, nx, nz);
        let a = random_pair(&mut rng, nq, nz, nx);
        let b = random_pair(&mut rng, nq, nz, nx);
        let lhs = residual(&e, &code, &a).unwrap().add(&residual(&e, &code, &b).unwrap()).unwrap();
        let rhs = residual(&zero, &code, &a.add(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // zero residual exactly when the corrected lift squares to zero over Z4
    #[test]
    fn residual_zero_iff_corrected_lift_verifies(seed in any::<u64>(), nq in 1usize..8, nz in 1usize..5, nx in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_code(&mut rng, nq, nz, nx);
        // random signs on the naive lift give a nonzero error matrix
        let base = naive_lift(&code);
        let flip = |m: &ExactMatrix, rng: &mut ChaCha8Rng| {
            let entries: Vec<_> = m.entries().map(|(r, c, v)| (r, c, if rng.gen_bool(0.5) { -v } else { v })).collect();
            ExactMatrix::accumulate(m.ring(), m.rows(), m.cols(), entries)
        };
        let l = LiftPair { lz: flip(&base.lz, &mut rng), lq: flip(&base.lq, &mut rng), mode: base.mode };
        let e = liftlab::lift::error_matrix(&l).unwrap();
        let corr = random_pair(&mut rng, nq, nz, nx);
        let r0 = residual(&e, &code, &corr).unwrap().is_zero();
        prop_assert_eq!(r0, verify_lift(&apply_correction(&l, &corr).unwrap(), &code));
    }
}

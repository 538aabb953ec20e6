//! Search for sparse solutions of `dq·δ_Z + δ_Q·dz = E`.
//!
//! The search starts from a particular solution and moves by homogeneous solutions:
//!
//! * `(E_ij·dz, dq·E_ij)` for qubits `i, j`;
//! * `(0, E_ab·dq)` for X-stabilizers `a, b`;
//! * `(x·e_jᵀ, 0)` with `dq·x = 0`, and `(0, e_a·yᵀ)` with `yᵀ·dz = 0`;
//! * on small instances, kernel vectors outside the span of the above.
//!
//! Every probe is therefore a valid correction. The objective is the
//! lexicographic pair (largest row or column weight of `δ_Z` and `δ_Q`, total weight).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::css::{sparsity_stats, CssCode, SparsityStats};
use crate::error::{Error, Result};
use crate::linalg::gf2::{self, AffineSolution, Echelon, Gf2Vec};
use crate::linalg::{nullspace_z2, ExactMatrix, Ring};

use super::{
    apply_correction, error_matrix, explicit_solution, residual, verify_lift, CorrectionPair,
    LiftPair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    Greedy,
    Anneal,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Greedy => "greedy",
            Strategy::Anneal => "anneal",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "greedy" => Ok(Strategy::Greedy),
            "anneal" => Ok(Strategy::Anneal),
            _ => Err(Error::InvalidParameters(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Objective evaluations (exhaustive, greedy) or annealing steps.
    pub budget: u64,
    pub seed: Option<u64>,
    /// Kernel directions are only computed when the unknown count is at most this.
    pub kernel_cap: usize,
}

impl SearchConfig {
    pub fn new(strategy: Strategy, budget: u64, seed: Option<u64>) -> Self {
        SearchConfig {
            strategy,
            budget,
            seed,
            kernel_cap: 4096,
        }
    }
}

/// Lexicographic sparsity objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Objective {
    pub max_weight: usize,
    pub total_weight: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub iteration: u64,
    pub objective: Objective,
}

/// Result of a search over the solution set for a given `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub best: Objective,
    pub certificate: CorrectionPair,
    pub history: Vec<HistoryPoint>,
    pub complete: bool,
    pub iterations: u64,
    pub generators: usize,
    pub kernel_dim: Option<usize>,
}

/// Full report for a lift.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftReport {
    pub instance: serde_json::Value,
    pub strategy: Strategy,
    pub seed: Option<u64>,
    pub budget: u64,
    pub outcome: SearchOutcome,
    /// Weight of the residual of the certificate (zero for a valid correction).
    pub residual_weight: usize,
    pub verified: bool,
    pub delta_q_sparsity: SparsityStats,
    pub delta_z_sparsity: SparsityStats,
}

/// Bit layout of `(δ_Z, δ_Q)` and the weight lines each bit lies on.
#[derive(Clone, Copy, Debug)]
struct Layout {
    nq: usize,
    nz: usize,
    nx: usize,
}

impl Layout {
    fn of(code: &CssCode) -> Self {
        Layout {
            nq: code.n_q(),
            nz: code.n_z(),
            nx: code.n_x(),
        }
    }

    fn unknowns(&self) -> usize {
        self.nq * self.nz + self.nx * self.nq
    }

    fn z(&self, q: usize, z: usize) -> usize {
        q * self.nz + z
    }

    fn q(&self, x: usize, q: usize) -> usize {
        self.nq * self.nz + x * self.nq + q
    }

    fn lines(&self) -> usize {
        self.nq + self.nz + self.nx + self.nq
    }

    /// Row and column line of a bit.
    fn lines_of(&self, bit: usize) -> [usize; 2] {
        let zbits = self.nq * self.nz;
        if bit < zbits {
            let (q, z) = (bit / self.nz, bit % self.nz);
            [q, self.nq + z]
        } else {
            let b = bit - zbits;
            let (x, q) = (b / self.nq, b % self.nq);
            [self.nq + self.nz + x, self.nq + self.nz + self.nx + q]
        }
    }

    fn encode(&self, c: &CorrectionPair) -> Gf2Vec {
        let mut v = Gf2Vec::zeros(self.unknowns());
        for (q, z, _) in c.delta_z.entries() {
            v.set(self.z(q, z), true);
        }
        for (x, q, _) in c.delta_q.entries() {
            v.set(self.q(x, q), true);
        }
        v
    }

    fn decode(&self, v: &Gf2Vec) -> CorrectionPair {
        let zbits = self.nq * self.nz;
        let (mut ez, mut eq) = (Vec::new(), Vec::new());
        for b in v.support() {
            if b < zbits {
                ez.push((b / self.nz, b % self.nz, 1));
            } else {
                let r = b - zbits;
                eq.push((r / self.nq, r % self.nq, 1));
            }
        }
        CorrectionPair {
            delta_z: ExactMatrix::accumulate(Ring::Z2, self.nq, self.nz, ez),
            delta_q: ExactMatrix::accumulate(Ring::Z2, self.nx, self.nq, eq),
        }
    }

    /// The linear map `(δ_Z, δ_Q) ↦ dq·δ_Z + δ_Q·dz` as a matrix; equation `(x, z)` is row `x·n_Z + z`.
    fn system(&self, code: &CssCode) -> ExactMatrix {
        let mut e = Vec::new();
        for (x, q, _) in code.dq.entries() {
            for z in 0..self.nz {
                e.push((x * self.nz + z, self.z(q, z), 1));
            }
        }
        for (q, z, _) in code.dz.entries() {
            for x in 0..self.nx {
                e.push((x * self.nz + z, self.q(x, q), 1));
            }
        }
        ExactMatrix::accumulate(Ring::Z2, self.nx * self.nz, self.unknowns(), e)
    }
}

/// Current correction with incrementally maintained line weights.
#[derive(Clone, Debug)]
struct State {
    layout: Layout,
    bits: Gf2Vec,
    weight: Vec<usize>,
    hist: Vec<usize>,
    max: usize,
    total: usize,
}

impl State {
    fn new(layout: Layout, bits: Gf2Vec) -> Self {
        let longest = layout.nq.max(layout.nz).max(layout.nx);
        let mut s = State {
            layout,
            bits: Gf2Vec::zeros(layout.unknowns()),
            weight: vec![0; layout.lines()],
            hist: vec![0; longest + 2],
            max: 0,
            total: 0,
        };
        s.hist[0] = layout.lines();
        for b in bits.support() {
            s.flip(b);
        }
        s
    }

    fn flip(&mut self, bit: usize) {
        let on = !self.bits.get(bit);
        self.bits.set(bit, on);
        for l in self.layout.lines_of(bit) {
            let old = self.weight[l];
            let new = if on { old + 1 } else { old - 1 };
            self.weight[l] = new;
            self.hist[old] -= 1;
            self.hist[new] += 1;
            if new > self.max {
                self.max = new;
            }
        }
        while self.max > 0 && self.hist[self.max] == 0 {
            self.max -= 1;
        }
        if on {
            self.total += 1;
        } else {
            self.total -= 1;
        }
    }

    fn apply(&mut self, g: &[usize]) {
        for &b in g {
            self.flip(b);
        }
    }

    fn objective(&self) -> Objective {
        Objective {
            max_weight: self.max,
            total_weight: self.total,
        }
    }

    fn probe(&mut self, g: &[usize]) -> Objective {
        self.apply(g);
        let o = self.objective();
        self.apply(g);
        o
    }
}

fn push_generator(out: &mut Vec<Vec<usize>>, mut g: Vec<usize>) {
    g.sort_unstable();
    // XOR semantics: cancel repeated bits
    let mut dedup: Vec<usize> = Vec::with_capacity(g.len());
    for b in g {
        if dedup.last() == Some(&b) {
            dedup.pop();
        } else {
            dedup.push(b);
        }
    }
    if !dedup.is_empty() {
        out.push(dedup);
    }
}

/// Homogeneous solution directions, in a fixed order.
fn generators(
    code: &CssCode,
    lay: &Layout,
    with_kernel: bool,
) -> Result<(Vec<Vec<usize>>, Option<Vec<Gf2Vec>>)> {
    let mut gens = Vec::new();
    let dz_rows: Vec<&[(usize, i64)]> = (0..lay.nq).map(|q| code.dz.row(q)).collect();
    let dq_cols = code.dq.columns();
    for i in 0..lay.nq {
        for j in 0..lay.nq {
            let mut g: Vec<usize> = dz_rows[j].iter().map(|&(z, _)| lay.z(i, z)).collect();
            g.extend(dq_cols[i].iter().map(|&(x, _)| lay.q(x, j)));
            push_generator(&mut gens, g);
        }
    }
    for a in 0..lay.nx {
        for b in 0..lay.nx {
            push_generator(
                &mut gens,
                code.dq.row(b).iter().map(|&(q, _)| lay.q(a, q)).collect(),
            );
        }
    }
    if !with_kernel {
        return Ok((gens, None));
    }
    for x in nullspace_z2(&code.dq)? {
        let sup = x.support();
        for j in 0..lay.nz {
            push_generator(&mut gens, sup.iter().map(|&q| lay.z(q, j)).collect());
        }
    }
    for y in nullspace_z2(&code.dz.transpose())? {
        let sup = y.support();
        for a in 0..lay.nx {
            push_generator(&mut gens, sup.iter().map(|&q| lay.q(a, q)).collect());
        }
    }
    let kernel = nullspace_z2(&lay.system(code))?;
    let mut span = Echelon::new(lay.unknowns());
    for g in &gens {
        span.insert(Gf2Vec::from_support(lay.unknowns(), g));
    }
    for k in &kernel {
        if span.insert(k.clone()) {
            push_generator(&mut gens, k.support());
        }
    }
    Ok((gens, Some(kernel)))
}

/// A correction solving the equation for `e`: the explicit one when `E` lives on the
/// added columns, otherwise an affine solve.
pub fn particular_solution(code: &CssCode, e: &ExactMatrix) -> Result<CorrectionPair> {
    if e.is_zero() {
        return Ok(CorrectionPair::zero(code));
    }
    if !code.added_columns.is_empty() {
        if let Ok(c) = explicit_solution(code, e) {
            if residual(e, code, &c)?.is_zero() {
                return Ok(c);
            }
        }
    }
    let lay = Layout::of(code);
    let mut rhs = Gf2Vec::zeros(lay.nx * lay.nz);
    for (x, z, _) in e.entries() {
        rhs.set(x * lay.nz + z, true);
    }
    match gf2::solve_affine_z2(&lay.system(code), &rhs)? {
        AffineSolution::Consistent { particular, .. } => Ok(lay.decode(&particular)),
        AffineSolution::Inconsistent => Err(Error::Inconsistent(
            "the correction equation has no solution for this E".into(),
        )),
    }
}

struct Tracker {
    best: Objective,
    best_bits: Gf2Vec,
    history: Vec<HistoryPoint>,
}

impl Tracker {
    fn new(s: &State) -> Self {
        Tracker {
            best: s.objective(),
            best_bits: s.bits.clone(),
            history: vec![HistoryPoint {
                iteration: 0,
                objective: s.objective(),
            }],
        }
    }

    fn offer(&mut self, s: &State, iteration: u64) {
        let o = s.objective();
        if o < self.best {
            self.best = o;
            self.best_bits = s.bits.clone();
            self.history.push(HistoryPoint {
                iteration,
                objective: o,
            });
        }
    }
}

fn exhaustive(state: &mut State, basis: &[Vec<usize>], budget: u64) -> (Tracker, bool, u64) {
    let mut t = Tracker::new(state);
    let k = basis.len();
    let total: Option<u64> = 1u64.checked_shl(k as u32).filter(|_| k < 64);
    let steps = match total {
        Some(n) => (n - 1).min(budget),
        None => budget,
    };
    for i in 1..=steps {
        state.apply(&basis[i.trailing_zeros() as usize]);
        t.offer(state, i);
    }
    let complete = matches!(total, Some(n) if n - 1 <= budget);
    (t, complete, steps)
}

fn greedy(state: &mut State, gens: &[Vec<usize>], budget: u64) -> (Tracker, bool, u64) {
    let mut t = Tracker::new(state);
    let mut used = 0u64;
    let chunk = 256.max(gens.len() / rayon::current_num_threads().max(1) / 4);
    loop {
        let remaining = budget.saturating_sub(used) as usize;
        if remaining == 0 {
            return (t, false, used);
        }
        let span = &gens[..gens.len().min(remaining)];
        let current = state.objective();
        let best = span
            .par_chunks(chunk)
            .enumerate()
            .filter_map(|(ci, part)| {
                let mut local = state.clone();
                part.iter()
                    .enumerate()
                    .map(|(i, g)| (local.probe(g), ci * chunk + i))
                    .filter(|&(o, _)| o < current)
                    .min()
            })
            .min();
        used += span.len() as u64;
        match best {
            Some((_, idx)) => {
                state.apply(&gens[idx]);
                t.offer(state, used);
            }
            None => return (t, span.len() == gens.len(), used),
        }
    }
}

fn anneal(state: &mut State, gens: &[Vec<usize>], budget: u64, seed: u64) -> (Tracker, bool, u64) {
    let mut t = Tracker::new(state);
    if gens.is_empty() {
        return (t, true, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cost = |o: Objective| (o.max_weight * 16 + o.total_weight) as f64;
    let (t0, t1) = (2.0f64, 0.05f64);
    for step in 0..budget {
        let temp = t0 * (t1 / t0).powf(step as f64 / budget.max(1) as f64);
        let before = cost(state.objective());
        let g = &gens[rng.gen_range(0..gens.len())];
        state.apply(g);
        let delta = cost(state.objective()) - before;
        if delta <= 0.0 || rng.gen::<f64>() < (-delta / temp).exp() {
            t.offer(state, step + 1);
        } else {
            state.apply(g);
        }
    }
    (t, true, budget)
}

/// Searches the solutions of `dq·δ_Z + δ_Q·dz = e`.
pub fn search_corrections(
    code: &CssCode,
    e: &ExactMatrix,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    if e.shape() != (code.n_x(), code.n_z()) || e.ring() != Ring::Z2 {
        return Err(Error::InvalidParameters(format!(
            "E must be a {}x{} matrix over Z2",
            code.n_x(),
            code.n_z()
        )));
    }
    if cfg.strategy == Strategy::Anneal && cfg.seed.is_none() {
        return Err(Error::InvalidParameters("anneal needs a seed".into()));
    }
    let lay = Layout::of(code);
    let start = particular_solution(code, e)?;
    let mut state = State::new(lay, lay.encode(&start));
    let small = lay.unknowns() <= cfg.kernel_cap;
    let (gens, kernel) = match cfg.strategy {
        Strategy::Exhaustive => {
            if !small {
                return Err(Error::CapExceeded {
                    needed: lay.unknowns(),
                    cap: cfg.kernel_cap,
                });
            }
            let k = nullspace_z2(&lay.system(code))?;
            let basis = k.iter().map(Gf2Vec::support).collect();
            (basis, Some(k))
        }
        _ => generators(code, &lay, small)?,
    };
    let (tracker, complete, iterations) = match cfg.strategy {
        Strategy::Exhaustive => exhaustive(&mut state, &gens, cfg.budget),
        Strategy::Greedy => greedy(&mut state, &gens, cfg.budget),
        Strategy::Anneal => anneal(&mut state, &gens, cfg.budget, cfg.seed.unwrap_or(0)),
    };
    Ok(SearchOutcome {
        best: tracker.best,
        certificate: lay.decode(&tracker.best_bits),
        history: tracker.history,
        complete,
        iterations,
        generators: gens.len(),
        kernel_dim: kernel.map(|k| k.len()),
    })
}

/// Searches corrections of `lift` and verifies the best one over Z4.
pub fn sparse_search(code: &CssCode, lift: &LiftPair, cfg: &SearchConfig) -> Result<LiftReport> {
    let e = error_matrix(lift)?;
    let outcome = search_corrections(code, &e, cfg)?;
    let res = residual(&e, code, &outcome.certificate)?;
    let verified = verify_lift(&apply_correction(lift, &outcome.certificate)?, code);
    Ok(LiftReport {
        instance: code.provenance.clone().unwrap_or(serde_json::Value::Null),
        strategy: cfg.strategy,
        seed: cfg.seed,
        budget: cfg.budget,
        residual_weight: res.nnz(),
        verified,
        delta_q_sparsity: sparsity_stats(&outcome.certificate.delta_q),
        delta_z_sparsity: sparsity_stats(&outcome.certificate.delta_z),
        outcome,
    })
}

/// Objective of a correction, computed directly.
pub fn objective_of(c: &CorrectionPair) -> Objective {
    let weights = c
        .delta_z
        .row_weights()
        .into_iter()
        .chain(c.delta_z.col_weights())
        .chain(c.delta_q.row_weights())
        .chain(c.delta_q.col_weights());
    Objective {
        max_weight: weights.max().unwrap_or(0),
        total_weight: c.delta_z.nnz() + c.delta_q.nnz(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::naive_lift;

    fn toy() -> CssCode {
        CssCode::new(
            ExactMatrix::from_dense(Ring::Z2, &[vec![1], vec![1]]),
            ExactMatrix::from_dense(Ring::Z2, &[vec![1, 1]]),
        )
        .unwrap()
    }

    #[test]
    fn toy_optimum_is_one() {
        let code = toy();
        let lift = naive_lift(&code);
        let r = sparse_search(
            &code,
            &lift,
            &SearchConfig::new(Strategy::Exhaustive, 1 << 10, None),
        )
        .unwrap();
        assert_eq!(r.outcome.best.max_weight, 1);
        assert_eq!(r.outcome.best.total_weight, 1);
        assert!(r.verified && r.outcome.complete);
        assert_eq!(objective_of(&r.outcome.certificate), r.outcome.best);
    }

    #[test]
    fn anneal_requires_seed() {
        let code = toy();
        let e = ExactMatrix::from_dense(Ring::Z2, &[vec![1]]);
        assert!(
            search_corrections(&code, &e, &SearchConfig::new(Strategy::Anneal, 10, None)).is_err()
        );
        let a = search_corrections(&code, &e, &SearchConfig::new(Strategy::Anneal, 50, Some(3)))
            .unwrap();
        let b = search_corrections(&code, &e, &SearchConfig::new(Strategy::Anneal, 50, Some(3)))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn state_tracks_weights() {
        let code = toy();
        let lay = Layout::of(&code);
        let mut s = State::new(lay, Gf2Vec::zeros(lay.unknowns()));
        s.flip(lay.z(0, 0));
        s.flip(lay.z(1, 0));
        assert_eq!(
            s.objective(),
            Objective {
                max_weight: 2,
                total_weight: 2
            }
        );
        s.flip(lay.z(0, 0));
        assert_eq!(
            s.objective(),
            Objective {
                max_weight: 1,
                total_weight: 1
            }
        );
    }
}

//! Randomized search over rank-one POVMs with up to four elements.
//!
//! The first `n − 1` elements carry free weights (log scale) and directions
//! (polar angles). The last element absorbs `−Σ w_k m̂_k`, and all weights are
//! rescaled so that `Σ α = 2`; every parameter point is therefore a valid POVM.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{holevo_from_pauli, Povm, ZERO_PROBABILITY};
use crate::numerics::{BlochVector, RMat};

/// Sweeps given to every restart before the best few are polished.
const SHORT_SWEEPS: usize = 40;
const POLISH_SWEEPS: usize = 4000;
const POLISHED_RESTARTS: usize = 4;
const INITIAL_STEP: f64 = 0.3;
const MIN_STEP: f64 = 1e-10;
/// Weights this small are dropped from the reported POVM.
const PRUNE_WEIGHT: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub povm: Povm,
    pub chi: f64,
    /// Index of the restart that produced the optimum.
    pub restart: usize,
}

fn decode(params: &[f64]) -> Vec<(f64, BlochVector)> {
    let free = params.len() / 3;
    let mut out = Vec::with_capacity(free + 1);
    let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
    for k in 0..free {
        let w = params[3 * k].exp();
        let (st, ct) = params[3 * k + 1].sin_cos();
        let (sp, cp) = params[3 * k + 2].sin_cos();
        let m = BlochVector::new(st * cp, st * sp, ct);
        sx += w * m.x;
        sy += w * m.y;
        sz += w * m.z;
        out.push((w, m));
    }
    let last = (sx * sx + sy * sy + sz * sz).sqrt();
    let free_total: f64 = out.iter().map(|e| e.0).sum();
    if last > ZERO_PROBABILITY * free_total {
        out.push((last, BlochVector::new(-sx / last, -sy / last, -sz / last)));
    }
    let total: f64 = out.iter().map(|e| e.0).sum();
    for e in &mut out {
        e.0 *= 2.0 / total;
    }
    out
}

struct Search<'a> {
    r: &'a RMat,
    params: Vec<f64>,
    steps: Vec<f64>,
    value: f64,
}

impl<'a> Search<'a> {
    fn new(r: &'a RMat, params: Vec<f64>) -> Self {
        let value = holevo_from_pauli(r, &decode(&params));
        let steps = vec![INITIAL_STEP; params.len()];
        Self { r, params, steps, value }
    }

    fn eval(&self, params: &[f64]) -> f64 {
        holevo_from_pauli(self.r, &decode(params))
    }

    /// Coordinate ascent with per-coordinate adaptive steps.
    fn ascend(&mut self, sweeps: usize) {
        for _ in 0..sweeps {
            if self.steps.iter().all(|&s| s < MIN_STEP) {
                break;
            }
            for i in 0..self.params.len() {
                let step = self.steps[i];
                if step < MIN_STEP {
                    continue;
                }
                let mut improved = false;
                for dir in [1.0, -1.0] {
                    let mut trial = self.params.clone();
                    trial[i] += dir * step;
                    let v = self.eval(&trial);
                    if v > self.value {
                        self.params = trial;
                        self.value = v;
                        improved = true;
                        break;
                    }
                }
                self.steps[i] = if improved { step * 1.5 } else { step * 0.5 };
            }
        }
    }
}

fn random_start(rng: &mut ChaCha8Rng, n_elements: usize) -> Vec<f64> {
    (0..n_elements - 1)
        .flat_map(|_| {
            let w = rng.random_range(-1.0..1.0);
            let theta = rng.random::<f64>().mul_add(2.0, -1.0).acos();
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            [w, theta, phi]
        })
        .collect()
}

/// Best POVM found over `restarts` randomized starts; restart `i` uses
/// `2 + i mod (n_elements − 1)` elements, so every size up to `n_elements`
/// is explored. Deterministic for a given `seed` regardless of thread count.
pub fn brute_force_optimize(r: &RMat, n_elements: usize, restarts: usize, seed: u64) -> BruteForceResult {
    let n_max = n_elements.clamp(2, 4);
    let restarts = restarts.max(1);
    let mut coarse: Vec<(usize, Search)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let n = 2 + i % (n_max - 1);
            let mut s = Search::new(r, random_start(&mut rng, n));
            s.ascend(SHORT_SWEEPS);
            (i, s)
        })
        .collect();
    coarse.sort_by(|x, y| y.1.value.total_cmp(&x.1.value).then(x.0.cmp(&y.0)));
    coarse.truncate(POLISHED_RESTARTS);
    let (restart, best) = coarse
        .into_par_iter()
        .map(|(i, mut s)| {
            s.ascend(POLISH_SWEEPS);
            (i, s)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .max_by(|x, y| x.1.value.total_cmp(&y.1.value).then(y.0.cmp(&x.0)))
        .expect("at least one restart");
    let pruned: Vec<_> = decode(&best.params).into_iter().filter(|e| e.0 >= PRUNE_WEIGHT).collect();
    let povm = Povm::from_weighted_directions(&pruned).expect("decoded parameters form a complete POVM");
    BruteForceResult { chi: holevo_from_pauli(r, &pruned), povm, restart }
}
